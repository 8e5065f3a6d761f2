#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbvf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Flat collection of named parameter matrices with paired gradient storage.
/// Biases are stored as 1-row matrices. Values and grads always share shapes.
class ParamStore {
 public:
  struct Entry {
    Matrix values;
    Matrix grads;
  };

  Matrix& values(const std::string& name) { return at(name).values; }
  const Matrix& values(const std::string& name) const { return at(name).values; }
  Matrix& grads(const std::string& name) { return at(name).grads; }
  const Matrix& grads(const std::string& name) const { return at(name).grads; }

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }

  void add(const std::string& name, Matrix init) {
    if (contains(name)) throw std::invalid_argument("duplicate parameter: " + name);
    Entry e;
    e.grads = Matrix::Zero(init.rows(), init.cols());
    e.values = std::move(init);
    entries_.emplace(name, std::move(e));
  }

  void zero_grads() {
    for (auto& [name, e] : entries_) e.grads.setZero();
  }

  bool grads_finite() const {
    for (const auto& [name, e] : entries_)
      if (!e.grads.allFinite()) return false;
    return true;
  }

  bool values_finite() const {
    for (const auto& [name, e] : entries_)
      if (!e.values.allFinite()) return false;
    return true;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
  }

  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& [name, e] : entries_) n += static_cast<std::size_t>(e.values.size());
    return n;
  }

  /// Deep copy of values only (grads zeroed), for read-only snapshots.
  ParamStore snapshot() const {
    ParamStore out;
    for (const auto& [name, e] : entries_) out.add(name, e.values);
    return out;
  }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  Entry& at(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("missing parameter: " + name);
    return it->second;
  }
  const Entry& at(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("missing parameter: " + name);
    return it->second;
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace rbvf
