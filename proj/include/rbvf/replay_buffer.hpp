#pragma once

#include <random>
#include <vector>

#include "rbvf/param_store.hpp"

namespace rbvf {

struct Transition {
  Vector state;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  bool terminal = false;  // true termination; step-cap truncation still bootstraps
};

/// Fixed-capacity ring of transitions; oldest evicted first. Sampling is
/// uniform with replacement from current contents.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer capacity must be positive");
  }

  void push(Transition t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::vector<const Transition*> sample(std::size_t k, std::mt19937_64& rng) const {
    if (data_.empty()) throw std::logic_error("ReplayBuffer::sample on empty buffer");
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<const Transition*> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = &data_[pick(rng)];
    return out;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return data_.at(i); }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next eviction slot once full
  std::vector<Transition> data_;
};

}  // namespace rbvf
