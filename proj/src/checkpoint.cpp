#include "rbvf/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rbvf {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  int x;
  while (is >> x) out.push_back(x);
  return out;
}

std::string join_vec(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
  return os.str();
}

Vector parse_vec(const std::string& s) {
  std::vector<double> tmp;
  std::istringstream is(s);
  double x;
  while (is >> x) tmp.push_back(x);
  Vector out(static_cast<Eigen::Index>(tmp.size()));
  for (std::size_t i = 0; i < tmp.size(); ++i) out(static_cast<Eigen::Index>(i)) = tmp[i];
  return out;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const RbvfModelSpec& spec,
                     const ParamStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());

  std::ostringstream header;
  header.precision(17);
  header << "RBVF-CKPT v1\n";
  header << "state_dim " << spec.state_dim << "\n";
  header << "action_dim " << spec.action_dim << "\n";
  header << "num_centroids " << spec.num_centroids << "\n";
  header << "beta " << spec.beta << "\n";
  header << "value_hidden " << join_ints(spec.value_hidden) << "\n";
  header << "centroid_hidden " << join_ints(spec.centroid_hidden) << "\n";
  header << "action_low " << join_vec(spec.action_low) << "\n";
  header << "action_high " << join_vec(spec.action_high) << "\n";
  std::size_t total = 0;
  for (const auto& name : store.names()) {
    const Matrix& m = store.values(name);
    header << "param " << name << " " << m.rows() << " " << m.cols() << "\n";
    total += static_cast<std::size_t>(m.size());
  }
  header << "elements " << total << "\n";
  header << "data\n";
  out << header.str();

  for (const auto& name : store.names()) {
    const Matrix& m = store.values(name);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double v = m(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof(double));
      }
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());

  std::string line;
  std::getline(in, line);
  if (line != "RBVF-CKPT v1") throw std::runtime_error("bad checkpoint version tag: " + line);

  Checkpoint ck;
  std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>> shapes;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    if (line == "data") break;
    std::istringstream is(line);
    std::string key;
    is >> key;
    std::string rest;
    std::getline(is, rest);
    if (key == "state_dim") ck.spec.state_dim = std::stoi(rest);
    else if (key == "action_dim") ck.spec.action_dim = std::stoi(rest);
    else if (key == "num_centroids") ck.spec.num_centroids = std::stoi(rest);
    else if (key == "beta") ck.spec.beta = std::stod(rest);
    else if (key == "value_hidden") ck.spec.value_hidden = parse_ints(rest);
    else if (key == "centroid_hidden") ck.spec.centroid_hidden = parse_ints(rest);
    else if (key == "action_low") ck.spec.action_low = parse_vec(rest);
    else if (key == "action_high") ck.spec.action_high = parse_vec(rest);
    else if (key == "elements") declared = static_cast<std::size_t>(std::stoull(rest));
    else if (key == "param") {
      std::istringstream ps(rest);
      std::string name;
      Eigen::Index r, c;
      ps >> name >> r >> c;
      shapes.emplace_back(name, std::make_pair(r, c));
    } else {
      throw std::runtime_error("unknown checkpoint header key: " + key);
    }
  }

  std::size_t total = 0;
  for (const auto& [name, shape] : shapes) {
    Matrix m(shape.first, shape.second);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double v;
        in.read(reinterpret_cast<char*>(&v), sizeof(double));
        m(i, j) = v;
      }
    total += static_cast<std::size_t>(m.size());
    ck.params.add(name, std::move(m));
  }
  if (!in) throw std::runtime_error("checkpoint truncated: " + path.string());
  if (total != declared)
    throw std::runtime_error("checkpoint element count mismatch: header says " +
                             std::to_string(declared) + ", read " + std::to_string(total));
  return ck;
}

bool specs_equal(const RbvfModelSpec& a, const RbvfModelSpec& b) {
  return a.state_dim == b.state_dim && a.action_dim == b.action_dim &&
         a.num_centroids == b.num_centroids && a.beta == b.beta &&
         a.value_hidden == b.value_hidden && a.centroid_hidden == b.centroid_hidden &&
         a.action_low == b.action_low && a.action_high == b.action_high;
}

ParamStore load_checkpoint_for(const std::filesystem::path& path, const RbvfModelSpec& expected) {
  Checkpoint ck = load_checkpoint(path);
  if (!specs_equal(ck.spec, expected))
    throw std::runtime_error("checkpoint model spec does not match the configured model");
  return std::move(ck.params);
}

}  // namespace rbvf
