#include "rbvf/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace rbvf {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.precision(12);
  return out;
}

}  // namespace

std::vector<double> trailing_mean(const std::vector<double>& values, int window) {
  std::vector<double> out(values.size());
  double running = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    running += values[k];
    if (k >= static_cast<std::size_t>(window)) running -= values[k - window];
    const std::size_t count = std::min(k + 1, static_cast<std::size_t>(window));
    out[k] = running / static_cast<double>(count);
  }
  return out;
}

double area_under_curve(const TrainingLog& log) {
  double auc = 0.0;
  for (std::size_t i = 1; i < log.size(); ++i)
    auc += 0.5 * (log[i - 1].episode_return + log[i].episode_return);
  return auc;
}

void write_training_log(const std::filesystem::path& path, const TrainingLog& log) {
  auto out = open_csv(path);
  out << "episode,steps,return,mean_loss,epsilon,wall_ms\n";
  for (const auto& r : log)
    out << r.episode << "," << r.steps << "," << r.episode_return << "," << r.mean_loss << ","
        << r.epsilon << "," << r.wall_ms << "\n";
}

void write_learning_curve(const std::filesystem::path& path, const TrainingLog& log) {
  if (log.empty()) throw std::invalid_argument("write_learning_curve: empty log");
  std::vector<double> returns;
  returns.reserve(log.size());
  for (const auto& r : log) returns.push_back(r.episode_return);
  const std::vector<double> smoothed = trailing_mean(returns);

  auto out = open_csv(path);
  out << "episode,return,loss,smoothed_return\n";
  for (std::size_t i = 0; i < log.size(); ++i)
    out << log[i].episode << "," << log[i].episode_return << "," << log[i].mean_loss << ","
        << smoothed[i] << "\n";
}

void write_gap_reports(const std::filesystem::path& path, const std::vector<GapReport>& reports) {
  auto out = open_csv(path);
  out << "dims,N,beta,resolution,grid_max,centroid_max,gap,tolerance\n";
  for (const auto& r : reports)
    out << r.dims << "," << r.num_centroids << "," << r.beta << "," << r.resolution << ","
        << r.grid_max << "," << r.centroid_max << "," << r.gap << "," << r.tolerance << "\n";
}

void write_sweep_summary(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_csv(path);
  out << "axis_value,seed,final_mean_return,area_under_curve\n";
  for (const auto& r : rows)
    out << r.axis_value << "," << r.seed << "," << r.final_mean_return << "," << r.auc << "\n";
}

}  // namespace rbvf
