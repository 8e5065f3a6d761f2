#pragma once

#include <filesystem>
#include <vector>

#include "rbvf/agent.hpp"
#include "rbvf/theory.hpp"

namespace rbvf {

/// Trailing mean with window 10: smoothed[k] = mean of values over
/// max(0, k-9)..k.
std::vector<double> trailing_mean(const std::vector<double>& values, int window = 10);

/// Trapezoidal integral of per-episode return vs. episode index.
double area_under_curve(const TrainingLog& log);

/// Raw per-episode log: episode,steps,return,mean_loss,epsilon,wall_ms.
void write_training_log(const std::filesystem::path& path, const TrainingLog& log);

/// Curve data: episode,return,loss,smoothed_return (trailing mean, window 10).
void write_learning_curve(const std::filesystem::path& path, const TrainingLog& log);

/// One row per GapReport: dims,N,beta,resolution,grid_max,centroid_max,gap,tolerance.
void write_gap_reports(const std::filesystem::path& path, const std::vector<GapReport>& reports);

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double final_mean_return = 0.0;  // mean over the final 20 episodes
  double auc = 0.0;
};

void write_sweep_summary(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace rbvf
