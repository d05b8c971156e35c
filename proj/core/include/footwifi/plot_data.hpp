#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "footwifi/dataset.hpp"
#include "footwifi/gp_baseline.hpp"
#include "footwifi/pipeline.hpp"

namespace footwifi {

/// Writes, per report, trajectory_<method>.csv (epoch,x,y),
/// corrected_<method>.csv (epoch,x,y of the final best particle) and, when
/// the report has ground-truth errors, errors_<method>.csv (epoch,error).
/// Returns the files written. Throws std::runtime_error if out_dir cannot be
/// created or written.
std::vector<std::filesystem::path> emit_plot_data(std::span<const RunReport> reports,
                                                  const std::filesystem::path& out_dir);

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double resolution = 1.0;  // m
};

/// Training samples for one AP: every aligned scan that heard `ap`, placed at
/// positions[step index] (ground truth or any per-epoch trajectory).
std::vector<TrainingSample> map_training_set(const Dataset& data,
                                             std::span<const Position> positions,
                                             const ApId& ap);

/// Bounding box of the samples grown by `margin`.
GridSpec grid_around(std::span<const TrainingSample> train, double margin, double resolution);

/// Full GP over all samples evaluated on the grid; writes x,y,mu,var.
void emit_gp_map(std::span<const TrainingSample> train, const GpHyperparams& hp,
                 const GpMeanModel& mean, const GridSpec& grid,
                 const std::filesystem::path& file);

}  // namespace footwifi
