#include "footwifi/plot_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "footwifi/sync.hpp"

namespace footwifi {

namespace fs = std::filesystem;

namespace {

std::ofstream open_csv(const fs::path& file, const char* header) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.precision(17);
  out << header << '\n';
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

void write_positions(const fs::path& file, std::span<const Position> ps) {
  auto out = open_csv(file, "epoch,x,y");
  for (std::size_t k = 0; k < ps.size(); ++k) out << k << ',' << ps[k].x << ',' << ps[k].y << '\n';
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace

std::vector<fs::path> emit_plot_data(std::span<const RunReport> reports, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<fs::path> written;
  for (const auto& r : reports) {
    const std::string name(to_string(r.method));
    const auto traj = out_dir / ("trajectory_" + name + ".csv");
    write_positions(traj, r.trajectory);
    written.push_back(traj);

    const auto corrected = out_dir / ("corrected_" + name + ".csv");
    write_positions(corrected, r.best_trajectory);
    written.push_back(corrected);

    if (r.errors) {
      const auto file = out_dir / ("errors_" + name + ".csv");
      auto out = open_csv(file, "epoch,error");
      for (std::size_t k = 0; k < r.errors->size(); ++k) out << k << ',' << (*r.errors)[k] << '\n';
      if (!out) throw std::runtime_error("write failed for " + file.string());
      written.push_back(file);
    }
  }
  return written;
}

std::vector<TrainingSample> map_training_set(const Dataset& data,
                                             std::span<const Position> positions,
                                             const ApId& ap) {
  const auto epochs = align_observations(data.steps, data.scans);
  if (positions.size() < epochs.size() + 1) {
    throw std::invalid_argument("map_training_set: fewer positions than epochs");
  }
  std::vector<TrainingSample> out;
  for (std::size_t k = 0; k < epochs.size(); ++k) {
    if (!epochs[k].rss) continue;
    if (auto rss = epochs[k].rss->get(ap)) out.push_back({positions[k + 1], *rss});
  }
  return out;
}

GridSpec grid_around(std::span<const TrainingSample> train, double margin, double resolution) {
  GridSpec g;
  g.resolution = resolution;
  if (train.empty()) return g;
  g.x_min = g.y_min = std::numeric_limits<double>::infinity();
  g.x_max = g.y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : train) {
    g.x_min = std::min(g.x_min, s.position.x);
    g.x_max = std::max(g.x_max, s.position.x);
    g.y_min = std::min(g.y_min, s.position.y);
    g.y_max = std::max(g.y_max, s.position.y);
  }
  g.x_min -= margin;
  g.y_min -= margin;
  g.x_max += margin;
  g.y_max += margin;
  return g;
}

void emit_gp_map(std::span<const TrainingSample> train, const GpHyperparams& hp,
                 const GpMeanModel& mean, const GridSpec& grid, const fs::path& file) {
  if (!(grid.resolution > 0.0)) throw std::invalid_argument("emit_gp_map: resolution must be > 0");
  if (file.has_parent_path()) ensure_dir(file.parent_path());

  std::vector<Position> inputs;
  std::vector<double> residuals;
  for (const auto& s : train) {
    inputs.push_back(s.position);
    residuals.push_back(s.rss_dbm - mean_value(mean, s.position));
  }
  const GpRegressor gp(inputs, hp);

  auto out = open_csv(file, "x,y,mu,var");
  const auto nx = static_cast<std::size_t>(std::floor((grid.x_max - grid.x_min) / grid.resolution)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((grid.y_max - grid.y_min) / grid.resolution)) + 1;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Position q{grid.x_min + static_cast<double>(ix) * grid.resolution,
                       grid.y_min + static_cast<double>(iy) * grid.resolution};
      auto pred = gp.predict(residuals, q);
      pred.mean += mean_value(mean, q);
      out << q.x << ',' << q.y << ',' << pred.mean << ',' << pred.variance << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace footwifi
