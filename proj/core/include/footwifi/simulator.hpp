#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "footwifi/types.hpp"

namespace footwifi::sim {

struct AccessPoint {
  ApId id;
  Position position;
  double tx_power_dbm = -40.0;      // RSS at 1 m
  double path_loss_exponent = 4.0;
  double shadowing_sigma = 3.0;     // dB
  double detection_floor = -95.0;   // dBm; weaker readings are not reported
};

struct Environment {
  std::vector<AccessPoint> aps;

  void validate() const;
};

struct ImuErrorModel {
  double step_noise_sigma = 0.0;       // m
  double heading_noise_sigma = 0.0;    // rad
  double heading_bias_per_step = 0.0;  // rad
};

/// True walk. positions[0] / headings[0] are the start pose; entry k is the
/// pose after step k. times[k] is the time of that pose.
struct GroundTruth {
  std::vector<double> times;
  std::vector<Position> positions;
  std::vector<Heading> headings;

  std::size_t step_count() const { return positions.empty() ? 0 : positions.size() - 1; }
};

/// Positions spaced `step_length` apart in arc length along the closed
/// polyline (closed automatically if the last vertex differs from the first),
/// repeated `laps` times. Step k happens at time k * cadence. Headings are the
/// chord directions between consecutive positions, so integrating the chord
/// lengths and heading changes reproduces the positions.
/// Throws std::invalid_argument for a zero-length polyline, step_length <= 0,
/// or laps == 0.
GroundTruth generate_path(std::span<const Position> polyline, std::size_t laps,
                          double step_length, double cadence = 0.5);

/// Measured steps: true length + N(0, step_noise_sigma) (clamped at 0) and
/// true heading change + bias + N(0, heading_noise_sigma).
std::vector<StepMeasurement> corrupt_steps(const GroundTruth& truth, const ImuErrorModel& err,
                                           std::uint64_t seed);

/// Path-loss RSS model. Scans happen at scan_offset + j * scan_period for
/// every time inside the walk; the true position is linearly interpolated.
/// rss = P0 - 10 n log10(max(d, 1)) + N(0, shadowing); readings below the
/// AP's detection floor are omitted; reported values are clamped to [-110, 0].
std::vector<RssVector> simulate_rss(const GroundTruth& truth, const Environment& env,
                                    double scan_period, std::uint64_t seed,
                                    double scan_offset = 0.25);

/// Noise-free path-loss value at distance d.
double path_loss_rss(const AccessPoint& ap, double d);

/// Axis-aligned rectangle starting at `origin`, walked counter-clockwise
/// starting along +x.
std::vector<Position> rectangle(Position origin, double width, double height);

/// `count` APs on a jittered grid covering the rectangle plus `margin` on
/// every side. The layout is a pure function of the arguments.
Environment grid_environment(Position origin, double width, double height, std::size_t count,
                             double shadowing_sigma, std::uint64_t seed,
                             double margin = 10.0);

}  // namespace footwifi::sim
