#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace footwifi {

// RSS values live in [kRssFloorDbm, kRssCeilDbm]. The floor doubles as the
// fill value for an AP heard in one scan but not the other.
inline constexpr double kRssFloorDbm = -110.0;
inline constexpr double kRssCeilDbm = 0.0;

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Position&, const Position&) = default;
};

inline Position operator+(Position a, Position b) { return {a.x + b.x, a.y + b.y}; }
inline Position operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
inline Position operator*(double s, Position p) { return {s * p.x, s * p.y}; }

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Heading in radians, stored unwrapped. Wrapping only happens where an
/// angle is compared or printed.
struct Heading {
  double theta = 0.0;

  friend bool operator==(const Heading&, const Heading&) = default;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

/// One detected step from the foot-mounted dead-reckoning unit.
struct StepMeasurement {
  double t = 0.0;            // seconds
  double delta_l = 0.0;      // step length, meters, >= 0
  double delta_theta = 0.0;  // heading change, radians

  friend bool operator==(const StepMeasurement&, const StepMeasurement&) = default;
};

using ApId = std::string;

struct RssReading {
  ApId ap_id;
  double rss_dbm = kRssFloorDbm;
};

/// One WiFi scan. The map keeps AP ids unique and sorted.
struct RssVector {
  std::map<ApId, double> readings;
  double t = 0.0;

  bool empty() const { return readings.empty(); }
  std::size_t size() const { return readings.size(); }
  std::optional<double> get(const ApId& ap) const {
    auto it = readings.find(ap);
    if (it == readings.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const RssVector&, const RssVector&) = default;
};

/// A candidate trajectory. trajectory[0] is the known start; trajectory[k]
/// is this particle's position after step k.
struct Particle {
  std::vector<Position> trajectory;
  Heading heading;
  double weight = 0.0;

  Position current() const { return trajectory.back(); }
};

/// Entry of the shared observation list, one per processed step.
struct ObservationEntry {
  std::size_t step_index = 0;
  double t = 0.0;  // step time
  std::optional<RssVector> rss;
  double walked_dist = 0.0;  // cumulative measured step length up to this step
};

struct FilterConfig {
  std::size_t n_particles = 1000;
  double sigma_step = 0.05;      // std of the step-length correction, m
  double sigma_heading = 0.02;   // std of the heading-change correction, rad
  double d_rss_thres = 8.0;      // dB
  double d_pos_thres = 10.0;     // m
  double min_gap_time = 10.0;    // s
  double min_gap_dist = 20.0;    // m
  double penalty_factor = 0.01;
  double missing_fill_dbm = kRssFloorDbm;
  std::uint64_t rng_seed = 42;
  double ess_fraction = 0.5;
  std::size_t threads = 1;  // worker threads for per-particle loops, 0 = hardware

  /// Throws std::invalid_argument on the first violated constraint.
  void validate() const;
};

}  // namespace footwifi
