#include "footwifi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

#include "footwifi/random.hpp"
#include "footwifi/rss.hpp"

namespace footwifi::sim {

void Environment::validate() const {
  for (const auto& ap : aps) {
    if (!(ap.path_loss_exponent > 0.0)) {
      throw std::invalid_argument("Environment: path_loss_exponent must be > 0 for " + ap.id);
    }
    if (ap.detection_floor < kRssFloorDbm) {
      throw std::invalid_argument("Environment: detection_floor must be >= -110 for " + ap.id);
    }
    if (!(ap.shadowing_sigma >= 0.0)) {
      throw std::invalid_argument("Environment: shadowing_sigma must be >= 0 for " + ap.id);
    }
  }
}

GroundTruth generate_path(std::span<const Position> polyline, std::size_t laps,
                          double step_length, double cadence) {
  if (!(step_length > 0.0)) throw std::invalid_argument("generate_path: step_length must be > 0");
  if (laps == 0) throw std::invalid_argument("generate_path: laps must be > 0");
  if (!(cadence > 0.0)) throw std::invalid_argument("generate_path: cadence must be > 0");

  std::vector<Position> loop(polyline.begin(), polyline.end());
  if (loop.size() >= 2 && !(loop.front() == loop.back())) loop.push_back(loop.front());

  // Drop zero-length segments; cumulative arc length at each vertex.
  std::vector<Position> verts;
  std::vector<double> arc;
  for (const auto& v : loop) {
    if (!verts.empty() && distance(verts.back(), v) == 0.0) continue;
    arc.push_back(verts.empty() ? 0.0 : arc.back() + distance(verts.back(), v));
    verts.push_back(v);
  }
  if (verts.size() < 2 || !(arc.back() > 0.0)) {
    throw std::invalid_argument("generate_path: degenerate (zero-length) polyline");
  }
  const double perimeter = arc.back();

  auto point_at = [&](double s) {
    s = std::fmod(s, perimeter);
    const auto it = std::upper_bound(arc.begin(), arc.end(), s);
    const std::size_t seg = std::min<std::size_t>(it - arc.begin(), arc.size() - 1) - 1;
    const double len = arc[seg + 1] - arc[seg];
    const double f = (s - arc[seg]) / len;
    const Position a = verts[seg];
    const Position b = verts[seg + 1];
    return Position{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  };

  const double total = perimeter * static_cast<double>(laps);
  const auto steps = static_cast<std::size_t>(std::floor(total / step_length + 1e-9));

  GroundTruth truth;
  truth.times.reserve(steps + 1);
  truth.positions.reserve(steps + 1);
  truth.headings.reserve(steps + 1);
  truth.times.push_back(0.0);
  truth.positions.push_back(verts.front());
  truth.headings.push_back({std::atan2(verts[1].y - verts[0].y, verts[1].x - verts[0].x)});
  for (std::size_t k = 1; k <= steps; ++k) {
    const double s = static_cast<double>(k) * step_length;
    // Snap to the closing vertex when a lap ends exactly on a step.
    const double lap_pos = std::fmod(s, perimeter);
    Position p = (std::abs(lap_pos) < 1e-9 * perimeter ||
                  std::abs(lap_pos - perimeter) < 1e-9 * perimeter)
                     ? verts.front()
                     : point_at(s);
    const Position prev = truth.positions.back();
    const double chord = std::atan2(p.y - prev.y, p.x - prev.x);
    const double last = truth.headings.back().theta;
    truth.headings.push_back({last + wrap_angle(chord - last)});
    truth.positions.push_back(p);
    truth.times.push_back(static_cast<double>(k) * cadence);
  }
  return truth;
}

std::vector<StepMeasurement> corrupt_steps(const GroundTruth& truth, const ImuErrorModel& err,
                                           std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<StepMeasurement> out;
  out.reserve(truth.step_count());
  for (std::size_t k = 1; k < truth.positions.size(); ++k) {
    double dl = distance(truth.positions[k], truth.positions[k - 1]);
    double dtheta = truth.headings[k].theta - truth.headings[k - 1].theta;
    if (err.step_noise_sigma > 0.0) dl += err.step_noise_sigma * rng.normal(0, k);
    dtheta += err.heading_bias_per_step;
    if (err.heading_noise_sigma > 0.0) dtheta += err.heading_noise_sigma * rng.normal(1, k);
    out.push_back({truth.times[k], std::max(0.0, dl), dtheta});
  }
  return out;
}

double path_loss_rss(const AccessPoint& ap, double d) {
  return ap.tx_power_dbm - 10.0 * ap.path_loss_exponent * std::log10(std::max(d, 1.0));
}

std::vector<RssVector> simulate_rss(const GroundTruth& truth, const Environment& env,
                                    double scan_period, std::uint64_t seed, double scan_offset) {
  if (!(scan_period > 0.0)) throw std::invalid_argument("simulate_rss: scan_period must be > 0");
  env.validate();
  std::vector<RssVector> scans;
  if (truth.positions.empty()) return scans;

  const CounterRng rng(seed);
  const double t_end = truth.times.back();
  std::size_t k = 0;
  for (std::size_t j = 0;; ++j) {
    const double t = scan_offset + static_cast<double>(j) * scan_period;
    if (t > t_end) break;
    if (t < truth.times.front()) continue;
    while (k + 1 < truth.times.size() && truth.times[k + 1] < t) ++k;
    Position where = truth.positions[k];
    if (k + 1 < truth.times.size()) {
      const double f = (t - truth.times[k]) / (truth.times[k + 1] - truth.times[k]);
      const Position a = truth.positions[k];
      const Position b = truth.positions[k + 1];
      where = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
    }

    RssVector scan;
    scan.t = t;
    for (std::size_t a = 0; a < env.aps.size(); ++a) {
      const auto& ap = env.aps[a];
      double rss = path_loss_rss(ap, distance(where, ap.position));
      if (ap.shadowing_sigma > 0.0) rss += ap.shadowing_sigma * rng.normal(a, j);
      if (rss < ap.detection_floor) continue;
      scan.readings.emplace(ap.id, clamp_rss(rss));
    }
    scans.push_back(std::move(scan));
  }
  return scans;
}

std::vector<Position> rectangle(Position origin, double width, double height) {
  return {origin,
          {origin.x + width, origin.y},
          {origin.x + width, origin.y + height},
          {origin.x, origin.y + height},
          origin};
}

Environment grid_environment(Position origin, double width, double height, std::size_t count,
                             double shadowing_sigma, std::uint64_t seed, double margin) {
  Environment env;
  if (count == 0) return env;
  const double w = width + 2.0 * margin;
  const double h = height + 2.0 * margin;
  // Pick the column count whose cells are closest to square.
  std::size_t cols = 1;
  double best = 1e300;
  for (std::size_t c = 1; c <= count; ++c) {
    const std::size_t r = (count + c - 1) / c;
    const double aspect = std::abs(std::log((w / c) / (h / r)));
    if (aspect < best) {
      best = aspect;
      cols = c;
    }
  }
  const std::size_t rows = (count + cols - 1) / cols;
  const double cell_w = w / static_cast<double>(cols);
  const double cell_h = h / static_cast<double>(rows);
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t c = i % cols;
    const std::size_t r = i / cols;
    const double jx = (rng.uniform(0, i) - 0.5) * 0.5 * cell_w;
    const double jy = (rng.uniform(1, i) - 0.5) * 0.5 * cell_h;
    AccessPoint ap;
    ap.id = (i + 1 < 10 ? "AP0" : "AP") + std::to_string(i + 1);
    ap.position = {origin.x - margin + (static_cast<double>(c) + 0.5) * cell_w + jx,
                   origin.y - margin + (static_cast<double>(r) + 0.5) * cell_h + jy};
    ap.shadowing_sigma = shadowing_sigma;
    env.aps.push_back(std::move(ap));
  }
  return env;
}

}  // namespace footwifi::sim
