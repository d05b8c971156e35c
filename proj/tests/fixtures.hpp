// Small simulated datasets for tests.
#pragma once

#include <cstdint>

#include "footwifi/config.hpp"
#include "footwifi/dataset.hpp"
#include "footwifi/simulator.hpp"

namespace fixture {

struct Scenario {
  footwifi::Dataset data;
  footwifi::RunConfig run;
};

// Builds a dataset the same way `footwifi simulate` does, from a scenario
// config. run.windows holds one window per re-visit lap, the last being the
// final lap.
inline Scenario simulate(const footwifi::ScenarioConfig& sc) {
  using namespace footwifi;
  const auto polyline = sim::rectangle(sc.origin, sc.width, sc.height);
  const auto truth = sim::generate_path(polyline, sc.laps, sc.step_length, sc.cadence);
  Scenario s;
  s.data.steps = sim::corrupt_steps(truth, sc.imu, sc.seed);
  s.data.scans =
      sim::simulate_rss(truth, sc.environment(), sc.scan_period, sc.seed + 1, sc.scan_offset);
  std::vector<TruthSample> samples;
  for (std::size_t k = 0; k < truth.positions.size(); ++k) {
    samples.push_back({truth.times[k], truth.positions[k]});
  }
  s.data.truth = std::move(samples);
  s.run.start = truth.positions.front();
  s.run.start_heading = truth.headings.front();
  s.run.windows = sc.revisit_windows(truth.positions.size());
  return s;
}

// Two laps of a 20 x 10 m loop: small enough for per-test use,
// long enough to produce loop closures.
inline Scenario small(std::uint64_t seed = 3, std::size_t laps = 2) {
  footwifi::ScenarioConfig sc;
  sc.width = 20.0;
  sc.height = 10.0;
  sc.laps = laps;
  sc.n_aps = 6;
  sc.seed = seed;
  return simulate(sc);
}

// The full 3-lap, 40 x 20 m scenario with the stock error model.
inline Scenario standard(std::uint64_t seed) {
  footwifi::ScenarioConfig sc;
  sc.seed = seed;
  return simulate(sc);
}

}  // namespace fixture
