#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "footwifi/gp_baseline.hpp"
#include "footwifi/simulator.hpp"
#include "footwifi/types.hpp"

namespace footwifi {

/// Half-open range of epochs [begin, end). Epoch 0 is the start pose,
/// epoch k the pose after step k.
struct EpochWindow {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const EpochWindow&, const EpochWindow&) = default;
};

/// "a:b" -> {a, b}. Throws std::invalid_argument.
EpochWindow parse_window(const std::string& text);
std::string format_window(const EpochWindow& w);

/// Ordered key=value pairs. Blank lines and '#' comments are ignored;
/// repeated keys are kept in order.
struct KeyValueList {
  std::vector<std::pair<std::string, std::string>> entries;

  /// Throws std::runtime_error("<path>:<line>: ...") on a malformed line.
  static KeyValueList parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueList load(const std::filesystem::path& path);
  /// "key=value" override as given on the command line.
  void add_assignment(const std::string& assignment);
};

/// Everything `run` needs besides the dataset.
struct RunConfig {
  FilterConfig filter;
  GpHyperparams gp;
  Position start;
  Heading start_heading;
  std::vector<EpochWindow> windows;
  double gp_default_mean_dbm = -75.0;  // constant mean before an AP has been heard

  /// Applies keys in order. Throws std::invalid_argument on an unknown key
  /// or unparsable value.
  void apply(const KeyValueList& kv);
  /// Canonical key=value text that apply() reads back to the same config.
  /// `threads` is left out: it never changes results.
  std::string to_text() const;
};

/// Everything `simulate` needs.
struct ScenarioConfig {
  Position origin;
  double width = 40.0;
  double height = 20.0;
  std::size_t laps = 3;
  double step_length = 0.7;
  double cadence = 0.5;
  double scan_period = 1.0;
  double scan_offset = 0.25;
  sim::ImuErrorModel imu{0.03, 0.01, 0.003};
  std::size_t n_aps = 12;
  double shadowing_sigma = 3.0;
  double tx_power_dbm = -40.0;
  double path_loss_exponent = 4.0;
  double detection_floor = -95.0;
  double ap_margin = 10.0;
  std::uint64_t seed = 1;         // IMU and shadowing noise
  std::uint64_t layout_seed = 7;  // AP grid jitter
  std::vector<sim::AccessPoint> explicit_aps;  // replaces the grid layout when non-empty

  void apply(const KeyValueList& kv);
  sim::Environment environment() const;
  /// One window per lap after the first, covering that lap's epochs, for a
  /// walk with `epochs` poses.
  std::vector<EpochWindow> revisit_windows(std::size_t epochs) const;
};

}  // namespace footwifi
