#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "footwifi/config.hpp"
#include "footwifi/dataset.hpp"
#include "footwifi/types.hpp"

namespace footwifi {

enum class Method { raw, proposed, gp };

std::string_view to_string(Method m);
/// Throws std::invalid_argument for anything but raw|proposed|gp.
Method parse_method(std::string_view name);

/// Output of one method over one dataset. Everything except the two timing
/// fields is a deterministic function of (dataset, config, method).
struct RunReport {
  Method method = Method::raw;
  std::uint64_t seed = 0;
  std::string config_text;
  std::vector<Position> trajectory;       // online estimate per epoch
  std::vector<Position> best_trajectory;  // final max-weight particle, full history
  std::optional<std::vector<double>> errors;
  std::vector<EpochWindow> windows;
  std::vector<double> window_mean_errors;
  std::size_t closure_epochs = 0;  // epochs where the weight update had evidence
  std::size_t resample_count = 0;
  std::size_t degeneracy_events = 0;
  double engine_seconds = 0.0;
  std::vector<double> epoch_seconds;
};

/// Integrates the measured steps with no corrections; epoch 0 is `start`.
std::vector<Position> dead_reckon(Position start, Heading heading,
                                  std::span<const StepMeasurement> steps);

/// Aligns scans to steps and runs the chosen method over every epoch. Errors
/// and window means are filled in when the dataset has ground truth (which
/// must then have one record per epoch). Timing brackets the engine only.
RunReport run_pipeline(const Dataset& data, const RunConfig& config, Method method);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

/// Equality of every non-timing field.
bool same_results(const RunReport& a, const RunReport& b);

}  // namespace footwifi
