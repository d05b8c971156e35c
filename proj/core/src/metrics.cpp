#include "footwifi/metrics.hpp"

#include <stdexcept>
#include <string>

namespace footwifi {

std::vector<double> epoch_errors(std::span<const Position> estimate,
                                 std::span<const Position> truth) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("epoch_errors: estimate has " + std::to_string(estimate.size()) +
                                " epochs, truth has " + std::to_string(truth.size()));
  }
  std::vector<double> out(estimate.size());
  for (std::size_t k = 0; k < estimate.size(); ++k) out[k] = distance(estimate[k], truth[k]);
  return out;
}

double window_mean(std::span<const double> errors, const EpochWindow& w) {
  if (w.end <= w.begin || w.end > errors.size()) {
    throw std::out_of_range("window " + format_window(w) + " outside epochs 0:" +
                            std::to_string(errors.size()));
  }
  double sum = 0.0;
  for (std::size_t k = w.begin; k < w.end; ++k) sum += errors[k];
  return sum / static_cast<double>(w.end - w.begin);
}

std::vector<double> compute_metrics(std::span<const Position> estimate,
                                    std::span<const Position> truth,
                                    std::span<const EpochWindow> windows) {
  const auto errors = epoch_errors(estimate, truth);
  std::vector<double> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(window_mean(errors, w));
  return out;
}

}  // namespace footwifi
