#pragma once

#include <span>
#include <vector>

#include "footwifi/config.hpp"
#include "footwifi/types.hpp"

namespace footwifi {

/// Euclidean error per epoch. Throws std::invalid_argument if the
/// trajectories have different lengths.
std::vector<double> epoch_errors(std::span<const Position> estimate,
                                 std::span<const Position> truth);

/// Mean error inside each window. Throws std::out_of_range if a window
/// reaches past the last epoch.
std::vector<double> compute_metrics(std::span<const Position> estimate,
                                    std::span<const Position> truth,
                                    std::span<const EpochWindow> windows);

/// Mean of errors[w.begin, w.end). Throws std::out_of_range.
double window_mean(std::span<const double> errors, const EpochWindow& w);

}  // namespace footwifi
