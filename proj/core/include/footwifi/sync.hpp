#pragma once

#include <optional>
#include <span>
#include <vector>

#include "footwifi/types.hpp"

namespace footwifi {

/// One step paired with the scan chosen for it, if any.
struct AlignedEpoch {
  StepMeasurement step;
  std::optional<RssVector> rss;
};

/// Pairs every step with the latest scan in (previous step time, step time].
/// Earlier scans in the same interval and scans after the last step are
/// dropped. Throws std::invalid_argument("non-monotone timestamps") if
/// either stream is not sorted (steps strictly, scans non-decreasing).
std::vector<AlignedEpoch> align_observations(std::span<const StepMeasurement> steps,
                                             std::span<const RssVector> scans);

}  // namespace footwifi
