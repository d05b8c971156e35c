#include "footwifi/sync.hpp"

#include <limits>
#include <stdexcept>

namespace footwifi {

std::vector<AlignedEpoch> align_observations(std::span<const StepMeasurement> steps,
                                             std::span<const RssVector> scans) {
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (!(steps[i].t > steps[i - 1].t)) throw std::invalid_argument("non-monotone timestamps");
  }
  for (std::size_t i = 1; i < scans.size(); ++i) {
    if (scans[i].t < scans[i - 1].t) throw std::invalid_argument("non-monotone timestamps");
  }

  std::vector<AlignedEpoch> out;
  out.reserve(steps.size());
  std::size_t next_scan = 0;
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& step : steps) {
    // Scans at or before the previous step were either consumed or shadowed.
    while (next_scan < scans.size() && scans[next_scan].t <= prev_t) ++next_scan;
    std::optional<std::size_t> latest;
    while (next_scan < scans.size() && scans[next_scan].t <= step.t) latest = next_scan++;
    AlignedEpoch epoch{step, std::nullopt};
    if (latest) epoch.rss = scans[*latest];
    out.push_back(std::move(epoch));
    prev_t = step.t;
  }
  return out;
}

}  // namespace footwifi
