#pragma once

#include <utility>
#include <vector>

#include "footwifi/types.hpp"

namespace footwifi {

/// Dense view of two scans over the union of their AP ids, sorted by id.
/// An AP missing on one side contributes `fill` there.
std::pair<std::vector<double>, std::vector<double>> fill_union(const RssVector& a,
                                                               const RssVector& b,
                                                               double fill = kRssFloorDbm);

/// Normalized Euclidean distance in RSS space:
/// sqrt(sum_j (a_j - b_j)^2 / N) over the filled union of dimension N.
/// Throws std::domain_error("no common signal space") if both scans are empty.
double rss_distance(const RssVector& a, const RssVector& b, double fill = kRssFloorDbm);

/// Clamps to [kRssFloorDbm, kRssCeilDbm].
inline double clamp_rss(double dbm) {
  return dbm < kRssFloorDbm ? kRssFloorDbm : (dbm > kRssCeilDbm ? kRssCeilDbm : dbm);
}

}  // namespace footwifi
