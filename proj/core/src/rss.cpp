#include "footwifi/rss.hpp"

#include <cmath>
#include <stdexcept>

namespace footwifi {

namespace {

// Walks the two sorted maps in lockstep, calling fn(value_a, value_b) once
// per AP in the union.
template <typename Fn>
void merge_walk(const RssVector& a, const RssVector& b, double fill, Fn&& fn) {
  auto ia = a.readings.begin();
  auto ib = b.readings.begin();
  const auto ea = a.readings.end();
  const auto eb = b.readings.end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      fn(ia->second, fill);
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      fn(fill, ib->second);
      ++ib;
    } else {
      fn(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> fill_union(const RssVector& a,
                                                               const RssVector& b,
                                                               double fill) {
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(a.size() + b.size());
  out.second.reserve(a.size() + b.size());
  merge_walk(a, b, fill, [&](double va, double vb) {
    out.first.push_back(va);
    out.second.push_back(vb);
  });
  return out;
}

double rss_distance(const RssVector& a, const RssVector& b, double fill) {
  double sum_sq = 0.0;
  std::size_t n = 0;
  merge_walk(a, b, fill, [&](double va, double vb) {
    const double d = va - vb;
    sum_sq += d * d;
    ++n;
  });
  if (n == 0) throw std::domain_error("no common signal space");
  return std::sqrt(sum_sq / static_cast<double>(n));
}

}  // namespace footwifi
