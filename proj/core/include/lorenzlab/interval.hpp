#pragma once

#include <algorithm>
#include <vector>

namespace lorenzlab {

// Open interval (lo, hi) of [0,1]. Closed-set questions take an explicit slack.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] constexpr double length() const { return hi - lo; }
  [[nodiscard]] constexpr double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] constexpr bool empty() const { return !(lo < hi); }
  [[nodiscard]] constexpr bool contains(double x) const { return lo < x && x < hi; }
  [[nodiscard]] constexpr bool contains_closed(double x, double slack = 0.0) const {
    return lo - slack <= x && x <= hi + slack;
  }
  // x lies inside (lo, hi) by more than `slack` on both sides.
  [[nodiscard]] constexpr bool contains_strictly(double x, double slack) const {
    return lo + slack < x && x < hi - slack;
  }
  [[nodiscard]] constexpr bool includes(const Interval& other, double slack = 0.0) const {
    return lo - slack <= other.lo && other.hi <= hi + slack;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] inline bool overlaps(const Interval& a, const Interval& b, double slack = 0.0) {
  return std::max(a.lo, b.lo) < std::min(a.hi, b.hi) - slack;
}

[[nodiscard]] inline double overlap_length(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

[[nodiscard]] inline bool in_union(const std::vector<Interval>& parts, double x, double slack = 0.0) {
  return std::any_of(parts.begin(), parts.end(),
                     [&](const Interval& p) { return p.contains_closed(x, slack) && p.lo < p.hi; });
}

}  // namespace lorenzlab
