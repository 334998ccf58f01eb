#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"
#include "lorenzlab/periodic.hpp"
#include "lorenzlab/return_map_types.hpp"

namespace lorenzlab {

// Both boundary orbits (a approached from the left, b from the right) stay
// out of J for `horizon` steps. A boundary returning to itself within
// 10 * tolerance records its period and stops early. Requires c in J and
// horizon <= 1e6.
[[nodiscard]] NiceInterval is_nice(const LorenzMap& map, const Interval& J, std::size_t horizon);

// f^k(I) as an interval, tracked with one-sided endpoint limits. Empty when
// some f^j(I), j < k, contains c.
[[nodiscard]] std::optional<Interval> push_forward(const LorenzMap& map, const Interval& I, std::size_t k);

// Least k <= horizon with c in f^k(I); nullopt means infinite up to horizon.
[[nodiscard]] std::optional<std::size_t> order(const LorenzMap& map, const Interval& I, std::size_t horizon);

// Least k >= 1 with f^k(x) in J, or 0 when none within horizon. The orbit
// runs in long double and landings within 64 double epsilons of an end of J
// are not counted.
[[nodiscard]] std::size_t first_return_time(const LorenzMap& map, double x, const Interval& J, std::size_t horizon);

// Grid scan of first-return keys (return time, itinerary) with branch ends
// refined by bisection. A non-nice J is scanned but flagged. Throws
// no_returns when no grid point returns.
[[nodiscard]] ReturnMapRec first_return_map(const LorenzMap& map, const Interval& J, std::size_t horizon,
                                            std::size_t resolution, double full_tolerance = 1e-6);

// Gaps of the J-phobic set by backward pullback, largest first, at most
// `budget` records and order <= max_order. Gaps shorter than 1e-10 are not
// pulled back further. For a non-nice J, preimages are clipped to the
// complement of J and then do not map onto J.
[[nodiscard]] GapList gaps(const LorenzMap& map, const Interval& J, std::size_t max_order, std::size_t budget);

// The gap containing I: I is pushed to its first entry into J and J is
// pulled back along the same branches. Empty when I never enters J within
// horizon or a pushed image straddles c before entering.
[[nodiscard]] std::optional<GapRecord> enclosing_gap(const LorenzMap& map, const Interval& J, const Interval& I,
                                                     std::size_t horizon);

// Fraction of grid midpoints x with f^k(x) outside J for 0 <= k <= n.
[[nodiscard]] PhobicEstimate phobic_measure(const LorenzMap& map, const Interval& J, std::size_t n,
                                            std::size_t grid);
// Same grid, several n at once (survival sets are nested).
[[nodiscard]] std::vector<PhobicEstimate> phobic_profile(const LorenzMap& map, const Interval& J,
                                                         const std::vector<std::size_t>& ns, std::size_t grid);

struct ManeFit {
  double lambda = 0.0;
  double slope = 0.0;
  double prefactor = 0.0;  // min over survivors and k of |Df^k| / lambda^k
  std::size_t survivors = 0;
  std::size_t samples = 0;
  std::size_t n = 0;
  bool pass = false;
};

// Pooled least-squares slope of log|Df^k| against k over sampled orbits that
// avoid J for n steps. Throws precondition when the catalog holds a neutral
// orbit missing J, insufficient_data with fewer than 10 survivors.
[[nodiscard]] ManeFit mane_expansion_check(const LorenzMap& map, const Interval& J, std::size_t samples,
                                           std::size_t n, std::uint64_t seed, const PeriodicCatalog& catalog);
[[nodiscard]] ManeFit mane_expansion_check(const LorenzMap& map, const Interval& J, std::size_t samples,
                                           std::size_t n, std::uint64_t seed);

struct RootIntervalResult {
  Interval xi{0.0, 1.0};
  std::size_t candidates = 0;
  std::optional<std::size_t> period_alpha;
  std::optional<std::size_t> period_beta;
  bool cross_check_ok = false;
  std::vector<std::string> notes;
};

// Intersection of the periodic nice intervals containing [a,b] whose
// boundary periods do not exceed those of a and b. Requires J nice with a
// and b on one periodic orbit.
[[nodiscard]] RootIntervalResult root_interval(const LorenzMap& map, const Interval& J, const PeriodicCatalog& catalog,
                                               std::size_t horizon = 10'000);
[[nodiscard]] RootIntervalResult root_interval(const LorenzMap& map, const Interval& J, std::size_t max_period,
                                               std::size_t horizon = 10'000);

}  // namespace lorenzlab
