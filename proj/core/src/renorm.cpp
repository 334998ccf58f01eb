#include "lorenzlab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lorenzlab/parallel.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/return_maps.hpp"

namespace lorenzlab {

namespace {

// Periodic boundary points come from root finding, so returns and
// inclusions are compared at this slack rather than the map tolerance.
constexpr double kPeriodic = 1e-8;

std::optional<std::size_t> boundary_period(const LorenzMap& map, double x0, std::size_t horizon) {
  double x = x0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    if (map.near_critical(x)) return std::nullopt;
    x = map.apply(x);
    if (std::abs(x - x0) <= kPeriodic) return k;
  }
  return std::nullopt;
}

struct SideCandidate {
  double x = 0.0;
  std::size_t period = 0;
  Interval image;
};

std::vector<SideCandidate> side_candidates(const LorenzMap& map, const PeriodicCatalog& catalog, bool left) {
  const double c = map.c();
  const double tol = map.tolerance();
  std::vector<SideCandidate> out;
  for (const auto& orbit : catalog.orbits) {
    for (double x : orbit.points) {
      if (x <= tol || x >= 1.0 - tol || map.near_critical(x)) continue;
      if (left != (x < c)) continue;
      const Interval half = left ? Interval{x, c} : Interval{c, x};
      const auto image = push_forward(map, half, orbit.period);
      if (!image) continue;
      if (left && image->lo < x - kPeriodic) continue;
      if (!left && image->hi > x + kPeriodic) continue;
      out.push_back({x, orbit.period, *image});
    }
  }
  std::sort(out.begin(), out.end(), [](const SideCandidate& a, const SideCandidate& b) { return a.x < b.x; });
  return out;
}

std::string describe(const char* what, double x) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %.17g", what, x);
  return buf;
}

void subtract(const Interval& P, const Interval& hole, std::vector<Interval>& out) {
  if (!overlaps(P, hole)) {
    out.push_back(P);
    return;
  }
  if (hole.lo > P.lo) out.push_back({P.lo, hole.lo});
  if (hole.hi < P.hi) out.push_back({hole.hi, P.hi});
}

}  // namespace

std::vector<Interval> merge_intervals(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const Interval& p : parts) {
    if (p.empty()) continue;
    if (!out.empty() && p.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

RenormalizationCheck is_renormalization(const LorenzMap& map, const Interval& J, std::size_t horizon) {
  const double c = map.c();
  const double tol = map.tolerance();
  if (!J.contains(c)) throw LorenzError(ErrorCode::precondition, "is_renormalization requires c in J");
  RenormalizationCheck out;
  out.record.J = J;
  out.proper = !(J.lo <= tol && J.hi >= 1.0 - tol);

  const auto pa = boundary_period(map, J.lo, horizon);
  const auto pb = boundary_period(map, J.hi, horizon);
  if (!pa || !pb) {
    out.reason = describe("boundary not periodic up to horizon:", !pa ? J.lo : J.hi);
    return out;
  }
  out.record.period_a = *pa;
  out.record.period_b = *pb;

  const auto left = push_forward(map, {J.lo, c}, *pa);
  const auto right = push_forward(map, {c, J.hi}, *pb);
  if (!left || !right) {
    out.reason = left ? "an image of (c,b) covers c before period(b)" : "an image of (a,c) covers c before period(a)";
    return out;
  }
  out.record.left_return = *left;
  out.record.right_return = *right;
  if (!J.includes(*left, kPeriodic)) {
    out.reason = "f^period(a)((a,c)) leaves [a,b]";
    return out;
  }
  if (!J.includes(*right, kPeriodic)) {
    out.reason = "f^period(b)((c,b)) leaves [a,b]";
    return out;
  }
  const NiceInterval nice = is_nice(map, J, horizon);
  if (!nice.nice) {
    out.reason = "not nice: " + nice.reason;
    return out;
  }
  out.record.regular = left->contains_closed(c, tol) && right->contains_closed(c, tol);
  renormalization_cycle(map, out.record);
  out.certified = true;
  return out;
}

std::vector<Interval> renormalization_cycle(const LorenzMap& map, RenormalizationRecord& rec) {
  const double c = map.c();
  const double tol = map.tolerance();
  rec.cycle.clear();
  auto walk = [&](Interval U, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      rec.cycle.push_back(U);
      U = {map.apply(U.lo, Side::plus), map.apply(U.hi, Side::minus)};
    }
  };
  walk({rec.J.lo, c}, rec.period_a);
  walk({c, rec.J.hi}, rec.period_b);
  rec.cycle_overlap = false;
  for (std::size_t i = 0; i < rec.cycle.size(); ++i) {
    for (std::size_t j = i + 1; j < rec.cycle.size(); ++j) {
      if (overlaps(rec.cycle[i], rec.cycle[j], tol)) rec.cycle_overlap = true;
    }
  }
  return rec.cycle;
}

std::vector<Interval> trapping_region(const LorenzMap& map, RenormalizationRecord& rec, std::size_t max_order,
                                      std::uint64_t seed) {
  if (rec.cycle.empty()) renormalization_cycle(map, rec);
  rec.trapping.clear();
  rec.trapping_partial = false;
  for (const Interval& U : rec.cycle) {
    const auto gap = enclosing_gap(map, rec.J, U, max_order);
    if (gap) {
      rec.trapping.push_back(gap->gap);
    } else {
      rec.trapping.push_back(U);
      rec.trapping_partial = true;
    }
  }

  const std::vector<Interval> K = merge_intervals(rec.trapping);
  double total = 0.0;
  for (const Interval& k : K) total += k.length();
  Rng rng(seed);
  bool invariant = true;
  for (int s = 0; s < 100 && invariant; ++s) {
    double u = rng.uniform() * total;
    double x = K.back().mid();
    for (const Interval& k : K) {
      if (u < k.length()) {
        x = k.lo + u;
        break;
      }
      u -= k.length();
    }
    for (int step = 0; step < 100; ++step) {
      if (x == map.c()) break;
      x = map.apply(x);
      if (!in_union(K, x, 1e-9)) {
        invariant = false;
        break;
      }
    }
  }
  rec.trapping_invariant = invariant;
  return rec.trapping;
}

std::optional<DegenerateRecord> detect_degenerate(const LorenzMap& map, const PeriodicCatalog& catalog,
                                                  std::size_t horizon, const Interval& within) {
  const double c = map.c();
  const double tol = map.tolerance();
  std::optional<DegenerateRecord> best;
  for (const auto& orbit : catalog.orbits) {
    for (double a : orbit.points) {
      if (map.near_critical(a) || !within.contains_closed(a, tol)) continue;
      const bool left = a < c;
      const Interval I = left ? Interval{a, c} : Interval{c, a};
      if (best && I.length() <= best->I.length()) continue;
      const auto image = push_forward(map, I, orbit.period);
      if (!image || !I.includes(*image, kPeriodic)) continue;
      const bool orbit_avoids = std::none_of(orbit.points.begin(), orbit.points.end(),
                                             [&](double p) { return I.contains_strictly(p, kPeriodic); });
      if (!orbit_avoids) continue;
      double x = left ? map.critical_value_plus() : map.critical_value_minus();
      bool avoids = true;
      for (std::size_t k = 0; k < horizon; ++k) {
        if (I.contains_strictly(x, tol)) {
          avoids = false;
          break;
        }
        x = map.apply(x);
      }
      if (!avoids) continue;
      best = DegenerateRecord{I, a, orbit.period, horizon, left};
    }
  }
  return best;
}

std::optional<DegenerateRecord> detect_degenerate(const LorenzMap& map, std::size_t max_period,
                                                  std::size_t horizon) {
  return detect_degenerate(map, find_periodic_points(map, max_period), horizon);
}

NestedSequence find_renormalizations(const LorenzMap& map, const PeriodicCatalog& catalog, std::size_t max_depth,
                                     std::size_t horizon) {
  if (max_depth == 0 || horizon == 0) {
    throw LorenzError(ErrorCode::precondition, "find_renormalizations budgets must be positive");
  }
  const double tol = map.tolerance();
  NestedSequence seq;
  seq.max_period = catalog.max_period;
  seq.max_depth = max_depth;
  seq.horizon = horizon;
  char buf[160];
  std::snprintf(buf, sizeof buf, "candidate boundaries limited to periodic orbits of period <= %zu",
                catalog.searched_up_to);
  seq.notes.emplace_back(buf);
  if (catalog.truncated) seq.notes.emplace_back("periodic search truncated; some candidates missing");

  const auto lefts = side_candidates(map, catalog, true);
  const auto rights = side_candidates(map, catalog, false);
  std::vector<Interval> pairs;
  for (const auto& l : lefts) {
    for (const auto& r : rights) {
      if (l.image.hi <= r.x + kPeriodic && r.image.lo >= l.x - kPeriodic) pairs.push_back({l.x, r.x});
    }
  }
  seq.candidates_tested = pairs.size();

  std::vector<RenormalizationCheck> checks(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) { checks[i] = is_renormalization(map, pairs[i], horizon); });

  std::vector<RenormalizationRecord> regular, nonregular;
  for (auto& chk : checks) {
    if (!chk.certified || !chk.proper) continue;
    (chk.record.regular ? regular : nonregular).push_back(std::move(chk.record));
  }

  std::sort(regular.begin(), regular.end(), [](const RenormalizationRecord& a, const RenormalizationRecord& b) {
    return a.J.length() > b.J.length();
  });
  for (auto& rec : regular) {
    if (!seq.intervals.empty()) {
      const Interval& outer = seq.intervals.back().J;
      if (!(rec.J.lo > outer.lo + tol && rec.J.hi < outer.hi - tol)) {
        seq.notes.push_back(describe("linked regular interval dropped, a =", rec.J.lo));
        continue;
      }
    }
    if (seq.intervals.size() == max_depth) {
      seq.depth_cap_hit = true;
      break;
    }
    seq.intervals.push_back(std::move(rec));
  }
  for (std::size_t i = 1; i < seq.intervals.size(); ++i) {
    if (!(seq.intervals[i].J.length() < seq.intervals[i - 1].J.length())) seq.diameters_shrinking = false;
  }
  if (seq.depth_cap_hit && seq.diameters_shrinking) seq.notes.emplace_back("solenoid candidate (depth-capped)");

  if (!nonregular.empty()) {
    Interval U = nonregular.front().J;
    for (const auto& rec : nonregular) U = {std::min(U.lo, rec.J.lo), std::max(U.hi, rec.J.hi)};
    auto chk = is_renormalization(map, U, horizon);
    if (chk.certified && !chk.record.regular) {
      seq.maximal_nonregular = std::move(chk.record);
    } else {
      seq.notes.emplace_back("union of non-regular intervals did not re-certify; largest one kept");
      seq.maximal_nonregular = *std::max_element(
          nonregular.begin(), nonregular.end(),
          [](const RenormalizationRecord& a, const RenormalizationRecord& b) { return a.J.length() < b.J.length(); });
    }
  } else {
    const Interval within = seq.intervals.empty() ? Interval{0.0, 1.0} : seq.intervals.back().J;
    seq.degenerate = detect_degenerate(map, catalog, horizon, within);
  }

  for (std::size_t i = 0; i < seq.intervals.size(); ++i) {
    auto& rec = seq.intervals[i];
    trapping_region(map, rec, horizon);
    const Interval P{rec.right_return.lo, rec.left_return.hi};
    if (P.empty()) continue;
    if (i + 1 < seq.intervals.size()) {
      subtract(P, seq.intervals[i + 1].J, rec.experimental_p);
    } else if (seq.maximal_nonregular) {
      subtract(P, seq.maximal_nonregular->J, rec.experimental_p);
    } else {
      rec.experimental_p.push_back(P);
    }
  }
  if (seq.maximal_nonregular) trapping_region(map, *seq.maximal_nonregular, horizon);
  if (seq.intervals.empty() && !seq.maximal_nonregular) seq.notes.emplace_back("no proper renormalization interval");
  return seq;
}

NestedSequence find_renormalizations(const LorenzMap& map, std::size_t max_period, std::size_t max_depth,
                                     std::size_t horizon) {
  if (max_period == 0) throw LorenzError(ErrorCode::precondition, "find_renormalizations budgets must be positive");
  return find_renormalizations(map, find_periodic_points(map, max_period), max_depth, horizon);
}

}  // namespace lorenzlab
