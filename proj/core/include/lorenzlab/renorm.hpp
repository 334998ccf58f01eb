#pragma once

// Renormalization intervals J = (a, b) around c: a and b periodic, with
// f^period(a)([a,c)) and f^period(b)((c,b]) inside [a,b].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"
#include "lorenzlab/periodic.hpp"

namespace lorenzlab {

struct RenormalizationRecord {
  Interval J;
  std::size_t period_a = 0;
  std::size_t period_b = 0;
  bool regular = false;
  // f^period_a((a,c)) and f^period_b((c,b)).
  Interval left_return;
  Interval right_return;
  // U_J: period_a images of (a,c) followed by period_b images of (c,b).
  std::vector<Interval> cycle;
  bool cycle_overlap = false;
  // K_J: the gap of the J-phobic set around each cycle component, same order.
  std::vector<Interval> trapping;
  bool trapping_partial = false;
  std::optional<bool> trapping_invariant;
  // (f^period_b(c+), f^period_a(c-)) minus the next chain interval. The
  // subscript convention for the removed interval is not settled, so this
  // is reported as experimental only.
  std::vector<Interval> experimental_p;
};

struct RenormalizationCheck {
  bool certified = false;
  // J differs from (0,1).
  bool proper = false;
  RenormalizationRecord record;
  std::string reason;
};

struct DegenerateRecord {
  Interval I;  // (a, c) or (c, a)
  double a = 0.0;
  std::size_t n = 0;
  std::size_t avoidance_horizon = 0;
  bool left = true;
};

struct NestedSequence {
  std::vector<RenormalizationRecord> intervals;  // strictly decreasing
  std::optional<RenormalizationRecord> maximal_nonregular;
  std::optional<DegenerateRecord> degenerate;
  bool depth_cap_hit = false;
  bool diameters_shrinking = true;
  std::size_t max_period = 0;
  std::size_t max_depth = 0;
  std::size_t horizon = 0;
  std::size_t candidates_tested = 0;
  std::vector<std::string> notes;
};

// Requires c in J. Boundary periods are found by iteration up to horizon
// (a return within 1e-8 counts); inclusions allow the map tolerance.
[[nodiscard]] RenormalizationCheck is_renormalization(const LorenzMap& map, const Interval& J, std::size_t horizon);

[[nodiscard]] NestedSequence find_renormalizations(const LorenzMap& map, const PeriodicCatalog& catalog,
                                                   std::size_t max_depth, std::size_t horizon);
[[nodiscard]] NestedSequence find_renormalizations(const LorenzMap& map, std::size_t max_period,
                                                   std::size_t max_depth, std::size_t horizon);

// Largest half-interval (a,c) or (c,a) with a periodic, f^period(a) mapping
// it into itself and both the orbit of a and the opposite critical orbit
// avoiding it for horizon steps. Only a inside `within` are considered.
[[nodiscard]] std::optional<DegenerateRecord> detect_degenerate(const LorenzMap& map, const PeriodicCatalog& catalog,
                                                                std::size_t horizon,
                                                                const Interval& within = {0.0, 1.0});
[[nodiscard]] std::optional<DegenerateRecord> detect_degenerate(const LorenzMap& map, std::size_t max_period,
                                                                std::size_t horizon);

// Fills rec.cycle and rec.cycle_overlap and returns the cycle.
std::vector<Interval> renormalization_cycle(const LorenzMap& map, RenormalizationRecord& rec);

// Fills rec.trapping (one gap per cycle component, via enclosing gaps of
// order <= max_order) and runs the invariance probe: 100 seeded points of
// K_J iterated 100 steps. A component whose gap is not found within budget
// leaves the record partial.
std::vector<Interval> trapping_region(const LorenzMap& map, RenormalizationRecord& rec, std::size_t max_order,
                                      std::uint64_t seed = 1);

// Sorted union of intervals, merging overlaps.
[[nodiscard]] std::vector<Interval> merge_intervals(std::vector<Interval> parts);

}  // namespace lorenzlab
