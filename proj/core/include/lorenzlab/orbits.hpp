#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"
#include "lorenzlab/return_map_types.hpp"

namespace lorenzlab {

// points[0] is the start; points[k] = f^k(start) for k <= length.
// An undirected iterate landing within tolerance of c ends the segment there.
// A directed start is a one-sided limit and keeps its side for every step.
struct OrbitSegment {
  std::vector<DirectedPoint> points;
  std::vector<double> log_derivatives;  // log|Df(points[k])|, 0 at c
  double log_derivative_sum = 0.0;
  std::optional<std::size_t> hit_critical_at;
  std::size_t length = 0;  // realized steps
};

[[nodiscard]] OrbitSegment iterate_orbit(const LorenzMap& map, double x0, Side side, std::size_t n);

struct Itinerary {
  std::string word;  // '0' left of c (or c with side minus), '1' otherwise
  DirectedPoint start;
};

[[nodiscard]] Itinerary itinerary(const LorenzMap& map, double x0, Side side, std::size_t n);

struct LyapunovEstimate {
  double value = 0.0;
  std::size_t steps = 0;
  std::size_t tail_windows = 0;
  std::vector<double> window_averages;
  bool hit_critical = false;
};

// Minimum of the running averages (1/k) sum log|Df| at tail_windows evenly
// spaced checkpoints in the second half of the orbit. Requires n >= 1000.
[[nodiscard]] LyapunovEstimate lyapunov(const LorenzMap& map, double x0, std::size_t n,
                                        std::size_t tail_windows = 10);

struct LimitSetEstimate {
  std::vector<std::size_t> cells;  // sorted cell indices at `resolution`
  std::size_t resolution = 0;
  std::size_t burn_in = 0;
  std::size_t sample_len = 0;
  bool contains_c = false;
  bool partial = false;
  // Alpha-limit only: uncovered run of cells around c.
  std::optional<Interval> critical_gap;
  std::size_t nodes = 0;
  std::size_t depth_reached = 0;
};

[[nodiscard]] inline std::size_t cell_of(double x, std::size_t resolution) {
  if (x <= 0.0) return 0;
  const auto k = static_cast<std::size_t>(x * static_cast<double>(resolution));
  return k >= resolution ? resolution - 1 : k;
}

[[nodiscard]] LimitSetEstimate estimate_omega_limit(const LorenzMap& map, double x0, std::size_t burn_in,
                                                    std::size_t sample_len, std::size_t resolution);

// Breadth-first preimage tree of x up to `depth` levels with at most `cap`
// nodes. Requires depth <= 60.
[[nodiscard]] LimitSetEstimate estimate_alpha_limit(const LorenzMap& map, double x, std::size_t depth,
                                                    std::size_t cap, std::size_t resolution = 1024);

struct RotationEstimate {
  double value = 0.0;
  std::size_t returns = 0;
  // Set when the return orbit is numerically periodic.
  std::optional<std::size_t> numerator;
  std::optional<std::size_t> denominator;
};

// Left-component visit frequency of a two-branch return map. Throws
// precondition unless rec has exactly two branches, not_invariant when the
// orbit fails to return within rec.horizon.
[[nodiscard]] RotationEstimate rotation_number(const LorenzMap& map, const ReturnMapRec& rec, double x0,
                                               std::size_t n);

}  // namespace lorenzlab
