#pragma once

// Strata of the non-wandering set between nested trapping regions, attractor
// classification and entropy, all approximated on a grid of cells.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"
#include "lorenzlab/periodic.hpp"
#include "lorenzlab/renorm.hpp"

namespace lorenzlab {

struct Budgets {
  std::size_t max_period = 12;
  std::size_t max_depth = 8;
  std::size_t horizon = 10'000;
  std::size_t grid_resolution = 1u << 14;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
};

enum class Omega0 { full_interval, zero, one, zero_one };
[[nodiscard]] const char* to_string(Omega0 value);

// Four-case table on (f(c+), f(c-)) against (0, 1), compared at 1e-9.
[[nodiscard]] Omega0 omega0(const LorenzMap& map);

enum class AttractorKind {
  periodic_attractor,
  super_attractor,
  cherry,
  solenoid,
  interval_cycle,
  cantor_chaotic_heuristic,
  wild_candidate,
};
[[nodiscard]] const char* to_string(AttractorKind kind);

struct AttractorClass {
  AttractorKind kind = AttractorKind::cantor_chaotic_heuristic;
  std::string confidence = "high";
  std::vector<PeriodicOrbitRecord> orbits;
  std::size_t renorm_depth = 0;
  std::optional<double> rotation;
  // Fraction of the deepest stratum's recurrent cells within one cell of
  // the near-critical orbits.
  std::optional<double> critical_coverage;
  std::optional<Interval> hull;
  std::vector<std::string> evidence;
  std::vector<std::string> failed_probes;
};

struct Stratum {
  std::size_t n = 0;
  // K_n as a merged union; for the deepest stratum the region is K_n itself,
  // otherwise K_n minus K_{n+1}.
  std::vector<Interval> K;
  std::vector<std::size_t> recurrent_cells;
  std::optional<bool> transitive_probe;
  // Smallest coverage over the probed source cells.
  double transitive_coverage = 0.0;
  std::optional<std::vector<Interval>> block_decomposition;
  std::vector<std::string> notes;
};

struct DecompositionRecord {
  // Empty when the renormalization chain hit the depth cap.
  std::optional<std::size_t> n_f;
  Omega0 omega0 = Omega0::full_interval;
  std::vector<Stratum> strata;
  AttractorClass final_class;
  NestedSequence chain;
  PeriodicCatalog catalog;
  Budgets budgets;
  std::vector<std::string> notes;
};

[[nodiscard]] DecompositionRecord decompose(const LorenzMap& map, const Budgets& budgets = {});
[[nodiscard]] AttractorClass classify_attractor(const LorenzMap& map, const Budgets& budgets = {});

// Cells i of the grid whose centre returns to cell i - 1, i or i + 1 within
// horizon steps, restricted to `region` (empty region: all cells).
[[nodiscard]] std::vector<std::size_t> recurrent_cells(const LorenzMap& map, std::size_t resolution,
                                                       std::size_t horizon, const std::vector<Interval>& region = {});

// Smallest fraction of `targets` reached by the forward cell images of any
// single source cell within `horizon` steps (breadth-first on the cell-image
// graph). Sources default to the targets.
[[nodiscard]] double transitivity_coverage(const LorenzMap& map, std::size_t resolution, std::size_t horizon,
                                           const std::vector<std::size_t>& targets,
                                           const std::vector<std::size_t>& sources = {});

struct StratumBlock {
  Interval X;
  // f^s(X) lies in X_0; zero for X_0 itself.
  std::size_t s = 0;
  bool verified = false;
};

struct StratumBlocks {
  std::size_t n = 0;
  PeriodicOrbitRecord orbit;  // least-period orbit meeting I_{n-1}
  Interval L;                 // component of the complement of the orbit containing c
  std::vector<StratumBlock> blocks;
  std::optional<bool> exact_probe;
  std::vector<std::string> notes;
};

// Requires 0 < n < n_f and I_n regular. Throws precondition otherwise and
// not_found when no periodic orbit meets I_{n-1} within max_period.
[[nodiscard]] StratumBlocks stratum_blocks(const LorenzMap& map, const DecompositionRecord& rec, std::size_t n);
[[nodiscard]] StratumBlocks stratum_blocks(const LorenzMap& map, std::size_t n, const Budgets& budgets = {});

struct EntropyEstimate {
  double value = 0.0;
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t words = 0;
  // log 2 / gamma_d for a certified depth-d chain, gamma_d the smaller
  // boundary period of its deepest interval.
  std::optional<double> solenoid_bound;
};

// (1/n) log of the number of distinct length-n itinerary words. Each sampled
// orbit is run 256 steps before 16 consecutive words are read. Requires
// n <= 30 and samples >= 1e4.
[[nodiscard]] EntropyEstimate entropy_estimate(const LorenzMap& map, std::size_t n, std::size_t samples,
                                               std::uint64_t seed = 1, const NestedSequence* chain = nullptr);

}  // namespace lorenzlab
