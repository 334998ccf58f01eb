#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"

namespace lorenzlab {

// Maximal open interval on which f^n is continuous and increasing.
struct Lap {
  Interval interval;
  std::size_t n = 0;
  std::string itinerary_prefix;
};

// Throws budget_exhausted when the lap count exceeds max_laps; the message
// carries the depth reached. Requires n <= 30.
[[nodiscard]] std::vector<Lap> laps(const LorenzMap& map, std::size_t n, std::size_t max_laps = 1u << 22);

enum class OrbitKind { attracting, repelling, neutral, super };
[[nodiscard]] const char* to_string(OrbitKind kind);

struct PeriodicOrbitRecord {
  std::vector<double> points;  // orbit order, starting at the smallest point
  std::vector<Side> sides;     // non-none only at c
  std::size_t period = 0;
  double multiplier = 0.0;
  OrbitKind kind = OrbitKind::repelling;
  std::string side_word;
  // Neutral cycles only: whether a one-sided perturbation converged back.
  std::optional<bool> attracting_side_probe;
  // max_k |f^period(points[k]) - points[k]| evaluated in long double.
  double residual = 0.0;

  [[nodiscard]] bool nonrepelling() const { return kind != OrbitKind::repelling; }
  [[nodiscard]] bool intersects(const Interval& J) const;
  [[nodiscard]] double max_point_below(double x) const;  // -1 when none
  [[nodiscard]] double min_point_above(double x) const;  // 2 when none
};

struct PeriodicSearchOptions {
  std::size_t resolution = 1u << 14;
  std::size_t max_laps = 1u << 22;
  double neutral_tolerance = 1e-4;
};

struct PeriodicCatalog {
  std::vector<PeriodicOrbitRecord> orbits;  // by period, then smallest point
  std::size_t max_period = 0;
  // Largest n whose laps fit the budget.
  std::size_t searched_up_to = 0;
  bool truncated = false;
  std::vector<std::string> notes;

  [[nodiscard]] bool has_nonrepelling() const;
};

// Requires max_period <= 20.
[[nodiscard]] PeriodicCatalog find_periodic_points(const LorenzMap& map, std::size_t max_period,
                                                   const PeriodicSearchOptions& options = {});

// Requires a sampled negative Schwarzian.
[[nodiscard]] std::size_t count_nonrepelling(const LorenzMap& map, std::size_t max_period);
[[nodiscard]] std::size_t count_nonrepelling(const PeriodicCatalog& catalog);

struct MinimalPeriodResult {
  PeriodicOrbitRecord orbit;
  // Other orbits of the same period meeting J.
  std::size_t competitors = 0;
  std::string note;
};

// The orbit of least period meeting the open interval J (c in J). A tie is
// broken only when exactly one tied orbit is non-repelling (an attractor
// present means the uniqueness hypothesis does not apply; the note says so);
// otherwise a tie throws hypothesis_violated. Throws not_found when no orbit
// up to the catalog's period meets J.
[[nodiscard]] MinimalPeriodResult minimal_period_orbit_in(const PeriodicCatalog& catalog, const LorenzMap& map,
                                                          const Interval& J);
[[nodiscard]] MinimalPeriodResult minimal_period_orbit_in(const LorenzMap& map, const Interval& J,
                                                          std::size_t max_period);

}  // namespace lorenzlab
