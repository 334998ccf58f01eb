#include "lorenzlab/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>

#include "lorenzlab/orbits.hpp"
#include "lorenzlab/parallel.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/return_maps.hpp"

namespace lorenzlab {

namespace {

constexpr double kCriticalCompare = 1e-9;
constexpr double kCoverage = 0.9;
constexpr std::size_t kCherryDenominators = 50;
constexpr double kRotationTolerance = 1e-4;
constexpr std::size_t kProbeSources = 64;

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double centre(std::size_t i, std::size_t resolution) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(resolution);
}

struct CellRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// Cells met by f(cell j): one range, or two when c is inside the cell.
std::vector<std::array<CellRange, 2>> cell_images(const LorenzMap& map, std::size_t resolution,
                                                  std::vector<std::uint8_t>& counts) {
  const double c = map.c();
  const double w = 1.0 / static_cast<double>(resolution);
  std::vector<std::array<CellRange, 2>> out(resolution);
  counts.assign(resolution, 1);
  parallel_for(resolution, [&](std::size_t j) {
    const double lo = static_cast<double>(j) * w;
    const double hi = lo + w;
    auto range = [&](double a, double b) { return CellRange{cell_of(a, resolution), cell_of(b, resolution)}; };
    if (lo < c && c < hi) {
      out[j][0] = range(map.apply(lo), map.apply(c, Side::minus));
      out[j][1] = range(map.apply(c, Side::plus), map.apply(hi));
      counts[j] = 2;
    } else {
      out[j][0] = range(map.apply(lo, Side::plus), map.apply(hi, Side::minus));
    }
  });
  return out;
}

std::vector<Interval> degenerate_trapping(const LorenzMap& map, const DegenerateRecord& deg, std::size_t horizon,
                                          bool& partial) {
  std::vector<Interval> out;
  Interval U = deg.I;
  for (std::size_t i = 0; i < deg.n; ++i) {
    const auto gap = enclosing_gap(map, deg.I, U, horizon);
    if (gap) {
      out.push_back(gap->gap);
    } else {
      out.push_back(U);
      partial = true;
    }
    U = {map.apply(U.lo, Side::plus), map.apply(U.hi, Side::minus)};
  }
  return merge_intervals(out);
}

bool in_region(const std::vector<Interval>& K, double x) {
  return std::any_of(K.begin(), K.end(), [&](const Interval& k) { return k.contains(x); });
}

// Distance from the end of the forward orbit of x to the orbit's points.
double end_distance(const LorenzMap& map, double x, std::size_t horizon, const PeriodicOrbitRecord& orbit) {
  for (std::size_t k = 0; k < horizon; ++k) x = map.apply(x);
  double best = 2.0;
  for (std::size_t k = 0; k < orbit.period; ++k) {
    for (double p : orbit.points) best = std::min(best, std::abs(x - p));
    x = map.apply(x);
  }
  return best;
}

bool near_rational(double value, std::size_t max_q, double tol) {
  for (std::size_t q = 1; q <= max_q; ++q) {
    const double p = std::round(value * static_cast<double>(q));
    if (std::abs(value - p / static_cast<double>(q)) < tol) return true;
  }
  return false;
}

AttractorClass classify(const LorenzMap& map, const Budgets& b, const DecompositionRecord& rec) {
  AttractorClass out;
  const double c = map.c();
  const double tol = map.tolerance();
  const auto& chain = rec.chain;
  out.renorm_depth = chain.intervals.size();
  if (rec.catalog.truncated) out.failed_probes.emplace_back("periodic search truncated");

  // (1) periodic attractors absorbing the critical orbits.
  std::vector<const PeriodicOrbitRecord*> attractors;
  for (const auto& o : rec.catalog.orbits) {
    const bool attracting = o.kind == OrbitKind::attracting || o.kind == OrbitKind::super ||
                            (o.kind == OrbitKind::neutral && o.attracting_side_probe.value_or(false));
    if (attracting) attractors.push_back(&o);
  }
  const double values[2] = {map.critical_value_minus(), map.critical_value_plus()};
  const PeriodicOrbitRecord* absorber[2] = {nullptr, nullptr};
  for (int s = 0; s < 2; ++s) {
    for (const auto* o : attractors) {
      const double slack = o->kind == OrbitKind::neutral ? 1e-2 : 1e-6;
      if (end_distance(map, values[s], b.horizon, *o) <= slack) {
        absorber[s] = o;
        break;
      }
    }
  }
  if (absorber[0] || absorber[1]) {
    const PeriodicOrbitRecord* first = absorber[0] ? absorber[0] : absorber[1];
    out.kind = first->kind == OrbitKind::super ? AttractorKind::super_attractor : AttractorKind::periodic_attractor;
    out.orbits.push_back(*first);
    if (absorber[0] && absorber[1] && absorber[0] != absorber[1]) {
      out.orbits.push_back(*absorber[1]);
      out.evidence.emplace_back("pair of periodic attractors, one per critical value");
    } else if (absorber[0] && absorber[1]) {
      out.evidence.emplace_back("both critical values absorbed by one periodic attractor");
    } else {
      out.evidence.push_back(std::string("only f(c") + (absorber[0] ? "-)" : "+)") + " absorbed");
      if (chain.degenerate) {
        out.evidence.emplace_back("degenerate renormalization interval present");
      } else if (chain.maximal_nonregular) {
        out.evidence.emplace_back("non-regular renormalization interval present");
      } else {
        out.failed_probes.emplace_back("one critical value not absorbed and no degenerate structure found");
      }
    }
    out.evidence.push_back(format("period %g, multiplier %.12g", static_cast<double>(first->period),
                                  first->multiplier));
    if (!out.failed_probes.empty()) out.confidence = "low";
    return out;
  }

  // (2) depth-capped renormalization chain.
  if (chain.depth_cap_hit && chain.diameters_shrinking) {
    out.kind = AttractorKind::solenoid;
    out.evidence.push_back(format("solenoid candidate (depth-capped) at depth %g",
                                  static_cast<double>(chain.intervals.size())));
    out.confidence = "low";
    return out;
  }

  // (3) no periodic points in the deepest interval and an irrational-looking rotation.
  const Interval D = chain.intervals.empty() ? Interval{0.0, 1.0} : chain.intervals.back().J;
  const bool periodic_inside = std::any_of(rec.catalog.orbits.begin(), rec.catalog.orbits.end(), [&](const auto& o) {
    return std::any_of(o.points.begin(), o.points.end(), [&](double p) { return D.contains_strictly(p, tol); });
  });
  if (!periodic_inside) {
    try {
      const ReturnMapRec rmap = first_return_map(map, D, b.horizon, 4096);
      if (rmap.branches.size() == 2) {
        const auto rot = rotation_number(map, rmap, 0.5 * (D.lo + c), std::max<std::size_t>(b.samples / 10, 1000));
        out.rotation = rot.value;
        out.evidence.push_back(format("rotation estimate %.10g", rot.value));
        if (!near_rational(rot.value, kCherryDenominators, kRotationTolerance)) {
          out.kind = AttractorKind::cherry;
          out.evidence.emplace_back("no periodic points in the deepest interval within budget");
          return out;
        }
      } else {
        out.failed_probes.emplace_back("return map to the deepest interval is not two-branched");
      }
    } catch (const LorenzError& e) {
      out.failed_probes.push_back(std::string("rotation probe: ") + e.what());
    }
  }

  // (4)/(5) near-critical orbit closure against the deepest recurrent cells.
  const std::size_t N = b.grid_resolution;
  std::vector<std::uint8_t> visited(N, 0);
  const double delta = 0.25 / static_cast<double>(N);
  std::size_t lo_cell = N, hi_cell = 0;
  for (double x : {c - delta, c + delta}) {
    for (std::size_t k = 0; k < b.samples; ++k) {
      x = map.apply(x);
      const std::size_t cell = cell_of(x, N);
      visited[cell] = 1;
      lo_cell = std::min(lo_cell, cell);
      hi_cell = std::max(hi_cell, cell);
    }
  }
  const auto& deepest = rec.strata.back().recurrent_cells;
  auto near_visited = [&](std::size_t i) {
    return visited[i] || (i > 0 && visited[i - 1]) || (i + 1 < N && visited[i + 1]);
  };
  std::size_t covered = 0;
  for (std::size_t i : deepest) covered += near_visited(i) ? 1 : 0;
  const double coverage = deepest.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(deepest.size());
  out.critical_coverage = coverage;
  out.hull = Interval{static_cast<double>(lo_cell) / static_cast<double>(N),
                      static_cast<double>(hi_cell + 1) / static_cast<double>(N)};
  if (deepest.empty()) out.failed_probes.emplace_back("no recurrent cells in the deepest stratum");
  if (!deepest.empty() && coverage >= kCoverage) {
    out.kind = AttractorKind::interval_cycle;
    out.evidence.push_back(format("near-critical orbits cover %.4f of the deepest recurrent cells", coverage));
  } else {
    std::vector<std::uint8_t> recurrent(N, 0);
    for (std::size_t i : deepest) recurrent[i] = 1;
    bool inside = true;
    for (std::size_t i = 0; i < N && inside; ++i) {
      if (visited[i] && !recurrent[i] && !(i > 0 && recurrent[i - 1]) && !(i + 1 < N && recurrent[i + 1])) {
        inside = false;
      }
    }
    out.kind = inside && !deepest.empty() ? AttractorKind::wild_candidate : AttractorKind::cantor_chaotic_heuristic;
    out.evidence.push_back(format("near-critical orbits cover %.4f of the deepest recurrent cells", coverage));
    if (out.kind == AttractorKind::wild_candidate) {
      out.evidence.emplace_back("critical-orbit closure is a strict subset of the recurrent cells");
    }
    out.failed_probes.emplace_back("classification by exclusion");
  }
  if (!out.failed_probes.empty()) out.confidence = "low";
  return out;
}

}  // namespace

const char* to_string(Omega0 value) {
  switch (value) {
    case Omega0::full_interval: return "full_interval";
    case Omega0::zero: return "{0}";
    case Omega0::one: return "{1}";
    case Omega0::zero_one: return "{0,1}";
  }
  return "?";
}

const char* to_string(AttractorKind kind) {
  switch (kind) {
    case AttractorKind::periodic_attractor: return "periodic_attractor";
    case AttractorKind::super_attractor: return "super_attractor";
    case AttractorKind::cherry: return "cherry";
    case AttractorKind::solenoid: return "solenoid";
    case AttractorKind::interval_cycle: return "interval_cycle";
    case AttractorKind::cantor_chaotic_heuristic: return "cantor_chaotic_heuristic";
    case AttractorKind::wild_candidate: return "wild_candidate";
  }
  return "?";
}

Omega0 omega0(const LorenzMap& map) {
  const bool v0_zero = std::abs(map.critical_value_plus()) <= kCriticalCompare;
  const bool v1_one = std::abs(map.critical_value_minus() - 1.0) <= kCriticalCompare;
  if (v0_zero && v1_one) return Omega0::full_interval;
  if (v1_one) return Omega0::zero;
  if (v0_zero) return Omega0::one;
  return Omega0::zero_one;
}

std::vector<std::size_t> recurrent_cells(const LorenzMap& map, std::size_t resolution, std::size_t horizon,
                                         const std::vector<Interval>& region) {
  std::vector<std::uint8_t> flag(resolution, 0);
  parallel_for(resolution, [&](std::size_t i) {
    double x = centre(i, resolution);
    if (!region.empty() && !in_region(region, x)) return;
    for (std::size_t k = 0; k < horizon; ++k) {
      x = map.apply(x);
      const std::size_t j = cell_of(x, resolution);
      if (j + 1 >= i && j <= i + 1) {
        flag[i] = 1;
        return;
      }
    }
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < resolution; ++i) {
    if (flag[i]) out.push_back(i);
  }
  return out;
}

double transitivity_coverage(const LorenzMap& map, std::size_t resolution, std::size_t horizon,
                             const std::vector<std::size_t>& targets, const std::vector<std::size_t>& sources) {
  if (targets.empty()) return 0.0;
  std::vector<std::uint8_t> counts;
  const auto images = cell_images(map, resolution, counts);
  std::vector<std::uint8_t> is_target(resolution, 0);
  for (std::size_t t : targets) is_target[t] = 1;
  const auto& from = sources.empty() ? targets : sources;
  std::vector<double> coverage(from.size(), 0.0);
  parallel_for(from.size(), [&](std::size_t s) {
    std::vector<std::uint32_t> depth(resolution, 0);
    std::vector<std::uint8_t> seen(resolution, 0);
    std::deque<std::size_t> queue;
    std::size_t hits = 0;
    // The source counts only once some image returns to it.
    const std::size_t src = from[s];
    queue.push_back(src);
    seen[src] = 1;
    bool src_hit = false;
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (depth[j] >= horizon) continue;
      for (std::uint8_t r = 0; r < counts[j]; ++r) {
        for (std::size_t k = images[j][r].lo; k <= images[j][r].hi; ++k) {
          if (k == src && !src_hit) {
            src_hit = true;
            if (is_target[k]) ++hits;
          }
          if (seen[k]) continue;
          seen[k] = 1;
          depth[k] = depth[j] + 1;
          if (is_target[k]) ++hits;
          queue.push_back(k);
        }
      }
    }
    coverage[s] = static_cast<double>(hits) / static_cast<double>(targets.size());
  });
  return *std::min_element(coverage.begin(), coverage.end());
}

DecompositionRecord decompose(const LorenzMap& map, const Budgets& budgets) {
  if (budgets.max_period == 0 || budgets.max_depth == 0 || budgets.horizon == 0 || budgets.grid_resolution < 16 ||
      budgets.samples == 0) {
    throw LorenzError(ErrorCode::precondition, "decompose budgets must be positive (grid >= 16)");
  }
  DecompositionRecord rec;
  rec.budgets = budgets;
  rec.omega0 = omega0(map);
  rec.catalog = find_periodic_points(map, budgets.max_period);
  rec.chain = find_renormalizations(map, rec.catalog, budgets.max_depth, budgets.horizon);
  const auto& chain = rec.chain;

  std::vector<std::vector<Interval>> levels{{Interval{0.0, 1.0}}};
  std::vector<std::vector<std::string>> level_notes{{}};
  for (const auto& r : chain.intervals) {
    levels.push_back(merge_intervals(r.trapping));
    level_notes.push_back({});
    if (r.trapping_partial) level_notes.back().emplace_back("trapping region partial (gap budget)");
    if (r.trapping_invariant && !*r.trapping_invariant) level_notes.back().emplace_back("invariance probe failed");
  }
  bool attracting_tail = false;
  if (chain.maximal_nonregular) {
    levels.push_back(merge_intervals(chain.maximal_nonregular->trapping));
    level_notes.push_back({"trapping region of the maximal non-regular interval"});
    attracting_tail = true;
  } else if (chain.degenerate) {
    bool partial = false;
    levels.push_back(degenerate_trapping(map, *chain.degenerate, budgets.horizon, partial));
    level_notes.push_back({"trapping region of the degenerate interval"});
    if (partial) level_notes.back().emplace_back("trapping region partial (gap budget)");
    attracting_tail = true;
  }
  if (chain.depth_cap_hit) {
    rec.notes.emplace_back("n_f infinite (depth-capped)");
  } else {
    std::size_t nf = chain.intervals.size() + (attracting_tail ? 1 : 0);
    if (nf == 0 && rec.omega0 != Omega0::full_interval) {
      levels.push_back({Interval{map.critical_value_plus(), map.critical_value_minus()}});
      level_notes.push_back({"non-renormalizable: K_1 taken as (f(c+), f(c-))"});
      nf = 1;
    }
    rec.n_f = nf;
  }

  const std::size_t N = budgets.grid_resolution;
  const auto recurrent = recurrent_cells(map, N, budgets.horizon);
  rec.strata.resize(levels.size());
  for (std::size_t n = 0; n < levels.size(); ++n) {
    rec.strata[n].n = n;
    rec.strata[n].K = levels[n];
    rec.strata[n].notes = level_notes[n];
  }
  for (std::size_t i : recurrent) {
    const double x = centre(i, N);
    std::size_t level = 0;
    for (std::size_t n = 1; n < levels.size(); ++n) {
      if (in_region(levels[n], x)) level = n;
    }
    rec.strata[level].recurrent_cells.push_back(i);
  }

  for (std::size_t n = 0; n < rec.strata.size(); ++n) {
    auto& st = rec.strata[n];
    if (st.recurrent_cells.empty()) continue;
    if (n == 0 && rec.strata.size() > 1) continue;
    std::vector<std::size_t> sources;
    const std::size_t m = st.recurrent_cells.size();
    const std::size_t step = std::max<std::size_t>(1, m / kProbeSources);
    for (std::size_t k = 0; k < m; k += step) sources.push_back(st.recurrent_cells[k]);
    st.transitive_coverage = transitivity_coverage(map, N, budgets.horizon, st.recurrent_cells, sources);
    st.transitive_probe = st.transitive_coverage >= kCoverage;
    if (sources.size() < m) {
      st.notes.push_back(format("transitivity probed from %g of %g recurrent cells",
                                static_cast<double>(sources.size()), static_cast<double>(m)));
    }
  }

  rec.final_class = classify(map, budgets, rec);

  if (rec.n_f) {
    for (std::size_t n = 1; n < *rec.n_f && n <= chain.intervals.size(); ++n) {
      if (!chain.intervals[n - 1].regular) continue;
      try {
        const auto blocks = stratum_blocks(map, rec, n);
        std::vector<Interval> xs;
        for (const auto& bl : blocks.blocks) xs.push_back(bl.X);
        rec.strata[n].block_decomposition = xs;
      } catch (const LorenzError& e) {
        rec.strata[n].notes.push_back(std::string("blocks: ") + e.what());
      }
    }
  }
  return rec;
}

AttractorClass classify_attractor(const LorenzMap& map, const Budgets& budgets) {
  return decompose(map, budgets).final_class;
}

StratumBlocks stratum_blocks(const LorenzMap& map, const DecompositionRecord& rec, std::size_t n) {
  const auto& chain = rec.chain;
  if (n == 0 || n > chain.intervals.size() || (rec.n_f && n >= *rec.n_f)) {
    throw LorenzError(ErrorCode::precondition, "stratum_blocks requires 0 < n < n_f");
  }
  const RenormalizationRecord& In = chain.intervals[n - 1];
  if (!In.regular) throw LorenzError(ErrorCode::precondition, "stratum_blocks requires I_n regular");
  const double c = map.c();
  const double tol = map.tolerance();
  const Interval outer = n == 1 ? Interval{0.0, 1.0} : chain.intervals[n - 2].J;

  StratumBlocks out;
  out.n = n;
  const MinimalPeriodResult least = minimal_period_orbit_in(rec.catalog, map, outer);
  out.orbit = least.orbit;
  if (!least.note.empty()) out.notes.push_back(least.note);
  out.L = {std::max(0.0, least.orbit.max_point_below(c)), std::min(1.0, least.orbit.min_point_above(c))};
  out.blocks.push_back({out.L, 0, true});

  std::vector<Interval> cycle = In.cycle;
  if (cycle.empty()) {
    RenormalizationRecord copy = In;
    cycle = renormalization_cycle(map, copy);
  }
  for (const Interval& U : cycle) {
    if (out.L.includes(U, tol)) continue;
    const auto gap = enclosing_gap(map, out.L, U, rec.budgets.horizon);
    if (!gap) {
      out.notes.push_back(format("no gap found for cycle component (%.12g, %.12g)", U.lo, U.hi));
      continue;
    }
    const bool dup = std::any_of(out.blocks.begin(), out.blocks.end(), [&](const StratumBlock& b) {
      return std::abs(b.X.lo - gap->gap.lo) <= 1e-12 && std::abs(b.X.hi - gap->gap.hi) <= 1e-12;
    });
    if (dup) continue;
    const auto image = push_forward(map, gap->gap, gap->order);
    out.blocks.push_back({gap->gap, gap->order, image && out.L.includes(*image, 1e-8)});
  }

  // Exactness probe on the grid: forward cell images of one recurrent cell
  // of X_0 until a single image covers every recurrent cell of the stratum
  // inside X_0.
  const std::size_t N = rec.budgets.grid_resolution;
  std::vector<std::size_t> targets;
  if (n < rec.strata.size()) {
    for (std::size_t i : rec.strata[n].recurrent_cells) {
      if (out.L.contains(centre(i, N))) targets.push_back(i);
    }
  }
  if (targets.empty()) {
    out.notes.emplace_back("no recurrent cells of the stratum in X_0; exactness not probed");
    return out;
  }
  std::vector<std::uint8_t> counts;
  const auto images = cell_images(map, N, counts);
  std::vector<std::uint8_t> current(N, 0);
  current[targets.front()] = 1;
  bool exact = false;
  for (std::size_t step = 0; step < 1000 && !exact; ++step) {
    std::vector<std::uint8_t> next(N, 0);
    for (std::size_t j = 0; j < N; ++j) {
      if (!current[j]) continue;
      for (std::uint8_t r = 0; r < counts[j]; ++r) {
        for (std::size_t k = images[j][r].lo; k <= images[j][r].hi; ++k) next[k] = 1;
      }
    }
    current.swap(next);
    exact = std::all_of(targets.begin(), targets.end(), [&](std::size_t t) { return current[t] != 0; });
  }
  out.exact_probe = exact;
  return out;
}

StratumBlocks stratum_blocks(const LorenzMap& map, std::size_t n, const Budgets& budgets) {
  return stratum_blocks(map, decompose(map, budgets), n);
}

EntropyEstimate entropy_estimate(const LorenzMap& map, std::size_t n, std::size_t samples, std::uint64_t seed,
                                 const NestedSequence* chain) {
  if (n == 0 || n > 30) throw LorenzError(ErrorCode::precondition, "entropy_estimate requires 1 <= n <= 30");
  if (samples < 10'000) throw LorenzError(ErrorCode::precondition, "entropy_estimate requires samples >= 1e4");
  constexpr std::size_t kBurn = 256;
  constexpr std::size_t kWindows = 16;
  const auto xs = uniform_samples(seed, samples);
  const double c = map.c();
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> words(samples * kWindows);
  parallel_for(samples, [&](std::size_t i) {
    double x = xs[i];
    for (std::size_t k = 0; k < kBurn; ++k) x = map.apply(x);
    std::uint64_t w = 0;
    for (std::size_t k = 0; k < n + kWindows - 1; ++k) {
      w = ((w << 1) | (x < c ? 0u : 1u)) & mask;
      x = map.apply(x);
      if (k + 1 >= n) words[i * kWindows + (k + 1 - n)] = w;
    }
  });
  std::sort(words.begin(), words.end());
  const auto distinct = static_cast<std::size_t>(std::unique(words.begin(), words.end()) - words.begin());
  EntropyEstimate out;
  out.n = n;
  out.samples = samples;
  out.words = distinct;
  out.value = std::log(static_cast<double>(distinct)) / static_cast<double>(n);
  if (chain && !chain->intervals.empty()) {
    const auto& deepest = chain->intervals.back();
    out.solenoid_bound = std::log(2.0) / static_cast<double>(std::min(deepest.period_a, deepest.period_b));
  }
  return out;
}

}  // namespace lorenzlab
