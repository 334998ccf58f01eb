#include "lorenzlab/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lorenzlab/orbits.hpp"
#include "lorenzlab/parallel.hpp"

namespace lorenzlab {

const char* to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::attracting: return "attracting";
    case OrbitKind::repelling: return "repelling";
    case OrbitKind::neutral: return "neutral";
    case OrbitKind::super: return "super";
  }
  return "repelling";
}

bool PeriodicOrbitRecord::intersects(const Interval& J) const {
  return std::any_of(points.begin(), points.end(), [&](double x) { return J.contains(x); });
}

double PeriodicOrbitRecord::max_point_below(double x) const {
  double best = -1.0;
  for (double p : points) {
    if (p < x) best = std::max(best, p);
  }
  return best;
}

double PeriodicOrbitRecord::min_point_above(double x) const {
  double best = 2.0;
  for (double p : points) {
    if (p > x) best = std::min(best, p);
  }
  return best;
}

bool PeriodicCatalog::has_nonrepelling() const {
  return std::any_of(orbits.begin(), orbits.end(), [](const auto& o) { return o.nonrepelling(); });
}

namespace {

constexpr double kSameRoot = 1e-12;
constexpr double kSamePoint = 1e-6;

// levels[k] holds f^{-k}(c) for k < depth, excluding c itself past level 0
// and the fixed endpoints.
struct BoundaryLevels {
  std::vector<std::vector<double>> levels;
  std::size_t depth = 0;  // number of complete levels
  bool truncated = false;
};

BoundaryLevels critical_preimage_levels(const LorenzMap& map, std::size_t depth, std::size_t max_laps) {
  BoundaryLevels out;
  std::size_t total = 1;
  out.levels.push_back({map.c()});
  out.depth = 1;
  while (out.depth < depth) {
    std::vector<double> next;
    for (double y : out.levels.back()) {
      for (const DirectedPoint& p : preimages(map, y)) {
        if (map.near_critical(p.x) || p.x <= 0.0 || p.x >= 1.0) continue;
        next.push_back(p.x);
      }
    }
    if (total + next.size() + 1 > max_laps) {
      out.truncated = true;
      break;
    }
    total += next.size();
    out.levels.push_back(std::move(next));
    ++out.depth;
  }
  return out;
}

std::vector<double> lap_cuts(const BoundaryLevels& levels, std::size_t n) {
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t k = 0; k < n && k < levels.levels.size(); ++k) {
    cuts.insert(cuts.end(), levels.levels[k].begin(), levels.levels[k].end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a <= 1e-15; }), cuts.end());
  return cuts;
}

double iterate(const LorenzMap& map, double x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x = map.apply(x);
  return x;
}

struct Root {
  double x;
  Side side;
};

class RootFinder {
 public:
  RootFinder(const LorenzMap& map, std::size_t n) : map_(map), n_(n) {}

  double g(double x) const { return iterate(map_, x, n_) - x; }

  void scan_lap(double lo, double hi, std::size_t samples, std::vector<Root>& out) const {
    const double tol = map_.tolerance();
    std::vector<double> xs(samples + 1);
    std::vector<double> gs(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i) {
      xs[i] = i == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    }
    gs[0] = map_.iterate_limit(lo, Side::plus, n_) - lo;
    gs[samples] = map_.iterate_limit(hi, Side::minus, n_) - hi;
    for (std::size_t i = 1; i < samples; ++i) gs[i] = g(xs[i]);

    if (std::abs(gs[0]) <= 10 * tol) out.push_back({lo, map_.near_critical(lo) ? Side::plus : Side::none});
    if (std::abs(gs[samples]) <= 10 * tol) {
      out.push_back({hi, map_.near_critical(hi) ? Side::minus : Side::none});
    }
    for (std::size_t i = 1; i < samples; ++i) {
      if (gs[i] == 0.0) out.push_back({xs[i], Side::none});
    }
    for (std::size_t i = 0; i < samples; ++i) {
      if ((gs[i] < 0.0 && gs[i + 1] > 0.0) || (gs[i] > 0.0 && gs[i + 1] < 0.0)) {
        if ((i == 0 && std::abs(gs[0]) <= 10 * tol) || (i + 1 == samples && std::abs(gs[samples]) <= 10 * tol)) {
          continue;
        }
        out.push_back({bisect(xs[i], xs[i + 1], gs[i]), Side::none});
      }
    }
    for (std::size_t i = 1; i < samples; ++i) {
      const double a = gs[i - 1], b = gs[i], c = gs[i + 1];
      const bool same_sign = (a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0);
      if (!same_sign || std::abs(b) > std::abs(a) || std::abs(b) > std::abs(c)) continue;
      const double xm = golden_min(xs[i - 1], xs[i + 1]);
      const double gm = g(xm);
      if (std::abs(gm) <= 10 * tol) {
        out.push_back({xm, Side::none});
      } else if ((gm > 0) != (b > 0)) {
        out.push_back({bisect(xs[i - 1], xm, a), Side::none});
        out.push_back({bisect(xm, xs[i + 1], gm), Side::none});
      }
    }
  }

 private:
  double bisect(double a, double b, double ga) const {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double gm = g(m);
      if (gm == 0.0) return m;
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }

  double golden_min(double a, double b) const {
    constexpr double r = 0.6180339887498949;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = std::abs(g(x1));
    double f2 = std::abs(g(x2));
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - r * (b - a);
        f1 = std::abs(g(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + r * (b - a);
        f2 = std::abs(g(x2));
      }
    }
    return f1 < f2 ? x1 : x2;
  }

  const LorenzMap& map_;
  std::size_t n_;
};

std::vector<Root> roots_of_period(const LorenzMap& map, const std::vector<double>& cuts, std::size_t n,
                                  std::size_t resolution) {
  RootFinder finder(map, n);
  std::vector<Root> roots;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const double want = std::ceil(static_cast<double>(resolution) * (hi - lo));
    const auto samples = static_cast<std::size_t>(std::clamp(want, 8.0, 256.0));
    finder.scan_lap(lo, hi, samples, roots);
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    return a.x < b.x || (a.x == b.x && a.side < b.side);
  });
  std::vector<Root> unique;
  for (const Root& r : roots) {
    if (!unique.empty() && r.x - unique.back().x <= kSameRoot && r.side == unique.back().side) continue;
    unique.push_back(r);
  }
  return unique;
}

double derivative_or_zero(const LorenzMap& map, double x) {
  return map.near_critical(x) ? 0.0 : map.derivative(x);
}

double residual_long_double(const LorenzMap& map, double x, Side side, std::size_t n) {
  long double y = x;
  for (std::size_t k = 0; k < n; ++k) {
    if (side != Side::none && map.near_critical(static_cast<double>(y))) {
      const BranchSpec& b = side == Side::minus ? map.spec().left : map.spec().right;
      y = branch_jet<long double>(b, map.c(), y).value;
    } else {
      y = map.apply_generic<long double>(y);
    }
  }
  return static_cast<double>(std::abs(y - static_cast<long double>(x)));
}

std::optional<bool> neutral_probe(const LorenzMap& map, const PeriodicOrbitRecord& orb) {
  const double p = orb.points.front();
  const double delta = 1e-5;
  bool converged = false;
  for (double sign : {-1.0, 1.0}) {
    double x = p + sign * delta;
    if (x <= 0.0 || x >= 1.0) continue;
    for (int k = 0; k < 10000; ++k) x = iterate(map, x, orb.period);
    if (std::abs(x - p) < 0.5 * delta) converged = true;
  }
  return converged;
}

std::vector<PeriodicOrbitRecord> assemble_orbits(const LorenzMap& map, const std::vector<Root>& roots, std::size_t n,
                                                 double neutral_tol) {
  std::vector<PeriodicOrbitRecord> out;
  std::vector<char> used(roots.size(), 0);
  auto nearest = [&](double x) -> std::optional<std::size_t> {
    auto it = std::lower_bound(roots.begin(), roots.end(), x, [](const Root& r, double v) { return r.x < v; });
    std::optional<std::size_t> best;
    double best_d = kSamePoint;
    for (auto j = it == roots.begin() ? it : it - 1; j != roots.end() && j <= it; ++j) {
      const double d = std::abs(j->x - x);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<std::size_t>(j - roots.begin());
      }
    }
    return best;
  };

  for (std::size_t r = 0; r < roots.size(); ++r) {
    if (used[r]) continue;
    used[r] = 1;
    std::vector<double> xs(n);
    std::vector<Side> sides(n, Side::none);
    const Side held = roots[r].side;
    double x = roots[r].x;
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = x;
      if (map.near_critical(x)) sides[k] = held == Side::none ? (x < map.c() ? Side::minus : Side::plus) : held;
      x = map.apply(x, held);
    }
    bool minimal = true;
    for (std::size_t d = 1; d < n && minimal; ++d) {
      if (n % d == 0 && std::abs(xs[d] - xs[0]) < kSamePoint) minimal = false;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (auto j = nearest(xs[k])) {
        used[*j] = 1;
        if (k > 0) {
          xs[k] = roots[*j].x;
          if (roots[*j].side != Side::none) sides[k] = roots[*j].side;
        }
      }
    }
    if (!minimal) continue;

    PeriodicOrbitRecord orb;
    orb.period = n;
    const auto first = static_cast<std::size_t>(std::min_element(xs.begin(), xs.end()) - xs.begin());
    std::rotate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(first), xs.end());
    std::rotate(sides.begin(), sides.begin() + static_cast<std::ptrdiff_t>(first), sides.end());
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const PeriodicOrbitRecord& o) {
      return std::abs(o.points.front() - xs.front()) < kSamePoint;
    });
    if (duplicate) continue;
    orb.points = xs;
    orb.sides = sides;
    orb.multiplier = 1.0;
    bool super = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (map.near_critical(xs[k])) super = true;
      orb.multiplier *= derivative_or_zero(map, xs[k]);
      const bool left = map.near_critical(xs[k]) ? sides[k] == Side::minus : xs[k] < map.c();
      orb.side_word.push_back(left ? '0' : '1');
      orb.residual = std::max(orb.residual, residual_long_double(map, xs[k], sides[k], n));
    }
    const double m = std::abs(orb.multiplier);
    if (super) {
      orb.kind = OrbitKind::super;
    } else if (m < 1.0 - neutral_tol) {
      orb.kind = OrbitKind::attracting;
    } else if (m > 1.0 + neutral_tol) {
      orb.kind = OrbitKind::repelling;
    } else {
      orb.kind = OrbitKind::neutral;
      orb.attracting_side_probe = neutral_probe(map, orb);
    }
    out.push_back(std::move(orb));
  }
  return out;
}

}  // namespace

std::vector<Lap> laps(const LorenzMap& map, std::size_t n, std::size_t max_laps) {
  if (n == 0 || n > 30) throw LorenzError(ErrorCode::precondition, "laps requires 1 <= n <= 30");
  const BoundaryLevels levels = critical_preimage_levels(map, n, max_laps);
  if (levels.truncated) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "lap budget %zu exceeded; achieved depth %zu", max_laps, levels.depth);
    throw LorenzError(ErrorCode::budget_exhausted, buf);
  }
  const std::vector<double> cuts = lap_cuts(levels, n);
  std::vector<Lap> out;
  out.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Lap lap;
    lap.interval = {cuts[i], cuts[i + 1]};
    lap.n = n;
    lap.itinerary_prefix = itinerary(map, lap.interval.mid(), Side::none, n).word;
    out.push_back(std::move(lap));
  }
  return out;
}

PeriodicCatalog find_periodic_points(const LorenzMap& map, std::size_t max_period,
                                     const PeriodicSearchOptions& options) {
  if (max_period == 0 || max_period > 20) {
    throw LorenzError(ErrorCode::precondition, "find_periodic_points requires 1 <= max_period <= 20");
  }
  PeriodicCatalog cat;
  cat.max_period = max_period;
  const BoundaryLevels levels = critical_preimage_levels(map, max_period, options.max_laps);
  cat.searched_up_to = levels.depth;
  if (levels.truncated) {
    cat.truncated = true;
    char buf[128];
    std::snprintf(buf, sizeof buf, "lap budget %zu reached: periods above %zu not searched", options.max_laps,
                  levels.depth);
    cat.notes.emplace_back(buf);
  }
  const std::size_t top = cat.searched_up_to;
  std::vector<std::vector<PeriodicOrbitRecord>> per_n(top + 1);
  parallel_for(top, [&](std::size_t i) {
    const std::size_t n = i + 1;
    const auto roots = roots_of_period(map, lap_cuts(levels, n), n, options.resolution);
    per_n[n] = assemble_orbits(map, roots, n, options.neutral_tolerance);
  });
  for (std::size_t n = 1; n <= top; ++n) {
    auto& orbs = per_n[n];
    std::sort(orbs.begin(), orbs.end(),
              [](const auto& a, const auto& b) { return a.points.front() < b.points.front(); });
    cat.orbits.insert(cat.orbits.end(), orbs.begin(), orbs.end());
  }
  return cat;
}

std::size_t count_nonrepelling(const PeriodicCatalog& catalog) {
  return static_cast<std::size_t>(std::count_if(catalog.orbits.begin(), catalog.orbits.end(),
                                                [](const auto& o) { return o.nonrepelling(); }));
}

std::size_t count_nonrepelling(const LorenzMap& map, std::size_t max_period) {
  const ValidationReport rep = validate_map(map.spec(), 1024);
  if (!rep.schwarzian_negative_sampled) {
    throw LorenzError(ErrorCode::precondition, "count_nonrepelling requires a sampled negative Schwarzian");
  }
  return count_nonrepelling(find_periodic_points(map, max_period));
}

MinimalPeriodResult minimal_period_orbit_in(const PeriodicCatalog& catalog, const LorenzMap& map,
                                            const Interval& J) {
  if (!J.contains(map.c())) throw LorenzError(ErrorCode::precondition, "minimal_period_orbit_in requires c in J");
  std::vector<const PeriodicOrbitRecord*> meeting;
  for (const auto& o : catalog.orbits) {
    if (o.intersects(J)) meeting.push_back(&o);
  }
  if (meeting.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "none found (budget): no periodic orbit up to period %zu meets J",
                  catalog.searched_up_to);
    throw LorenzError(ErrorCode::not_found, buf);
  }
  std::size_t p = meeting.front()->period;
  for (const auto* o : meeting) p = std::min(p, o->period);
  std::vector<const PeriodicOrbitRecord*> tied;
  for (const auto* o : meeting) {
    if (o->period == p) tied.push_back(o);
  }
  MinimalPeriodResult res;
  res.competitors = tied.size() - 1;
  if (tied.size() == 1) {
    res.orbit = *tied.front();
    return res;
  }
  std::vector<const PeriodicOrbitRecord*> nonrep;
  for (const auto* o : tied) {
    if (o->nonrepelling()) nonrep.push_back(o);
  }
  if (nonrep.size() == 1) {
    res.orbit = *nonrep.front();
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%zu orbits of period %zu meet J; returned the non-repelling one "
                  "(uniqueness of the minimal orbit assumes no periodic attractor)",
                  tied.size(), p);
    res.note = buf;
    return res;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "variational principle violated: %zu orbits of minimal period %zu meet J",
                tied.size(), p);
  throw LorenzError(ErrorCode::hypothesis_violated, buf);
}

MinimalPeriodResult minimal_period_orbit_in(const LorenzMap& map, const Interval& J, std::size_t max_period) {
  return minimal_period_orbit_in(find_periodic_points(map, max_period), map, J);
}

}  // namespace lorenzlab
