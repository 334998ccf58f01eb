#include "lorenzlab/return_maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include "lorenzlab/parallel.hpp"
#include "lorenzlab/random.hpp"

namespace lorenzlab {

namespace {

constexpr double kSnap = 1e-9;
constexpr double kMinGap = 1e-10;

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

bool is_whole_interval(const Interval& J, double tol) { return J.lo <= tol && J.hi >= 1.0 - tol; }

// Orbits for return times run in long double: near-critical branches pass
// close to v+ or v-, where double rounding is amplified past the branch width.
using real = long double;

// J's ends are doubles; landings closer than this to an end do not count.
bool lands_in(const Interval& J, real x) {
  const real margin = 64 * std::numeric_limits<double>::epsilon();
  return x > J.lo + margin && x < J.hi - margin;
}

real step(const LorenzMap& map, real x, Side side = Side::none) {
  if (side != Side::none && x == map.c()) return map.apply(map.c(), side);
  return map.apply_generic(x);
}

double image_of(const LorenzMap& map, double x, Side side, std::size_t n) {
  real y = x;
  for (std::size_t k = 0; k < n; ++k) y = step(map, y, k == 0 ? side : Side::none);
  return static_cast<double>(y);
}

struct ReturnKey {
  std::size_t time = 0;
  std::uint64_t word = 0;
  friend bool operator==(const ReturnKey&, const ReturnKey&) = default;
};

ReturnKey return_key(const LorenzMap& map, double x0, const Interval& J, std::size_t horizon) {
  std::uint64_t h = 1469598103934665603ull;
  const real c = map.c();
  real x = x0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    h = (h ^ (x < c ? 0u : 1u)) * 1099511628211ull;
    x = step(map, x);
    if (lands_in(J, x)) return {k, h};
  }
  return {0, 0};
}

// Boundary between a point l outside the key class and a point r inside it;
// returns the innermost point known to carry the key.
double refine_left(const LorenzMap& map, const Interval& J, std::size_t horizon, const ReturnKey& key, double l,
                   double r) {
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    if (return_key(map, m, J, horizon) == key) {
      r = m;
    } else {
      l = m;
    }
  }
  return r;
}

double refine_right(const LorenzMap& map, const Interval& J, std::size_t horizon, const ReturnKey& key, double l,
                    double r) {
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    if (return_key(map, m, J, horizon) == key) {
      l = m;
    } else {
      r = m;
    }
  }
  return l;
}

double snap(double x, const LorenzMap& map, const Interval& J) {
  if (std::abs(x - map.c()) <= kSnap) return map.c();
  if (std::abs(x - J.lo) <= 1e-12) return J.lo;
  if (std::abs(x - J.hi) <= 1e-12) return J.hi;
  return x;
}

bool maps_onto(const LorenzMap& map, const Interval& I, std::size_t k, const Interval& J, double tol) {
  const double lo = map.iterate_limit(I.lo, Side::plus, k);
  const double hi = map.iterate_limit(I.hi, Side::minus, k);
  return std::abs(lo - J.lo) <= tol && std::abs(hi - J.hi) <= tol;
}

// Branch preimage of G with J removed. Points outside J enter J one step
// later than their image does, so the pieces are again first-entry
// components. Pieces are clipped only when J is not nice or G leaves the
// branch range.
std::vector<Interval> pull_back(const LorenzMap& map, BranchSide side, const Interval& G, const Interval& J,
                                double tol) {
  const Interval range = map.branch_range(side);
  const Interval Gc{std::max(G.lo, range.lo), std::min(G.hi, range.hi)};
  if (!(Gc.hi - Gc.lo > tol)) return {};
  const Interval P{map.branch_inverse(side, Gc.lo), map.branch_inverse(side, Gc.hi)};
  std::vector<Interval> out;
  if (overlap_length(P, J) <= tol) {
    if (!P.empty()) out.push_back(P);
    return out;
  }
  if (P.lo < J.lo - tol) out.push_back({P.lo, J.lo});
  if (P.hi > J.hi + tol) out.push_back({J.hi, P.hi});
  return out;
}

bool shares_boundary_with(const Interval& g, const Interval& J) {
  return std::abs(g.hi - J.lo) <= kSnap || std::abs(g.lo - J.hi) <= kSnap;
}

}  // namespace

NiceInterval is_nice(const LorenzMap& map, const Interval& J, std::size_t horizon) {
  if (!J.contains(map.c())) throw LorenzError(ErrorCode::precondition, "is_nice requires c in J");
  if (horizon > 1'000'000) throw LorenzError(ErrorCode::precondition, "is_nice horizon must be <= 1e6");
  NiceInterval ni;
  ni.interval = J;
  ni.horizon = horizon;
  const double tol = map.tolerance();

  enum class Walk { avoids, enters, undetermined };
  auto walk = [&](double start, Side side, std::optional<std::size_t>& period, std::string& why) {
    double x = start;
    for (std::size_t k = 1; k <= horizon; ++k) {
      if (map.near_critical(x)) {
        why = format("boundary orbit of %.17g hits c", start);
        return Walk::undetermined;
      }
      x = map.apply(x, side);
      if (std::abs(x - start) <= 10 * tol) {
        period = k;
        return Walk::avoids;
      }
      if (J.contains_strictly(x, tol)) {
        why = format("boundary orbit of %.17g enters J at step %g", start, static_cast<double>(k));
        return Walk::enters;
      }
    }
    return Walk::avoids;
  };

  std::string why_a, why_b;
  const Walk wa = walk(J.lo, Side::minus, ni.period_a, why_a);
  const Walk wb = walk(J.hi, Side::plus, ni.period_b, why_b);
  ni.nice = wa == Walk::avoids && wb == Walk::avoids;
  ni.undetermined = !ni.nice && (wa == Walk::undetermined || wb == Walk::undetermined) &&
                    wa != Walk::enters && wb != Walk::enters;
  if (!why_a.empty()) ni.reason = why_a;
  if (!why_b.empty()) ni.reason += (ni.reason.empty() ? "" : "; ") + why_b;
  return ni;
}

std::optional<Interval> push_forward(const LorenzMap& map, const Interval& I, std::size_t k) {
  Interval U = I;
  const double tol = map.tolerance();
  for (std::size_t j = 0; j < k; ++j) {
    if (U.contains_strictly(map.c(), tol)) return std::nullopt;
    U = {map.apply(U.lo, Side::plus), map.apply(U.hi, Side::minus)};
  }
  return U;
}

std::optional<std::size_t> order(const LorenzMap& map, const Interval& I, std::size_t horizon) {
  Interval U = I;
  const double tol = map.tolerance();
  for (std::size_t k = 0; k <= horizon; ++k) {
    if (U.contains_strictly(map.c(), tol)) return k;
    U = {map.apply(U.lo, Side::plus), map.apply(U.hi, Side::minus)};
  }
  return std::nullopt;
}

std::size_t first_return_time(const LorenzMap& map, double x0, const Interval& J, std::size_t horizon) {
  real x = x0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    x = step(map, x);
    if (lands_in(J, x)) return k;
  }
  return 0;
}

ReturnMapRec first_return_map(const LorenzMap& map, const Interval& J, std::size_t horizon, std::size_t resolution,
                              double full_tolerance) {
  if (resolution < 2) throw LorenzError(ErrorCode::precondition, "first_return_map needs resolution >= 2");
  const NiceInterval ni = is_nice(map, J, horizon);
  ReturnMapRec rec;
  rec.nice = ni.nice;
  if (!ni.nice) rec.note = "J is not nice at this horizon (" + ni.reason + "); branch laws do not apply";
  rec.J = J;
  rec.horizon = horizon;
  rec.resolution = resolution;

  const double w = J.length() / static_cast<double>(resolution);
  std::vector<double> xs(resolution);
  for (std::size_t i = 0; i < resolution; ++i) xs[i] = J.lo + (static_cast<double>(i) + 0.5) * w;
  std::vector<ReturnKey> keys(resolution);
  constexpr std::size_t chunk = 256;
  parallel_for((resolution + chunk - 1) / chunk, [&](std::size_t b) {
    for (std::size_t i = b * chunk; i < std::min(resolution, (b + 1) * chunk); ++i) {
      keys[i] = return_key(map, xs[i], J, horizon);
    }
  });
  if (std::all_of(keys.begin(), keys.end(), [](const ReturnKey& k) { return k.time == 0; })) {
    throw LorenzError(ErrorCode::no_returns, "no returns observed: no grid point returns within the horizon");
  }

  double covered = 0.0;
  for (std::size_t i = 0; i < resolution;) {
    std::size_t j = i;
    while (j + 1 < resolution && keys[j + 1] == keys[i]) ++j;
    const ReturnKey key = keys[i];
    if (key.time > 0) {
      const double l_out = i == 0 ? J.lo : xs[i - 1];
      const double r_out = j + 1 == resolution ? J.hi : xs[j + 1];
      ReturnMapBranch br;
      br.domain = {snap(refine_left(map, J, horizon, key, l_out, xs[i]), map, J),
                   snap(refine_right(map, J, horizon, key, xs[j], r_out), map, J)};
      if (br.domain.length() < 1e-8 * J.length()) {
        ++rec.dropped_branches;
        i = j + 1;
        continue;
      }
      br.return_time = key.time;
      br.image = {image_of(map, br.domain.lo, Side::plus, key.time),
                  image_of(map, br.domain.hi, Side::minus, key.time)};
      br.touches_c = br.domain.lo == map.c() || br.domain.hi == map.c();
      br.is_full = std::abs(br.image.lo - J.lo) <= full_tolerance && std::abs(br.image.hi - J.hi) <= full_tolerance;
      br.return_time_verified = true;
      for (double t : {0.25, 0.5, 0.75}) {
        const double x = br.domain.lo + t * br.domain.length();
        if (first_return_time(map, x, J, horizon) != key.time) br.return_time_verified = false;
      }
      covered += br.domain.length();
      rec.branches.push_back(br);
    }
    i = j + 1;
  }
  rec.uncovered_measure = std::max(0.0, J.length() - covered);
  return rec;
}

GapList gaps(const LorenzMap& map, const Interval& J, std::size_t max_order, std::size_t budget) {
  GapList out;
  out.max_order = max_order;
  const double tol = map.tolerance();
  out.nice = is_nice(map, J, 10'000).nice;
  struct Node {
    Interval gap;
    std::size_t order;
  };
  auto smaller = [](const Node& a, const Node& b) {
    if (a.gap.length() != b.gap.length()) return a.gap.length() < b.gap.length();
    return a.gap.lo > b.gap.lo;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(smaller)> queue(smaller);
  queue.push({J, 0});
  while (!queue.empty()) {
    if (out.gaps.size() >= budget) {
      out.partial = true;
      break;
    }
    const Node node = queue.top();
    queue.pop();
    GapRecord rec;
    rec.gap = node.gap;
    rec.order = node.order;
    rec.image_is_J = node.order == 0 || maps_onto(map, node.gap, node.order, J, 1e-6);
    rec.shares_boundary = node.order > 0 && shares_boundary_with(node.gap, J);
    out.gaps.push_back(rec);
    if (node.order >= max_order || node.gap.length() < kMinGap) continue;
    for (BranchSide side : {BranchSide::left, BranchSide::right}) {
      for (const Interval& P : pull_back(map, side, node.gap, J, tol)) queue.push({P, node.order + 1});
    }
  }
  std::sort(out.gaps.begin(), out.gaps.end(), [](const GapRecord& a, const GapRecord& b) { return a.gap.lo < b.gap.lo; });
  return out;
}

std::optional<GapRecord> enclosing_gap(const LorenzMap& map, const Interval& J, const Interval& I,
                                       std::size_t horizon) {
  const double tol = map.tolerance();
  std::vector<BranchSide> path;
  Interval U = I;
  std::size_t k = 0;
  for (;; ++k) {
    if (overlap_length(U, J) > tol) {
      if (!J.includes(U, kSnap)) return std::nullopt;
      break;
    }
    if (k == horizon || U.contains_strictly(map.c(), tol)) return std::nullopt;
    path.push_back(U.mid() < map.c() ? BranchSide::left : BranchSide::right);
    U = {map.apply(U.lo, Side::plus), map.apply(U.hi, Side::minus)};
  }
  Interval G = J;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    G = {map.branch_inverse(*it, G.lo), map.branch_inverse(*it, G.hi)};
  }
  GapRecord rec;
  rec.gap = G;
  rec.order = k;
  rec.image_is_J = k == 0 || maps_onto(map, G, k, J, 1e-6);
  rec.shares_boundary = k > 0 && shares_boundary_with(G, J);
  return rec;
}

std::vector<PhobicEstimate> phobic_profile(const LorenzMap& map, const Interval& J, const std::vector<std::size_t>& ns,
                                           std::size_t grid) {
  if (grid == 0) throw LorenzError(ErrorCode::precondition, "phobic grid must be positive");
  const std::size_t max_n = ns.empty() ? 0 : *std::max_element(ns.begin(), ns.end());
  // Entry time per grid midpoint; max_n + 1 means no entry up to max_n.
  std::vector<std::size_t> entry(grid);
  constexpr std::size_t chunk = 4096;
  parallel_for((grid + chunk - 1) / chunk, [&](std::size_t b) {
    for (std::size_t i = b * chunk; i < std::min(grid, (b + 1) * chunk); ++i) {
      double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
      std::size_t k = 0;
      while (k <= max_n && !J.contains(x)) {
        x = map.apply(x);
        ++k;
      }
      entry[i] = k;
    }
  });
  std::vector<PhobicEstimate> out;
  for (std::size_t n : ns) {
    PhobicEstimate est;
    est.J = J;
    est.n = n;
    est.grid = grid;
    for (std::size_t i = 0; i < grid; ++i) {
      if (entry[i] > n) est.surviving_cells.push_back(i);
    }
    est.surviving_measure = static_cast<double>(est.surviving_cells.size()) / static_cast<double>(grid);
    out.push_back(std::move(est));
  }
  return out;
}

PhobicEstimate phobic_measure(const LorenzMap& map, const Interval& J, std::size_t n, std::size_t grid) {
  return std::move(phobic_profile(map, J, {n}, grid).front());
}

ManeFit mane_expansion_check(const LorenzMap& map, const Interval& J, std::size_t samples, std::size_t n,
                             std::uint64_t seed, const PeriodicCatalog& catalog) {
  for (const auto& o : catalog.orbits) {
    if (o.kind == OrbitKind::neutral && !o.intersects(J)) {
      throw LorenzError(ErrorCode::precondition, "a neutral periodic orbit lies outside J");
    }
  }
  if (n == 0) throw LorenzError(ErrorCode::precondition, "mane_expansion_check needs n >= 1");
  ManeFit fit;
  fit.samples = samples;
  fit.n = n;
  const std::vector<double> xs = uniform_samples(seed, samples);
  std::vector<std::vector<double>> logs;
  for (double x0 : xs) {
    std::vector<double> cum(n);
    double x = x0;
    double s = 0.0;
    bool survived = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (J.contains(x)) {
        survived = false;
        break;
      }
      s += std::log(std::abs(map.derivative(x)));
      cum[k] = s;
      x = map.apply(x);
    }
    if (survived) logs.push_back(std::move(cum));
  }
  fit.survivors = logs.size();
  if (fit.survivors < 10) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "insufficient survivors: %zu of %zu samples avoid J for %zu steps", fit.survivors,
                  samples, n);
    throw LorenzError(ErrorCode::insufficient_data, buf);
  }
  double sk = 0, skk = 0, sl = 0, skl = 0, cnt = 0;
  for (const auto& cum : logs) {
    for (std::size_t k = 0; k < n; ++k) {
      const double kk = static_cast<double>(k + 1);
      sk += kk;
      skk += kk * kk;
      sl += cum[k];
      skl += kk * cum[k];
      cnt += 1;
    }
  }
  const double var = skk - sk * sk / cnt;
  fit.slope = var > 0 ? (skl - sk * sl / cnt) / var : sl / sk;
  fit.lambda = std::exp(fit.slope);
  double min_log = std::numeric_limits<double>::infinity();
  for (const auto& cum : logs) {
    for (std::size_t k = 0; k < n; ++k) min_log = std::min(min_log, cum[k] - static_cast<double>(k + 1) * fit.slope);
  }
  fit.prefactor = std::exp(min_log);
  fit.pass = fit.lambda > 1.0;
  return fit;
}

ManeFit mane_expansion_check(const LorenzMap& map, const Interval& J, std::size_t samples, std::size_t n,
                             std::uint64_t seed) {
  return mane_expansion_check(map, J, samples, n, seed, find_periodic_points(map, 12));
}

RootIntervalResult root_interval(const LorenzMap& map, const Interval& J, const PeriodicCatalog& catalog,
                                 std::size_t horizon) {
  RootIntervalResult res;
  const double tol = map.tolerance();
  if (is_whole_interval(J, tol)) {
    res.xi = {0.0, 1.0};
    res.period_alpha = 1;
    res.period_beta = 1;
    res.cross_check_ok = true;
    res.notes.emplace_back("the root of (0,1) is (0,1)");
    return res;
  }
  const NiceInterval ni = is_nice(map, J, horizon);
  if (!ni.nice || !ni.period_a || !ni.period_b) {
    throw LorenzError(ErrorCode::precondition, "root_interval requires a nice interval with periodic boundary");
  }
  bool same_orbit = false;
  double x = J.lo;
  for (std::size_t k = 0; k < *ni.period_a && !same_orbit; ++k) {
    if (std::abs(x - J.hi) <= 1e-7) same_orbit = true;
    x = map.apply(x, Side::minus);
  }
  if (!same_orbit) {
    throw LorenzError(ErrorCode::precondition, "root_interval requires both boundary points on one orbit");
  }
  const std::size_t pa = *ni.period_a;
  const std::size_t pb = *ni.period_b;

  struct Candidate {
    double x;
    std::size_t period;
  };
  std::vector<Candidate> lefts, rights;
  for (const auto& o : catalog.orbits) {
    for (double p : o.points) {
      if (p < J.lo - kSnap && o.period <= pa) lefts.push_back({p, o.period});
      if (p > J.hi + kSnap && o.period <= pb) rights.push_back({p, o.period});
    }
  }
  std::sort(lefts.begin(), lefts.end(), [](const auto& a, const auto& b) { return a.x > b.x; });
  std::sort(rights.begin(), rights.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

  std::optional<Candidate> best_l, best_r;
  std::size_t tested = 0;
  constexpr std::size_t kMaxPairs = 20'000;
  for (const auto& l : lefts) {
    for (const auto& r : rights) {
      if (++tested > kMaxPairs) break;
      if (!is_nice(map, {l.x, r.x}, horizon).nice) continue;
      ++res.candidates;
      if (!best_l || l.x > best_l->x) best_l = l;
      if (!best_r || r.x < best_r->x) best_r = r;
    }
  }
  if (tested > kMaxPairs) res.notes.emplace_back("candidate pair budget reached; intersection may be too wide");
  if (!best_l || !best_r) {
    res.xi = {0.0, 1.0};
    res.notes.emplace_back("no periodic nice interval contains [a,b] within the catalog; using (0,1)");
    return res;
  }
  res.xi = {best_l->x, best_r->x};
  res.period_alpha = best_l->period;
  res.period_beta = best_r->period;

  bool ok = true;
  if (!is_nice(map, res.xi, horizon).nice) {
    ok = false;
    res.notes.emplace_back("intersection of candidates is not itself nice");
  }
  const GapList gl = gaps(map, J, 40, 20'000);
  auto gap_ending_at = [&](double e) -> const GapRecord* {
    for (const auto& g : gl.gaps) {
      if (std::abs(g.gap.hi - e) <= kSnap && g.order > 0) return &g;
    }
    return nullptr;
  };
  auto gap_starting_at = [&](double e) -> const GapRecord* {
    for (const auto& g : gl.gaps) {
      if (std::abs(g.gap.lo - e) <= kSnap && g.order > 0) return &g;
    }
    return nullptr;
  };
  std::vector<const GapRecord*> chain_left, chain_right;
  double edge = J.lo;
  for (int k = 0; k < 3; ++k) {
    const GapRecord* g = gap_ending_at(edge);
    if (!g) break;
    chain_left.push_back(g);
    edge = g->gap.lo;
  }
  edge = J.hi;
  for (int k = 0; k < 3; ++k) {
    const GapRecord* g = gap_starting_at(edge);
    if (!g) break;
    chain_right.push_back(g);
    edge = g->gap.hi;
  }
  if (chain_left.size() < 3 || chain_right.size() < 3) {
    ok = false;
    res.notes.emplace_back("fewer than three adjacent gaps found on a side of J");
  }
  for (const auto* g : chain_left) {
    if (!g->image_is_J || g->gap.lo < res.xi.lo - kSnap) ok = false;
  }
  for (const auto* g : chain_right) {
    if (!g->image_is_J || g->gap.hi > res.xi.hi + kSnap) ok = false;
  }
  // period(alpha) is the first time A_{-1} lands on a gap A_j, j >= 0.
  auto landing_time = [&](const GapRecord* g, bool to_right) -> std::optional<std::size_t> {
    for (std::size_t u = 1; u <= g->order; ++u) {
      const auto img = push_forward(map, g->gap, u);
      if (!img) return std::nullopt;
      for (const auto& h : gl.gaps) {
        const bool side_ok = to_right ? h.gap.lo >= J.lo - kSnap : h.gap.hi <= J.hi + kSnap;
        if (side_ok && std::abs(h.gap.lo - img->lo) <= 1e-6 && std::abs(h.gap.hi - img->hi) <= 1e-6) return u;
      }
    }
    return std::nullopt;
  };
  if (!chain_left.empty()) {
    const auto u = landing_time(chain_left.front(), true);
    if (!u || *u != *res.period_alpha) {
      ok = false;
      res.notes.emplace_back("period(alpha) differs from the landing time of the left adjacent gap");
    }
  }
  if (!chain_right.empty()) {
    const auto v = landing_time(chain_right.front(), false);
    if (!v || *v != *res.period_beta) {
      ok = false;
      res.notes.emplace_back("period(beta) differs from the landing time of the right adjacent gap");
    }
  }
  res.cross_check_ok = ok;
  return res;
}

RootIntervalResult root_interval(const LorenzMap& map, const Interval& J, std::size_t max_period,
                                 std::size_t horizon) {
  return root_interval(map, J, find_periodic_points(map, max_period), horizon);
}

}  // namespace lorenzlab
