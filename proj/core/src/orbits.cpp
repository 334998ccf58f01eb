#include "lorenzlab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lorenzlab {

OrbitSegment iterate_orbit(const LorenzMap& map, double x0, Side side, std::size_t n) {
  OrbitSegment seg;
  seg.points.reserve(n + 1);
  seg.log_derivatives.reserve(n + 1);
  const bool directed = side != Side::none;
  double x = x0;
  for (std::size_t k = 0;; ++k) {
    const bool at_c = map.near_critical(x);
    seg.points.push_back({x, at_c ? side : Side::none});
    if (at_c && !directed) {
      seg.hit_critical_at = k;
      seg.log_derivatives.push_back(0.0);
      break;
    }
    if (k == n) break;
    const double ld = at_c ? 0.0 : std::log(std::abs(map.derivative(x)));
    seg.log_derivatives.push_back(ld);
    seg.log_derivative_sum += ld;
    x = map.apply(x, side);
    seg.length = k + 1;
  }
  seg.log_derivatives.resize(seg.points.size(), 0.0);
  return seg;
}

Itinerary itinerary(const LorenzMap& map, double x0, Side side, std::size_t n) {
  const OrbitSegment seg = iterate_orbit(map, x0, side, n);
  Itinerary it;
  it.start = {x0, map.near_critical(x0) ? side : Side::none};
  it.word.reserve(seg.length);
  for (std::size_t k = 0; k < seg.length; ++k) {
    const DirectedPoint& p = seg.points[k];
    const bool left = map.near_critical(p.x) ? p.side == Side::minus : p.x < map.c();
    it.word.push_back(left ? '0' : '1');
  }
  return it;
}

LyapunovEstimate lyapunov(const LorenzMap& map, double x0, std::size_t n, std::size_t tail_windows) {
  if (n < 1000) throw LorenzError(ErrorCode::precondition, "lyapunov requires n >= 1000");
  if (tail_windows == 0) throw LorenzError(ErrorCode::precondition, "lyapunov requires tail_windows >= 1");
  LyapunovEstimate est;
  est.tail_windows = tail_windows;
  const std::size_t half = n / 2;
  std::vector<std::size_t> checkpoints(tail_windows);
  for (std::size_t i = 0; i < tail_windows; ++i) {
    checkpoints[i] = half + (n - half) * (i + 1) / tail_windows;
  }
  double sum = 0.0;
  double x = x0;
  std::size_t next = 0;
  std::size_t k = 0;
  for (; k < n; ++k) {
    if (map.near_critical(x)) {
      est.hit_critical = true;
      break;
    }
    sum += std::log(std::abs(map.derivative(x)));
    x = map.apply(x);
    if (next < checkpoints.size() && k + 1 == checkpoints[next]) {
      est.window_averages.push_back(sum / static_cast<double>(k + 1));
      ++next;
    }
  }
  est.steps = k;
  if (est.window_averages.empty()) {
    est.window_averages.push_back(k > 0 ? sum / static_cast<double>(k) : 0.0);
  }
  est.value = *std::min_element(est.window_averages.begin(), est.window_averages.end());
  return est;
}

LimitSetEstimate estimate_omega_limit(const LorenzMap& map, double x0, std::size_t burn_in,
                                      std::size_t sample_len, std::size_t resolution) {
  if (resolution == 0) throw LorenzError(ErrorCode::precondition, "resolution must be positive");
  if (burn_in + sample_len > 100'000'000) {
    throw LorenzError(ErrorCode::precondition, "burn_in + sample_len exceeds 1e8");
  }
  LimitSetEstimate est;
  est.resolution = resolution;
  est.burn_in = burn_in;
  est.sample_len = sample_len;
  const double width = 1.0 / static_cast<double>(resolution);
  std::vector<char> seen(resolution, 0);
  double x = x0;
  for (std::size_t k = 0; k < burn_in + sample_len; ++k) {
    if (map.near_critical(x)) {
      est.partial = true;
      if (k >= burn_in) est.contains_c = true;
      break;
    }
    if (k >= burn_in) {
      seen[cell_of(x, resolution)] = 1;
      if (std::abs(x - map.c()) < width) est.contains_c = true;
    }
    x = map.apply(x);
  }
  for (std::size_t i = 0; i < resolution; ++i) {
    if (seen[i]) est.cells.push_back(i);
  }
  return est;
}

LimitSetEstimate estimate_alpha_limit(const LorenzMap& map, double x, std::size_t depth, std::size_t cap,
                                      std::size_t resolution) {
  if (depth > 60) throw LorenzError(ErrorCode::precondition, "alpha-limit depth must be <= 60");
  if (resolution == 0) throw LorenzError(ErrorCode::precondition, "resolution must be positive");
  LimitSetEstimate est;
  est.resolution = resolution;
  std::vector<char> seen(resolution, 0);
  std::vector<double> level{x};
  std::size_t nodes = 1;
  const std::size_t keep_from = (depth + 1) / 2;
  if (keep_from == 0) seen[cell_of(x, resolution)] = 1;
  std::size_t d = 0;
  while (d < depth && !level.empty()) {
    std::vector<double> next;
    next.reserve(level.size() * 2);
    bool stopped = false;
    for (double y : level) {
      for (const DirectedPoint& p : preimages(map, y)) {
        if (nodes >= cap) {
          stopped = true;
          break;
        }
        next.push_back(p.x);
        ++nodes;
      }
      if (stopped) break;
    }
    ++d;
    if (d >= keep_from) {
      for (double y : next) seen[cell_of(y, resolution)] = 1;
    }
    level = std::move(next);
    if (stopped) {
      est.partial = true;
      break;
    }
  }
  est.nodes = nodes;
  est.depth_reached = d;
  for (std::size_t i = 0; i < resolution; ++i) {
    if (seen[i]) est.cells.push_back(i);
  }
  const std::size_t cc = cell_of(map.c(), resolution);
  est.contains_c = seen[cc] != 0;
  if (!seen[cc]) {
    std::size_t lo = cc;
    std::size_t hi = cc;
    while (lo > 0 && !seen[lo - 1]) --lo;
    while (hi + 1 < resolution && !seen[hi + 1]) ++hi;
    const double w = 1.0 / static_cast<double>(resolution);
    est.critical_gap = Interval{static_cast<double>(lo) * w, static_cast<double>(hi + 1) * w};
  }
  return est;
}

RotationEstimate rotation_number(const LorenzMap& map, const ReturnMapRec& rec, double x0, std::size_t n) {
  if (rec.branches.size() != 2) {
    throw LorenzError(ErrorCode::precondition, "rotation number needs a return map with exactly two branches");
  }
  if (n == 0) throw LorenzError(ErrorCode::precondition, "rotation number needs n >= 1");
  const Interval J = rec.J;
  if (!J.contains(x0)) throw LorenzError(ErrorCode::not_invariant, "start point is outside J");
  const std::size_t horizon = rec.horizon > 0 ? rec.horizon : 10'000;
  const double c = map.c();

  std::vector<double> ys;
  std::vector<char> left;
  ys.reserve(n);
  left.reserve(n);
  double x = x0;
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t t = 0;
    do {
      if (map.near_critical(x)) {
        throw LorenzError(ErrorCode::not_invariant, "return orbit hit the critical point");
      }
      x = map.apply(x);
      ++t;
    } while (!J.contains(x) && t < horizon);
    if (!J.contains(x)) {
      throw LorenzError(ErrorCode::not_invariant, "orbit is not forward invariant: no return within horizon");
    }
    ys.push_back(x);
    left.push_back(x < c ? 1 : 0);
  }

  RotationEstimate est;
  est.returns = n;
  const std::size_t left_total = static_cast<std::size_t>(std::count(left.begin(), left.end(), 1));
  est.value = static_cast<double>(left_total) / static_cast<double>(n);

  constexpr double kMatch = 1e-9;
  const std::size_t max_p = std::min<std::size_t>(n / 2, 1000);
  for (std::size_t p = 1; p <= max_p; ++p) {
    bool periodic = true;
    for (std::size_t i = n - p; i < n && periodic; ++i) {
      periodic = std::abs(ys[i] - ys[i - p]) < kMatch;
    }
    if (!periodic) continue;
    const std::size_t k = static_cast<std::size_t>(std::count(left.end() - static_cast<std::ptrdiff_t>(p), left.end(), 1));
    const std::size_t g = std::gcd(k, p);
    est.numerator = g == 0 ? 0 : k / g;
    est.denominator = g == 0 ? 1 : p / g;
    est.value = static_cast<double>(k) / static_cast<double>(p);
    break;
  }
  return est;
}

}  // namespace lorenzlab
