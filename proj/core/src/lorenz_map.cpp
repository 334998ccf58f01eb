#include "lorenzlab/lorenz_map.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace lorenzlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid_spec";
    case ErrorCode::undirected_critical: return "undirected_critical";
    case ErrorCode::critical_point: return "critical_point";
    case ErrorCode::budget_exhausted: return "budget_exhausted";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::hypothesis_violated: return "hypothesis_violated";
    case ErrorCode::no_returns: return "no_returns";
    case ErrorCode::not_invariant: return "not_invariant";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::precondition: return "precondition";
  }
  return "unknown";
}

const char* to_string(Side side) {
  switch (side) {
    case Side::minus: return "minus";
    case Side::plus: return "plus";
    case Side::none: return "none";
  }
  return "none";
}

const char* to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::polynomial: return "polynomial";
    case BranchKind::quadratic_logistic: return "quadratic_logistic";
    case BranchKind::power_form: return "power_form";
  }
  return "polynomial";
}

BranchSpec BranchSpec::logistic(BranchSide side, double a) {
  BranchSpec b;
  b.kind = BranchKind::quadratic_logistic;
  b.side = side;
  b.a = a;
  return b;
}

BranchSpec BranchSpec::power(BranchSide side, double a, double alpha) {
  BranchSpec b;
  b.kind = BranchKind::power_form;
  b.side = side;
  b.a = a;
  b.alpha = alpha;
  return b;
}

BranchSpec BranchSpec::polynomial(BranchSide side, std::vector<double> coefficients) {
  BranchSpec b;
  b.kind = BranchKind::polynomial;
  b.side = side;
  b.coefficients = std::move(coefficients);
  return b;
}

namespace {

void check_branch(const BranchSpec& b, BranchSide expected, const char* label) {
  const std::string where = std::string(label) + " branch";
  if (b.side != expected) {
    throw LorenzError(ErrorCode::invalid_spec, where + ": domain_side does not match its slot");
  }
  switch (b.kind) {
    case BranchKind::power_form:
      if (!(b.alpha > 1.0)) {
        throw LorenzError(ErrorCode::invalid_spec, where + ": power_form requires alpha > 1");
      }
      break;
    case BranchKind::polynomial:
      if (b.coefficients.empty()) {
        throw LorenzError(ErrorCode::invalid_spec, where + ": polynomial has no coefficients");
      }
      break;
    case BranchKind::quadratic_logistic:
      break;
  }
}

}  // namespace

LorenzMap::LorenzMap(LorenzMapSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.c > 0.0 && spec_.c < 1.0)) {
    throw LorenzError(ErrorCode::invalid_spec, "c must lie in (0,1)");
  }
  if (!(spec_.tolerance > 0.0)) {
    throw LorenzError(ErrorCode::invalid_spec, "tolerance must be positive");
  }
  check_branch(spec_.left, BranchSide::left, "left");
  check_branch(spec_.right, BranchSide::right, "right");
  v_minus_ = left_value(spec_.c);
  v_plus_ = right_value(spec_.c);
}

DirectedPoint LorenzMap::eval(DirectedPoint p) const {
  double y = 0.0;
  if (near_critical(p.x)) {
    if (p.side == Side::none) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "undirected critical evaluation at x=%.17g", p.x);
      throw LorenzError(ErrorCode::undirected_critical, buf);
    }
    y = p.side == Side::minus ? left_value(p.x) : right_value(p.x);
  } else {
    y = apply(p.x);
  }
  DirectedPoint out{y, Side::none};
  if (near_critical(y)) {
    if (p.side != Side::none) {
      out.side = p.side;
    } else {
      out.side = y < spec_.c ? Side::minus : Side::plus;
    }
  }
  return out;
}

double LorenzMap::iterate_limit(double x, Side side, std::size_t n) const {
  for (std::size_t k = 0; k < n; ++k) x = apply(x, side);
  return x;
}

double LorenzMap::branch_inverse(BranchSide side, double y) const {
  double lo = side == BranchSide::left ? 0.0 : spec_.c;
  double hi = side == BranchSide::left ? spec_.c : 1.0;
  const Interval range = branch_range(side);
  if (y <= range.lo) return lo;
  if (y >= range.hi) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (branch_value(side, mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Interval LorenzMap::branch_range(BranchSide side) const {
  if (side == BranchSide::left) return {branch_value(side, 0.0), v_minus_};
  return {v_plus_, branch_value(side, 1.0)};
}

BranchJet<double> LorenzMap::jet(double x) const {
  if (near_critical(x)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "derivative requested at the critical point x=%.17g", x);
    throw LorenzError(ErrorCode::critical_point, buf);
  }
  return branch_jet<double>(x < spec_.c ? spec_.left : spec_.right, spec_.c, x);
}

double LorenzMap::derivative(double x) const { return jet(x).d1; }
double LorenzMap::second_derivative(double x) const { return jet(x).d2; }
double LorenzMap::third_derivative(double x) const { return jet(x).d3; }

double LorenzMap::schwarzian(double x) const {
  const auto j = jet(x);
  if (std::abs(j.d1) <= spec_.tolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "critical point: |Df(%.17g)| below tolerance", x);
    throw LorenzError(ErrorCode::critical_point, buf);
  }
  const double r = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * r * r;
}

double derivative_fd(const LorenzMap& map, double x, double h) {
  const double c = map.c();
  double lo = x - h;
  double hi = x + h;
  // Stay on the branch of x so the stencil never straddles c.
  if (x < c) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, c);
  } else {
    lo = std::max(lo, c);
    hi = std::min(hi, 1.0);
  }
  const BranchSide side = x < c ? BranchSide::left : BranchSide::right;
  return (map.branch_value(side, hi) - map.branch_value(side, lo)) / (hi - lo);
}

ValidationReport validate_map(const LorenzMapSpec& spec, std::size_t grid_size) {
  if (grid_size < 100) {
    throw LorenzError(ErrorCode::precondition, "validate_map requires grid_size >= 100");
  }
  ValidationReport rep;
  rep.grid_size = grid_size;
  std::optional<LorenzMap> built;
  try {
    built.emplace(spec);
  } catch (const LorenzError& e) {
    rep.notes.emplace_back(std::string("invalid spec: ") + e.what());
    return rep;
  }
  const LorenzMap& f = *built;
  const double tol = spec.tolerance;
  const double c = spec.c;
  rep.v0 = f.critical_value_plus();
  rep.v1 = f.critical_value_minus();

  const bool endpoints_fixed = std::abs(f.apply(0.0)) <= tol && std::abs(f.apply(1.0) - 1.0) <= tol;
  if (!endpoints_fixed) rep.notes.emplace_back("endpoints are not fixed within tolerance");
  rep.multiplier_at_0 = f.derivative(0.0);
  rep.multiplier_at_1 = f.derivative(1.0);

  const double dl = branch_jet<double>(spec.left, c, c).d1;
  const double dr = branch_jet<double>(spec.right, c, c).d1;
  rep.is_contracting = std::abs(dl) <= tol && std::abs(dr) <= tol;
  if (!rep.is_contracting) rep.notes.emplace_back("one-sided derivative at c does not vanish");

  bool monotone = true;
  bool schwarzian_negative = true;
  const BranchSide sides[2] = {BranchSide::left, BranchSide::right};
  for (BranchSide s : sides) {
    const double lo = s == BranchSide::left ? 0.0 : c;
    const double hi = s == BranchSide::left ? c : 1.0;
    double prev = f.branch_value(s, lo);
    for (std::size_t i = 1; i < grid_size; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size);
      const double y = f.branch_value(s, x);
      const double d = f.branch_derivative(s, x);
      if (monotone && (!(d > 0.0) || !(y > prev))) {
        monotone = false;
        rep.offending_sample = x;
        rep.notes.emplace_back("branch is not strictly increasing on the sampled grid");
      }
      prev = y;
      if (std::abs(d) > tol && !f.near_critical(x)) {
        if (!(f.schwarzian(x) < 0.0)) schwarzian_negative = false;
      }
    }
    if (monotone && !(f.branch_value(s, hi) > prev)) {
      monotone = false;
      rep.offending_sample = hi;
      rep.notes.emplace_back("branch is not strictly increasing on the sampled grid");
    }
  }
  rep.schwarzian_negative_sampled = schwarzian_negative;

  const bool in_range = rep.v0 >= -tol && rep.v1 <= 1.0 + tol;
  if (!in_range) rep.notes.emplace_back("critical values leave [0,1]");
  rep.is_lorenz = endpoints_fixed && monotone && in_range;
  rep.notes.emplace_back("all flags are numerical (64-bit sampling, no interval arithmetic)");
  return rep;
}

std::vector<DirectedPoint> preimages(const LorenzMap& map, double y) {
  std::vector<DirectedPoint> out;
  const double tol = map.tolerance();
  const BranchSide sides[2] = {BranchSide::left, BranchSide::right};
  for (BranchSide s : sides) {
    const Interval range = map.branch_range(s);
    if (s == BranchSide::left && std::abs(y - map.critical_value_minus()) <= tol) {
      out.push_back({map.c(), Side::minus});
      continue;
    }
    if (s == BranchSide::right && std::abs(y - map.critical_value_plus()) <= tol) {
      out.push_back({map.c(), Side::plus});
      continue;
    }
    if (y < range.lo - tol || y > range.hi + tol) continue;
    const double x = map.branch_inverse(s, y);
    out.push_back({x, map.near_critical(x) ? (s == BranchSide::left ? Side::minus : Side::plus) : Side::none});
  }
  std::sort(out.begin(), out.end(), [](const DirectedPoint& a, const DirectedPoint& b) {
    return a.x < b.x || (a.x == b.x && a.side < b.side);
  });
  return out;
}

UnimodalSpec UnimodalSpec::logistic(double a) {
  UnimodalSpec u;
  u.kind = Kind::logistic;
  u.a = a;
  return u;
}

UnimodalSpec UnimodalSpec::polynomial(std::vector<double> coefficients, std::string name) {
  UnimodalSpec u;
  u.kind = Kind::polynomial;
  u.coefficients = std::move(coefficients);
  u.name = std::move(name);
  return u;
}

LorenzMapSpec embed_unimodal(const UnimodalSpec& u, double tolerance) {
  if (u.kind == UnimodalSpec::Kind::polynomial && u.coefficients.empty()) {
    throw LorenzError(ErrorCode::invalid_spec, "unimodal polynomial has no coefficients");
  }
  if (std::abs(u.value(0.0)) > tolerance) {
    throw LorenzError(ErrorCode::invalid_spec, "unimodal map must satisfy u(0) = 0");
  }
  constexpr int grid = 2048;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double asym = std::abs(u.value(x) - u.value(1.0 - x));
    if (asym > tolerance) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "asymmetric unimodal map: |u(x)-u(1-x)| = %.3g at x=%.6g", asym, x);
      throw LorenzError(ErrorCode::invalid_spec, buf);
    }
    if (i > 0 && 2 * i < grid && !(u.derivative(x) > 0.0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "unimodal map is not increasing on (0,1/2) at x=%.6g", x);
      throw LorenzError(ErrorCode::invalid_spec, buf);
    }
  }

  LorenzMapSpec spec;
  spec.c = 0.5;
  spec.tolerance = tolerance;
  if (u.kind == UnimodalSpec::Kind::logistic) {
    spec.left = BranchSpec::logistic(BranchSide::left, u.a);
    spec.right = BranchSpec::logistic(BranchSide::right, u.a);
    char buf[64];
    std::snprintf(buf, sizeof buf, "logistic%g-embed", u.a);
    spec.name = u.name.empty() ? buf : u.name;
  } else {
    std::vector<double> neg(u.coefficients.size());
    std::transform(u.coefficients.begin(), u.coefficients.end(), neg.begin(), [](double v) { return -v; });
    neg[0] += 1.0;
    spec.left = BranchSpec::polynomial(BranchSide::left, u.coefficients);
    spec.right = BranchSpec::polynomial(BranchSide::right, std::move(neg));
    spec.name = u.name.empty() ? "polynomial-embed" : u.name + "-embed";
  }
  return spec;
}

}  // namespace lorenzlab
