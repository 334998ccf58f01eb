#pragma once

// Contracting Lorenz maps of [0,1]: an increasing map with a single
// discontinuity c, fixed endpoints and one-sided derivatives vanishing at c.
//
// Evaluation at c is directed: the point carries the side it is approached
// from, which realizes the doubled critical point of the compactified space.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/errors.hpp"
#include "lorenzlab/interval.hpp"

namespace lorenzlab {

enum class Side { minus, plus, none };
enum class BranchKind { polynomial, quadratic_logistic, power_form };
enum class BranchSide { left, right };

[[nodiscard]] const char* to_string(Side side);
[[nodiscard]] const char* to_string(BranchKind kind);

struct DirectedPoint {
  double x = 0.0;
  Side side = Side::none;

  friend bool operator==(const DirectedPoint&, const DirectedPoint&) = default;
};

// One monotone branch of the map.
//
//   quadratic_logistic(a): left  x -> a x (1 - x),  right x -> 1 - a x (1 - x)
//   power_form(a, alpha):  left  x -> a (1 - ((c - x)/c)^alpha)          (a = f(c-))
//                          right x -> a + (1 - a) ((x - c)/(1 - c))^alpha  (a = f(c+))
//   polynomial:            sum_k coefficients[k] x^k, ascending powers
struct BranchSpec {
  BranchKind kind = BranchKind::quadratic_logistic;
  BranchSide side = BranchSide::left;
  std::vector<double> coefficients;
  double a = 0.0;
  double alpha = 2.0;

  static BranchSpec logistic(BranchSide side, double a);
  static BranchSpec power(BranchSide side, double a, double alpha);
  static BranchSpec polynomial(BranchSide side, std::vector<double> coefficients);
};

struct LorenzMapSpec {
  std::string name;
  double c = 0.5;
  BranchSpec left = BranchSpec::logistic(BranchSide::left, 4.0);
  BranchSpec right = BranchSpec::logistic(BranchSide::right, 4.0);
  double tolerance = 1e-10;
};

// Value and first three derivatives of a branch formula at x. The formula is
// evaluated as written; callers are responsible for the side domain.
template <class T>
struct BranchJet {
  T value;
  T d1;
  T d2;
  T d3;
};

template <class T>
BranchJet<T> branch_jet(const BranchSpec& b, double c, const T& x) {
  using std::pow;
  switch (b.kind) {
    case BranchKind::quadratic_logistic: {
      const T a(b.a);
      if (b.side == BranchSide::left) {
        return {a * x * (T(1) - x), a * (T(1) - T(2) * x), T(-2) * a, T(0)};
      }
      // Vertex form near 1/2, where 1 - a x (1 - x) cancels; the product
      // form elsewhere keeps f(1) = 1 exact.
      const T h = x - T(0.5);
      const T value = (h < T(0.25) && h > T(-0.25)) ? (T(1) - a / T(4)) + a * h * h : T(1) - a * x * (T(1) - x);
      return {value, a * (T(2) * x - T(1)), T(2) * a, T(0)};
    }
    case BranchKind::power_form: {
      const T a(b.a);
      const T al(b.alpha);
      if (b.side == BranchSide::left) {
        const T cc(c);
        T s = (cc - x) / cc;
        if (s < T(0)) s = T(0);
        const T s1 = pow(s, al - T(1));
        const T s2 = s > T(0) ? pow(s, al - T(2)) : T(0);
        const T s3 = s > T(0) ? pow(s, al - T(3)) : T(0);
        return {a * (T(1) - s1 * s), a * al * s1 / cc, -a * al * (al - T(1)) * s2 / (cc * cc),
                a * al * (al - T(1)) * (al - T(2)) * s3 / (cc * cc * cc)};
      }
      const T w(1.0 - c);
      T t = (x - T(c)) / w;
      if (t < T(0)) t = T(0);
      const T k = T(1) - a;
      const T t1 = pow(t, al - T(1));
      const T t2 = t > T(0) ? pow(t, al - T(2)) : T(0);
      const T t3 = t > T(0) ? pow(t, al - T(3)) : T(0);
      return {a + k * t1 * t, k * al * t1 / w, k * al * (al - T(1)) * t2 / (w * w),
              k * al * (al - T(1)) * (al - T(2)) * t3 / (w * w * w)};
    }
    case BranchKind::polynomial: {
      T v(0), d1(0), d2(0), d3(0);
      const auto& co = b.coefficients;
      // Horner on the Taylor coefficients (p, p', p''/2, p'''/6).
      for (std::size_t i = co.size(); i-- > 0;) {
        d3 = d3 * x + d2;
        d2 = d2 * x + d1;
        d1 = d1 * x + v;
        v = v * x + T(co[i]);
      }
      return {v, d1, T(2) * d2, T(6) * d3};
    }
  }
  return {T(0), T(0), T(0), T(0)};
}

class LorenzMap {
 public:
  // Throws LorenzError(invalid_spec) for structurally invalid specs
  // (c outside (0,1), alpha <= 1, empty polynomial, non-positive tolerance).
  explicit LorenzMap(LorenzMapSpec spec);

  [[nodiscard]] const LorenzMapSpec& spec() const { return spec_; }
  [[nodiscard]] const std::string& name() const { return spec_.name; }
  [[nodiscard]] double c() const { return spec_.c; }
  [[nodiscard]] double tolerance() const { return spec_.tolerance; }

  // v0 = f(c+) and v1 = f(c-).
  [[nodiscard]] double critical_value_plus() const { return v_plus_; }
  [[nodiscard]] double critical_value_minus() const { return v_minus_; }

  [[nodiscard]] bool near_critical(double x) const { return std::abs(x - spec_.c) <= spec_.tolerance; }

  // Directed evaluation. Near c the side selects the branch; an undirected
  // point there throws undirected_critical. The returned side is none unless
  // the image is within tolerance of c: then it carries the input side for a
  // directed input (one-sided limits stay one-sided) or the sign of y - c.
  [[nodiscard]] DirectedPoint eval(DirectedPoint p) const;

  // Hot-path evaluation: left branch iff x < c.
  [[nodiscard]] double apply(double x) const {
    return x < spec_.c ? left_value(x) : right_value(x);
  }
  // One-sided evaluation: the side decides the branch when x is within
  // tolerance of c, otherwise behaves like apply(x).
  [[nodiscard]] double apply(double x, Side side) const {
    if (near_critical(x) && side != Side::none) {
      return side == Side::minus ? left_value(x) : right_value(x);
    }
    return apply(x);
  }
  // n-fold one-sided limit: the side is held through every step, so this is
  // lim f^n(y) as y -> x from that side.
  [[nodiscard]] double iterate_limit(double x, Side side, std::size_t n) const;

  [[nodiscard]] double branch_value(BranchSide side, double x) const {
    return branch_jet<double>(side == BranchSide::left ? spec_.left : spec_.right, spec_.c, x).value;
  }
  [[nodiscard]] double branch_derivative(BranchSide side, double x) const {
    return branch_jet<double>(side == BranchSide::left ? spec_.left : spec_.right, spec_.c, x).d1;
  }
  // Solves branch(x) = y on the branch's closed domain by bisection; y is
  // clamped to the branch range.
  [[nodiscard]] double branch_inverse(BranchSide side, double y) const;
  // Closed range of the branch: [0, f(c-)] on the left, [f(c+), 1] on the right.
  [[nodiscard]] Interval branch_range(BranchSide side) const;

  // Throws critical_point within tolerance of c.
  [[nodiscard]] double derivative(double x) const;
  [[nodiscard]] double second_derivative(double x) const;
  [[nodiscard]] double third_derivative(double x) const;
  // D3f/Df - 3/2 (D2f/Df)^2. Throws critical_point when |Df| <= tolerance.
  [[nodiscard]] double schwarzian(double x) const;

  // Same formulas at arbitrary precision (used by invariant checks).
  template <class T>
  [[nodiscard]] T apply_generic(const T& x) const {
    return branch_jet<T>(x < T(spec_.c) ? spec_.left : spec_.right, spec_.c, x).value;
  }
  template <class T>
  [[nodiscard]] T derivative_generic(const T& x) const {
    return branch_jet<T>(x < T(spec_.c) ? spec_.left : spec_.right, spec_.c, x).d1;
  }

 private:
  [[nodiscard]] double left_value(double x) const { return branch_jet<double>(spec_.left, spec_.c, x).value; }
  [[nodiscard]] double right_value(double x) const { return branch_jet<double>(spec_.right, spec_.c, x).value; }
  [[nodiscard]] BranchJet<double> jet(double x) const;

  LorenzMapSpec spec_;
  double v_plus_ = 0.0;
  double v_minus_ = 0.0;
};

// Central-difference derivative, independent of the analytic formulas.
[[nodiscard]] double derivative_fd(const LorenzMap& map, double x, double h = 1e-7);

struct ValidationReport {
  bool is_lorenz = false;
  bool is_contracting = false;
  bool schwarzian_negative_sampled = false;
  double v0 = 0.0;  // f(c+)
  double v1 = 0.0;  // f(c-)
  double multiplier_at_0 = 0.0;
  double multiplier_at_1 = 0.0;
  std::size_t grid_size = 0;
  std::optional<double> offending_sample;
  std::vector<std::string> notes;
};

// Requires grid_size >= 100. Structural errors in the map spec are reported as a
// failed validation with a note rather than thrown.
[[nodiscard]] ValidationReport validate_map(const LorenzMapSpec& spec, std::size_t grid_size = 4096);

// All directed preimages of y: at most one per branch, plus (c, plus) when
// y = f(c+) and (c, minus) when y = f(c-) within tolerance.
[[nodiscard]] std::vector<DirectedPoint> preimages(const LorenzMap& map, double y);

// Symmetric unimodal map u of [0,1] with u(0) = 0 and u(x) = u(1 - x).
struct UnimodalSpec {
  enum class Kind { logistic, polynomial };
  Kind kind = Kind::logistic;
  double a = 4.0;
  std::vector<double> coefficients;
  std::string name;

  static UnimodalSpec logistic(double a);
  static UnimodalSpec polynomial(std::vector<double> coefficients, std::string name = "");

  template <class T>
  [[nodiscard]] T value(const T& x) const {
    if (kind == Kind::logistic) return T(a) * x * (T(1) - x);
    BranchSpec b = BranchSpec::polynomial(BranchSide::left, coefficients);
    return branch_jet<T>(b, 0.5, x).value;
  }
  template <class T>
  [[nodiscard]] T derivative(const T& x) const {
    if (kind == Kind::logistic) return T(a) * (T(1) - T(2) * x);
    BranchSpec b = BranchSpec::polynomial(BranchSide::left, coefficients);
    return branch_jet<T>(b, 0.5, x).d1;
  }
};

// The contracting Lorenz map L = u on [0, 1/2) and 1 - u on (1/2, 1].
// Throws invalid_spec if u is not symmetric, unimodal, or u(0) != 0.
[[nodiscard]] LorenzMapSpec embed_unimodal(const UnimodalSpec& u, double tolerance = 1e-10);

}  // namespace lorenzlab
