#pragma once

// Reference computations written directly from the formulas, sharing no code
// with the library. Everything runs in long double.

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using real = long double;

// Left a_l x (1 - x) on [0, 1/2), right 1 - a_r x (1 - x) on (1/2, 1].
struct QuadPair {
  real al;
  real ar;

  [[nodiscard]] real f(real x) const { return x < 0.5L ? al * x * (1 - x) : 1 - ar * x * (1 - x); }
  [[nodiscard]] real df(real x) const { return x < 0.5L ? al * (1 - 2 * x) : ar * (2 * x - 1); }
  [[nodiscard]] real iterate(real x, std::size_t n) const {
    for (std::size_t k = 0; k < n; ++k) x = f(x);
    return x;
  }
  // One-sided limits at 1/2.
  [[nodiscard]] real v_minus() const { return al / 4; }
  [[nodiscard]] real v_plus() const { return 1 - ar / 4; }
};

inline const QuadPair ex1{3.4L, 4.0L};
inline const QuadPair ex2{4.0L, 4.0L};
inline const QuadPair ex3{3.4L, 3.4L};

template <class F>
real bisect(F g, real lo, real hi) {
  real glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const real mid = (lo + hi) / 2;
    const real gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

// Left-branch solution of a x (1 - x) = y.
inline real left_preimage(real a, real y) { return (1 - std::sqrt(1 - 4 * y / a)) / 2; }
// Right-branch solution of 1 - a x (1 - x) = y.
inline real right_preimage(real a, real y) { return (1 + std::sqrt(1 - 4 * (1 - y) / a)) / 2; }

struct TwoCycle {
  real p;  // left point
  real q;  // right point
  real multiplier;
};

// The period-2 orbit {p < 1/2 < q} of a quadratic pair: p solves
// p = 1 - a_r q (1 - q) with q = a_l p (1 - p), bracketed in [lo, 1/2).
inline TwoCycle two_cycle(const QuadPair& m, real lo) {
  auto g = [&](real p) {
    const real q = m.al * p * (1 - p);
    return 1 - m.ar * q * (1 - q) - p;
  };
  TwoCycle t;
  t.p = bisect(g, lo, 0.5L - 1e-15L);
  t.q = m.al * t.p * (1 - t.p);
  t.multiplier = m.df(t.p) * m.df(t.q);
  return t;
}

// Period-2 points of the logistic map a x (1 - x).
inline std::pair<real, real> logistic_two_cycle(real a) {
  const real s = std::sqrt((a - 3) * (a + 1));
  return {(a + 1 - s) / (2 * a), (a + 1 + s) / (2 * a)};
}

// Least k >= 1 with f^k(x) in (lo, hi), or 0.
inline std::size_t return_time(const QuadPair& m, real x, real lo, real hi, std::size_t horizon) {
  for (std::size_t k = 1; k <= horizon; ++k) {
    x = m.f(x);
    if (lo < x && x < hi) return k;
  }
  return 0;
}

// (1/n) log of the number of distinct length-n words over the given orbit
// starts, reading `windows` consecutive words after `burn_in` steps.
inline real word_entropy(const QuadPair& m, const std::vector<double>& starts, std::size_t n, std::size_t burn_in,
                         std::size_t windows) {
  std::set<std::string> words;
  for (double x0 : starts) {
    real x = x0;
    for (std::size_t k = 0; k < burn_in; ++k) x = m.f(x);
    std::string w;
    for (std::size_t k = 0; k < n + windows - 1; ++k) {
      w.push_back(x < 0.5L ? '0' : '1');
      x = m.f(x);
    }
    for (std::size_t s = 0; s < windows; ++s) words.insert(w.substr(s, n));
  }
  return std::log(static_cast<real>(words.size())) / static_cast<real>(n);
}

}  // namespace oracle
