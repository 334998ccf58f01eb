#include <doctest.h>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/renorm.hpp"
#include "lorenzlab/return_maps.hpp"
#include "oracles.hpp"

using namespace lorenzlab;

namespace {

LorenzMap ex(const char* name) { return LorenzMap(*builtin_map(name)); }

const Interval kEx3J{5.0 / 17.0, 12.0 / 17.0};

}  // namespace

TEST_CASE("certified renormalization interval of the logistic-3.4 embedding") {
  const RenormalizationCheck chk = is_renormalization(ex("logistic3.4-embed"), kEx3J, 10'000);
  REQUIRE(chk.certified);
  CHECK(chk.proper);
  const RenormalizationRecord& r = chk.record;
  CHECK(r.period_a == 2);
  CHECK(r.period_b == 2);
  CHECK(r.regular);
  // L^2((5/17, c)) = (5/17, 1 - 3.4 * 0.85 * 0.15) and symmetrically on the right.
  const double top = static_cast<double>(oracle::ex3.f(oracle::ex3.v_minus()));
  CHECK(top == doctest::Approx(0.5665));
  CHECK(r.left_return.lo == doctest::Approx(kEx3J.lo).epsilon(1e-12));
  CHECK(r.left_return.hi == doctest::Approx(top).epsilon(1e-12));
  CHECK(r.right_return.lo == doctest::Approx(1.0 - top).epsilon(1e-12));
  CHECK(r.right_return.hi == doctest::Approx(kEx3J.hi).epsilon(1e-12));
}

TEST_CASE("non-periodic or non-invariant candidates are rejected") {
  CHECK_FALSE(is_renormalization(ex("logistic3.4-embed"), {0.3, 0.7}, 10'000).certified);
  const LorenzMap m2 = ex("logistic4-embed");
  const PeriodicCatalog cat = find_periodic_points(m2, 6);
  // Every pair of periodic boundary points around c.
  for (const auto& oa : cat.orbits) {
    for (const auto& ob : cat.orbits) {
      const double a = oa.max_point_below(0.5), b = ob.min_point_above(0.5);
      if (a <= 0.0 || b >= 1.0) continue;
      CHECK_FALSE(is_renormalization(m2, {a, b}, 10'000).certified);
    }
  }
}

TEST_CASE("nested sequences of the builtin maps") {
  const NestedSequence s3 = find_renormalizations(ex("logistic3.4-embed"), 8, 8, 10'000);
  REQUIRE(s3.intervals.size() >= 1);
  CHECK(s3.intervals[0].J.lo == doctest::Approx(kEx3J.lo).epsilon(1e-12));
  CHECK(s3.intervals[0].J.hi == doctest::Approx(kEx3J.hi).epsilon(1e-12));
  CHECK_FALSE(s3.depth_cap_hit);
  CHECK_FALSE((s3.maximal_nonregular.has_value() && s3.degenerate.has_value()));

  const NestedSequence s1 = find_renormalizations(ex("paper-example"), 12, 8, 10'000);
  CHECK(s1.intervals.empty());
  CHECK(s1.degenerate.has_value());
  CHECK_FALSE(s1.maximal_nonregular.has_value());

  const NestedSequence s2 = find_renormalizations(ex("logistic4-embed"), 12, 8, 10'000);
  CHECK(s2.intervals.empty());
  CHECK_FALSE(s2.degenerate.has_value());
  CHECK_FALSE(s2.maximal_nonregular.has_value());
}

TEST_CASE("nesting shrinks along a period-doubling embedding") {
  const LorenzMap m(embed_unimodal(UnimodalSpec::logistic(3.566)));
  const NestedSequence s = find_renormalizations(m, 16, 8, 10'000);
  REQUIRE(s.intervals.size() >= 2);
  CHECK(s.diameters_shrinking);
  for (std::size_t i = 1; i < s.intervals.size(); ++i) {
    const Interval& outer = s.intervals[i - 1].J;
    const Interval& inner = s.intervals[i].J;
    CHECK(inner.length() < outer.length());
    CHECK(outer.lo < inner.lo);
    CHECK(inner.hi < outer.hi);
  }
}

TEST_CASE("degenerate half-interval of the (3.4, 4.0) quadratic pair") {
  const LorenzMap m1 = ex("paper-example");
  const auto d = detect_degenerate(m1, 12, 10'000);
  REQUIRE(d);
  const oracle::TwoCycle t = oracle::two_cycle(oracle::ex1, 0.45L);
  CHECK(d->left);
  CHECK(d->I.hi == 0.5);
  CHECK(d->a < static_cast<double>(t.p));
  CHECK_FALSE(d->I.contains(0.5));
  // a is periodic with period n.
  CHECK(std::abs(static_cast<double>(oracle::ex1.iterate(d->a, d->n) - d->a)) < 1e-8);
  // f^n maps (a, c) into itself.
  const auto img = push_forward(m1, d->I, d->n);
  REQUIRE(img);
  CHECK(d->I.includes(*img, 1e-9));

  CHECK_FALSE(detect_degenerate(ex("logistic4-embed"), 12, 10'000).has_value());
}

TEST_CASE("renormalization cycle and trapping region") {
  const LorenzMap m3 = ex("logistic3.4-embed");
  RenormalizationRecord rec = is_renormalization(m3, kEx3J, 10'000).record;
  const auto cycle = renormalization_cycle(m3, rec);
  REQUIRE(cycle.size() == rec.period_a + rec.period_b);
  CHECK(cycle.size() == 4);
  CHECK_FALSE(rec.cycle_overlap);
  for (const auto& U : cycle) {
    CHECK(U.lo > 1e-9);
    CHECK(U.hi < 1.0 - 1e-9);
  }

  const auto K = trapping_region(m3, rec, 12);
  REQUIRE(K.size() == cycle.size());
  CHECK(K[0].lo == doctest::Approx(kEx3J.lo).epsilon(1e-12));
  CHECK(K[0].hi == doctest::Approx(kEx3J.hi).epsilon(1e-12));
  for (std::size_t i = 0; i < K.size(); ++i) CHECK(K[i].includes(cycle[i], 1e-12));
  CHECK_FALSE(rec.trapping_partial);
  REQUIRE(rec.trapping_invariant);
  CHECK(*rec.trapping_invariant);

  // Direct check of invariance: points of K_J stay in K_J.
  const auto merged = merge_intervals(K);
  for (double x : uniform_samples(3, 200, K[0].lo, K[0].hi)) {
    oracle::real y = x;
    for (int k = 0; k < 50; ++k) {
      y = oracle::ex3.f(y);
      CHECK(in_union(merged, static_cast<double>(y), 1e-9));
    }
  }
}

TEST_CASE("merge_intervals") {
  const auto m = merge_intervals({{0.5, 0.7}, {0.1, 0.2}, {0.15, 0.3}, {0.7, 0.8}});
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Interval{0.1, 0.3});
  CHECK(m[1] == Interval{0.5, 0.8});
}
