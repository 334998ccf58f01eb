#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/orbits.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/spectral.hpp"
#include "oracles.hpp"

using namespace lorenzlab;

namespace {

LorenzMap ex(const char* name) { return LorenzMap(*builtin_map(name)); }

bool has_cell_near(const std::vector<std::size_t>& cells, double x, std::size_t res) {
  const std::size_t k = cell_of(x, res);
  return std::any_of(cells.begin(), cells.end(), [&](std::size_t c) { return c + 1 >= k && c <= k + 1; });
}

// Decompositions are the expensive part; each builtin is decomposed once.
const DecompositionRecord& decomposition(const char* name) {
  static std::map<std::string, DecompositionRecord> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, decompose(ex(name))).first;
  return it->second;
}

}  // namespace

TEST_CASE("omega0 four-case table") {
  CHECK(omega0(ex("paper-example")) == Omega0::one);
  CHECK(omega0(ex("logistic4-embed")) == Omega0::full_interval);
  CHECK(omega0(ex("logistic3.4-embed")) == Omega0::zero_one);
  CHECK(omega0(LorenzMap(quadratic_pair(4.0, 3.4))) == Omega0::zero);
  CHECK(std::string(to_string(Omega0::zero_one)) == "{0,1}");
}

TEST_CASE("decomposition of the (3.4, 4.0) quadratic pair") {
  const DecompositionRecord& rec = decomposition("paper-example");
  REQUIRE(rec.n_f);
  CHECK(*rec.n_f == 1);
  CHECK(rec.omega0 == Omega0::one);
  REQUIRE(rec.strata.size() == 2);
  const oracle::TwoCycle t = oracle::two_cycle(oracle::ex1, 0.45L);
  const std::size_t res = rec.budgets.grid_resolution;
  CHECK(has_cell_near(rec.strata[1].recurrent_cells, static_cast<double>(t.p), res));
  CHECK(has_cell_near(rec.strata[1].recurrent_cells, static_cast<double>(t.q), res));
  CHECK(rec.final_class.kind == AttractorKind::periodic_attractor);
  REQUIRE(rec.final_class.orbits.size() == 1);
  CHECK(rec.final_class.orbits[0].period == 2);
  CHECK(rec.final_class.orbits[0].multiplier == doctest::Approx(static_cast<double>(t.multiplier)).epsilon(1e-9));
}

TEST_CASE("decomposition of the logistic-4 embedding") {
  const DecompositionRecord& rec = decomposition("logistic4-embed");
  REQUIRE(rec.n_f);
  CHECK(*rec.n_f == 0);
  CHECK(rec.strata.size() == 1);
  CHECK(rec.final_class.kind == AttractorKind::interval_cycle);
  REQUIRE(rec.final_class.hull);
  CHECK(rec.final_class.hull->lo == doctest::Approx(0.0));
  CHECK(rec.final_class.hull->hi == doctest::Approx(1.0));
}

TEST_CASE("decomposition of the logistic-3.4 embedding") {
  const DecompositionRecord& rec = decomposition("logistic3.4-embed");
  REQUIRE_FALSE(rec.chain.intervals.empty());
  CHECK(rec.chain.intervals[0].J.lo == doctest::Approx(5.0 / 17.0).epsilon(1e-12));
  CHECK(rec.final_class.kind == AttractorKind::periodic_attractor);
  REQUIRE(rec.final_class.orbits.size() == 1);
  CHECK(rec.final_class.orbits[0].period == 4);
  REQUIRE(rec.strata.size() >= 2);
  const std::size_t res = rec.budgets.grid_resolution;
  CHECK(has_cell_near(rec.strata[1].recurrent_cells, 5.0 / 17.0, res));
  CHECK(has_cell_near(rec.strata[1].recurrent_cells, 12.0 / 17.0, res));
}

TEST_CASE("recurrent cells lie in their stratum") {
  for (const char* name : {"paper-example", "logistic3.4-embed"}) {
    const DecompositionRecord& rec = decomposition(name);
    const double res = static_cast<double>(rec.budgets.grid_resolution);
    for (std::size_t n = 0; n < rec.strata.size(); ++n) {
      for (std::size_t cell : rec.strata[n].recurrent_cells) {
        const double x = (static_cast<double>(cell) + 0.5) / res;
        CHECK(in_union(rec.strata[n].K, x, 1.0 / res));
        if (n + 1 < rec.strata.size()) CHECK_FALSE(in_union(rec.strata[n + 1].K, x, -1.0 / res));
      }
    }
  }
}

TEST_CASE("strong transitivity on the outer stratum of the logistic-3.4 embedding") {
  const DecompositionRecord& rec = decomposition("logistic3.4-embed");
  const auto& cells = rec.strata[1].recurrent_cells;
  REQUIRE_FALSE(cells.empty());
  CHECK(transitivity_coverage(ex("logistic3.4-embed"), rec.budgets.grid_resolution, 10'000, cells) >= 0.9);
}

TEST_CASE("classify_attractor") {
  CHECK(classify_attractor(ex("paper-example")).kind == AttractorKind::periodic_attractor);
  CHECK(classify_attractor(ex("logistic4-embed")).kind == AttractorKind::interval_cycle);
  const AttractorClass c3 = classify_attractor(ex("logistic3.4-embed"));
  CHECK(c3.kind == AttractorKind::periodic_attractor);
  CHECK(c3.orbits.at(0).multiplier == doctest::Approx(0.5776).epsilon(1e-8));
}

TEST_CASE("stratum blocks on the outer stratum") {
  const LorenzMap m3 = ex("logistic3.4-embed");
  const StratumBlocks b = stratum_blocks(m3, decomposition("logistic3.4-embed"), 1);
  CHECK(b.orbit.period == 2);
  CHECK(b.orbit.points[0] == doctest::Approx(5.0 / 17.0).epsilon(1e-12));
  REQUIRE_FALSE(b.blocks.empty());
  CHECK(b.blocks[0].X.contains(0.5));
  CHECK(b.blocks[0].X.lo == doctest::Approx(5.0 / 17.0).epsilon(1e-12));
  CHECK(b.blocks[0].X.hi == doctest::Approx(12.0 / 17.0).epsilon(1e-12));
  for (const auto& blk : b.blocks) CHECK(blk.verified);
  for (std::size_t i = 0; i < b.blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < b.blocks.size(); ++j) {
      CHECK(overlap_length(b.blocks[i].X, b.blocks[j].X) <= 1e-9);
    }
  }
  CHECK_THROWS_AS((void)stratum_blocks(m3, decomposition("logistic3.4-embed"), 5), LorenzError);
}

TEST_CASE("entropy estimates") {
  const double bound = std::log(2.0) + 2.0 / 20.0;
  const EntropyEstimate e1 = entropy_estimate(ex("paper-example"), 20, 100'000);
  const EntropyEstimate e2 = entropy_estimate(ex("logistic4-embed"), 20, 100'000);
  const EntropyEstimate e3 = entropy_estimate(ex("logistic3.4-embed"), 20, 100'000);
  for (const auto* e : {&e1, &e2, &e3}) CHECK(e->value <= bound);
  CHECK(e1.value <= 0.05);
  CHECK(e2.value >= 0.6);

  // Same seeded starts, word counting written out independently.
  const auto starts = uniform_samples(1, 100'000);
  CHECK(e1.value == doctest::Approx(static_cast<double>(oracle::word_entropy(oracle::ex1, starts, 20, 256, 16))));
  CHECK(e3.value == doctest::Approx(static_cast<double>(oracle::word_entropy(oracle::ex3, starts, 20, 256, 16))));
  // Chaotic orbits separate between double and long double; the counts agree closely.
  CHECK(std::abs(e2.value - static_cast<double>(oracle::word_entropy(oracle::ex2, starts, 20, 256, 16))) < 0.01);

  CHECK_THROWS_AS((void)entropy_estimate(ex("paper-example"), 31, 100'000), LorenzError);
  CHECK_THROWS_AS((void)entropy_estimate(ex("paper-example"), 20, 100), LorenzError);
}
