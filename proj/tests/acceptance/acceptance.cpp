// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/orbits.hpp"
#include "lorenzlab/parallel.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/renorm.hpp"
#include "lorenzlab/report.hpp"
#include "lorenzlab/return_maps.hpp"
#include "lorenzlab/spectral.hpp"
#include "oracles.hpp"

using namespace lorenzlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

LorenzMap ex(const char* name) { return LorenzMap(*builtin_map(name)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Worked example.
Outcome worked_example() {
  constexpr double p = 0.48880830755049054, q = 0.849574136468393;
  const double analytic = 3.4 * (1 - 2 * p) * 4 * (2 * q - 1);
  const auto t0 = std::chrono::steady_clock::now();
  const MapReport r = build_report(*builtin_map("paper-example"), Budgets{});
  const double elapsed = seconds_since(t0);
  if (!r.decomposition) return {false, "decomposition missing"};
  const DecompositionRecord& d = *r.decomposition;
  const PeriodicOrbitRecord* two = nullptr;
  for (const auto& o : d.catalog.orbits) {
    if (o.period == 2 && o.kind == OrbitKind::attracting) two = &o;
  }
  if (!two) return {false, "no attracting 2-cycle"};
  const double ep = std::abs(two->points[0] - p), eq = std::abs(two->points[1] - q);
  const double em = std::abs(std::abs(two->multiplier) - analytic);
  const auto& notes = d.chain.notes;
  const bool no_renorm = std::find(notes.begin(), notes.end(), "no proper renormalization interval") != notes.end();
  Outcome o;
  o.pass = ep <= 1e-8 && eq <= 1e-8 && em <= 1e-6 && no_renorm && d.omega0 == Omega0::one &&
           d.chain.degenerate.has_value() && d.final_class.kind == AttractorKind::periodic_attractor && elapsed < 10.0;
  o.detail = fmt("|dp|=%.1e |dq|=%.1e multiplier=%.9f (analytic %.9f) omega0=%s degenerate=%s runtime=%.2fs", ep, eq,
                 std::abs(two->multiplier), analytic, to_string(d.omega0), d.chain.degenerate ? "yes" : "no", elapsed);
  return o;
}

// 2. Omega0 table.
Outcome omega0_table() {
  const Omega0 a = omega0(ex("paper-example")), b = omega0(ex("logistic4-embed")),
               c = omega0(ex("logistic3.4-embed")), d = omega0(LorenzMap(quadratic_pair(4.0, 3.4)));
  return {a == Omega0::one && b == Omega0::full_interval && c == Omega0::zero_one && d == Omega0::zero,
          fmt("EX1=%s EX2=%s EX3=%s (4.0,3.4)=%s", to_string(a), to_string(b), to_string(c), to_string(d))};
}

// 3. Renormalization certification.
Outcome renormalization() {
  const double a = (4.4 - std::sqrt(4.4 * 4.4 - 4 * 3.4)) / (2 * 3.4);
  const double b = 1 - 1 / 3.4;
  const NestedSequence s3 = find_renormalizations(ex("logistic3.4-embed"), 12, 8, 10'000);
  const NestedSequence s1 = find_renormalizations(ex("paper-example"), 12, 8, 10'000);
  const NestedSequence s2 = find_renormalizations(ex("logistic4-embed"), 12, 8, 10'000);
  if (s3.intervals.empty()) return {false, "EX3 chain empty"};
  const RenormalizationRecord& r = s3.intervals.front();
  const double ea = std::abs(r.J.lo - a), eb = std::abs(r.J.hi - b);
  const bool none1 = s1.intervals.empty() && !s1.maximal_nonregular;
  const bool none2 = s2.intervals.empty() && !s2.maximal_nonregular;
  return {r.period_a == 2 && r.period_b == 2 && r.regular && ea <= 1e-9 && eb <= 1e-9 && none1 && none2,
          fmt("EX3 J=(%.10f, %.10f) l=%zu r=%zu regular=%d |da|=%.1e |db|=%.1e; EX1 none=%d EX2 none=%d", r.J.lo,
              r.J.hi, r.period_a, r.period_b, r.regular, ea, eb, none1, none2)};
}

// 4. At most two non-repelling orbits across the sweep.
Outcome singer_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t n = 10;
  std::vector<std::size_t> counts(n * n);
  parallel_for(n * n, [&](std::size_t i) {
    const double al = 3.0 + static_cast<double>(i / n) / (n - 1);
    const double ar = 3.0 + static_cast<double>(i % n) / (n - 1);
    counts[i] = count_nonrepelling(LorenzMap(quadratic_pair(al, ar)), 12);
  });
  const std::size_t worst = *std::max_element(counts.begin(), counts.end());
  const double elapsed = seconds_since(t0);
  return {worst <= 2 && elapsed < 300.0, fmt("100 cells, max count_nonrepelling=%zu, runtime=%.1fs", worst, elapsed)};
}

// 5. Full-branch law on random nice intervals.
struct NiceCandidate {
  int map = 0;
  Interval J;
};

std::vector<Interval> nice_intervals(const LorenzMap& m, std::size_t max_period, std::size_t want, Rng& rng) {
  const PeriodicCatalog cat = find_periodic_points(m, max_period);
  const double c = m.c();
  std::vector<double> left, right;
  // Periodic points and their preimages up to depth two land on periodic orbits.
  std::vector<double> pts;
  for (const auto& o : cat.orbits) pts.insert(pts.end(), o.points.begin(), o.points.end());
  for (int depth = 0, from = 0; depth < 2; ++depth) {
    const int to = static_cast<int>(pts.size());
    for (int i = from; i < to; ++i) {
      for (const auto& pre : preimages(m, pts[i])) {
        if (pre.side == Side::none) pts.push_back(pre.x);
      }
    }
    from = to;
  }
  for (double y : pts) {
    if (y > 1e-6 && y < c - 1e-6) left.push_back(y);
    if (y > c + 1e-6 && y < 1 - 1e-6) right.push_back(y);
  }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());
  std::vector<Interval> out;
  if (left.empty() || right.empty()) return out;
  for (std::size_t attempt = 0; attempt < 20'000 && out.size() < want; ++attempt) {
    const Interval J{left[rng.bits() % left.size()], right[rng.bits() % right.size()]};
    if (std::find(out.begin(), out.end(), J) != out.end()) continue;
    if (is_nice(m, J, 10'000).nice) out.push_back(J);
  }
  return out;
}

Outcome full_branch_law() {
  const char* names[] = {"paper-example", "logistic4-embed", "logistic3.4-embed"};
  const oracle::QuadPair* oracles[] = {&oracle::ex1, &oracle::ex2, &oracle::ex3};
  Rng rng(5);
  std::vector<NiceCandidate> picked;
  for (int k = 0; k < 3; ++k) {
    for (const Interval& J : nice_intervals(ex(names[k]), 8, k == 2 ? 6 : 7, rng)) picked.push_back({k, J});
  }
  std::size_t checked = 0, violations = 0, oracle_failures = 0, dropped = 0, total = 0;
  for (const auto& cand : picked) {
    const LorenzMap m = ex(names[cand.map]);
    const oracle::QuadPair& f = *oracles[cand.map];
    const Interval J = cand.J;
    const ReturnMapRec rec = first_return_map(m, J, 10'000, 1 << 12);
    dropped += rec.dropped_branches;
    for (const auto& br : rec.branches) {
      ++total;
      if (br.touches_c) continue;
      ++checked;
      if (!br.is_full || std::abs(br.image.lo - J.lo) > 1e-6 || std::abs(br.image.hi - J.hi) > 1e-6) ++violations;
      // Independent per-point oracle: return time, landing in J, endpoint images.
      bool ok = std::abs(static_cast<double>(f.iterate(br.domain.lo, br.return_time)) - J.lo) <= 1e-6 &&
                std::abs(static_cast<double>(f.iterate(br.domain.hi, br.return_time)) - J.hi) <= 1e-6;
      for (int i = 0; i < 1000 && ok; ++i) {
        const oracle::real x = br.domain.lo + (i + 0.5L) / 1000 * (br.domain.hi - br.domain.lo);
        ok = oracle::return_time(f, x, J.lo, J.hi, 10'000) == br.return_time;
      }
      if (!ok) ++oracle_failures;
    }
  }
  return {picked.size() == 20 && checked > 0 && violations == 0 && oracle_failures == 0,
          fmt("%zu nice intervals, %zu branches, %zu away from c, %zu law violations, %zu oracle mismatches, "
              "%zu sub-resolution branches dropped",
              picked.size(), total, checked, violations, oracle_failures, dropped)};
}

// 6. Phobic-measure decay.
Outcome phobic_decay() {
  const auto prof = phobic_profile(ex("logistic4-embed"), {0.4, 0.6}, {5, 10, 20, 50}, 100'000);
  bool monotone = true;
  for (std::size_t i = 1; i < prof.size(); ++i) monotone = monotone && prof[i].surviving_measure <= prof[i - 1].surviving_measure;
  return {monotone && prof.back().surviving_measure < 0.02,
          fmt("surviving fraction n=5:%.4f n=10:%.4f n=20:%.4f n=50:%.5f", prof[0].surviving_measure,
              prof[1].surviving_measure, prof[2].surviving_measure, prof[3].surviving_measure)};
}

// 7. Embedding invariants, evaluated at 50 significant digits.
Outcome embedding_invariants() {
  using mp = boost::multiprecision::cpp_bin_float_50;
  double worst_derivative = 0.0, worst_position = 0.0;
  std::size_t trials = 0;
  for (double a : {4.0, 3.4}) {
    const UnimodalSpec u = UnimodalSpec::logistic(a);
    const LorenzMap L(embed_unimodal(u));
    Rng rng(a == 4.0 ? 41 : 34);
    for (int t = 0; t < 1000; ++t, ++trials) {
      const double x0 = rng.uniform();
      const std::size_t n = 1 + rng.bits() % 50;
      mp x(x0), y(x0), dl(1), du(1);
      for (std::size_t k = 0; k < n; ++k) {
        dl *= L.derivative_generic(x);
        du *= u.derivative(y);
        x = L.apply_generic(x);
        y = u.value(y);
      }
      const double rel = du == 0 ? 0.0 : static_cast<double>(abs(abs(dl) - abs(du)) / abs(du));
      const mp d0 = abs(x - y), d1 = abs(x - (1 - y));
      worst_derivative = std::max(worst_derivative, rel);
      worst_position = std::max(worst_position, static_cast<double>(d0 < d1 ? d0 : d1));
    }
  }
  return {worst_derivative < 1e-6 && worst_position < 1e-9,
          fmt("%zu trials, worst derivative-product rel. error %.1e, worst position error %.1e", trials,
              worst_derivative, worst_position)};
}

// 8. Entropy bounds.
Outcome entropy_bounds() {
  const double bound = std::log(2.0) + 2.0 / 20;
  double e[4];
  const LorenzMap maps[] = {ex("paper-example"), ex("logistic4-embed"), ex("logistic3.4-embed"),
                            LorenzMap(quadratic_pair(4.0, 3.4))};
  bool below = true;
  for (int i = 0; i < 4; ++i) {
    e[i] = entropy_estimate(maps[i], 20, 100'000).value;
    below = below && e[i] <= bound;
  }
  return {below && e[1] >= 0.6 && e[0] <= 0.05,
          fmt("EX1=%.4f EX2=%.4f EX3=%.4f (4.0,3.4)=%.4f bound=%.4f", e[0], e[1], e[2], e[3], bound)};
}

// 9. Lyapunov exponents.
Outcome lyapunov_checks() {
  constexpr double p = 0.48880830755049054, q = 0.849574136468393;
  const double target1 = 0.5 * std::log(3.4 * (1 - 2 * p) * 4 * (2 * q - 1));
  const double x2 = uniform_samples(9, 1).front();
  const double l2 = lyapunov(ex("logistic4-embed"), x2, 1'000'000).value;
  const double l1 = lyapunov(ex("paper-example"), 0.3, 100'000).value;
  return {std::abs(l2 - std::log(2.0)) < 0.05 && std::abs(l1 - target1) < 0.01,
          fmt("EX2 %.5f (log 2 = %.5f); EX1 %.5f (target %.5f)", l2, std::log(2.0), l1, target1)};
}

// 10. Mane expansion away from c.
Outcome mane() {
  const ManeFit f = mane_expansion_check(ex("logistic4-embed"), {0.4, 0.6}, 1'000'000, 40, 1);
  return {f.lambda > 1.0 && f.survivors >= 50,
          fmt("lambda=%.4f survivors=%zu of %zu samples", f.lambda, f.survivors, f.samples)};
}

// 11. Strong transitivity on the outer stratum of EX3.
Outcome transitivity() {
  const LorenzMap m3 = ex("logistic3.4-embed");
  const DecompositionRecord rec = decompose(m3);
  if (rec.strata.size() < 2) return {false, "fewer than two strata"};
  const auto& cells = rec.strata[1].recurrent_cells;
  const double cov = transitivity_coverage(m3, rec.budgets.grid_resolution, 10'000, cells);
  return {!cells.empty() && cov >= 0.9,
          fmt("%zu recurrent cells, worst single-cell coverage %.3f", cells.size(), cov)};
}

// 12. Determinism of the full report.
Outcome determinism() {
  const std::string a = report_json(build_report(*builtin_map("paper-example"), Budgets{})).dump();
  const std::string b = report_json(build_report(*builtin_map("paper-example"), Budgets{})).dump();
  const std::string c = report_json(build_report(*builtin_map("logistic4-embed"), Budgets{})).dump();
  const std::string d = report_json(build_report(*builtin_map("logistic4-embed"), Budgets{})).dump();
  return {a == b && c == d, fmt("paper-example %zu bytes identical=%d; logistic4-embed %zu bytes identical=%d",
                                a.size(), a == b, c.size(), c == d)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked example", worked_example},
      {"omega0 table", omega0_table},
      {"renormalization certification", renormalization},
      {"Singer sweep", singer_sweep},
      {"full-branch law", full_branch_law},
      {"phobic-measure decay", phobic_decay},
      {"embedding invariants", embedding_invariants},
      {"entropy bounds", entropy_bounds},
      {"Lyapunov checks", lyapunov_checks},
      {"Mane expansion", mane},
      {"strong transitivity", transitivity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
