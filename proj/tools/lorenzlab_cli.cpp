#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/errors.hpp"
#include "lorenzlab/orbits.hpp"
#include "lorenzlab/parallel.hpp"
#include "lorenzlab/random.hpp"
#include "lorenzlab/report.hpp"
#include "lorenzlab/return_maps.hpp"
#include "lorenzlab/spectral.hpp"

using namespace lorenzlab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvalidMap = 3;

struct Options {
  std::string map;
  std::string budgets;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
};

// Raised after the output is written when the map failed validation.
struct InvalidMap {};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw ConfigError("--out", "cannot write '" + opt.out + "'");
  f << text;
}

void emit_json(const Options& opt, const json& j) { emit(opt, j.dump(2) + "\n"); }

std::string format_or(const Options& opt, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = opt.format.empty() ? fallback : opt.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw ConfigError("--format", "format '" + f + "' is not supported by this command");
}

Budgets budgets(const Options& opt) {
  Budgets b = opt.budgets.empty() ? Budgets{} : resolve_budgets(opt.budgets);
  if (opt.seed) b.seed = *opt.seed;
  return b;
}

LorenzMapSpec map_spec(const Options& opt) {
  if (opt.map.empty()) throw ConfigError("--map", "required");
  return resolve_map(opt.map);
}

// Structural spec errors are config errors; a map that fails validation
// raises InvalidMap.
LorenzMap checked_map(const LorenzMapSpec& spec) {
  LorenzMap map(spec);
  const ValidationReport v = validate_map(spec);
  if (!v.is_lorenz || !v.is_contracting) {
    for (const auto& n : v.notes) std::cerr << "validation: " << n << "\n";
    throw InvalidMap{};
  }
  return map;
}

Side parse_side(const std::string& s) {
  if (s == "minus") return Side::minus;
  if (s == "plus") return Side::plus;
  if (s == "none") return Side::none;
  throw ConfigError("--side", "expected minus, plus or none");
}

int cmd_analyze(const Options& opt) {
  format_or(opt, "json", {"json"});
  const LorenzMapSpec spec = map_spec(opt);
  { LorenzMap probe(spec); }
  const MapReport report = build_report(spec, budgets(opt));
  emit_json(opt, report_json(report));
  return report.validation.is_lorenz && report.validation.is_contracting ? kExitOk : kExitInvalidMap;
}

std::string strata_csv(const DecompositionRecord& rec) {
  std::string s = "n,lo,hi,tag\n";
  for (const auto& st : rec.strata) {
    const std::string tag = &st == &rec.strata.back() ? "deepest" : "outer";
    for (const auto& I : st.K) s += std::to_string(st.n) + "," + fmt(I.lo) + "," + fmt(I.hi) + "," + tag + "\n";
  }
  return s;
}

int cmd_decompose(const Options& opt) {
  const std::string f = format_or(opt, "json", {"json", "csv"});
  const Budgets b = budgets(opt);
  const LorenzMap map = checked_map(map_spec(opt));
  const DecompositionRecord rec = decompose(map, b);
  if (f == "csv") {
    emit(opt, strata_csv(rec));
  } else {
    json j = {{"schema", kReportSchema}, {"map", map.spec()}, {"decomposition", rec}};
    emit_json(opt, j);
  }
  return kExitOk;
}

int cmd_classify(const Options& opt) {
  format_or(opt, "json", {"json"});
  const Budgets b = budgets(opt);
  const LorenzMap map = checked_map(map_spec(opt));
  const DecompositionRecord rec = decompose(map, b);
  json j = {{"schema", kReportSchema},
            {"map", map.spec()},
            {"final_class", rec.final_class},
            {"omega0", to_string(rec.omega0)},
            {"n_f", rec.n_f ? json(*rec.n_f) : json(nullptr)},
            {"budgets", b}};
  emit_json(opt, j);
  return kExitOk;
}

std::string returnmap_csv(const ReturnMapRec& rec) {
  std::string s = "branch_lo,branch_hi,return_time,image_lo,image_hi,is_full\n";
  for (const auto& br : rec.branches) {
    s += fmt(br.domain.lo) + "," + fmt(br.domain.hi) + "," + std::to_string(br.return_time) + "," +
         fmt(br.image.lo) + "," + fmt(br.image.hi) + "," + (br.is_full ? "1" : "0") + "\n";
  }
  return s;
}

ReturnMapRec return_map_for(const LorenzMap& map, const std::vector<double>& J, const Budgets& b) {
  if (J.size() != 2 || !(J[0] < map.c() && map.c() < J[1])) {
    throw ConfigError("--J", "expected two numbers lo < c < hi");
  }
  return first_return_map(map, Interval{J[0], J[1]}, b.horizon, b.grid_resolution);
}

int cmd_returnmap(const Options& opt, const std::vector<double>& J) {
  const std::string f = format_or(opt, "csv", {"json", "csv"});
  const Budgets b = budgets(opt);
  const LorenzMap map = checked_map(map_spec(opt));
  const ReturnMapRec rec = return_map_for(map, J, b);
  if (f == "csv") {
    emit(opt, returnmap_csv(rec));
  } else {
    emit_json(opt, rec);
  }
  return kExitOk;
}

int cmd_orbit(const Options& opt, double x0, const std::string& side, std::size_t steps) {
  const std::string f = format_or(opt, "csv", {"json", "csv"});
  const LorenzMap map = checked_map(map_spec(opt));
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw ConfigError("--x0", "expected a number in [0, 1]");
  const OrbitSegment seg = iterate_orbit(map, x0, parse_side(side), steps);
  if (f == "json") {
    json pts = json::array();
    for (std::size_t k = 0; k < seg.points.size(); ++k) {
      pts.push_back({{"k", k}, {"x", seg.points[k].x}, {"side", to_string(seg.points[k].side)},
                     {"log_df", seg.log_derivatives[k]}});
    }
    json j = {{"map", map.spec()}, {"x0", x0}, {"side", side}, {"length", seg.length}, {"points", pts},
              {"hit_critical_at", seg.hit_critical_at ? json(*seg.hit_critical_at) : json(nullptr)}};
    emit_json(opt, j);
    return kExitOk;
  }
  std::string s = "k,x,side,logDf,itin_bit\n";
  for (std::size_t k = 0; k < seg.points.size(); ++k) {
    const DirectedPoint& p = seg.points[k];
    const bool left = map.near_critical(p.x) ? p.side == Side::minus : p.x < map.c();
    s += std::to_string(k) + "," + fmt(p.x) + "," + to_string(p.side) + "," + fmt(seg.log_derivatives[k]) + "," +
         (left ? "0" : "1") + "\n";
  }
  emit(opt, s);
  return kExitOk;
}

std::vector<double> axis(const std::vector<double>& range, std::size_t steps, const char* flag) {
  if (range.size() != 2 || !(range[0] >= 2.5 && range[1] <= 4.0 && range[0] <= range[1])) {
    throw ConfigError(flag, "expected lo hi with 2.5 <= lo <= hi <= 4");
  }
  std::vector<double> v(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = steps == 1 ? range[0] : range[0] + (range[1] - range[0]) * static_cast<double>(i) / (steps - 1);
  }
  return v;
}

struct ScanRow {
  std::string final_class = "";
  std::string n_f = "";
  std::string lyapunov = "";
  std::string status = "ok";
};

int cmd_scan(const Options& opt, const std::string& family, const std::vector<double>& left,
             const std::vector<double>& right, std::size_t steps) {
  format_or(opt, "csv", {"csv"});
  if (family != "quadratic_pair") throw ConfigError("--family", "only quadratic_pair is supported");
  if (steps == 0) throw ConfigError("--steps", "expected a positive integer");
  const Budgets b = budgets(opt);
  const std::vector<double> al = axis(left, steps, "--a-left");
  const std::vector<double> ar = axis(right, steps, "--a-right");
  const double x0 = uniform_samples(b.seed, 1).front();
  std::vector<ScanRow> rows(steps * steps);
  parallel_for(rows.size(), [&](std::size_t idx) {
    ScanRow& row = rows[idx];
    try {
      const LorenzMapSpec spec = quadratic_pair(al[idx / steps], ar[idx % steps]);
      const ValidationReport v = validate_map(spec);
      if (!v.is_lorenz || !v.is_contracting) {
        row.status = "invalid_map";
        return;
      }
      const LorenzMap map(spec);
      const DecompositionRecord rec = decompose(map, b);
      row.final_class = to_string(rec.final_class.kind);
      row.n_f = rec.n_f ? std::to_string(*rec.n_f) : "depth_capped";
      row.lyapunov = fmt(lyapunov(map, x0, std::max<std::size_t>(b.samples, 1000)).value);
    } catch (const LorenzError& e) {
      row.status = to_string(e.code());
    }
  });
  std::string s = "a_left,a_right,final_class,n_f,lyapunov,status\n";
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const ScanRow& r = rows[idx];
    s += fmt(al[idx / steps]) + "," + fmt(ar[idx % steps]) + "," + r.final_class + "," + r.n_f + "," + r.lyapunov +
         "," + r.status + "\n";
  }
  emit(opt, s);
  return kExitOk;
}

int cmd_plotdata(const Options& opt, const std::string& kind, std::optional<double> x0, std::size_t steps,
                 const std::vector<double>& J) {
  format_or(opt, "csv", {"csv"});
  const Budgets b = budgets(opt);
  const LorenzMap map = checked_map(map_spec(opt));
  if (kind == "cobweb") {
    if (!x0) throw ConfigError("--x0", "required for cobweb");
    if (!(*x0 >= 0.0 && *x0 <= 1.0)) throw ConfigError("--x0", "expected a number in [0, 1]");
    const OrbitSegment seg = iterate_orbit(map, *x0, Side::none, steps);
    std::string s = "x_k,x_k1\n";
    for (std::size_t k = 0; k + 1 < seg.points.size(); ++k) s += fmt(seg.points[k].x) + "," + fmt(seg.points[k + 1].x) + "\n";
    emit(opt, s);
  } else if (kind == "returnmap") {
    if (J.empty()) throw ConfigError("--J", "required for returnmap");
    emit(opt, returnmap_csv(return_map_for(map, J, b)));
  } else if (kind == "strata") {
    emit(opt, strata_csv(decompose(map, b)));
  } else {
    throw ConfigError("kind", "expected cobweb, returnmap or strata");
  }
  return kExitOk;
}

int cmd_embed(const Options& opt, std::optional<double> a, const std::vector<double>& coefficients,
              const std::string& name) {
  format_or(opt, "json", {"json"});
  if (a.has_value() == !coefficients.empty()) throw ConfigError("--a", "give exactly one of --a or --coefficients");
  const UnimodalSpec u = a ? UnimodalSpec::logistic(*a) : UnimodalSpec::polynomial(coefficients, name);
  LorenzMapSpec spec = embed_unimodal(u);
  if (!name.empty()) spec.name = name;
  emit_json(opt, spec);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contracting Lorenz maps: renormalization, strata and attractor classification"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Options opt;
  auto common = [&](CLI::App* sub, bool with_map) {
    if (with_map) sub->add_option("--map", opt.map, "builtin name, inline JSON object, or JSON file")->required();
    sub->add_option("--budgets", opt.budgets, "budgets as inline JSON object or JSON file");
    sub->add_option("--out", opt.out, "output file (default stdout)");
    sub->add_option("--seed", opt.seed, "overrides budgets.seed");
    sub->add_option("--format", opt.format, "json or csv");
  };

  auto* analyze = app.add_subcommand("analyze", "full report: validation, periodic catalog, renormalization, strata, "
                                                "Lyapunov, entropy");
  common(analyze, true);
  auto* classify = app.add_subcommand("classify", "attractor class, omega0 and n_f");
  common(classify, true);
  auto* decomp = app.add_subcommand("decompose", "spectral decomposition record (csv: strata rows)");
  common(decomp, true);

  std::vector<double> J;
  auto* rmap = app.add_subcommand("returnmap", "first-return map branches on J");
  common(rmap, true);
  rmap->add_option("--J", J, "interval lo hi around c")->expected(2)->required();

  double x0 = 0.0;
  std::string side = "none";
  std::size_t steps = 100;
  auto* orbit = app.add_subcommand("orbit", "orbit dump");
  common(orbit, true);
  orbit->add_option("--x0", x0, "start point")->required();
  orbit->add_option("--side", side, "minus, plus or none");
  orbit->add_option("--steps", steps, "number of steps");

  std::string family = "quadratic_pair";
  std::vector<double> a_left{2.5, 4.0}, a_right{2.5, 4.0};
  std::size_t scan_steps = 10;
  auto* scan = app.add_subcommand("scan", "parameter sweep over a two-parameter family");
  common(scan, false);
  scan->add_option("--family", family, "family name");
  scan->add_option("--a-left", a_left, "left parameter range lo hi")->expected(2);
  scan->add_option("--a-right", a_right, "right parameter range lo hi")->expected(2);
  scan->add_option("--steps", scan_steps, "grid points per axis");

  std::string kind;
  std::optional<double> plot_x0;
  std::size_t plot_steps = 200;
  std::vector<double> plot_J;
  auto* plot = app.add_subcommand("plotdata", "CSV plot data: cobweb, returnmap or strata");
  common(plot, true);
  plot->add_option("kind", kind, "cobweb, returnmap or strata")->required();
  plot->add_option("--x0", plot_x0, "start point (cobweb)");
  plot->add_option("--steps", plot_steps, "number of steps (cobweb)");
  plot->add_option("--J", plot_J, "interval lo hi (returnmap)")->expected(2);

  std::optional<double> embed_a;
  std::vector<double> coefficients;
  std::string embed_name;
  auto* embed = app.add_subcommand("embed-unimodal", "Lorenz map spec of a symmetric unimodal map");
  common(embed, false);
  embed->add_option("--a", embed_a, "logistic parameter");
  embed->add_option("--coefficients", coefficients, "polynomial coefficients, constant term first");
  embed->add_option("--name", embed_name, "name for the resulting spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*analyze) return cmd_analyze(opt);
    if (*classify) return cmd_classify(opt);
    if (*decomp) return cmd_decompose(opt);
    if (*rmap) return cmd_returnmap(opt, J);
    if (*orbit) return cmd_orbit(opt, x0, side, steps);
    if (*scan) return cmd_scan(opt, family, a_left, a_right, scan_steps);
    if (*plot) return cmd_plotdata(opt, kind, plot_x0, plot_steps, plot_J);
    if (*embed) return cmd_embed(opt, embed_a, coefficients, embed_name);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidMap&) {
    std::cerr << "map failed validation\n";
    return kExitInvalidMap;
  } catch (const LorenzError& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::invalid_spec ? kExitConfig : kExitRuntime;
  }
  return kExitRuntime;
}
