#include "lorenzlab/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/random.hpp"

#ifndef LORENZLAB_VERSION
#define LORENZLAB_VERSION "0.0.0"
#endif

namespace lorenzlab {

using nlohmann::json;

namespace {

// JSON has no infinities; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_inline(const std::string& arg) {
  const auto pos = arg.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && arg[pos] == '{';
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "/" + key, "missing required number");
  if (!j.at(key).is_number()) throw ConfigError(where + "/" + key, "expected a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "/" + key, "expected a finite number");
  return v;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError(where + "/" + item.key(), "unknown field");
  }
}

BranchSpec branch_from_json(const json& j, BranchSide side, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(where + "/kind", "expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic_logistic") {
    reject_unknown(j, {"kind", "a"}, where);
    return BranchSpec::logistic(side, get_number(j, "a", where));
  }
  if (kind == "power_form") {
    reject_unknown(j, {"kind", "a", "alpha"}, where);
    return BranchSpec::power(side, get_number(j, "a", where), get_number(j, "alpha", where));
  }
  if (kind == "polynomial") {
    reject_unknown(j, {"kind", "coefficients"}, where);
    const std::string at = where + "/coefficients";
    if (!j.contains("coefficients") || !j.at("coefficients").is_array()) {
      throw ConfigError(at, "expected an array of numbers");
    }
    std::vector<double> co;
    for (std::size_t i = 0; i < j.at("coefficients").size(); ++i) {
      const json& v = j.at("coefficients")[i];
      if (!v.is_number()) throw ConfigError(at + "/" + std::to_string(i), "expected a number");
      co.push_back(v.get<double>());
    }
    if (co.empty()) throw ConfigError(at, "expected at least one coefficient");
    return BranchSpec::polynomial(side, std::move(co));
  }
  throw ConfigError(where + "/kind", "unknown branch kind '" + kind + "'");
}

}  // namespace

const char* version() { return LORENZLAB_VERSION; }

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string where = source.empty() ? "" : source + ": ";
    where += "line " + std::to_string(line) + ", column " + std::to_string(column);
    throw ConfigError(where, "JSON syntax error");
  }
}

LorenzMapSpec map_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "map config must be a JSON object");
  reject_unknown(j, {"name", "c", "left", "right", "tolerance"}, "");
  LorenzMapSpec spec;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("/name", "expected a string");
    spec.name = j.at("name").get<std::string>();
  } else {
    spec.name = "custom";
  }
  if (j.contains("c")) spec.c = get_number(j, "c", "");
  if (j.contains("tolerance")) spec.tolerance = get_number(j, "tolerance", "");
  if (!j.contains("left")) throw ConfigError("/left", "missing required branch");
  if (!j.contains("right")) throw ConfigError("/right", "missing required branch");
  spec.left = branch_from_json(j.at("left"), BranchSide::left, "/left");
  spec.right = branch_from_json(j.at("right"), BranchSide::right, "/right");
  return spec;
}

LorenzMapSpec resolve_map(const std::string& arg) {
  if (auto spec = builtin_map(arg)) return *spec;
  if (looks_inline(arg)) return map_spec_from_json(parse_json_text(arg, "--map"));
  try {
    return map_spec_from_json(parse_json_text(read_file(arg), arg));
  } catch (const ConfigError& e) {
    if (e.where() == arg) throw ConfigError(arg, "not a builtin map name and not a readable file");
    throw;
  }
}

Budgets budgets_from_json(const json& j, Budgets base) {
  if (!j.is_object()) throw ConfigError("", "budgets must be a JSON object");
  reject_unknown(j, {"max_period", "max_depth", "horizon", "grid_resolution", "samples", "seed"}, "");
  auto count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw ConfigError(std::string("/") + key, "expected a positive integer");
    }
    out = v.get<std::size_t>();
  };
  count("max_period", base.max_period);
  count("max_depth", base.max_depth);
  count("horizon", base.horizon);
  count("grid_resolution", base.grid_resolution);
  count("samples", base.samples);
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("/seed", "expected a non-negative integer");
    base.seed = v.get<std::uint64_t>();
  }
  if (base.max_period > 20) throw ConfigError("/max_period", "must be <= 20");
  if (base.grid_resolution < 16) throw ConfigError("/grid_resolution", "must be >= 16");
  return base;
}

Budgets resolve_budgets(const std::string& arg, Budgets base) {
  if (looks_inline(arg)) return budgets_from_json(parse_json_text(arg, "--budgets"), base);
  return budgets_from_json(parse_json_text(read_file(arg), arg), base);
}

void to_json(json& j, const Interval& v) { j = json::array({number(v.lo), number(v.hi)}); }

void to_json(json& j, const BranchSpec& v) {
  j = json{{"kind", to_string(v.kind)}};
  switch (v.kind) {
    case BranchKind::quadratic_logistic: j["a"] = v.a; break;
    case BranchKind::power_form:
      j["a"] = v.a;
      j["alpha"] = v.alpha;
      break;
    case BranchKind::polynomial: j["coefficients"] = v.coefficients; break;
  }
}

void to_json(json& j, const LorenzMapSpec& v) {
  j = json{{"name", v.name}, {"c", v.c}, {"left", v.left}, {"right", v.right}, {"tolerance", v.tolerance}};
}

void to_json(json& j, const ValidationReport& v) {
  j = json{{"is_lorenz", v.is_lorenz},
           {"is_contracting", v.is_contracting},
           {"schwarzian_negative_sampled", v.schwarzian_negative_sampled},
           {"critical_values", {{"v0", number(v.v0)}, {"v1", number(v.v1)}}},
           {"fixed_endpoint_multipliers", json::array({number(v.multiplier_at_0), number(v.multiplier_at_1)})},
           {"grid_size", v.grid_size},
           {"offending_sample", v.offending_sample ? number(*v.offending_sample) : json(nullptr)},
           {"notes", v.notes}};
}

void to_json(json& j, const PeriodicOrbitRecord& v) {
  j = json{{"points", v.points},
           {"period", v.period},
           {"multiplier", number(v.multiplier)},
           {"kind", to_string(v.kind)},
           {"side_word", v.side_word},
           {"residual", number(v.residual)}};
  if (v.attracting_side_probe) j["attracting_side_probe"] = *v.attracting_side_probe;
}

void to_json(json& j, const PeriodicCatalog& v) {
  j = json{{"orbits", v.orbits},
           {"max_period", v.max_period},
           {"searched_up_to", v.searched_up_to},
           {"truncated", v.truncated},
           {"nonrepelling", count_nonrepelling(v)},
           {"notes", v.notes}};
}

void to_json(json& j, const ReturnMapBranch& v) {
  j = json{{"domain", v.domain},
           {"return_time", v.return_time},
           {"image", v.image},
           {"is_full", v.is_full},
           {"touches_c", v.touches_c},
           {"return_time_verified", v.return_time_verified}};
}

void to_json(json& j, const ReturnMapRec& v) {
  j = json{{"J", v.J},
           {"branches", v.branches},
           {"uncovered_measure", number(v.uncovered_measure)},
           {"dropped_branches", v.dropped_branches},
           {"horizon", v.horizon},
           {"resolution", v.resolution},
           {"nice", v.nice},
           {"note", v.note}};
}

void to_json(json& j, const NiceInterval& v) {
  j = json{{"interval", v.interval}, {"horizon", v.horizon}, {"nice", v.nice}, {"undetermined", v.undetermined},
           {"reason", v.reason}};
  j["period_a"] = v.period_a ? json(*v.period_a) : json(nullptr);
  j["period_b"] = v.period_b ? json(*v.period_b) : json(nullptr);
}

void to_json(json& j, const GapRecord& v) {
  j = json{{"gap", v.gap}, {"order", v.order}, {"image_is_J", v.image_is_J}, {"shares_boundary", v.shares_boundary}};
}

void to_json(json& j, const RenormalizationRecord& v) {
  j = json{{"a", number(v.J.lo)},
           {"b", number(v.J.hi)},
           {"l", v.period_a},
           {"r", v.period_b},
           {"regular", v.regular},
           {"left_return", v.left_return},
           {"right_return", v.right_return},
           {"cycle", v.cycle},
           {"cycle_overlap", v.cycle_overlap},
           {"trapping", v.trapping},
           {"trapping_partial", v.trapping_partial},
           {"trapping_invariant", v.trapping_invariant ? json(*v.trapping_invariant) : json(nullptr)},
           {"experimental_p", v.experimental_p}};
}

void to_json(json& j, const DegenerateRecord& v) {
  j = json{{"I", v.I}, {"a", number(v.a)}, {"n", v.n}, {"avoidance_horizon", v.avoidance_horizon},
           {"side", v.left ? "left" : "right"}};
}

void to_json(json& j, const NestedSequence& v) {
  j = json{{"chain", v.intervals},
           {"j_max", v.maximal_nonregular ? json(*v.maximal_nonregular) : json(nullptr)},
           {"degenerate", v.degenerate ? json(*v.degenerate) : json(nullptr)},
           {"depth_cap_hit", v.depth_cap_hit},
           {"diameters_shrinking", v.diameters_shrinking},
           {"max_period", v.max_period},
           {"max_depth", v.max_depth},
           {"horizon", v.horizon},
           {"candidates_tested", v.candidates_tested},
           {"notes", v.notes}};
}

void to_json(json& j, const Stratum& v) {
  j = json{{"n", v.n},
           {"K", v.K},
           {"recurrent_cells", v.recurrent_cells},
           {"transitive_probe", v.transitive_probe ? json(*v.transitive_probe) : json(nullptr)},
           {"transitive_coverage", number(v.transitive_coverage)},
           {"block_decomposition", v.block_decomposition ? json(*v.block_decomposition) : json(nullptr)},
           {"notes", v.notes}};
}

void to_json(json& j, const AttractorClass& v) {
  j = json{{"kind", to_string(v.kind)},
           {"confidence", v.confidence},
           {"orbits", v.orbits},
           {"renorm_depth", v.renorm_depth},
           {"rotation", v.rotation ? number(*v.rotation) : json(nullptr)},
           {"critical_coverage", v.critical_coverage ? number(*v.critical_coverage) : json(nullptr)},
           {"hull", v.hull ? json(*v.hull) : json(nullptr)},
           {"evidence", v.evidence},
           {"failed_probes", v.failed_probes}};
}

void to_json(json& j, const DecompositionRecord& v) {
  j = json{{"n_f", v.n_f ? json(*v.n_f) : json("infinite (depth-capped)")},
           {"omega0", to_string(v.omega0)},
           {"strata", v.strata},
           {"final_class", v.final_class},
           {"budgets", v.budgets},
           {"notes", v.notes}};
}

void to_json(json& j, const Budgets& v) {
  j = json{{"max_period", v.max_period}, {"max_depth", v.max_depth},     {"horizon", v.horizon},
           {"grid_resolution", v.grid_resolution}, {"samples", v.samples}, {"seed", v.seed}};
}

void to_json(json& j, const EntropyEstimate& v) {
  j = json{{"value", number(v.value)},
           {"n", v.n},
           {"samples", v.samples},
           {"distinct_words", v.words},
           {"upper_bound", std::log(2.0)},
           {"solenoid_bound", v.solenoid_bound ? number(*v.solenoid_bound) : json(nullptr)}};
}

void to_json(json& j, const LyapunovEstimate& v) {
  j = json{{"value", number(v.value)},
           {"steps", v.steps},
           {"tail_windows", v.tail_windows},
           {"hit_critical", v.hit_critical}};
}

MapReport build_report(const LorenzMapSpec& spec, const Budgets& budgets) {
  MapReport r;
  r.spec = spec;
  r.budgets = budgets;
  r.validation = validate_map(spec);
  if (!r.validation.is_lorenz) return r;
  const LorenzMap map(spec);
  auto guard = [&](const char* section, auto&& body) {
    try {
      body();
    } catch (const LorenzError& e) {
      r.errors.push_back({section, to_string(e.code()), e.what()});
    }
  };
  guard("decomposition", [&] { r.decomposition = decompose(map, budgets); });
  r.lyapunov_starts = uniform_samples(budgets.seed, 4);
  guard("lyapunov", [&] {
    for (double x0 : r.lyapunov_starts) {
      r.lyapunov_samples.push_back(lyapunov(map, x0, std::max<std::size_t>(budgets.samples, 1000)));
    }
  });
  guard("entropy", [&] {
    r.entropy = entropy_estimate(map, 20, std::max<std::size_t>(budgets.samples, 10'000), budgets.seed,
                                 r.decomposition ? &r.decomposition->chain : nullptr);
  });
  return r;
}

json report_json(const MapReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["map"] = r.spec;
  j["validation"] = r.validation;
  if (r.decomposition) {
    j["periodic_catalog"] = r.decomposition->catalog;
    j["renorm"] = r.decomposition->chain;
    j["decomposition"] = *r.decomposition;
  } else {
    j["periodic_catalog"] = nullptr;
    j["renorm"] = nullptr;
    j["decomposition"] = nullptr;
  }
  json lyap = json::array();
  for (std::size_t i = 0; i < r.lyapunov_samples.size(); ++i) {
    json s = r.lyapunov_samples[i];
    s["x0"] = r.lyapunov_starts[i];
    lyap.push_back(s);
  }
  j["lyapunov_samples"] = lyap;
  j["entropy"] = r.entropy ? json(*r.entropy) : json(nullptr);
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"section", e.section}, {"code", e.code}, {"message", e.message}});
  j["errors"] = errors;
  j["provenance"] = {{"budgets", r.budgets}, {"tool_version", version()}, {"claims", "numerical"}};
  return j;
}

}  // namespace lorenzlab
