#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/report.hpp"

using namespace lorenzlab;
using nlohmann::json;

namespace {

std::string where_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("builtin names resolve") {
  CHECK(resolve_map("paper-example").left.a == 3.4);
  CHECK(resolve_map("paper-example").right.a == 4.0);
  CHECK(resolve_map("logistic4-embed").right.a == 4.0);
  CHECK(resolve_map("logistic3.4-embed").left.a == 3.4);
}

TEST_CASE("map config round trip") {
  const LorenzMapSpec ex1 = *builtin_map("paper-example");
  const json j = ex1;
  const LorenzMapSpec back = map_spec_from_json(j);
  CHECK(back.name == ex1.name);
  CHECK(back.c == ex1.c);
  CHECK(back.left.a == ex1.left.a);
  CHECK(back.right.kind == ex1.right.kind);
  CHECK(back.tolerance == ex1.tolerance);

  const LorenzMapSpec inl = resolve_map(
      R"({"c": 0.4, "left": {"kind": "power_form", "a": 0.9, "alpha": 2.5},
          "right": {"kind": "polynomial", "coefficients": [0.64, -3.2, 4.0]}})");
  CHECK(inl.name == "custom");
  CHECK(inl.left.alpha == 2.5);
  CHECK(inl.right.coefficients.size() == 3);
}

TEST_CASE("map config files") {
  const std::string path = "lorenzlab_test_map.json";
  {
    std::ofstream f(path);
    f << R"({"name": "file", "left": {"kind": "quadratic_logistic", "a": 3.4},)" << "\n"
      << R"( "right": {"kind": "quadratic_logistic", "a": 4}})";
  }
  CHECK(resolve_map(path).name == "file");
  {
    std::ofstream f(path);
    f << "{\n  \"name\": \"file\",\n  \"left\": {\"kind\": \"quadratic_logistic\" \"a\": 3.4}\n}";
  }
  // The column is the last character of the offending token.
  CHECK(where_of([&] { (void)resolve_map(path); }) == path + ": line 3, column 43");
  std::remove(path.c_str());
  CHECK(where_of([] { (void)resolve_map("no-such-map"); }) == "no-such-map");
}

TEST_CASE("map config diagnostics point at the field") {
  auto where = [](const char* text) { return where_of([&] { (void)map_spec_from_json(json::parse(text)); }); };
  CHECK(where(R"({"left": {"kind": "quadratic_logistic", "a": 3}, "right": {"kind": "quadratic_logistic", "b": 4}})") ==
        "/right/b");
  CHECK(where(R"({"left": {"kind": "quadratic_logistic", "a": "x"}, "right": {"kind": "quadratic_logistic", "a": 4}})") ==
        "/left/a");
  CHECK(where(R"({"left": {"kind": "cubic"}, "right": {"kind": "quadratic_logistic", "a": 4}})") == "/left/kind");
  CHECK(where(R"({"left": {"kind": "quadratic_logistic", "a": 3}})") == "/right");
  CHECK(where(R"({"colour": 1})") == "/colour");
  CHECK(where(R"({"left": {"kind": "polynomial", "coefficients": [0, "1"]}, "right": {"kind": "quadratic_logistic", "a": 4}})") ==
        "/left/coefficients/1");
}

TEST_CASE("budgets") {
  const Budgets d = budgets_from_json(json::object());
  CHECK(d.max_period == 12);
  CHECK(d.max_depth == 8);
  CHECK(d.horizon == 10'000);
  CHECK(d.grid_resolution == 16'384);
  CHECK(d.samples == 100'000);
  const Budgets b = resolve_budgets(R"({"max_period": 6, "seed": 0})");
  CHECK(b.max_period == 6);
  CHECK(b.seed == 0);
  auto where = [](const char* text) { return where_of([&] { (void)resolve_budgets(text); }); };
  CHECK(where(R"({"horizon": 0})") == "/horizon");
  CHECK(where(R"({"samples": -5})") == "/samples");
  CHECK(where(R"({"samples": 1.5})") == "/samples");
  CHECK(where(R"({"max_period": 25})") == "/max_period");
  CHECK(where(R"({"speed": 1})") == "/speed");
  CHECK(where(R"({"seed": -1})") == "/seed");
}

TEST_CASE("report content and determinism") {
  Budgets b;
  b.samples = 20'000;
  const MapReport r = build_report(*builtin_map("paper-example"), b);
  CHECK(r.errors.empty());
  const json j = report_json(r);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["decomposition"]["final_class"]["kind"] == "periodic_attractor");
  CHECK(j["decomposition"]["omega0"] == "{1}");
  CHECK(j["renorm"]["chain"].empty());
  CHECK_FALSE(j["renorm"]["degenerate"].is_null());
  CHECK(j["lyapunov_samples"].size() == 4);
  CHECK(j["provenance"]["tool_version"] == version());
  CHECK(j["provenance"]["budgets"]["samples"] == 20'000);
  CHECK(report_json(build_report(*builtin_map("paper-example"), b)).dump() == j.dump());
}

TEST_CASE("report on a map that fails validation") {
  const MapReport r = build_report(quadratic_pair(4.5, 4.0), Budgets{});
  CHECK_FALSE(r.validation.is_lorenz);
  CHECK_FALSE(r.decomposition.has_value());
  const json j = report_json(r);
  CHECK(j["decomposition"].is_null());
  CHECK(j["entropy"].is_null());
}
