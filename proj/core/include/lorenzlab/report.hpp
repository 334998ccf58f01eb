#pragma once

// JSON encoding of the library records, config parsing with field and line
// diagnostics, and the full map report.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lorenzlab/orbits.hpp"
#include "lorenzlab/periodic.hpp"
#include "lorenzlab/renorm.hpp"
#include "lorenzlab/return_maps.hpp"
#include "lorenzlab/spectral.hpp"

namespace lorenzlab {

inline constexpr const char* kReportSchema = "lorenzlab.report/1";

[[nodiscard]] const char* version();

// Bad config: `where` is a JSON pointer ("/left/a") or "line L, column C".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Parses JSON text; syntax errors become ConfigError with line and column.
[[nodiscard]] nlohmann::json parse_json_text(const std::string& text, const std::string& source);

[[nodiscard]] LorenzMapSpec map_spec_from_json(const nlohmann::json& j);
// Builtin name, inline JSON object, or path to a JSON file.
[[nodiscard]] LorenzMapSpec resolve_map(const std::string& arg);

// Unknown keys and non-positive values are rejected.
[[nodiscard]] Budgets budgets_from_json(const nlohmann::json& j, Budgets base = {});
// Inline JSON object or path to a JSON file.
[[nodiscard]] Budgets resolve_budgets(const std::string& arg, Budgets base = {});

void to_json(nlohmann::json& j, const Interval& v);
void to_json(nlohmann::json& j, const BranchSpec& v);
void to_json(nlohmann::json& j, const LorenzMapSpec& v);
void to_json(nlohmann::json& j, const ValidationReport& v);
void to_json(nlohmann::json& j, const PeriodicOrbitRecord& v);
void to_json(nlohmann::json& j, const PeriodicCatalog& v);
void to_json(nlohmann::json& j, const ReturnMapBranch& v);
void to_json(nlohmann::json& j, const ReturnMapRec& v);
void to_json(nlohmann::json& j, const NiceInterval& v);
void to_json(nlohmann::json& j, const GapRecord& v);
void to_json(nlohmann::json& j, const RenormalizationRecord& v);
void to_json(nlohmann::json& j, const DegenerateRecord& v);
void to_json(nlohmann::json& j, const NestedSequence& v);
void to_json(nlohmann::json& j, const Stratum& v);
void to_json(nlohmann::json& j, const AttractorClass& v);
void to_json(nlohmann::json& j, const DecompositionRecord& v);
void to_json(nlohmann::json& j, const Budgets& v);
void to_json(nlohmann::json& j, const EntropyEstimate& v);
void to_json(nlohmann::json& j, const LyapunovEstimate& v);

struct SectionError {
  std::string section;
  std::string code;
  std::string message;
};

struct MapReport {
  LorenzMapSpec spec;
  ValidationReport validation;
  std::optional<DecompositionRecord> decomposition;
  std::vector<double> lyapunov_starts;
  std::vector<LyapunovEstimate> lyapunov_samples;
  std::optional<EntropyEstimate> entropy;
  Budgets budgets;
  std::vector<SectionError> errors;
};

// validate, then periodic catalog, renormalization chain and strata (one
// decomposition pass), Lyapunov samples from four seeded starts, and the
// word-count entropy at n = 20. Later sections are skipped when validation
// fails; budget failures are recorded per section.
[[nodiscard]] MapReport build_report(const LorenzMapSpec& spec, const Budgets& budgets);
[[nodiscard]] nlohmann::json report_json(const MapReport& report);

}  // namespace lorenzlab
