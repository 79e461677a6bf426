#pragma once

// JSON forms of systems, orders, certificates, witnesses and reports.
// Rationals are written as integers when integral and as "p/q" strings
// otherwise; readers also accept decimal strings and JSON numbers.

#include "cfmm/arbitrage.hpp"
#include "cfmm/catalog.hpp"
#include "cfmm/dominance.hpp"
#include "cfmm/finite_system.hpp"
#include "cfmm/invariant.hpp"
#include "cfmm/suites.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>

namespace cfmm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "cfmmcheck.report/1";
const char* tool_version();

Json rational_to_json(const Rational& value);
/// Throws SpecError on values that are not numbers or rational strings.
Rational rational_from_json(const Json& value);

Json system_to_json(const FiniteMarketSystem& system);
/// {"states": [[...], ...], "transitions": [[from, to], ...]}. Throws SpecError.
FiniteMarketSystem system_from_json(const Json& value);

Json dominance_to_json(const DominanceOrder& order);
/// {"kind": "pareto" | "pareto-per-share" | "sum-of-pairs" | "component-pair" |
/// "weighted-lp", ...}. Throws SpecError.
DominanceOrder dominance_from_json(const Json& value);

Json catalog_spec_to_json(const CatalogSpec& spec);
CatalogSpec catalog_spec_from_json(const Json& value);

Json certificate_to_json(const InvariantCertificate& cert);
InvariantCertificate certificate_from_json(const Json& value);

Json cycle_to_json(const CycleWitness& cycle, const FiniteMarketSystem& system);

Json state_to_json(std::span<const double> state);
Json rational_state_to_json(std::span<const Rational> state);

struct OracleWitnessFile {
  CatalogSpec system;
  DominanceOrder dominance;
  ArbitrageWitness witness;
};

struct FiniteWitnessFile {
  FiniteMarketSystem system;
  DominanceOrder dominance;
  FiniteWitness witness;
};

using WitnessFile = std::variant<OracleWitnessFile, FiniteWitnessFile>;

Json witness_to_json(const OracleWitnessFile& file);
Json witness_to_json(const FiniteWitnessFile& file);
/// Throws SpecError when start/end disagree with the path.
WitnessFile witness_from_json(const Json& value);

Json fuzz_report_to_json(const FuzzReport& report, bool include_timing);
Json suite_result_to_json(const SuiteResult& result, bool include_timing);

/// Reads and parses a JSON file. Throws IoError or SpecError.
Json read_json_file(const std::string& path);

/// Writes `report` with two-space indentation and a trailing newline to
/// `path`, or to stdout when `path` is empty. Throws IoError.
void emit_report(const Json& report, const std::string& path);

}  // namespace cfmm
