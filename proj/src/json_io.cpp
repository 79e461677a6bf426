#include "cfmm/json_io.hpp"

#include "cfmm/errors.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#ifndef CFMM_VERSION
#define CFMM_VERSION "0.0.0"
#endif

namespace cfmm {

namespace {

const Json& require(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw SpecError(std::string("missing field \"") + key + "\"");
  }
  return object.at(key);
}

std::size_t index_from_json(const Json& value) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
    throw SpecError("expected a nonnegative integer index, got " + value.dump());
  }
  return value.get<std::size_t>();
}

RationalVector rational_state_from_json(const Json& value) {
  if (!value.is_array()) throw SpecError("state must be an array, got " + value.dump());
  RationalVector out;
  for (const auto& v : value) out.push_back(rational_from_json(v));
  return out;
}

State state_from_json(const Json& value) {
  if (!value.is_array()) throw SpecError("state must be an array, got " + value.dump());
  State out;
  for (const auto& v : value) {
    out.push_back(v.is_number() ? v.get<double>() : to_double(rational_from_json(v)));
  }
  return out;
}

std::vector<double> doubles_from_json(const Json& value, const char* what) {
  if (!value.is_array()) throw SpecError(std::string(what) + " must be an array");
  return state_from_json(value);
}

Json oracle_path_to_json(const ArbitrageWitness& w) {
  Json path = Json::array();
  for (const auto& s : w.path) path.push_back(state_to_json(s));
  return path;
}

}  // namespace

const char* tool_version() { return CFMM_VERSION; }

Json rational_to_json(const Rational& value) {
  if (denominator(value) == 1) {
    const auto& n = numerator(value);
    if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max()) {
      return Json(static_cast<long long>(n));
    }
  }
  return Json(format_rational(value));
}

Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Rational(value.get<unsigned long long>());
    return Rational(value.get<long long>());
  }
  if (value.is_number_float()) return parse_rational(value.dump());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw SpecError("expected a rational number, got " + value.dump());
}

Json rational_state_to_json(std::span<const Rational> state) {
  Json out = Json::array();
  for (const auto& v : state) out.push_back(rational_to_json(v));
  return out;
}

Json state_to_json(std::span<const double> state) {
  Json out = Json::array();
  for (double v : state) out.push_back(v);
  return out;
}

Json system_to_json(const FiniteMarketSystem& system) {
  Json states = Json::array();
  for (const auto& s : system.states()) states.push_back(rational_state_to_json(s));
  Json transitions = Json::array();
  for (const auto& [from, to] : system.transitions()) transitions.push_back({from, to});
  Json out;
  out["states"] = std::move(states);
  out["transitions"] = std::move(transitions);
  return out;
}

FiniteMarketSystem system_from_json(const Json& value) {
  const Json& states_json = require(value, "states");
  const Json& transitions_json = require(value, "transitions");
  if (!states_json.is_array() || !transitions_json.is_array()) {
    throw SpecError("\"states\" and \"transitions\" must be arrays");
  }
  std::vector<RationalVector> states;
  for (const auto& s : states_json) states.push_back(rational_state_from_json(s));
  std::vector<Transition> transitions;
  for (const auto& t : transitions_json) {
    if (!t.is_array() || t.size() != 2) throw SpecError("transition must be [from, to]");
    transitions.emplace_back(index_from_json(t[0]), index_from_json(t[1]));
  }
  return FiniteMarketSystem(std::move(states), std::move(transitions));
}

Json dominance_to_json(const DominanceOrder& order) {
  Json out;
  out["kind"] = to_string(order.kind());
  switch (order.kind()) {
    case DominanceKind::SumOfPairs: out["groups"] = order.groups(); break;
    case DominanceKind::ComponentPair:
      out["pair"] = {order.groups()[0][0], order.groups()[1][0]};
      break;
    case DominanceKind::WeightedLP: {
      out["weights"] = order.weights();
      const auto t = order.ticks()->ticks();
      out["ticks"] = std::vector<double>(t.begin(), t.end());
      break;
    }
    default: break;
  }
  return out;
}

DominanceOrder dominance_from_json(const Json& value) {
  const Json& kind_json = value.is_string() ? value : require(value, "kind");
  if (!kind_json.is_string()) throw SpecError("dominance kind must be a string");
  const DominanceKind kind = dominance_kind_from_string(kind_json.get<std::string>());
  switch (kind) {
    case DominanceKind::Pareto: return DominanceOrder::pareto();
    case DominanceKind::ParetoPerShare: return DominanceOrder::pareto_per_share();
    case DominanceKind::SumOfPairs: {
      if (!value.is_object() || !value.contains("groups")) return DominanceOrder::sum_of_pairs();
      std::vector<std::vector<std::size_t>> groups;
      for (const auto& g : value.at("groups")) {
        std::vector<std::size_t> group;
        for (const auto& i : g) group.push_back(index_from_json(i));
        groups.push_back(std::move(group));
      }
      return DominanceOrder::sum_of_pairs(std::move(groups));
    }
    case DominanceKind::ComponentPair: {
      const Json& pair = require(value, "pair");
      if (!pair.is_array() || pair.size() != 2) throw SpecError("\"pair\" must be [i, j]");
      return DominanceOrder::component_pair(index_from_json(pair[0]), index_from_json(pair[1]));
    }
    case DominanceKind::WeightedLP:
      return DominanceOrder::weighted_lp(doubles_from_json(require(value, "weights"), "weights"),
                                         TickGrid(doubles_from_json(require(value, "ticks"), "ticks")));
  }
  throw SpecError("unknown dominance kind");
}

Json catalog_spec_to_json(const CatalogSpec& spec) {
  Json params = Json::object();
  const CatalogParams& p = spec.params;
  if (p.fee) params["fee"] = *p.fee;
  if (p.amplification) params["A"] = *p.amplification;
  if (p.coins) params["n"] = *p.coins;
  if (p.ticks) params["ticks"] = *p.ticks;
  if (p.weights) params["weights"] = *p.weights;
  if (p.xi) params["xi"] = *p.xi;
  if (p.base) params["base"] = *p.base;
  if (p.mode) params["mode"] = *p.mode;
  Json out;
  out["system"] = spec.system;
  out["params"] = std::move(params);
  return out;
}

CatalogSpec catalog_spec_from_json(const Json& value) {
  CatalogSpec spec;
  const Json& name = require(value, "system");
  if (!name.is_string()) throw SpecError("\"system\" must be a catalog name");
  spec.system = name.get<std::string>();
  if (!value.contains("params")) return spec;
  const Json& p = value.at("params");
  if (!p.is_object()) throw SpecError("\"params\" must be an object");
  auto number = [&](const char* key) -> std::optional<double> {
    if (!p.contains(key)) return std::nullopt;
    if (!p.at(key).is_number()) throw SpecError(std::string("param ") + key + " must be a number");
    return p.at(key).get<double>();
  };
  auto text = [&](const char* key) -> std::optional<std::string> {
    if (!p.contains(key)) return std::nullopt;
    if (!p.at(key).is_string()) throw SpecError(std::string("param ") + key + " must be a string");
    return p.at(key).get<std::string>();
  };
  spec.params.fee = number("fee");
  spec.params.amplification = number("A");
  if (p.contains("n")) spec.params.coins = index_from_json(p.at("n"));
  if (p.contains("ticks")) spec.params.ticks = doubles_from_json(p.at("ticks"), "ticks");
  if (p.contains("weights")) spec.params.weights = doubles_from_json(p.at("weights"), "weights");
  spec.params.xi = number("xi");
  spec.params.base = text("base");
  spec.params.mode = text("mode");
  return spec;
}

Json certificate_to_json(const InvariantCertificate& cert) {
  Json values = Json::object();
  for (std::size_t i = 0; i < cert.values.size(); ++i) {
    values[std::to_string(i)] = rational_to_json(cert.values[i]);
  }
  Json out;
  out["provenance"] = to_string(cert.provenance);
  out["values"] = std::move(values);
  return out;
}

InvariantCertificate certificate_from_json(const Json& value) {
  InvariantCertificate cert;
  if (value.contains("provenance")) {
    cert.provenance = provenance_from_string(value.at("provenance").get<std::string>());
  }
  const Json& values = require(value, "values");
  if (values.is_array()) {
    for (const auto& v : values) cert.values.push_back(rational_from_json(v));
  } else if (values.is_object()) {
    cert.values.resize(values.size());
    std::vector<bool> seen(values.size(), false);
    for (const auto& [key, v] : values.items()) {
      std::size_t i = 0;
      try {
        i = std::stoul(key);
      } catch (const std::exception&) {
        throw SpecError("certificate key \"" + key + "\" is not a state index");
      }
      if (i >= values.size() || seen[i]) throw SpecError("certificate indices must be 0..n-1");
      seen[i] = true;
      cert.values[i] = rational_from_json(v);
    }
  } else {
    throw SpecError("\"values\" must be an object or array");
  }
  return cert;
}

Json cycle_to_json(const CycleWitness& cycle, const FiniteMarketSystem& system) {
  Json links = Json::array();
  for (const auto& link : cycle.links) {
    Json l;
    l["index"] = link.state;
    l["state"] = rational_state_to_json(system.state(link.state));
    l["constraint"] = to_string(link.constraint);
    links.push_back(std::move(l));
  }
  Json out;
  out["cycle"] = std::move(links);
  return out;
}

Json witness_to_json(const OracleWitnessFile& file) {
  Json out;
  out["kind"] = "oracle";
  out["system"] = catalog_spec_to_json(file.system);
  out["dominance"] = dominance_to_json(file.dominance);
  out["start"] = state_to_json(file.witness.start());
  out["path"] = oracle_path_to_json(file.witness);
  out["end"] = state_to_json(file.witness.end());
  return out;
}

Json witness_to_json(const FiniteWitnessFile& file) {
  Json out;
  out["kind"] = "finite";
  out["system"] = system_to_json(file.system);
  out["dominance"] = dominance_to_json(file.dominance);
  out["start"] = file.witness.start();
  out["path"] = file.witness.path;
  out["end"] = file.witness.end();
  out["start_state"] = rational_state_to_json(file.system.state(file.witness.start()));
  out["end_state"] = rational_state_to_json(file.system.state(file.witness.end()));
  return out;
}

WitnessFile witness_from_json(const Json& value) {
  const Json& kind = require(value, "kind");
  const Json& path = require(value, "path");
  if (!path.is_array() || path.empty()) throw SpecError("\"path\" must be a nonempty array");
  const DominanceOrder dominance = dominance_from_json(require(value, "dominance"));
  if (kind == "oracle") {
    OracleWitnessFile file{catalog_spec_from_json(require(value, "system")), dominance, {}};
    for (const auto& s : path) file.witness.path.push_back(state_from_json(s));
    if (value.contains("start") && state_from_json(value.at("start")) != file.witness.start()) {
      throw SpecError("\"start\" disagrees with the first path state");
    }
    if (value.contains("end") && state_from_json(value.at("end")) != file.witness.end()) {
      throw SpecError("\"end\" disagrees with the last path state");
    }
    return file;
  }
  if (kind == "finite") {
    FiniteWitnessFile file{system_from_json(require(value, "system")), dominance, {}};
    for (const auto& i : path) file.witness.path.push_back(index_from_json(i));
    if (value.contains("start") && index_from_json(value.at("start")) != file.witness.start()) {
      throw SpecError("\"start\" disagrees with the first path index");
    }
    if (value.contains("end") && index_from_json(value.at("end")) != file.witness.end()) {
      throw SpecError("\"end\" disagrees with the last path index");
    }
    return file;
  }
  throw SpecError("witness \"kind\" must be \"oracle\" or \"finite\"");
}

Json fuzz_report_to_json(const FuzzReport& report, bool include_timing) {
  Json config;
  config["trials"] = report.config.trials;
  config["steps"] = report.config.steps;
  config["seed"] = report.config.seed;
  config["tolerance"] = report.config.tolerance;
  config["guided_rate"] = report.config.guided_rate;
  config["max_recorded"] = report.config.max_recorded;

  Json summary;
  summary["transitions"] = report.transitions;
  summary["guided_transitions"] = report.guided_transitions;
  summary["dead_ends"] = report.dead_ends;
  summary["invalid_transitions"] = report.invalid_transitions;
  summary["violation_count"] = report.violation_count;
  summary["event_count"] = report.event_count;
  summary["trials_with_events"] = report.trials_with_events;

  Json violations = Json::array();
  for (const auto& v : report.violations) {
    Json j;
    j["trial"] = v.trial;
    j["step"] = v.step;
    j["from"] = state_to_json(v.from);
    j["to"] = state_to_json(v.to);
    j["before"] = v.before;
    j["after"] = v.after;
    violations.push_back(std::move(j));
  }
  Json events = Json::array();
  for (const auto& e : report.events) {
    Json j;
    j["trial"] = e.trial;
    j["from_step"] = e.from_step;
    j["to_step"] = e.to_step;
    j["verified"] = e.verified;
    j["start"] = state_to_json(e.witness.start());
    j["path"] = oracle_path_to_json(e.witness);
    j["end"] = state_to_json(e.witness.end());
    events.push_back(std::move(j));
  }

  Json out;
  out["config"] = std::move(config);
  out["start"] = state_to_json(report.start);
  out["summary"] = std::move(summary);
  out["violations"] = std::move(violations);
  out["events"] = std::move(events);
  out["evidence"] = report.event_count > 0 || report.violation_count > 0
                        ? "counterexample"
                        : "no counterexample found; sampling is evidence, not proof";
  if (include_timing && report.wall_clock_seconds) {
    out["wall_clock_seconds"] = *report.wall_clock_seconds;
  }
  return out;
}

Json suite_result_to_json(const SuiteResult& result, bool include_timing) {
  Json checks = Json::array();
  for (const auto& c : result.checks) {
    Json j;
    j["name"] = c.name;
    j["statement"] = c.statement;
    j["applicable"] = c.applicable;
    j["passed"] = c.passed;
    j["failed"] = c.applicable - c.passed;
    j["failing_trials"] = c.failing_trials;
    checks.push_back(std::move(j));
  }
  Json tallies = Json::object();
  for (const auto& t : result.tallies) tallies[t.name] = t.count;
  Json out;
  out["suite"] = result.suite;
  out["trials"] = result.trials;
  out["seed"] = result.seed;
  out["ok"] = result.ok();
  out["checks"] = std::move(checks);
  out["tallies"] = std::move(tallies);
  if (include_timing && result.wall_clock_seconds) {
    out["wall_clock_seconds"] = *result.wall_clock_seconds;
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

void emit_report(const Json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write report to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed to write \"" + path + "\"");
}

}  // namespace cfmm
