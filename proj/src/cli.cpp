#include "cfmm/cli.hpp"

#include "cfmm/arbitrage.hpp"
#include "cfmm/catalog.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/invariant.hpp"
#include "cfmm/json_io.hpp"
#include "cfmm/stableswap.hpp"
#include "cfmm/suites.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace cfmm {

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::size_t steps = 20;
  double tolerance = kDefaultTolerance;
  std::string grid;
  std::string output;
  bool timing = false;
  std::size_t threads = 0;

  std::string system;
  std::string spec_file;
  double fee = 0.0;
  double amplification = 0.0;
  std::size_t coins = 0;
  std::string ticks;
  std::string weights;
  double xi = 0.0;
  std::string base;
  std::string mode;
  std::string dominance;
  std::string start;

  std::string input;
  std::size_t budget = 0;
  std::string balances;
  std::vector<std::string> suites;

  // Set after parsing for the optional numeric flags.
  bool has_fee = false, has_amplification = false, has_coins = false, has_xi = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw SpecError(std::string("bad number \"") + item + "\" in " + what);
    }
    out.push_back(v);
  }
  if (out.empty()) throw SpecError(std::string(what) + " is empty");
  return out;
}

Grid parse_grid(const std::string& text) {
  Grid grid;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ';')) grid.axes.push_back(parse_list(axis, "--grid"));
  return grid;
}

Json options_json(const Options& o) {
  Json j;
  j["seed"] = o.seed;
  j["trials"] = o.trials;
  j["steps"] = o.steps;
  j["tolerance"] = o.tolerance;
  j["grid"] = o.grid;
  j["output"] = o.output;
  return j;
}

Json report_header(const std::string& command, const Options& o) {
  Json report;
  report["schema"] = kReportSchema;
  report["tool_version"] = tool_version();
  report["command"] = command;
  report["options"] = options_json(o);
  return report;
}

CatalogSpec spec_from_options(const Options& o) {
  if (!o.spec_file.empty()) return catalog_spec_from_json(read_json_file(o.spec_file));
  if (o.system.empty()) throw SpecError("--system or --spec is required");
  CatalogSpec spec{o.system, {}};
  if (o.has_fee) spec.params.fee = o.fee;
  if (o.has_amplification) spec.params.amplification = o.amplification;
  if (o.has_coins) spec.params.coins = o.coins;
  if (!o.ticks.empty()) spec.params.ticks = parse_list(o.ticks, "--ticks");
  if (!o.weights.empty()) spec.params.weights = parse_list(o.weights, "--weights");
  if (o.has_xi) spec.params.xi = o.xi;
  if (!o.base.empty()) spec.params.base = o.base;
  if (!o.mode.empty()) spec.params.mode = o.mode;
  return spec;
}

/// Named order; the oracle's own order is used when it has the same kind so
/// that its groups, weights and ticks carry over.
DominanceOrder dominance_for(const std::string& kind, const DominanceOrder& fallback) {
  if (kind.empty()) return fallback;
  if (dominance_kind_from_string(kind) == fallback.kind()) return fallback;
  return dominance_from_json(Json(kind));
}

// --------------------------------------------------------------------------

int cmd_catalog(const Options& o) {
  Json systems = Json::array();
  for (const auto& entry : catalog_entries()) {
    const OraclePtr oracle = make_system({entry.name, {}});
    Json j;
    j["name"] = entry.name;
    j["description"] = entry.description;
    j["dimension"] = oracle->dimension();
    j["default_dominance"] = dominance_to_json(oracle->default_dominance());
    j["candidate_invariant"] =
        oracle->candidate_invariant() ? Json(oracle->candidate_invariant()->formula) : Json();
    j["default_start"] = state_to_json(oracle->default_start());
    j["guided_templates"] = oracle->guided_templates().size();
    if (!oracle->note().empty()) j["note"] = oracle->note();
    systems.push_back(std::move(j));
  }
  Json report = report_header("catalog", o);
  report["results"]["systems"] = std::move(systems);
  emit_report(report, o.output);
  return kExitClean;
}

Json analyze_system(const FiniteMarketSystem& system, const DominanceOrder& dominance,
                    bool& found_arbitrage) {
  const ReachabilityClosure closure = reachable_closure(system);
  const Condensation condensation = condense(closure);
  Json results;

  Json reach = Json::array();
  for (StateIndex i = 0; i < system.size(); ++i) {
    Json row = Json::array();
    for (StateIndex j = 0; j < system.size(); ++j) {
      if (closure(i, j)) row.push_back(j);
    }
    reach.push_back(std::move(row));
  }
  results["reachable"] = std::move(reach);

  Json edges = Json::array();
  for (ClassId a = 0; a < condensation.class_count(); ++a) {
    for (ClassId b : condensation.successors(a)) edges.push_back({a, b});
  }
  results["condensation"] = {{"classes", condensation.members}, {"order", std::move(edges)}};
  results["complete"] = is_complete(closure);
  results["remm"] = is_remm(closure);
  results["giftable"] = is_giftable(system, closure, dominance);

  const InvariantCertificate cert = find_invariant(condensation);
  const VerificationReport check = verify_invariant(system, closure, cert.values);
  Json invariant = certificate_to_json(cert);
  invariant["verified"] = check.valid;
  results["invariant"] = std::move(invariant);

  const IncreasingResult increasing = find_increasing_invariant(system, condensation, dominance);
  Json inc;
  if (const auto* c = std::get_if<InvariantCertificate>(&increasing)) {
    const VerificationReport r = verify_invariant(system, closure, c->values, &dominance);
    inc["exists"] = true;
    inc["certificate"] = certificate_to_json(*c);
    inc["verified"] = r.valid && r.increasing.value_or(false);
  } else {
    const auto& cycle = std::get<CycleWitness>(increasing);
    inc["exists"] = false;
    inc["cycle"] = cycle_to_json(cycle, system)["cycle"];
    inc["cycle_length"] = cycle.links.size();
    inc["verified"] = validate_cycle(cycle, system, closure, dominance);
  }
  results["increasing_invariant"] = std::move(inc);

  Json unique;
  unique["unique"] = is_unique_invariant(condensation);
  for (StateIndex u = 0; u < system.size() && !unique.contains("second_invariant"); ++u) {
    for (StateIndex v = u + 1; v < system.size(); ++v) {
      if (closure(u, v) || closure(v, u)) continue;
      const InvariantCertificate second = split_invariant(closure, cert, u, v);
      Json s = certificate_to_json(second);
      s["pair"] = {u, v};
      s["verified"] = verify_invariant(system, closure, second.values).valid;
      s["order_equivalent"] = order_equivalent(cert.values, second.values);
      unique["second_invariant"] = std::move(s);
      break;
    }
  }
  results["uniqueness"] = std::move(unique);

  const MultiInvariant multi = multi_invariant(closure);
  results["multi_invariant"] = {
      {"size", multi.size()},
      {"recovers", recovers(multi, closure)},
      {"increasing", is_increasing_multi_invariant(multi, system, dominance)}};

  const SequalResult sequal = sequal_invariant(condensation);
  if (const auto* c = std::get_if<InvariantCertificate>(&sequal)) {
    results["equal_invariant"] = certificate_to_json(*c);
    results["remm_arbitrage_free"] = remm_class_comparability(system, condensation, dominance);
  } else {
    const auto& edge = std::get<NotRemm>(sequal);
    results["equal_invariant"] = {{"not_remm", {edge.from, edge.to}}};
  }

  const auto witness = find_arbitrage_finite(system, dominance);
  found_arbitrage = witness.has_value();
  if (witness) {
    FiniteWitnessFile file{system, dominance, *witness};
    Json w = witness_to_json(file);
    w["verified"] = verify_witness(system, *witness, dominance);
    results["arbitrage"] = std::move(w);
  } else {
    results["arbitrage"] = nullptr;
  }
  return results;
}

int cmd_analyze(const Options& o) {
  Json report = report_header("analyze", o);
  std::optional<FiniteMarketSystem> system;
  DominanceOrder dominance = DominanceOrder::pareto();
  if (!o.input.empty()) {
    const Json input = read_json_file(o.input);
    system = system_from_json(input);
    if (input.contains("dominance")) dominance = dominance_from_json(input.at("dominance"));
    dominance = dominance_for(o.dominance, dominance);
    report["input"] = {{"file", o.input}, {"system", system_to_json(*system)}};
  } else {
    const CatalogSpec spec = spec_from_options(o);
    if (o.grid.empty()) throw SpecError("analyze needs a system file or --system with --grid");
    const OraclePtr oracle = make_system(spec);
    system = discretize(*oracle, parse_grid(o.grid), o.budget, o.seed, o.tolerance);
    dominance = dominance_for(o.dominance, oracle->default_dominance());
    report["input"] = {{"catalog", catalog_spec_to_json(spec)},
                       {"budget", o.budget},
                       {"system", system_to_json(*system)}};
  }
  report["input"]["dominance"] = dominance_to_json(dominance);
  bool found = false;
  report["results"] = analyze_system(*system, dominance, found);
  if (found) report["witness"] = report["results"]["arbitrage"];
  emit_report(report, o.output);
  return found ? kExitFinding : kExitClean;
}

int cmd_fuzz(const Options& o) {
  const CatalogSpec spec = spec_from_options(o);
  const OraclePtr oracle = make_system(spec);
  const DominanceOrder dominance = dominance_for(o.dominance, oracle->default_dominance());
  FuzzConfig config;
  config.trials = o.trials;
  config.steps = o.steps;
  config.seed = o.seed;
  config.tolerance = o.tolerance;
  config.threads = o.threads;
  if (!o.start.empty()) config.start = parse_list(o.start, "--start");
  const FuzzReport fuzz =
      fuzz_trajectories(*oracle, dominance, oracle->candidate_invariant(), config);

  Json report = report_header("fuzz", o);
  report["input"] = {
      {"system", catalog_spec_to_json(spec)},
      {"dominance", dominance_to_json(dominance)},
      {"candidate_invariant", oracle->candidate_invariant()
                                  ? Json(oracle->candidate_invariant()->formula)
                                  : Json()}};
  report["results"] = fuzz_report_to_json(fuzz, o.timing);
  for (const auto& e : fuzz.events) {
    if (!e.verified) continue;
    report["witness"] = witness_to_json(OracleWitnessFile{spec, dominance, e.witness});
    break;
  }
  emit_report(report, o.output);
  return fuzz.event_count > 0 || fuzz.violation_count > 0 ? kExitFinding : kExitClean;
}

int cmd_solve_stableswap(const Options& o) {
  if (o.balances.empty()) throw SpecError("--balances is required");
  const std::vector<double> balances = parse_list(o.balances, "--balances");
  StableSwapParams params{o.has_amplification ? o.amplification : 10.0, balances.size()};
  if (o.has_coins && o.coins != balances.size()) {
    throw SpecError("--n disagrees with the number of balances");
  }
  const StableSwapRoot root = stableswap_solve(balances, params);
  Json report = report_header("solve-stableswap", o);
  report["input"] = {{"balances", balances}, {"A", params.amplification}, {"n", params.coins}};
  report["results"] = {{"D", root.value},
                       {"residual", root.residual},
                       {"scale", root.scale},
                       {"residual_within_tolerance",
                        std::fabs(root.residual) <= 1e-10 * root.scale},
                       {"bracket", {root.bracket_lo, root.bracket_hi}},
                       {"iterations", root.iterations},
                       {"used_bisection", root.used_bisection}};
  emit_report(report, o.output);
  return kExitClean;
}

int cmd_verify_witness(const Options& o) {
  Json input = read_json_file(o.input);
  if (input.contains("witness") && input.at("witness").is_object()) input = input.at("witness");
  const WitnessFile file = witness_from_json(input);
  bool verified = false;
  std::size_t steps = 0;
  if (const auto* w = std::get_if<OracleWitnessFile>(&file)) {
    const OraclePtr oracle = make_system(w->system);
    verified = verify_witness(*oracle, w->witness, w->dominance, o.tolerance);
    steps = w->witness.path.size() - 1;
  } else {
    const auto& f = std::get<FiniteWitnessFile>(file);
    verified = verify_witness(f.system, f.witness, f.dominance);
    steps = f.witness.path.size() - 1;
  }
  Json report = report_header("verify-witness", o);
  report["input"] = {{"file", o.input}, {"witness", input}};
  report["results"] = {{"verified", verified}, {"steps", steps}};
  emit_report(report, o.output);
  return verified ? kExitFinding : kExitClean;
}

int cmd_theorems(const Options& o) {
  SuiteConfig config{o.trials, o.seed, o.threads};
  const std::vector<std::string> names = o.suites.empty() ? suite_names() : o.suites;
  Json suites = Json::array();
  Json table = Json::array();
  bool ok = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, config);
    ok = ok && r.ok();
    for (const auto& c : r.checks) {
      table.push_back({{"suite", r.suite},
                       {"check", c.name},
                       {"passed", c.passed},
                       {"applicable", c.applicable},
                       {"status", c.ok() ? "pass" : "fail"}});
      std::cerr << (c.ok() ? "PASS " : "FAIL ") << r.suite << "/" << c.name << " " << c.passed
                << "/" << c.applicable << "\n";
    }
    suites.push_back(suite_result_to_json(r, o.timing));
  }
  Json report = report_header("theorems", o);
  report["input"] = {{"suites", names}};
  report["results"] = {{"ok", ok}, {"table", std::move(table)}, {"suites", std::move(suites)}};
  emit_report(report, o.output);
  return ok ? kExitClean : kExitFinding;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  cmd->add_option("--tolerance", o.tolerance, "Relative membership tolerance")
      ->capture_default_str();
  cmd->add_option("--output", o.output, "Write the report here instead of stdout");
  cmd->add_flag("--timing", o.timing, "Include wall-clock time in the report");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
}

void add_system(CLI::App* cmd, Options& o, std::vector<std::pair<CLI::Option*, bool*>>& flags) {
  cmd->add_option("--system", o.system, "Catalog system name");
  cmd->add_option("--spec", o.spec_file, "Catalog spec JSON file");
  flags.emplace_back(cmd->add_option("--fee", o.fee, "Fee rate"), &o.has_fee);
  flags.emplace_back(cmd->add_option("--A", o.amplification, "StableSwap amplification"),
                     &o.has_amplification);
  flags.emplace_back(cmd->add_option("--n", o.coins, "StableSwap coin count"), &o.has_coins);
  cmd->add_option("--ticks", o.ticks, "Comma-separated ticks");
  cmd->add_option("--weights", o.weights, "Comma-separated LP weights");
  flags.emplace_back(cmd->add_option("--xi", o.xi, "Lift scale"), &o.has_xi);
  cmd->add_option("--base", o.base, "Base system of a lift");
  cmd->add_option("--mode", o.mode, "Lift mode: exact or inequality");
  cmd->add_option("--dominance", o.dominance, "Dominance order kind");
}

}  // namespace

int run_command(int argc, const char* const* argv) {
  CLI::App app{"cfmmcheck: invariants and arbitrage in market systems"};
  app.require_subcommand(1);
  Options o;
  std::vector<std::pair<CLI::Option*, bool*>> flags;

  auto* catalog = app.add_subcommand("catalog", "List catalog systems");
  add_common(catalog, o);

  auto* analyze = app.add_subcommand("analyze", "Analyze a finite system");
  add_common(analyze, o);
  add_system(analyze, o, flags);
  analyze->add_option("input", o.input, "Finite system JSON file");
  analyze->add_option("--grid", o.grid, "Per-axis grid points, e.g. 1,2;3,4");
  analyze->add_option("--budget", o.budget, "Extra sampled states when discretizing");

  auto* fuzz = app.add_subcommand("fuzz", "Fuzz a catalog system for arbitrage");
  add_common(fuzz, o);
  add_system(fuzz, o, flags);
  fuzz->add_option("--trials", o.trials, "Random walks")->capture_default_str();
  fuzz->add_option("--steps", o.steps, "Transitions per walk")->capture_default_str();
  fuzz->add_option("--start", o.start, "Comma-separated start state");
  fuzz->add_option("--grid", o.grid, "Unused by fuzz; recorded in the report");

  auto* solve = app.add_subcommand("solve-stableswap", "Solve the StableSwap invariant");
  add_common(solve, o);
  solve->add_option("--balances", o.balances, "Comma-separated balances")->required();
  flags.emplace_back(solve->add_option("--A", o.amplification, "Amplification (default 10)"),
                     &o.has_amplification);
  flags.emplace_back(solve->add_option("--n", o.coins, "Coin count"), &o.has_coins);

  auto* verify = app.add_subcommand("verify-witness", "Re-verify an arbitrage witness");
  add_common(verify, o);
  verify->add_option("input", o.input, "Witness file or report containing one")->required();

  auto* theorems = app.add_subcommand("theorems", "Run the finite property suites");
  add_common(theorems, o);
  theorems->add_option("--trials", o.trials, "Random systems per suite")->capture_default_str();
  theorems->add_option("--suite", o.suites, "Suites to run (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitUsage;
  }
  for (auto& [opt, flag] : flags) {
    if (opt->count() > 0) *flag = true;
  }

  try {
    if (*catalog) return cmd_catalog(o);
    if (*analyze) return cmd_analyze(o);
    if (*fuzz) return cmd_fuzz(o);
    if (*solve) return cmd_solve_stableswap(o);
    if (*verify) return cmd_verify_witness(o);
    if (*theorems) return cmd_theorems(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cfmm
