#pragma once

// Command-line front end.  Sub-commands: solve, check, maximize, oracle,
// graph, gen, bench.  All results are emitted as JSON with sorted keys
// (byte-deterministic for fixed inputs); diagnostics go to the error
// stream.  Exit codes: 0 success, 1 infeasible or false verdict, 2 usage
// or input error, 3 enumeration cap exceeded.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dualfair/doubly.hpp"
#include "dualfair/errors.hpp"
#include "dualfair/fairness.hpp"
#include "dualfair/gen.hpp"
#include "dualfair/graphlab.hpp"
#include "dualfair/maxeff.hpp"
#include "dualfair/model.hpp"
#include "dualfair/oracle.hpp"

namespace dualfair {
namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Instance load_instance(const std::string& path) {
  return parse_instance_text(read_file(path));
}

inline void write_output(const std::string& text,
                         const std::string& out_path, std::ostream& fallback) {
  if (out_path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw FormatError("cannot write '" + out_path + "'");
  out << text;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty() || !parts.empty()) parts.push_back(current);
  return parts;
}

inline std::vector<Rational> parse_weights(const std::string& text) {
  std::vector<Rational> weights;
  for (const std::string& part : split(text, ',')) {
    weights.push_back(parse_rational(part));
  }
  return weights;
}

inline std::vector<std::pair<int, int>> parse_edges(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  if (text.empty()) return edges;
  for (const std::string& part : split(text, ',')) {
    const std::vector<std::string> ends = split(part, '-');
    if (ends.size() != 2) {
      throw FormatError("edge '" + part + "' is not of the form a-b");
    }
    edges.emplace_back(std::stoi(ends[0]), std::stoi(ends[1]));
  }
  return edges;
}

inline std::uint64_t default_cap() {
  if (const char* env = std::getenv("DUALFAIR_CAP")) {
    return static_cast<std::uint64_t>(std::stoull(env));
  }
  return 10000000;
}

/// Criterion and relaxation budget guaranteed by each solve algorithm.
inline std::pair<Criterion, int> solver_guarantee(const std::string& algorithm,
                                                 const Instance& instance) {
  if (algorithm == "identical-ef1") return {Criterion::EnvyFreeUpTo, 1};
  if (algorithm == "two-agent-ef1") return {Criterion::EnvyFreeUpTo, 1};
  if (algorithm == "halving-prop") {
    return {Criterion::ProportionalUpTo, prop_log_bound(instance.agents)};
  }
  return {Criterion::ProportionalUpTo, 2};  // bivalued-prop2
}

inline Allocation run_solver(const std::string& algorithm,
                             const Instance& instance) {
  if (algorithm == "identical-ef1") {
    return solve_identical_allocator_ef1(instance);
  }
  if (algorithm == "two-agent-ef1") return solve_two_agent_doubly_ef1(instance);
  if (algorithm == "halving-prop") return solve_doubly_prop_log(instance);
  return solve_bivalued_prop2(instance);
}

inline Criterion method_criterion(const std::string& method) {
  if (method == "lp-binary") return Criterion::ProportionalUpTo;
  return Criterion::EnvyFreeUpTo;
}

inline MaxEffResult run_maximizer(const std::string& method,
                                  const Instance& instance, int c,
                                  std::size_t max_states) {
  if (method == "paired-halves") return maximize_two_agent_ef(instance, c);
  if (method == "anchored-round-robin") return maximize_round_robin(instance, c);
  if (method == "lp-binary") return maximize_binary_prop_lp(instance, c);
  return maximize_binary_ef_dp(instance, c, max_states);
}

/// Instance construction shared by `gen` and the bench generator specs.
inline Instance build_instance(const std::string& kind,
                               const std::vector<Rational>& weights,
                               int copies, int vertices,
                               const std::vector<std::pair<int, int>>& edges,
                               int agents, int items, int max_value,
                               std::uint64_t seed) {
  if (kind == "partition-efficiency") {
    return partition_efficiency_instance(weights);
  }
  if (kind == "partition-share") {
    return partition_share_instance(weights, copies);
  }
  if (kind == "independent-set") {
    return independent_set_instance(vertices, edges);
  }
  if (kind == "triple-profile") return triple_profile_instance();
  if (kind == "random") {
    return random_instance(RandomKind::General, agents, items, max_value, seed);
  }
  if (kind == "random-binary") {
    return random_instance(RandomKind::Binary, agents, items, 1, seed);
  }
  if (kind == "random-bivalued") {
    return random_instance(RandomKind::Bivalued, agents, items, max_value,
                           seed);
  }
  if (kind == "random-identical-allocator") {
    return random_identical_allocator_instance(RandomKind::General, agents,
                                               items, max_value, seed);
  }
  throw FormatError("unknown generator kind '" + kind + "'");
}

inline Instance instance_from_spec(const Json& spec, std::uint64_t seed) {
  const std::string kind = spec.at("kind").get<std::string>();
  std::vector<Rational> weights;
  if (spec.contains("weights")) {
    for (const auto& w : spec.at("weights")) {
      weights.push_back(rational_from_json(w));
    }
  }
  std::vector<std::pair<int, int>> edges;
  if (spec.contains("edges")) {
    for (const auto& e : spec.at("edges")) {
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
  }
  return build_instance(kind, weights, spec.value("copies", 1),
                        spec.value("vertices", 0), edges,
                        spec.value("agents", 2), spec.value("items", 4),
                        spec.value("max_value", 8), seed);
}

inline int map_exception(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const CapExceeded*>(&e) != nullptr ||
      dynamic_cast<const StateSpaceExceeded*>(&e) != nullptr) {
    return 3;
  }
  return 2;
}

// ---- sub-command handlers ----------------------------------------------

inline int cmd_solve(const std::string& instance_path,
                     const std::string& algorithm, const std::string& out_path,
                     std::ostream& out) {
  const Instance instance = load_instance(instance_path);
  const Allocation allocation = run_solver(algorithm, instance);
  const auto [criterion, c] = solver_guarantee(algorithm, instance);
  const FairnessReport certificate =
      check_fairness(instance, allocation, criterion, c, Perspective::Doubly);
  Json j;
  j["algorithm"] = algorithm;
  j["agents"] = instance.agents;
  j["items"] = instance.items;
  j["allocation"] = allocation_to_json(allocation);
  j["efficiency"] =
      rational_to_json(allocator_efficiency(instance, allocation));
  j["certificate"] = certificate.to_json();
  write_output(j.dump(2) + "\n", out_path, out);
  return certificate.verdict ? 0 : 1;
}

inline int cmd_check(const std::string& instance_path,
                     const std::string& criterion_name, int c,
                     const std::string& perspective_name,
                     const std::string& allocation_text,
                     const std::string& allocation_path,
                     const std::string& out_path, std::ostream& out) {
  const Instance instance = load_instance(instance_path);
  const std::string text =
      allocation_path.empty() ? allocation_text : read_file(allocation_path);
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("allocation is not valid JSON: ") +
                      e.what());
  }
  if (parsed.is_array()) {  // accept bare bundle lists: [[0,2],[1]]
    Json wrapped;
    wrapped["bundles"] = std::move(parsed);
    parsed = std::move(wrapped);
  }
  const Allocation allocation =
      allocation_from_json(parsed, instance.agents, instance.items);
  const FairnessReport report = check_fairness(
      instance, allocation, criterion_from_string(criterion_name), c,
      perspective_from_string(perspective_name));
  write_output(report.to_json().dump(2) + "\n", out_path, out);
  return report.verdict ? 0 : 1;
}

inline int cmd_maximize(const std::string& instance_path,
                        const std::string& method,
                        const std::string& constraint, int c,
                        std::size_t max_states, const std::string& out_path,
                        std::ostream& out, std::ostream& err) {
  const Instance instance = load_instance(instance_path);
  const Criterion criterion = method_criterion(method);
  if (!constraint.empty() &&
      criterion_from_string(constraint) != criterion) {
    err << "error: method " << method << " maximizes under the '"
        << to_string(criterion) << "' constraint, not '" << constraint
        << "'\n";
    return 2;
  }
  const MaxEffResult result = run_maximizer(method, instance, c, max_states);
  Json j;
  j["method"] = result.method;
  j["criterion"] = to_string(result.criterion);
  j["c"] = result.c;
  j["feasible"] = result.feasible;
  j["guarantee"] = rational_to_json(result.guarantee);
  if (result.feasible) {
    j["allocation"] = allocation_to_json(result.allocation);
    j["objective"] = rational_to_json(result.objective);
    j["certificate"] = check_fairness(instance, result.allocation,
                                      result.criterion, result.c,
                                      Perspective::Agents)
                           .to_json();
  }
  write_output(j.dump(2) + "\n", out_path, out);
  return result.feasible ? 0 : 1;
}

inline int cmd_oracle(const std::string& instance_path,
                      const std::string& criterion_name, int c,
                      const std::string& perspective_name, bool first_feasible,
                      std::uint64_t cap, int jobs, const std::string& out_path,
                      std::ostream& out) {
  const Instance instance = load_instance(instance_path);
  OracleOptions options;
  options.criterion = criterion_from_string(criterion_name);
  options.c = c;
  options.perspective = perspective_from_string(perspective_name);
  options.maximize_efficiency = !first_feasible;
  options.cap = cap;
  options.jobs = jobs;
  const OracleResult result = enumerate_best(instance, options);
  Json j;
  j["criterion"] = criterion_name;
  j["c"] = c;
  j["perspective"] = perspective_name;
  j["exists"] = result.exists;
  j["examined"] = result.examined;
  if (result.exists) {
    j["witness"] = allocation_to_json(*result.witness);
    j["objective"] = rational_to_json(*result.objective);
    j["certificate"] =
        check_fairness(instance, *result.witness, options.criterion, c,
                       options.perspective)
            .to_json();
  }
  write_output(j.dump(2) + "\n", out_path, out);
  return result.exists ? 0 : 1;
}

inline int cmd_graph(const std::string& family, int n, int k, int s,
                     bool chromatic, bool dimacs, bool bound, int cap,
                     std::ostream& out, std::ostream& err) {
  const SmallGraph graph =
      family == "gamma" ? gamma_graph(n) : kneser_graph(n, k, s);
  if (dimacs) {
    std::ostringstream label;
    label << family << " n=" << n;
    if (family == "kneser") label << " k=" << k << " s=" << s;
    out << to_dimacs(graph, label.str());
    return 0;
  }
  Json j;
  j["family"] = family;
  j["n"] = n;
  if (family == "kneser") {
    j["k"] = k;
    j["s"] = s;
  }
  j["order"] = graph.order();
  j["edges"] = graph.edge_count();
  int exit_code = 0;
  std::optional<ColoringResult> coloring;
  if (chromatic || bound) {
    coloring = chromatic_number(graph, cap);
    j["chromatic"] = coloring->colors;
    if (chromatic) j["coloring"] = coloring->assignment;
  }
  if (bound) {
    if (family != "kneser") {
      err << "error: --bound applies to the kneser family only\n";
      return 2;
    }
    const int value = n - 2 * k + 2 * s + 2;
    const bool holds = coloring->colors >= value;
    j["bound"] = value;
    j["bound_holds"] = holds;
    if (!holds) exit_code = 1;
  }
  out << j.dump(2) << "\n";
  return exit_code;
}

inline int cmd_gen(const std::string& kind, const std::string& weights_text,
                   int copies, int vertices, const std::string& edges_text,
                   int agents, int items, int max_value, std::uint64_t seed,
                   const std::string& out_path, std::ostream& out) {
  const Instance instance = build_instance(
      kind,
      weights_text.empty() ? std::vector<Rational>{}
                           : parse_weights(weights_text),
      copies, vertices, parse_edges(edges_text), agents, items, max_value,
      seed);
  write_output(instance_to_json(instance).dump(2) + "\n", out_path, out);
  return 0;
}

/// One bench row: run a method (solver or maximizer), compare against the
/// capped exhaustive optimum when it fits, record wall time.
struct BenchRow {
  std::string case_name;
  std::uint64_t seed = 0;
  std::string method;
  std::string objective;  // empty when the method reports infeasible
  std::string oracle;     // empty when the cap was exceeded
  std::string ratio;      // oracle / objective when both are positive
  long long micros = 0;
  bool pass = false;
  bool skipped = false;  // oracle skipped due to cap
};

inline BenchRow bench_one(const Json& jcase, std::uint64_t seed,
                          std::uint64_t cap) {
  static const std::vector<std::string> solver_names = {
      "identical-ef1", "two-agent-ef1", "halving-prop", "bivalued-prop2"};
  BenchRow row;
  row.case_name = jcase.at("name").get<std::string>();
  row.method = jcase.at("method").get<std::string>();
  row.seed = seed;
  const Instance instance = instance_from_spec(jcase.at("generator"), seed);
  const bool is_solver =
      std::find(solver_names.begin(), solver_names.end(), row.method) !=
      solver_names.end();

  Criterion criterion = Criterion::EnvyFreeUpTo;
  int c = jcase.value("c", 1);
  bool feasible = true;
  Allocation allocation;
  const auto start = std::chrono::steady_clock::now();
  if (is_solver) {
    allocation = run_solver(row.method, instance);
    std::tie(criterion, c) = solver_guarantee(row.method, instance);
  } else {
    const MaxEffResult result =
        run_maximizer(row.method, instance, c, 4000000);
    criterion = result.criterion;
    c = result.c;
    feasible = result.feasible;
    allocation = result.allocation;
  }
  const auto stop = std::chrono::steady_clock::now();
  row.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   stop - start)
                   .count();

  const Perspective perspective =
      is_solver ? Perspective::Doubly : Perspective::Agents;
  std::optional<Rational> objective;
  if (feasible) {
    objective = allocator_efficiency(instance, allocation);
    row.objective = rational_to_string(*objective);
    row.pass =
        check_fairness(instance, allocation, criterion, c, perspective)
            .verdict;
  }

  OracleOptions options;
  options.criterion = criterion;
  options.c = c;
  options.perspective = perspective;
  options.cap = cap;
  try {
    const OracleResult best = enumerate_best(instance, options);
    if (best.exists) {
      row.oracle = rational_to_string(*best.objective);
      if (objective && *objective > 0) {
        row.ratio = rational_to_string(*best.objective / *objective);
      } else if (objective && *best.objective == 0) {
        row.ratio = "1";
      }
    } else {
      row.oracle = "none";
      if (!feasible) row.pass = true;  // infeasibility confirmed
    }
  } catch (const CapExceeded&) {
    row.skipped = true;
  }
  return row;
}

inline int cmd_bench(const std::string& suite_path,
                     const std::string& csv_path, std::uint64_t cap,
                     std::ostream& out) {
  Json suite;
  try {
    suite = Json::parse(read_file(suite_path));
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("suite is not valid JSON: ") + e.what());
  }
  std::ostringstream csv;
  csv << "case,seed,method,objective,oracle,ratio,micros\n";
  Json summaries = Json::array();
  std::uint64_t total_rows = 0;
  for (const Json& jcase : suite.value("cases", Json::array())) {
    std::vector<std::uint64_t> seeds;
    const Json& jseeds = jcase.at("seeds");
    if (jseeds.is_array()) {
      for (const auto& s : jseeds) {
        seeds.push_back(s.get<std::uint64_t>());
      }
    } else {
      const std::uint64_t first = jseeds.value("first", 0);
      const std::uint64_t count = jseeds.at("count").get<std::uint64_t>();
      for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(first + i);
    }
    std::uint64_t passes = 0;
    std::uint64_t skipped = 0;
    std::optional<Rational> max_ratio;
    for (std::uint64_t seed : seeds) {
      const BenchRow row = bench_one(jcase, seed, cap);
      csv << row.case_name << "," << row.seed << "," << row.method << ","
          << row.objective << "," << row.oracle << "," << row.ratio << ","
          << row.micros << "\n";
      ++total_rows;
      if (row.pass) ++passes;
      if (row.skipped) ++skipped;
      if (!row.ratio.empty()) {
        const Rational r = parse_rational(row.ratio);
        if (!max_ratio || r > *max_ratio) max_ratio = r;
      }
    }
    Json js;
    js["name"] = jcase.at("name");
    js["method"] = jcase.at("method");
    js["rows"] = seeds.size();
    js["passes"] = passes;
    js["skipped"] = skipped;
    js["max_ratio"] =
        max_ratio ? Json(rational_to_string(*max_ratio)) : Json(nullptr);
    summaries.push_back(std::move(js));
  }
  Json j;
  j["cases"] = std::move(summaries);
  j["total_rows"] = total_rows;
  out << j.dump(2) << "\n";
  if (!csv_path.empty()) {
    std::ofstream file(csv_path);
    if (!file) throw FormatError("cannot write '" + csv_path + "'");
    file << csv.str();
  }
  return 0;
}

}  // namespace cli_detail

/// Parses and runs one command line (without the program name).  Streams
/// receive the JSON result and diagnostics; the return value is the
/// process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  namespace cd = cli_detail;
  CLI::App app{"doubly fair allocation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // solve ----------------------------------------------------------------
  std::string solve_instance, solve_algorithm, solve_out;
  CLI::App* solve = app.add_subcommand(
      "solve", "run a constructive solver with a fairness guarantee");
  solve->add_option("--instance", solve_instance, "instance JSON file")
      ->required();
  solve
      ->add_option("--algorithm", solve_algorithm,
                   "identical-ef1 | two-agent-ef1 | halving-prop | "
                   "bivalued-prop2")
      ->required()
      ->check(CLI::IsMember({"identical-ef1", "two-agent-ef1", "halving-prop",
                             "bivalued-prop2"}));
  solve->add_option("--out", solve_out, "write JSON here instead of stdout");
  solve->callback([&] {
    exit_code = cd::cmd_solve(solve_instance, solve_algorithm, solve_out, out);
  });

  // check ----------------------------------------------------------------
  std::string check_instance, check_criterion = "ef",
                              check_perspective = "doubly";
  std::string check_allocation, check_allocation_file, check_out;
  int check_c = 1;
  CLI::App* check =
      app.add_subcommand("check", "verify fairness of a given allocation");
  check->add_option("--instance", check_instance, "instance JSON file")
      ->required();
  check->add_option("--criterion", check_criterion, "ef | prop")
      ->check(CLI::IsMember({"ef", "prop"}));
  check->add_option("--c", check_c, "removal budget (items)")
      ->check(CLI::NonNegativeNumber);
  check
      ->add_option("--perspective", check_perspective,
                   "agents | allocator | doubly | all-profiles")
      ->check(CLI::IsMember({"agents", "allocator", "doubly", "all-profiles"}));
  CLI::Option* alloc_inline = check->add_option(
      "--allocation", check_allocation, "allocation as inline JSON bundles");
  CLI::Option* alloc_file = check->add_option(
      "--allocation-file", check_allocation_file, "allocation JSON file");
  alloc_inline->excludes(alloc_file);
  check->add_option("--out", check_out, "write JSON here instead of stdout");
  check->callback([&] {
    if (check_allocation.empty() && check_allocation_file.empty()) {
      throw CLI::RequiredError("--allocation or --allocation-file");
    }
    exit_code = cd::cmd_check(check_instance, check_criterion, check_c,
                              check_perspective, check_allocation,
                              check_allocation_file, check_out, out);
  });

  // maximize -------------------------------------------------------------
  std::string max_instance, max_method, max_constraint, max_out;
  int max_c = 1;
  std::size_t max_states = 4000000;
  CLI::App* maximize = app.add_subcommand(
      "maximize", "maximize the allocator's efficiency under a fairness "
                  "constraint on the agents");
  maximize->add_option("--instance", max_instance, "instance JSON file")
      ->required();
  maximize
      ->add_option("--method", max_method,
                   "paired-halves | anchored-round-robin | lp-binary | "
                   "dp-binary")
      ->required()
      ->check(CLI::IsMember(
          {"paired-halves", "anchored-round-robin", "lp-binary", "dp-binary"}));
  maximize->add_option("--constraint", max_constraint,
                       "ef | prop (must match the method)");
  maximize->add_option("--c", max_c, "removal budget (items)")
      ->check(CLI::NonNegativeNumber);
  maximize->add_option("--max-states", max_states,
                       "state cap for the dp-binary method");
  maximize->add_option("--out", max_out, "write JSON here instead of stdout");
  maximize->callback([&] {
    exit_code = cd::cmd_maximize(max_instance, max_method, max_constraint,
                                 max_c, max_states, max_out, out, err);
  });

  // oracle ---------------------------------------------------------------
  std::string oracle_instance, oracle_criterion = "ef",
                               oracle_perspective = "doubly", oracle_out;
  int oracle_c = 1, oracle_jobs = 1;
  bool oracle_first = false;
  std::uint64_t oracle_cap = cd::default_cap();
  CLI::App* oracle = app.add_subcommand(
      "oracle", "exhaustive capped search for fair allocations");
  oracle->add_option("--instance", oracle_instance, "instance JSON file")
      ->required();
  oracle->add_option("--criterion", oracle_criterion, "ef | prop")
      ->check(CLI::IsMember({"ef", "prop"}));
  oracle->add_option("--c", oracle_c, "removal budget (items)")
      ->check(CLI::NonNegativeNumber);
  oracle
      ->add_option("--perspective", oracle_perspective,
                   "agents | allocator | doubly | all-profiles")
      ->check(CLI::IsMember({"agents", "allocator", "doubly", "all-profiles"}));
  oracle->add_flag("--first-feasible", oracle_first,
                   "stop at the first fair allocation instead of maximizing");
  oracle->add_option("--cap", oracle_cap,
                     "largest allocation count to enumerate "
                     "(default DUALFAIR_CAP or 10^7)");
  oracle->add_option("--jobs", oracle_jobs, "worker threads");
  oracle->add_option("--out", oracle_out, "write JSON here instead of stdout");
  oracle->callback([&] {
    exit_code = cd::cmd_oracle(oracle_instance, oracle_criterion, oracle_c,
                               oracle_perspective, oracle_first, oracle_cap,
                               oracle_jobs, oracle_out, out);
  });

  // graph ----------------------------------------------------------------
  std::string graph_family;
  int graph_n = 0, graph_k = 1, graph_s = 0, graph_cap = 64;
  bool graph_chromatic = false, graph_dimacs = false, graph_bound = false;
  CLI::App* graph = app.add_subcommand(
      "graph", "bundle-overlap and generalized Kneser graphs");
  graph->add_option("--family", graph_family, "gamma | kneser")
      ->required()
      ->check(CLI::IsMember({"gamma", "kneser"}));
  graph->add_option("--n", graph_n, "ground-set size")->required();
  graph->add_option("--k", graph_k, "subset size (kneser)");
  graph->add_option("--s", graph_s, "max overlap (kneser)");
  graph->add_flag("--chromatic", graph_chromatic,
                  "compute the exact chromatic number and a colouring");
  graph->add_flag("--dimacs", graph_dimacs, "print DIMACS instead of JSON");
  graph->add_flag("--bound", graph_bound,
                  "check the n-2k+2s+2 lower bound (kneser)");
  graph->add_option("--cap", graph_cap, "colouring vertex cap");
  graph->callback([&] {
    exit_code =
        cd::cmd_graph(graph_family, graph_n, graph_k, graph_s, graph_chromatic,
                      graph_dimacs, graph_bound, graph_cap, out, err);
  });

  // gen ------------------------------------------------------------------
  std::string gen_kind, gen_weights, gen_edges, gen_out;
  int gen_copies = 1, gen_vertices = 0, gen_agents = 2, gen_items = 4,
      gen_max_value = 8;
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand(
      "gen", "emit reduction gadgets and seeded random instances");
  gen->add_option("--kind", gen_kind,
                  "partition-efficiency | partition-share | independent-set | "
                  "triple-profile | random | random-binary | random-bivalued "
                  "| random-identical-allocator")
      ->required()
      ->check(CLI::IsMember({"partition-efficiency", "partition-share",
                             "independent-set", "triple-profile", "random",
                             "random-binary", "random-bivalued",
                             "random-identical-allocator"}));
  gen->add_option("--weights", gen_weights,
                  "comma-separated rationals for the partition kinds");
  gen->add_option("--copies", gen_copies,
                  "pool copies per agent (partition-share)");
  gen->add_option("--vertices", gen_vertices, "graph order (independent-set)");
  gen->add_option("--edges", gen_edges,
                  "comma-separated a-b pairs (independent-set)");
  gen->add_option("--agents", gen_agents, "agent count (random kinds)");
  gen->add_option("--items", gen_items, "item count (random kinds)");
  gen->add_option("--max-value", gen_max_value,
                  "largest integer value drawn (random kinds)");
  gen->add_option("--seed", gen_seed, "generator seed (random kinds)");
  gen->add_option("--out", gen_out, "write JSON here instead of stdout");
  gen->callback([&] {
    exit_code = cd::cmd_gen(gen_kind, gen_weights, gen_copies, gen_vertices,
                            gen_edges, gen_agents, gen_items, gen_max_value,
                            gen_seed, gen_out, out);
  });

  // bench ----------------------------------------------------------------
  std::string bench_suite, bench_csv;
  std::uint64_t bench_cap = cd::default_cap();
  CLI::App* bench = app.add_subcommand(
      "bench", "run solver/oracle pairs over a suite file");
  bench->add_option("--suite", bench_suite, "suite JSON file")->required();
  bench->add_option("--csv", bench_csv, "write per-row CSV here");
  bench->add_option("--cap", bench_cap,
                    "oracle cap per case (default DUALFAIR_CAP or 10^7)");
  bench->callback([&] {
    exit_code = cd::cmd_bench(bench_suite, bench_csv, bench_cap, out);
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    return cli_detail::map_exception(e, err);
  } catch (const std::exception& e) {
    return cli_detail::map_exception(e, err);
  }
  return exit_code;
}

}  // namespace dualfair
