#include "hpd/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "hpd/centers.hpp"
#include "hpd/depth.hpp"
#include "hpd/experiments.hpp"
#include "hpd/inference.hpp"
#include "hpd/sampling.hpp"

namespace hpd {

namespace {

// Reads params[key], storing the default when absent.
template <class T>
T param(Json& params, const char* key, T fallback) {
  if (!params.contains(key)) {
    params[key] = fallback;
    return fallback;
  }
  try {
    return params[key].get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string("/params/") + key + ": wrong type");
  }
}

std::string required_string(const Json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_string())
    throw ParseError(std::string("/params/") + key + ": missing string");
  return params[key].get<std::string>();
}

// Unknown names are input errors, not precondition violations.
template <class Parse>
auto named(Parse parse, const std::string& name, const char* key) {
  try {
    return parse(name);
  } catch (const DomainError& e) {
    throw ParseError(std::string("/params/") + key + ": " + e.what());
  }
}

std::vector<DepthMethod> methods_param(Json& params, const char* key, std::vector<DepthMethod> fallback) {
  std::vector<std::string> names;
  for (auto m : fallback) names.emplace_back(to_string(m));
  std::vector<DepthMethod> out;
  for (const auto& n : param(params, key, names)) out.push_back(named(parse_depth_method, n, key));
  return out;
}

std::vector<TiePolicy> policies_param(Json& params, const char* key, std::vector<TiePolicy> fallback) {
  std::vector<std::string> names;
  for (auto p : fallback) names.emplace_back(to_string(p));
  std::vector<TiePolicy> out;
  for (const auto& n : param(params, key, names)) out.push_back(named(parse_tie_policy, n, key));
  return out;
}

SolverConfig solver_param(Json& params) {
  SolverConfig cfg;
  cfg.max_iter = param(params, "max_iter", cfg.max_iter);
  cfg.tol = param(params, "tol", cfg.tol);
  cfg.step = param(params, "step", cfg.step);
  return cfg;
}

RngSeed seed_param(Json& params) { return RngSeed{param<std::uint64_t>(params, "seed", 1)}; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json depth_pair(const ScoredDepth& d) { return Json{{"value", d.value}, {"score", d.score}}; }

Json report_json(const DepthReport& r) {
  return Json{{"method", to_string(r.method)},
              {"tie_policy", to_string(r.tie_policy)},
              {"values", r.values},
              {"scores", r.scores},
              {"ranks", r.ranks},
              {"order", r.order},
              {"tied_groups", r.tied_groups}};
}

Json cmd_depth(Json& params) {
  const std::string input = required_string(params, "input");
  const DepthMethod method = named(parse_depth_method, param<std::string>(params, "method", "gdd"), "method");
  const TiePolicy ties = named(parse_tie_policy, param<std::string>(params, "ties", "shared"), "ties");
  const SampleData data = read_sample_file(input);

  if (params.contains("query") && !params["query"].is_null()) {
    const HpdMatrix q = read_matrix_file(required_string(params, "query"));
    if (!data.sample) throw DomainError("query depth needs a plain sample, not curves");
    Json r = depth_pair(depth(method, *data.sample, q));
    r["method"] = to_string(method);
    r["n"] = data.sample->size();
    return Json{{"query", std::move(r)}};
  }
  Json r = data.sample ? report_json(rank(*data.sample, method, ties)) : report_json(rank(*data.curves, method, ties));
  r["n"] = data.sample ? data.sample->size() : data.curves->size();
  return r;
}

Json cmd_center(Json& params) {
  const std::string input = required_string(params, "input");
  const std::string type = param<std::string>(params, "type", "mean");
  const SolverConfig cfg = solver_param(params);
  const SampleData data = read_sample_file(input);
  if (!data.sample) throw DomainError("centers need a plain sample, not curves");
  CenterResult r{HpdMatrix::identity(1), 0.0, 0};
  if (type == "mean")
    r = solve_intrinsic_mean(*data.sample, {}, cfg);
  else if (type == "median")
    r = solve_intrinsic_median(*data.sample, cfg);
  else
    throw ParseError("/params/type: expected mean or median");
  return Json{{"type", type}, {"point", matrix_to_json(r.point)}, {"residual", r.residual}, {"iterations", r.iterations}};
}

Json cr_json(const BootstrapCR& cr) {
  Json means = Json::array();
  for (const auto& m : cr.boot_means) means.push_back(matrix_to_json(m));
  return Json{{"method", to_string(cr.method)},
              {"alpha", cr.alpha},
              {"B", cr.boot_means.size() + cr.failures},
              {"seed", cr.seed.seed},
              {"beta_star", cr.beta_star},
              {"beta_score", cr.beta_score},
              {"size", cr.size},
              {"failures", cr.failures},
              {"center", matrix_to_json(cr.center)},
              {"members", cr.members},
              {"depth_values", cr.depth_values},
              {"boot_means", std::move(means)}};
}

Json cmd_cr(Json& params) {
  const std::string input = required_string(params, "input");
  const double alpha = param(params, "alpha", 0.05);
  const std::size_t B = param<std::size_t>(params, "B", 500);
  const DepthMethod method = named(parse_depth_method, param<std::string>(params, "method", "gdd"), "method");
  const RngSeed seed = seed_param(params);
  const SolverConfig cfg = solver_param(params);
  const SampleData data = read_sample_file(input);
  if (!data.sample) throw DomainError("confidence regions need a plain sample, not curves");
  const BootstrapCR cr = bootstrap_cr(*data.sample, B, alpha, method, cfg, seed);
  Json r = cr_json(cr);
  if (params.contains("test") && !params["test"].is_null())
    r["contained"] = cr_contains(cr, read_matrix_file(required_string(params, "test")));
  return r;
}

Json sim_breakdown(Json& params) {
  BreakdownParams p;
  p.n = param(params, "n", p.n);
  p.m = param(params, "m", p.m);
  p.d = param(params, "d", p.d);
  p.contamination_norm = param(params, "contamination_norm", p.contamination_norm);
  p.sigma = param(params, "sigma", p.sigma);
  p.breakdown_norm = param(params, "breakdown_norm", p.breakdown_norm);
  p.mode = named(parse_contamination_mode, param<std::string>(params, "mode", std::string(to_string(p.mode))), "mode");
  p.direction =
      named(parse_direction_mode, param<std::string>(params, "direction", std::string(to_string(p.direction))), "direction");
  p.runs = param(params, "runs", p.runs);
  p.methods = methods_param(params, "methods", p.methods);
  p.policies = policies_param(params, "policies", p.policies);
  p.seed = seed_param(params);
  const BreakdownReport rep = breakdown_rank_experiment(p);

  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"run", r.run},
                    {"method", to_string(r.method)},
                    {"tie_policy", to_string(r.policy)},
                    {"clean_max_norm", r.clean_max_norm},
                    {"rank1_norm", r.rank1_norm},
                    {"max_norm_first_n", r.max_norm_first_n},
                    {"best_contaminant_rank", r.best_contaminant_rank},
                    {"contaminants_last", r.contaminants_last},
                    {"rank1_broken", r.rank1_broken}});
  Json summary = Json::array();
  bool gdd_robust = true;
  bool any_gdd = false;
  for (const auto& s : rep.summary) {
    summary.push_back({{"method", to_string(s.method)},
                       {"tie_policy", to_string(s.policy)},
                       {"runs", s.runs},
                       {"contaminants_last", s.contaminants_last},
                       {"rank1_broken", s.rank1_broken},
                       {"worst_max_norm_first_n", s.worst_max_norm_first_n}});
    if (s.method == DepthMethod::gdd) {
      any_gdd = true;
      gdd_robust = gdd_robust && s.contaminants_last == s.runs;
    }
  }
  Json r{{"rows", std::move(rows)}, {"summary", std::move(summary)}};
  // gdd ranks every contaminant after the clean points whenever m < n.
  if (any_gdd && p.m < p.n) r["gdd_contaminants_last_all_runs"] = gdd_robust;
  return r;
}

Json sim_efficiency(Json& params) {
  EfficiencyParams p;
  p.d = param(params, "d", p.d);
  p.n = param(params, "n", p.n);
  p.p = param(params, "p", p.p);
  p.replications = param(params, "replications", p.replications);
  p.cfg = solver_param(params);
  p.seed = seed_param(params);
  const EfficiencyReport r = efficiency_experiment(p);
  return Json{{"re", r.re},         {"se", r.se},     {"mse_median", r.mse_median},
              {"mse_mean", r.mse_mean}, {"used", r.used}, {"failures", r.failures}};
}

Json sim_timing(Json& params) {
  TimingParams p;
  p.d_list = param(params, "d_list", p.d_list);
  p.n_list = param(params, "n_list", p.n_list);
  p.methods = methods_param(params, "methods", p.methods);
  p.repetitions = param(params, "repetitions", p.repetitions);
  p.seed = seed_param(params);
  const auto cells = timing_profile(p);
  Json rows = Json::array();
  bool rule = true;
  for (const auto& c : cells) {
    Json row{{"d", c.d}, {"n", c.n}, {"method", to_string(c.method)}, {"skipped", c.skipped},
             {"repetitions", c.repetitions}, {"median_ms", c.median_ms}};
    rows.push_back(std::move(row));
    if (c.method == DepthMethod::zonoid && (c.d * c.d >= c.n) != c.skipped) rule = false;
  }
  Json monotone = Json::object();
  for (auto d : p.d_list)
    for (auto m : p.methods)
      monotone[std::string(to_string(m)) + "_d" + std::to_string(d)] = timing_monotone_in_n(cells, m, d);
  return Json{{"cells", std::move(rows)}, {"zonoid_feasibility_rule", rule}, {"monotone_in_n_ms", std::move(monotone)}};
}

Json sim_coverage(Json& params) {
  CoverageParams p;
  p.d = param(params, "d", p.d);
  p.n = param(params, "n", p.n);
  p.p = param(params, "p", p.p);
  p.B = param(params, "B", p.B);
  p.simulations = param(params, "simulations", p.simulations);
  p.alphas = param(params, "alphas", p.alphas);
  p.methods = methods_param(params, "methods", p.methods);
  p.cfg = solver_param(params);
  p.seed = seed_param(params);
  const CoverageReport rep = coverage_experiment(p);
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"method", to_string(r.method)},
                    {"alpha", r.alpha},
                    {"avg_beta", r.avg_beta},
                    {"avg_size", r.avg_size},
                    {"se_size", r.se_size},
                    {"coverage", r.coverage},
                    {"simulations", r.simulations}});
  return Json{{"rows", std::move(rows)}, {"bootstrap_failures", rep.bootstrap_failures}};
}

Json cmd_simulate(Json& params) {
  const std::string exp = required_string(params, "experiment");
  if (exp == "breakdown") return sim_breakdown(params);
  if (exp == "efficiency") return sim_efficiency(params);
  if (exp == "timing") return sim_timing(params);
  if (exp == "coverage") return sim_coverage(params);
  throw ParseError("/params/experiment: unknown experiment '" + exp + "'");
}

void diff(const Json& a, const Json& b, const std::string& ptr, std::vector<std::string>& out) {
  if (a.type() != b.type() && !(a.is_number() && b.is_number())) {
    out.push_back(ptr.empty() ? "/" : ptr);
    return;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()))
        out.push_back(ptr + "/" + it.key());
      else
        diff(it.value(), b[it.key()], ptr + "/" + it.key(), out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) out.push_back(ptr + "/" + it.key());
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(ptr + " (length)");
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) diff(a[i], b[i], ptr + "/" + std::to_string(i), out);
  } else if (a != b) {
    out.push_back(ptr.empty() ? "/" : ptr);
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Rows of objects -> CSV with the given column order.
std::string table(const Json& rows, const std::vector<std::string>& columns) {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_cell(row.value(columns[c], Json()));
    out << '\n';
  }
  return out.str();
}

}  // namespace

Json make_report(std::string_view command, Json params, Json results) {
  return Json{{"command", command},
              {"params", std::move(params)},
              {"results", std::move(results)},
              {"provenance",
               {{"version", kVersion}, {"timestamp", utc_timestamp()}, {"rng", kRngDescription}}}};
}

void validate_report(const Json& report) {
  if (!report.is_object()) throw ParseError("/: report must be an object");
  for (const char* key : {"command", "params", "results", "provenance"})
    if (!report.contains(key)) throw ParseError(std::string("/") + key + ": missing");
  if (!report["command"].is_string()) throw ParseError("/command: expected a string");
  const std::string cmd = report["command"].get<std::string>();
  if (cmd != "depth" && cmd != "center" && cmd != "cr" && cmd != "simulate")
    throw ParseError("/command: unknown command '" + cmd + "'");
  if (!report["params"].is_object()) throw ParseError("/params: expected an object");
  if (!report["results"].is_object()) throw ParseError("/results: expected an object");
  const Json& prov = report["provenance"];
  if (!prov.is_object()) throw ParseError("/provenance: expected an object");
  for (const char* key : {"version", "timestamp", "rng"})
    if (!prov.contains(key) || !prov[key].is_string())
      throw ParseError(std::string("/provenance/") + key + ": missing string");
  if ((cmd == "cr" || cmd == "simulate") && !report["params"].contains("seed"))
    throw ParseError("/params/seed: missing");
}

Json run_command(std::string_view command, Json& params) {
  if (!params.is_object()) throw ParseError("/params: expected an object");
  if (command == "depth") return cmd_depth(params);
  if (command == "center") return cmd_center(params);
  if (command == "cr") return cmd_cr(params);
  if (command == "simulate") return cmd_simulate(params);
  throw ParseError("unknown command '" + std::string(command) + "'");
}

Json strip_volatile(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k == "timestamp" || (k.size() > 3 && k.compare(k.size() - 3, 3, "_ms") == 0)) continue;
      out[k] = strip_volatile(it.value());
    }
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(strip_volatile(v));
    return out;
  }
  return j;
}

std::vector<std::string> replay_report(const Json& report) {
  validate_report(report);
  Json params = report["params"];
  const Json fresh = run_command(report["command"].get<std::string>(), params);
  std::vector<std::string> out;
  diff(strip_volatile(report["results"]), strip_volatile(fresh), "/results", out);
  if (strip_volatile(params) != strip_volatile(report["params"])) out.push_back("/params");
  return out;
}

std::string results_csv(std::string_view command, const Json& params, const Json& results) {
  if (command == "depth") {
    if (results.contains("query")) return table(Json::array({results["query"]}), {"method", "n", "value", "score"});
    Json rows = Json::array();
    for (std::size_t i = 0; i < results["values"].size(); ++i)
      rows.push_back({{"index", i},
                      {"value", results["values"][i]},
                      {"score", results["scores"][i]},
                      {"rank", results["ranks"][i]}});
    return table(rows, {"index", "value", "score", "rank"});
  }
  if (command == "cr") {
    Json rows = Json::array();
    std::vector<bool> member(results["depth_values"].size(), false);
    for (const auto& m : results["members"]) member[m.get<std::size_t>()] = true;
    for (std::size_t i = 0; i < member.size(); ++i)
      rows.push_back({{"index", i}, {"depth_value", results["depth_values"][i]}, {"member", member[i]}});
    return table(rows, {"index", "depth_value", "member"});
  }
  if (command == "simulate") {
    const std::string exp = params.value("experiment", "");
    if (exp == "breakdown")
      return table(results["rows"], {"run", "method", "tie_policy", "clean_max_norm", "rank1_norm",
                                     "max_norm_first_n", "best_contaminant_rank", "contaminants_last",
                                     "rank1_broken"});
    if (exp == "coverage")
      return table(results["rows"],
                   {"method", "alpha", "coverage", "avg_beta", "avg_size", "se_size", "simulations"});
    if (exp == "timing")
      return table(results["cells"], {"d", "n", "method", "skipped", "repetitions", "median_ms"});
    Json row = results;
    row["p"] = params.value("p", 0.0);
    row["d"] = params.value("d", 0);
    row["n"] = params.value("n", 0);
    return table(Json::array({row}), {"d", "n", "p", "re", "se", "mse_median", "mse_mean", "used", "failures"});
  }
  if (command == "center") return table(Json::array({results}), {"type", "residual", "iterations"});
  throw ParseError("no CSV table for command '" + std::string(command) + "'");
}

}  // namespace hpd
