#include "hpd/cli.hpp"

#include <cstdint>
#include <optional>

#include <CLI11.hpp>

#include "hpd/centers.hpp"
#include "hpd/errors.hpp"
#include "hpd/parallel.hpp"
#include "hpd/report.hpp"

namespace hpd {

namespace {

struct Output {
  std::string out;
  std::string csv;
};

template <class T>
void put(Json& params, const char* key, const std::optional<T>& v) {
  if (v) params[key] = *v;
}

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.out, "Write the JSON report to this file instead of stdout");
  sub->add_option("--csv", o.csv, "Also write the flat results table as CSV");
}

struct SolverFlags {
  std::optional<int> max_iter;
  std::optional<double> tol;
  std::optional<double> step;

  void add(CLI::App* sub) {
    sub->add_option("--max-iter", max_iter, "Solver iteration cap");
    sub->add_option("--tol", tol, "Solver tolerance on the update norm");
    sub->add_option("--step", step, "Initial solver step");
  }
  void store(Json& params) const {
    put(params, "max_iter", max_iter);
    put(params, "tol", tol);
    put(params, "step", step);
  }
};

// "key=value" with value parsed as JSON, falling back to a plain string.
void apply_set(Json& params, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("--set expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
  Json v = Json::parse(value, nullptr, false);
  params[key] = v.is_discarded() ? Json(value) : v;
}

void emit(const std::string& command, Json& params, const Json& results, const Output& o, std::ostream& out) {
  const Json report = make_report(command, params, results);
  if (o.out.empty())
    out << dump(report) << '\n';
  else
    write_text_file(o.out, dump(report) + "\n");
  if (!o.csv.empty()) write_text_file(o.csv, results_csv(command, params, results));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intrinsic data depth for Hermitian positive definite matrices", "hpd_depth"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "Worker cap for data-parallel loops (default: logical cores)")
      ->envname("HPD_DEPTH_THREADS");

  Json params = Json::object();
  Output output;
  SolverFlags solver;
  std::string command;

  // depth
  auto* depth_cmd = app.add_subcommand("depth", "Depth values and center-outward ranks");
  std::string input, query, method, ties;
  depth_cmd->add_option("input", input, "Sample file (JSON, '-' for stdin)")->required();
  depth_cmd->add_option("--method", method, "zonoid|gdd|spatial|izonoid|igdd");
  depth_cmd->add_option("--query", query, "Matrix file; report its depth instead of the sample's");
  depth_cmd->add_option("--ties", ties, "shared|frobenius");
  add_output(depth_cmd, output);

  // center
  auto* center_cmd = app.add_subcommand("center", "Intrinsic mean or median");
  std::string type;
  center_cmd->add_option("input", input, "Sample file")->required();
  center_cmd->add_option("--type", type, "mean|median");
  solver.add(center_cmd);
  add_output(center_cmd, output);

  // cr
  auto* cr_cmd = app.add_subcommand("cr", "Bootstrap depth-based confidence region for the intrinsic mean");
  std::optional<double> alpha;
  std::optional<std::size_t> B;
  std::optional<std::uint64_t> seed;
  std::string test;
  cr_cmd->add_option("input", input, "Sample file")->required();
  cr_cmd->add_option("--alpha", alpha, "Nominal level is 1 - alpha");
  cr_cmd->add_option("--B", B, "Bootstrap replicates");
  cr_cmd->add_option("--method", method, "zonoid|gdd");
  cr_cmd->add_option("--seed", seed, "RNG seed");
  cr_cmd->add_option("--test", test, "Matrix file; report whether it lies in the region");
  solver.add(cr_cmd);
  add_output(cr_cmd, output);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Simulation experiments");
  std::string experiment, mode, direction;
  std::optional<std::size_t> n, m, d, runs, replications, repetitions, simulations;
  std::optional<double> p, contamination_norm, sigma, breakdown_norm;
  std::vector<std::string> methods, policies, sets;
  std::vector<double> alphas;
  std::vector<std::size_t> d_list, n_list;
  sim_cmd->add_option("--experiment", experiment, "breakdown|efficiency|timing|coverage")->required();
  sim_cmd->add_option("--n", n, "Sample size");
  sim_cmd->add_option("--m", m, "Number of contaminants (breakdown)");
  sim_cmd->add_option("--d", d, "Matrix dimension");
  sim_cmd->add_option("--p", p, "Shape parameter of the p-GND");
  sim_cmd->add_option("--B", B, "Bootstrap replicates (coverage)");
  sim_cmd->add_option("--seed", seed, "RNG seed");
  sim_cmd->add_option("--runs", runs, "Independent runs (breakdown)");
  sim_cmd->add_option("--replications", replications, "Replications (efficiency)");
  sim_cmd->add_option("--repetitions", repetitions, "Timed repetitions per cell (timing)");
  sim_cmd->add_option("--simulations", simulations, "Simulated data sets (coverage)");
  sim_cmd->add_option("--contamination-norm", contamination_norm, "||Log y|| of the contaminants (breakdown)");
  sim_cmd->add_option("--sigma", sigma, "Spread of the clean sample (breakdown)");
  sim_cmd->add_option("--breakdown-norm", breakdown_norm, "Rank-1 norm counted as broken; 0 = clean maximum");
  sim_cmd->add_option("--mode", mode, "replicated|adversarial (breakdown)");
  sim_cmd->add_option("--direction", direction, "canonical|random (breakdown)");
  sim_cmd->add_option("--methods", methods, "Depth methods")->delimiter(',');
  sim_cmd->add_option("--policies", policies, "Tie policies (breakdown)")->delimiter(',');
  sim_cmd->add_option("--alphas", alphas, "Levels (coverage)")->delimiter(',');
  sim_cmd->add_option("--d-list", d_list, "Dimensions (timing)")->delimiter(',');
  sim_cmd->add_option("--n-list", n_list, "Sample sizes (timing)")->delimiter(',');
  sim_cmd->add_option("--set", sets, "Extra parameter key=value (value as JSON)");
  solver.add(sim_cmd);
  add_output(sim_cmd, output);

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Regenerate a report from its params and compare");
  std::string report_path;
  replay_cmd->add_option("report", report_path, "Report file")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (threads) set_thread_count(*threads);

    if (*replay_cmd) {
      const Json report = parse_json(read_text_file(report_path));
      const auto diffs = replay_report(report);
      if (diffs.empty()) {
        out << "identical\n";
        return kExitOk;
      }
      err << "replay differs at:";
      for (const auto& ptr : diffs) err << ' ' << ptr;
      err << '\n';
      return kExitMismatch;
    }

    if (*depth_cmd) {
      command = "depth";
      params["input"] = input;
      if (!method.empty()) params["method"] = method;
      if (!ties.empty()) params["ties"] = ties;
      if (!query.empty()) params["query"] = query;
    } else if (*center_cmd) {
      command = "center";
      params["input"] = input;
      if (!type.empty()) params["type"] = type;
      solver.store(params);
    } else if (*cr_cmd) {
      command = "cr";
      params["input"] = input;
      put(params, "alpha", alpha);
      put(params, "B", B);
      put(params, "seed", seed);
      if (!method.empty()) params["method"] = method;
      if (!test.empty()) params["test"] = test;
      solver.store(params);
    } else {
      command = "simulate";
      params["experiment"] = experiment;
      put(params, "n", n);
      put(params, "m", m);
      put(params, "d", d);
      put(params, "p", p);
      put(params, "B", B);
      put(params, "seed", seed);
      put(params, "runs", runs);
      put(params, "replications", replications);
      put(params, "repetitions", repetitions);
      put(params, "simulations", simulations);
      put(params, "contamination_norm", contamination_norm);
      put(params, "sigma", sigma);
      put(params, "breakdown_norm", breakdown_norm);
      if (!mode.empty()) params["mode"] = mode;
      if (!direction.empty()) params["direction"] = direction;
      if (!methods.empty()) params["methods"] = methods;
      if (!policies.empty()) params["policies"] = policies;
      if (!alphas.empty()) params["alphas"] = alphas;
      if (!d_list.empty()) params["d_list"] = d_list;
      if (!n_list.empty()) params["n_list"] = n_list;
      for (const auto& kv : sets) apply_set(params, kv);
      solver.store(params);
    }

    const Json results = run_command(command, params);
    emit(command, params, results, output, out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << " after " << e.iterations()
        << " iterations)\n";
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace hpd
