#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoinet/harness.hpp"

namespace {

using namespace aoinet;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

std::vector<Objective> parse_objectives(const std::vector<std::string>& names) {
  std::vector<Objective> out;
  for (const std::string& n : names) {
    Objective o;
    if (!objective_from_string(n, &o))
      throw std::invalid_argument("unknown objective: " + n);
    out.push_back(o);
  }
  return out;
}

std::vector<SchedulerKind> parse_schedulers(
    const std::vector<std::string>& names) {
  std::vector<SchedulerKind> out;
  for (const std::string& n : names) {
    SchedulerKind s;
    if (!scheduler_from_string(n, &s))
      throw std::invalid_argument("unknown scheduler: " + n);
    out.push_back(s);
  }
  return out;
}

// Flags shared by the subcommands; unset optionals fall back to the file.
struct CliArgs {
  std::string scenario;
  std::string out;
  std::string format = "csv";
  std::string trace;
  std::optional<std::string> objective;
  std::optional<std::string> scheduler;
  std::vector<std::string> objectives;
  std::vector<std::string> schedulers;
  std::optional<double> lambda;
  std::vector<double> lambdas;
  std::optional<uint64_t> seed;
  std::vector<uint64_t> seeds;
  std::optional<double> duration;
  std::optional<double> warmup;
  bool declared = false;
  bool solver_only = false;
  int steps = 99;
};

ScenarioFile load_with_overrides(const CliArgs& a) {
  ScenarioFile sf = load_scenario_file(a.scenario);
  if (a.objective) {
    if (!objective_from_string(*a.objective, &sf.objective))
      throw std::invalid_argument("unknown objective: " + *a.objective);
  }
  if (a.scheduler) {
    if (!scheduler_from_string(*a.scheduler, &sf.sim.scheduler))
      throw std::invalid_argument("unknown scheduler: " + *a.scheduler);
  }
  if (a.lambda) sf.lambda = *a.lambda;
  if (a.seed) sf.sim.seed = *a.seed;
  if (a.duration) sf.sim.duration_s = *a.duration;
  if (a.warmup) sf.sim.warmup_s = *a.warmup;
  if (a.declared) sf.use_declared_rates = true;
  sf.sim.trace_path = a.trace;
  return sf;
}

int cmd_solve(const CliArgs& a) {
  ScenarioFile sf = load_with_overrides(a);
  instantiate(&sf);
  double s_lda = 1.0;
  for (const FlowSpec& f : sf.sim.flows)
    if (f.cls == FlowClass::Lda) s_lda = std::max(s_lda, f.size_bits);
  SolverDiagnostics diag;
  RateAllocation alloc = solve(sf.sim.net, sf.sim.flows, sf.objective,
                               sf.lambda, s_lda, SolverConfig{}, &diag);
  write_output(a.out,
               allocation_to_json(sf.sim.net, sf.sim.flows, alloc, diag));
  if (diag.status != SolveStatus::Optimal) {
    std::cerr << "solver did not reach optimality: " << to_string(diag.status)
              << "\n";
    return 3;
  }
  return 0;
}

int cmd_simulate(const CliArgs& a) {
  ScenarioFile sf = load_with_overrides(a);
  SweepRow row = run_cell(sf, sf.objective, sf.lambda, sf.sim.scheduler,
                          sf.sim.seed, true);
  if (a.format == "json" && row.report) {
    write_output(a.out, report_to_json(*row.report));
  } else {
    TradeoffCurve curve;
    curve.rows.push_back(row);
    write_output(a.out, a.format == "json" ? curve_to_json(curve)
                                           : curve_to_csv(curve));
  }
  if (row.status != "ok") {
    std::cerr << row.status << "\n";
    return 3;
  }
  return 0;
}

int cmd_sweep(const CliArgs& a) {
  ScenarioFile sf = load_with_overrides(a);
  SweepSpec spec;
  spec.lambdas = a.lambdas;
  spec.objectives = parse_objectives(a.objectives);
  spec.schedulers = parse_schedulers(a.schedulers);
  spec.seeds = a.seeds;
  spec.simulate = !a.solver_only;
  TradeoffCurve curve = run_sweep(sf, spec);
  write_output(a.out,
               a.format == "json" ? curve_to_json(curve) : curve_to_csv(curve));
  return 0;
}

int cmd_compare(const CliArgs& a) {
  ScenarioFile sf = load_with_overrides(a);
  std::vector<Objective> objectives =
      a.objectives.empty()
          ? std::vector<Objective>{Objective::Lac, Objective::MaxThroughput}
          : parse_objectives(a.objectives);
  std::vector<SchedulerKind> schedulers =
      a.schedulers.empty()
          ? std::vector<SchedulerKind>{SchedulerKind::Sdm,
                                       SchedulerKind::FifoBaseline}
          : parse_schedulers(a.schedulers);
  TradeoffCurve curve = run_compare(sf, sf.lambda, objectives, schedulers);
  write_output(a.out,
               a.format == "json" ? curve_to_json(curve) : curve_to_csv(curve));
  return 0;
}

int cmd_analyze(const CliArgs& a) {
  ScenarioFile sf = load_with_overrides(a);
  SingleLinkParams p = single_link_params(sf);
  write_output(a.out, analyze_gamma_csv(p, sf.lambda, a.steps));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aoinet: rate allocation and AoI-aware scheduling for wired networks"};
  app.require_subcommand(1);

  CliArgs args;
  auto add_common = [&](CLI::App* sub, bool needs_scenario = true) {
    sub->add_option("--scenario", args.scenario, "scenario JSON file")
        ->required(needs_scenario);
    sub->add_option("--out", args.out, "output path (default: stdout)");
    sub->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", args.seed, "seed override");
    sub->add_option("--duration", args.duration, "simulation length (s)");
    sub->add_option("--warmup", args.warmup, "measurement window start (s)");
    sub->add_flag("--declared-rates", args.declared,
                  "simulate declared rates instead of solving");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a rate allocation");
  add_common(solve);
  solve->add_option("--objective", args.objective,
                    "lac, max_throughput, min_aoi, lou2020");
  solve->add_option("--lambda", args.lambda, "trade-off factor");

  CLI::App* simulate =
      app.add_subcommand("simulate", "solve (or not) and run one scenario");
  add_common(simulate);
  simulate->add_option("--objective", args.objective, "allocation objective");
  simulate->add_option("--lambda", args.lambda, "trade-off factor");
  simulate->add_option("--scheduler", args.scheduler,
                       "sdm, tdm, fifo, priority_aoi, per_flow_share, "
                       "waiting_oracle");
  simulate->add_option("--trace", args.trace, "per-event trace file");

  CLI::App* sweep = app.add_subcommand("sweep", "lambda sweep");
  add_common(sweep);
  sweep->add_option("--lambda", args.lambdas, "lambda values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--objective", args.objectives, "objectives to run")
      ->delimiter(',');
  sweep->add_option("--scheduler", args.schedulers, "schedulers to run")
      ->delimiter(',');
  sweep->add_option("--seeds", args.seeds, "seed list")->delimiter(',');
  sweep->add_flag("--solver-only", args.solver_only,
                  "skip simulation, report solver predictions");

  CLI::App* compare =
      app.add_subcommand("compare", "scheduler/objective cross product");
  add_common(compare);
  compare->add_option("--lambda", args.lambda, "trade-off factor");
  compare->add_option("--objective", args.objectives,
                      "objectives (default: lac,max_throughput)")
      ->delimiter(',');
  compare->add_option("--scheduler", args.schedulers,
                      "schedulers (default: sdm,fifo)")
      ->delimiter(',');

  CLI::App* analyze =
      app.add_subcommand("analyze", "closed-form gamma grid (single link)");
  add_common(analyze);
  analyze->add_option("--lambda", args.lambda, "trade-off factor");
  analyze->add_option("--steps", args.steps, "grid points")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (compare->parsed()) return cmd_compare(args);
    if (analyze->parsed()) return cmd_analyze(args);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
