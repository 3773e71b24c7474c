#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoinet/closed_form.hpp"
#include "aoinet/net_model.hpp"
#include "aoinet/sim.hpp"
#include "aoinet/solver.hpp"

// Experiment harness: scenario files, generated traffic patterns, lambda
// sweeps and scheduler comparisons, CSV/JSON emission.

namespace aoinet {

// Random traffic pattern: every ordered node pair independently hosts an LDA
// flow with probability lda_pair_prob and an AoI flow with probability
// aoi_pair_prob, routed along shortest paths. Rates are left to the solver.
struct TrafficTemplate {
  double lda_pair_prob = 0.1;
  double aoi_pair_prob = 0.1;
  double lda_size_bits = 0.0;
  double aoi_size_bits = 0.0;
  double phase_jitter_s = 0.0;  // phases drawn uniformly from [0, jitter)
};

std::vector<FlowSpec> generate_traffic(const Network& net,
                                       const TrafficTemplate& tmpl,
                                       uint64_t seed);

// A scenario file bundles a topology, flows (explicit or generated), the
// optimization objective, and simulation settings.
struct ScenarioFile {
  Topology topo;
  Scenario sim;  // net/flows are filled from topo before each run
  Objective objective = Objective::Lac;
  double lambda = 0.125;
  bool use_declared_rates = false;  // skip the solver, run declared rate/freq
  std::optional<TrafficTemplate> traffic;
};

ScenarioFile load_scenario_json(const std::string& text);
ScenarioFile load_scenario_file(const std::string& path);

// Applies the traffic template (if any) using the scenario seed and copies
// the topology into the sim scenario. Call before solving or simulating.
void instantiate(ScenarioFile* sf);

// Solver-side predictions for an allocation: sum of assigned LDA rates and
// sum over AoI flows of 1/(2 mu_f) + p_f (infinite when mu_f == 0).
double predicted_lda_throughput(const std::vector<FlowSpec>& flows,
                                const RateAllocation& alloc);
double predicted_total_aoi(const Network& net,
                           const std::vector<FlowSpec>& flows,
                           const RateAllocation& alloc);

struct SweepRow {
  Objective objective = Objective::Lac;
  double lambda = 0.0;
  SchedulerKind scheduler = SchedulerKind::Sdm;
  uint64_t seed = 0;
  double total_lda_throughput_bps = 0.0;
  double total_aoi_s = 0.0;
  std::string status = "ok";  // or "failed: <reason>"
  std::optional<RateAllocation> alloc;
  std::optional<SimReport> report;
};

struct TradeoffCurve {
  std::vector<SweepRow> rows;  // sorted by (objective, lambda, scheduler, seed)
};

struct SweepSpec {
  std::vector<Objective> objectives;      // empty: scenario objective
  std::vector<double> lambdas;            // must be non-empty
  std::vector<SchedulerKind> schedulers;  // empty: scenario scheduler
  std::vector<uint64_t> seeds;            // empty: scenario seed
  bool simulate = true;  // false: report solver predictions only
};

// Runs one (objective, lambda, scheduler, seed) cell: solve, then simulate
// (unless simulate is false), then measure. Failures are folded into the row
// status instead of thrown.
SweepRow run_cell(const ScenarioFile& sf, Objective obj, double lambda,
                  SchedulerKind sched, uint64_t seed, bool simulate);

// Cross product of the spec lists, one row per cell.
TradeoffCurve run_sweep(const ScenarioFile& sf, const SweepSpec& spec);

// Scheduler/objective cross product at a single lambda on an identical
// traffic pattern, so row differences are attributable to policy.
TradeoffCurve run_compare(const ScenarioFile& sf, double lambda,
                          const std::vector<Objective>& objectives,
                          const std::vector<SchedulerKind>& schedulers);

std::string curve_to_csv(const TradeoffCurve& curve);
std::string curve_to_json(const TradeoffCurve& curve);

// Closed-form gamma grid for a single-link instance:
// gamma,tdm_throughput_bps,tdm_aoi_s,sdm_throughput_bps,sdm_aoi_s,objective
// (objective is the normalized trade-off evaluated on the SDM pair).
std::string analyze_gamma_csv(const SingleLinkParams& base, double lambda,
                              int steps);

// Single-link parameters implied by a one-link, one-AoI-flow scenario.
SingleLinkParams single_link_params(const ScenarioFile& sf);

}  // namespace aoinet
