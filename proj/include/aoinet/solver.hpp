#pragma once

#include <string>
#include <vector>

#include "aoinet/net_model.hpp"

// Rate allocation solvers. All four objectives share the feasible region
//   sum_{LDA f on l} r_f + sum_{AoI f on l} mu_f * s_f <= c_l  for every l,
//   r, mu >= 0,
// and differ in the objective:
//   LAC:            max sum r_f - lambda * sum 1/(2 mu_f)
//   MaxThroughput:  max sum r_f + sum mu_f s_f   (tie broken toward the
//                   least-norm optimum, the limit of a -eps*sum x^2 term)
//   MinAoi:         min sum s_lda/(2 r_f) + sum 1/(2 mu_f)
//   Lou2020:        LDA rates pinned to 0; min sum 1/(2 mu_f) over AoI flows
// Solved with a log-barrier Newton method on the concave program.

namespace aoinet {

enum class Objective : uint8_t { Lac, MaxThroughput, MinAoi, Lou2020 };

const char* to_string(Objective o);
bool objective_from_string(const std::string& s, Objective* out);

struct SolverConfig {
  double barrier_t0 = 1.0;
  double barrier_growth = 10.0;
  double newton_tol = 1e-9;       // on half the squared Newton decrement
  int max_newton_iters = 200;     // per barrier stage
  int max_outer_iters = 40;
  double gap_tol = 1e-10;         // target duality gap (absolute, scaled)
  double tie_break_epsilon = 1e-9;
};

enum class SolveStatus : uint8_t { Optimal, IterationLimit, InvalidInput };

const char* to_string(SolveStatus s);

struct SolverDiagnostics {
  SolveStatus status = SolveStatus::Optimal;
  int outer_iterations = 0;
  int newton_iterations = 0;
  double duality_gap = 0.0;
  std::string message;
};

RateAllocation solve_lac(const Network& net, const std::vector<FlowSpec>& flows,
                         double lambda, const SolverConfig& cfg = {},
                         SolverDiagnostics* diag = nullptr);

RateAllocation solve_max_throughput(const Network& net,
                                    const std::vector<FlowSpec>& flows,
                                    const SolverConfig& cfg = {},
                                    SolverDiagnostics* diag = nullptr);

RateAllocation solve_min_aoi(const Network& net,
                             const std::vector<FlowSpec>& flows,
                             double s_lda_bits, const SolverConfig& cfg = {},
                             SolverDiagnostics* diag = nullptr);

RateAllocation solve_lou2020(const Network& net,
                             const std::vector<FlowSpec>& flows,
                             const SolverConfig& cfg = {},
                             SolverDiagnostics* diag = nullptr);

// Dispatch by objective. lambda is used by Lac, s_lda_bits by MinAoi.
RateAllocation solve(const Network& net, const std::vector<FlowSpec>& flows,
                     Objective obj, double lambda, double s_lda_bits,
                     const SolverConfig& cfg = {},
                     SolverDiagnostics* diag = nullptr);

struct LinkLoads {
  std::vector<double> lda_bps;
  std::vector<double> aoi_bps;
};

LinkLoads link_loads(const Network& net, const std::vector<FlowSpec>& flows,
                     const std::vector<double>& values);

// Worst-case AoI of flow f under the per-flow capacity-share schedule:
// (1 + 2 * hops) / (2 mu) + d_f.
double aoi_upper_bound(const Network& net, const FlowSpec& flow, double mu);

// First-order optimality check for an allocation. Duals are recovered by
// nonnegative least squares on the active links; stationarity and
// complementarity are reported as residuals, primal feasibility separately.
struct KktReport {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double feasibility = 0.0;  // capacity/nonnegativity violation

  double residual() const {
    return stationarity > complementarity ? stationarity : complementarity;
  }
};

KktReport kkt_residual(const Network& net, const std::vector<FlowSpec>& flows,
                       const RateAllocation& alloc, Objective obj,
                       double lambda, double s_lda_bits,
                       const SolverConfig& cfg = {});

std::string allocation_to_json(const Network& net,
                               const std::vector<FlowSpec>& flows,
                               const RateAllocation& alloc,
                               const SolverDiagnostics& diag);

}  // namespace aoinet
