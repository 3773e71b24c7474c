#include "aoinet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

namespace aoinet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// maximize sum_i phi_i(x_i) subject to rows a_r . x <= b_r and x >= 0.
// phi kinds: Linear coef*x, InvHalf -coef/(2x), NegQuad -coef*x^2.
enum class TermKind : uint8_t { Linear, InvHalf, NegQuad };

struct Term {
  TermKind kind = TermKind::Linear;
  double coef = 0.0;
};

struct Row {
  std::vector<std::pair<uint32_t, double>> a;
  double b = 0.0;
};

struct BarrierProblem {
  size_t n = 0;
  std::vector<Term> obj;
  std::vector<Row> rows;
};

double phi_value(const Term& t, double x) {
  switch (t.kind) {
    case TermKind::Linear:
      return t.coef * x;
    case TermKind::InvHalf:
      return -t.coef / (2.0 * x);
    case TermKind::NegQuad:
      return -t.coef * x * x;
  }
  return 0.0;
}

double phi_grad(const Term& t, double x) {
  switch (t.kind) {
    case TermKind::Linear:
      return t.coef;
    case TermKind::InvHalf:
      return t.coef / (2.0 * x * x);
    case TermKind::NegQuad:
      return -2.0 * t.coef * x;
  }
  return 0.0;
}

double phi_hess(const Term& t, double x) {
  switch (t.kind) {
    case TermKind::Linear:
      return 0.0;
    case TermKind::InvHalf:
      return -t.coef / (x * x * x);
    case TermKind::NegQuad:
      return -2.0 * t.coef;
  }
  return 0.0;
}

double objective_value(const BarrierProblem& p, const Eigen::VectorXd& x) {
  double f = 0.0;
  for (size_t i = 0; i < p.n; ++i) f += phi_value(p.obj[i], x[i]);
  return f;
}

std::vector<double> row_slacks(const BarrierProblem& p,
                               const Eigen::VectorXd& x) {
  std::vector<double> s(p.rows.size());
  for (size_t r = 0; r < p.rows.size(); ++r) {
    double ax = 0.0;
    for (auto [i, a] : p.rows[r].a) ax += a * x[i];
    s[r] = p.rows[r].b - ax;
  }
  return s;
}

// Barrier potential: -t * f(x) - sum ln(slack_r) - sum ln(x_i).
double potential(const BarrierProblem& p, const Eigen::VectorXd& x, double t) {
  for (size_t i = 0; i < p.n; ++i)
    if (!(x[i] > 0.0)) return kInf;
  double v = -t * objective_value(p, x);
  for (double s : row_slacks(p, x)) {
    if (!(s > 0.0)) return kInf;
    v -= std::log(s);
  }
  for (size_t i = 0; i < p.n; ++i) v -= std::log(x[i]);
  return v;
}

struct BarrierResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double gap = 0.0;
  int outer = 0;
  int newton = 0;
  bool converged = false;
};

BarrierResult solve_barrier(const BarrierProblem& p, Eigen::VectorXd x,
                            const SolverConfig& cfg) {
  BarrierResult res;
  const size_t n = p.n;
  const size_t m = p.rows.size();
  double t = cfg.barrier_t0;

  Eigen::VectorXd g(n), d(n);
  Eigen::MatrixXd H(n, n);

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    ++res.outer;
    for (int it = 0; it < cfg.max_newton_iters; ++it) {
      auto slacks = row_slacks(p, x);
      g.setZero();
      H.setZero();
      for (size_t i = 0; i < n; ++i) {
        g[i] = -t * phi_grad(p.obj[i], x[i]) - 1.0 / x[i];
        H(i, i) = -t * phi_hess(p.obj[i], x[i]) + 1.0 / (x[i] * x[i]);
      }
      for (size_t r = 0; r < m; ++r) {
        double inv = 1.0 / slacks[r];
        for (auto [i, a] : p.rows[r].a) {
          g[i] += a * inv;
          for (auto [j, aj] : p.rows[r].a) H(i, j) += a * aj * inv * inv;
        }
      }
      d = H.ldlt().solve(-g);
      double decrement2 = -g.dot(d);
      if (!(decrement2 > 0.0)) break;  // numerical floor
      ++res.newton;
      if (decrement2 / 2.0 <= cfg.newton_tol) break;

      // longest feasible step, then backtrack on the potential
      double alpha = 1.0;
      for (size_t i = 0; i < n; ++i)
        if (d[i] < 0.0) alpha = std::min(alpha, -0.99 * x[i] / d[i]);
      for (size_t r = 0; r < m; ++r) {
        double ad = 0.0;
        for (auto [i, a] : p.rows[r].a) ad += a * d[i];
        if (ad > 0.0) alpha = std::min(alpha, 0.99 * slacks[r] / ad);
      }
      double f0 = potential(p, x, t);
      double gd = g.dot(d);
      int bt = 0;
      while (bt < 80) {
        double f1 = potential(p, x + alpha * d, t);
        if (f1 <= f0 + 0.25 * alpha * gd) break;
        alpha *= 0.5;
        ++bt;
      }
      if (bt >= 80 || alpha < 1e-18) break;
      x += alpha * d;
    }
    res.gap = static_cast<double>(m + n) / t;
    double scale = 1.0 + std::abs(objective_value(p, x));
    if (res.gap <= cfg.gap_tol * scale) {
      res.converged = true;
      break;
    }
    t *= cfg.barrier_growth;
  }
  res.x = std::move(x);
  res.objective = objective_value(p, res.x);
  return res;
}

// Capacity rows for the given subset of flows (one variable per flow in
// `vars`). Coefficient is 1 for LDA rate variables, s_f for AoI frequencies.
BarrierProblem capacity_problem(const Network& net,
                                const std::vector<FlowSpec>& flows,
                                const std::vector<FlowIdx>& vars) {
  BarrierProblem p;
  p.n = vars.size();
  p.obj.resize(p.n);
  std::vector<Row> rows(net.links.size());
  for (size_t l = 0; l < net.links.size(); ++l)
    rows[l].b = net.links[l].capacity_bps;
  for (uint32_t v = 0; v < vars.size(); ++v) {
    const FlowSpec& f = flows[vars[v]];
    double w = f.cls == FlowClass::Lda ? 1.0 : f.size_bits;
    for (LinkIdx l : f.path) rows[l].a.emplace_back(v, w);
  }
  // keep only constrained rows
  for (auto& r : rows)
    if (!r.a.empty()) p.rows.push_back(std::move(r));
  return p;
}

Eigen::VectorXd interior_start(const BarrierProblem& p) {
  // x_i = min over rows of b_r / (2 * nnz_r * a_ri): every row then sums to
  // at most b_r / 2. Requires positive coefficients (capacity rows).
  Eigen::VectorXd x(p.n);
  x.setConstant(kInf);
  for (const Row& r : p.rows) {
    for (auto [i, a] : r.a) {
      double cap = r.b / (2.0 * static_cast<double>(r.a.size()) * a);
      x[i] = std::min(x[i], cap);
    }
  }
  for (size_t i = 0; i < p.n; ++i)
    if (!std::isfinite(x[i])) x[i] = 1.0;  // unconstrained variable
  return x;
}

void check_inputs(const Network& net, const std::vector<FlowSpec>& flows) {
  auto violations = validate_network(net, flows);
  if (!violations.empty())
    throw std::invalid_argument("invalid input: " + violations.front());
}

RateAllocation build_alloc(const Network& net,
                           const std::vector<FlowSpec>& flows,
                           const std::vector<FlowIdx>& vars,
                           const Eigen::VectorXd& x) {
  RateAllocation alloc;
  alloc.value.assign(flows.size(), 0.0);
  for (uint32_t v = 0; v < vars.size(); ++v) alloc.value[vars[v]] = x[v];
  alloc.finalize(net, flows);
  return alloc;
}

void fill_diag(SolverDiagnostics* diag, const BarrierResult& r,
               const std::string& msg = "") {
  if (!diag) return;
  diag->status = r.converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  diag->outer_iterations = r.outer;
  diag->newton_iterations = r.newton;
  diag->duality_gap = r.gap;
  diag->message = msg;
}

}  // namespace

const char* to_string(Objective o) {
  switch (o) {
    case Objective::Lac:
      return "lac";
    case Objective::MaxThroughput:
      return "max_throughput";
    case Objective::MinAoi:
      return "min_aoi";
    case Objective::Lou2020:
      return "lou2020";
  }
  return "?";
}

bool objective_from_string(const std::string& s, Objective* out) {
  if (s == "lac")
    *out = Objective::Lac;
  else if (s == "max_throughput")
    *out = Objective::MaxThroughput;
  else if (s == "min_aoi")
    *out = Objective::MinAoi;
  else if (s == "lou2020")
    *out = Objective::Lou2020;
  else
    return false;
  return true;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::IterationLimit:
      return "iteration_limit";
    case SolveStatus::InvalidInput:
      return "invalid_input";
  }
  return "?";
}

RateAllocation solve_lac(const Network& net, const std::vector<FlowSpec>& flows,
                         double lambda, const SolverConfig& cfg,
                         SolverDiagnostics* diag) {
  check_inputs(net, flows);
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");

  std::vector<FlowIdx> vars;
  for (FlowIdx f = 0; f < flows.size(); ++f) {
    if (flows[f].cls == FlowClass::Lda || lambda > 0.0) vars.push_back(f);
    // lambda == 0: AoI terms vanish from the objective; pin mu to 0.
  }
  BarrierProblem p = capacity_problem(net, flows, vars);
  for (uint32_t v = 0; v < vars.size(); ++v) {
    if (flows[vars[v]].cls == FlowClass::Lda)
      p.obj[v] = {TermKind::Linear, 1.0};
    else
      p.obj[v] = {TermKind::InvHalf, lambda};
  }
  BarrierResult r = solve_barrier(p, interior_start(p), cfg);
  fill_diag(diag, r);
  RateAllocation alloc = build_alloc(net, flows, vars, r.x);
  alloc.lambda = lambda;
  alloc.objective = r.objective;
  return alloc;
}

RateAllocation solve_max_throughput(const Network& net,
                                    const std::vector<FlowSpec>& flows,
                                    const SolverConfig& cfg,
                                    SolverDiagnostics* diag) {
  check_inputs(net, flows);
  std::vector<FlowIdx> vars(flows.size());
  for (FlowIdx f = 0; f < flows.size(); ++f) vars[f] = f;

  // Phase 1: throughput LP value.
  BarrierProblem p1 = capacity_problem(net, flows, vars);
  std::vector<double> w(vars.size());
  for (uint32_t v = 0; v < vars.size(); ++v) {
    w[v] = flows[vars[v]].cls == FlowClass::Lda ? 1.0 : flows[vars[v]].size_bits;
    p1.obj[v] = {TermKind::Linear, w[v]};
  }
  BarrierResult r1 = solve_barrier(p1, interior_start(p1), cfg);

  // Phase 2: least-norm point of the (near-)optimal face. This is the limit
  // of the -tie_break_epsilon * sum x^2 regularizer, resolved exactly instead
  // of pushing the barrier parameter far past double precision.
  double vhat = 0.0;
  for (uint32_t v = 0; v < vars.size(); ++v) vhat += w[v] * r1.x[v];
  double delta = 1e-7 * std::max(1.0, std::abs(vhat));

  BarrierProblem p2 = capacity_problem(net, flows, vars);
  for (uint32_t v = 0; v < vars.size(); ++v) p2.obj[v] = {TermKind::NegQuad, 1.0};
  Row thr;
  for (uint32_t v = 0; v < vars.size(); ++v) thr.a.emplace_back(v, -w[v]);
  thr.b = -(vhat - delta);
  p2.rows.push_back(std::move(thr));

  BarrierResult r2 = solve_barrier(p2, r1.x, cfg);
  r2.outer += r1.outer;
  r2.newton += r1.newton;
  r2.converged = r1.converged && r2.converged;
  fill_diag(diag, r2);

  RateAllocation alloc = build_alloc(net, flows, vars, r2.x);
  double thr_final = 0.0;
  for (uint32_t v = 0; v < vars.size(); ++v) thr_final += w[v] * r2.x[v];
  alloc.objective = thr_final;
  return alloc;
}

namespace {

RateAllocation solve_inv_objective(const Network& net,
                                   const std::vector<FlowSpec>& flows,
                                   const std::vector<FlowIdx>& vars,
                                   const std::vector<double>& beta,
                                   const SolverConfig& cfg,
                                   SolverDiagnostics* diag) {
  BarrierProblem p = capacity_problem(net, flows, vars);
  for (uint32_t v = 0; v < vars.size(); ++v)
    p.obj[v] = {TermKind::InvHalf, beta[v]};
  BarrierResult r = solve_barrier(p, interior_start(p), cfg);
  fill_diag(diag, r);
  RateAllocation alloc = build_alloc(net, flows, vars, r.x);
  alloc.objective = -r.objective;  // report the minimized AoI sum
  return alloc;
}

}  // namespace

RateAllocation solve_min_aoi(const Network& net,
                             const std::vector<FlowSpec>& flows,
                             double s_lda_bits, const SolverConfig& cfg,
                             SolverDiagnostics* diag) {
  check_inputs(net, flows);
  if (!(s_lda_bits > 0.0))
    throw std::invalid_argument("min_aoi: s_lda_bits must be positive");
  std::vector<FlowIdx> vars(flows.size());
  std::vector<double> beta(flows.size());
  for (FlowIdx f = 0; f < flows.size(); ++f) {
    vars[f] = f;
    beta[f] = flows[f].cls == FlowClass::Lda ? s_lda_bits : 1.0;
  }
  return solve_inv_objective(net, flows, vars, beta, cfg, diag);
}

RateAllocation solve_lou2020(const Network& net,
                             const std::vector<FlowSpec>& flows,
                             const SolverConfig& cfg,
                             SolverDiagnostics* diag) {
  check_inputs(net, flows);
  std::vector<FlowIdx> vars;
  for (FlowIdx f = 0; f < flows.size(); ++f)
    if (flows[f].cls == FlowClass::Aoi) vars.push_back(f);
  std::vector<double> beta(vars.size(), 1.0);
  return solve_inv_objective(net, flows, vars, beta, cfg, diag);
}

RateAllocation solve(const Network& net, const std::vector<FlowSpec>& flows,
                     Objective obj, double lambda, double s_lda_bits,
                     const SolverConfig& cfg, SolverDiagnostics* diag) {
  switch (obj) {
    case Objective::Lac:
      return solve_lac(net, flows, lambda, cfg, diag);
    case Objective::MaxThroughput:
      return solve_max_throughput(net, flows, cfg, diag);
    case Objective::MinAoi:
      return solve_min_aoi(net, flows, s_lda_bits, cfg, diag);
    case Objective::Lou2020:
      return solve_lou2020(net, flows, cfg, diag);
  }
  throw std::invalid_argument("unknown objective");
}

LinkLoads link_loads(const Network& net, const std::vector<FlowSpec>& flows,
                     const std::vector<double>& values) {
  LinkLoads ll;
  ll.lda_bps.assign(net.links.size(), 0.0);
  ll.aoi_bps.assign(net.links.size(), 0.0);
  for (size_t f = 0; f < flows.size(); ++f) {
    for (LinkIdx l : flows[f].path) {
      if (flows[f].cls == FlowClass::Lda)
        ll.lda_bps[l] += values[f];
      else
        ll.aoi_bps[l] += values[f] * flows[f].size_bits;
    }
  }
  return ll;
}

double aoi_upper_bound(const Network& net, const FlowSpec& flow, double mu) {
  if (!(mu > 0.0)) return kInf;
  double hops = static_cast<double>(flow.path.size());
  return (1.0 + 2.0 * hops) / (2.0 * mu) + propagation_delay(net, flow.path);
}

namespace {

// Objective gradient in maximization form; infinite entries flag points where
// stationarity cannot hold (pole at zero with positive weight).
double obj_gradient(Objective obj, const FlowSpec& f, double x, double lambda,
                    double s_lda_bits, double eps) {
  bool lda = f.cls == FlowClass::Lda;
  switch (obj) {
    case Objective::Lac:
      if (lda) return 1.0;
      if (lambda == 0.0) return 0.0;
      return x > 0.0 ? lambda / (2.0 * x * x) : kInf;
    case Objective::MaxThroughput:
      return (lda ? 1.0 : f.size_bits) - 2.0 * eps * x;
    case Objective::MinAoi: {
      double beta = lda ? s_lda_bits : 1.0;
      return x > 0.0 ? beta / (2.0 * x * x) : kInf;
    }
    case Objective::Lou2020:
      if (lda) return 0.0;  // pinned variable, objective does not see it
      return x > 0.0 ? 1.0 / (2.0 * x * x) : kInf;
  }
  return 0.0;
}

}  // namespace

KktReport kkt_residual(const Network& net, const std::vector<FlowSpec>& flows,
                       const RateAllocation& alloc, Objective obj,
                       double lambda, double s_lda_bits,
                       const SolverConfig& cfg) {
  KktReport rep;
  const size_t nf = flows.size();
  const size_t nl = net.links.size();
  LinkLoads ll = link_loads(net, flows, alloc.value);

  for (size_t l = 0; l < nl; ++l) {
    double load = ll.lda_bps[l] + ll.aoi_bps[l];
    rep.feasibility =
        std::max(rep.feasibility, load - net.links[l].capacity_bps);
  }
  for (size_t f = 0; f < nf; ++f)
    rep.feasibility = std::max(rep.feasibility, -alloc.value[f]);
  rep.feasibility = std::max(rep.feasibility, 0.0);

  std::vector<double> grad(nf);
  std::vector<bool> interior(nf);
  double xscale = 0.0;
  for (size_t f = 0; f < nf; ++f) xscale = std::max(xscale, alloc.value[f]);
  double bound_tol = 1e-9 * (1.0 + xscale);
  for (size_t f = 0; f < nf; ++f) {
    interior[f] = alloc.value[f] > bound_tol;
    grad[f] = obj_gradient(obj, flows[f], alloc.value[f], lambda, s_lda_bits,
                           cfg.tie_break_epsilon);
    if (interior[f] && !std::isfinite(grad[f])) {
      rep.stationarity = kInf;
      return rep;
    }
  }

  // Active links, restricted to those appearing in some interior variable's
  // stationarity equation; all others take dual 0.
  std::vector<int> active_col(nl, -1);
  std::vector<size_t> active;
  for (size_t l = 0; l < nl; ++l) {
    double slack =
        net.links[l].capacity_bps - (ll.lda_bps[l] + ll.aoi_bps[l]);
    if (slack <= 1e-7 * (1.0 + net.links[l].capacity_bps)) {
      active_col[l] = static_cast<int>(active.size());
      active.push_back(l);
    }
  }

  std::vector<size_t> eq_vars;
  for (size_t f = 0; f < nf; ++f)
    if (interior[f]) eq_vars.push_back(f);

  std::vector<double> nu(nl, 0.0);
  if (!active.empty() && !eq_vars.empty()) {
    // Least squares for duals on active links; re-solve with negative duals
    // dropped until all remaining are nonnegative.
    std::vector<bool> in_set(active.size(), true);
    for (size_t pass = 0; pass <= active.size(); ++pass) {
      std::vector<int> col(active.size(), -1);
      int ncols = 0;
      for (size_t k = 0; k < active.size(); ++k)
        if (in_set[k]) col[k] = ncols++;
      if (ncols == 0) break;
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(eq_vars.size(), ncols);
      Eigen::VectorXd b(eq_vars.size());
      for (size_t r = 0; r < eq_vars.size(); ++r) {
        size_t f = eq_vars[r];
        double wf = flows[f].cls == FlowClass::Lda ? 1.0 : flows[f].size_bits;
        for (LinkIdx l : flows[f].path) {
          if (active_col[l] >= 0 && in_set[active_col[l]])
            A(r, col[active_col[l]]) += wf;
        }
        b[r] = grad[f];
      }
      Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
      bool any_negative = false;
      for (size_t k = 0; k < active.size(); ++k) {
        if (!in_set[k]) continue;
        if (sol[col[k]] < 0.0) {
          in_set[k] = false;
          any_negative = true;
        }
      }
      if (!any_negative) {
        for (size_t k = 0; k < active.size(); ++k)
          nu[active[k]] = in_set[k] ? sol[col[k]] : 0.0;
        break;
      }
    }
  }

  for (size_t f = 0; f < nf; ++f) {
    double wf = flows[f].cls == FlowClass::Lda ? 1.0 : flows[f].size_bits;
    double dual_sum = 0.0;
    for (LinkIdx l : flows[f].path) dual_sum += nu[l] * wf;
    double resid = grad[f] - dual_sum;
    if (interior[f])
      rep.stationarity = std::max(rep.stationarity, std::abs(resid));
    else if (std::isfinite(grad[f]))
      // bound variable: multiplier sigma = dual_sum - grad must be >= 0
      rep.stationarity = std::max(rep.stationarity, std::max(0.0, resid));
  }
  for (size_t l = 0; l < nl; ++l) {
    double slack =
        std::max(0.0, net.links[l].capacity_bps - (ll.lda_bps[l] + ll.aoi_bps[l]));
    rep.complementarity = std::max(rep.complementarity, nu[l] * slack);
  }
  return rep;
}

std::string allocation_to_json(const Network& net,
                               const std::vector<FlowSpec>& flows,
                               const RateAllocation& alloc,
                               const SolverDiagnostics& diag) {
  nlohmann::json j;
  j["objective_value"] = alloc.objective;
  j["lambda"] = alloc.lambda;
  j["status"] = to_string(diag.status);
  j["iterations"] = {{"outer", diag.outer_iterations},
                     {"newton", diag.newton_iterations}};
  j["duality_gap"] = diag.duality_gap;
  j["flows"] = nlohmann::json::array();
  for (size_t f = 0; f < flows.size(); ++f) {
    nlohmann::json jf = {{"id", flows[f].id},
                         {"class", to_string(flows[f].cls)}};
    if (flows[f].cls == FlowClass::Lda)
      jf["rate_bps"] = alloc.value[f];
    else
      jf["freq_hz"] = alloc.value[f];
    j["flows"].push_back(std::move(jf));
  }
  j["links"] = nlohmann::json::array();
  for (size_t l = 0; l < net.links.size(); ++l)
    j["links"].push_back({{"id", net.links[l].id},
                          {"lda_load_bps", alloc.lda_load_bps[l]},
                          {"aoi_load_bps", alloc.aoi_load_bps[l]},
                          {"gamma", alloc.gamma[l]}});
  return j.dump(2);
}

}  // namespace aoinet
