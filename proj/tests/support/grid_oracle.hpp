#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "aoinet/net_model.hpp"

// Brute-force reference optimizer for small allocation instances (used only
// by tests). Every objective we check is separable and strictly increasing in
// each coordinate, so given the outer variables the last one sits exactly on
// its feasibility boundary. The outer variables scan a fixed lattice plus the
// exact boundary point, the innermost is eliminated in closed form.

namespace gridoracle {

inline double link_coef(const aoinet::FlowSpec& f) {
  return f.cls == aoinet::FlowClass::Lda ? 1.0 : f.size_bits;
}

// Maximizes value(x) over the capacity polytope {x >= 0, A x <= c} spanned by
// `vars` (flow indices; pinned flows are simply absent). `value` receives the
// candidate in vars order and may return -inf to reject a point.
inline double grid_max(const aoinet::Network& net,
                       const std::vector<aoinet::FlowSpec>& flows,
                       const std::vector<aoinet::FlowIdx>& vars,
                       double step,
                       const std::function<double(const std::vector<double>&)>& value) {
  const double kInf = std::numeric_limits<double>::infinity();
  size_t n = vars.size();
  if (n == 0) return value({});

  size_t nl = net.links.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(nl, 0.0));
  for (size_t v = 0; v < n; ++v) {
    const aoinet::FlowSpec& f = flows[vars[v]];
    for (aoinet::LinkIdx l : f.path) a[v][l] += link_coef(f);
  }

  std::vector<double> x(n, 0.0);
  double best = -kInf;

  auto var_max = [&](size_t v, const std::vector<double>& residual) {
    double m = kInf;
    for (size_t l = 0; l < nl; ++l)
      if (a[v][l] > 0.0) m = std::min(m, residual[l] / a[v][l]);
    return m;
  };

  std::function<void(size_t, std::vector<double>)> rec =
      [&](size_t v, std::vector<double> residual) {
        double xmax = var_max(v, residual);
        if (xmax < 0.0) return;  // outer combination already infeasible
        if (v + 1 == n) {
          x[v] = xmax;  // monotone objective: boundary is optimal
          best = std::max(best, value(x));
          return;
        }
        for (uint64_t k = 0;; ++k) {
          double cand = static_cast<double>(k) * step;
          bool last = cand >= xmax;
          if (last) cand = xmax;
          x[v] = cand;
          std::vector<double> next = residual;
          for (size_t l = 0; l < nl; ++l) next[l] -= a[v][l] * cand;
          rec(v + 1, std::move(next));
          if (last) break;
        }
      };

  std::vector<double> caps(nl);
  for (size_t l = 0; l < nl; ++l) caps[l] = net.links[l].capacity_bps;
  rec(0, std::move(caps));
  return best;
}

// Reference LAC value: max sum r_f - lambda * sum 1/(2 mu_f). With lambda == 0
// the AoI variables are excluded entirely (they are pinned to zero).
inline double lac_value(const aoinet::Network& net,
                        const std::vector<aoinet::FlowSpec>& flows,
                        double lambda, double step = 1e-3) {
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<aoinet::FlowIdx> vars;
  for (aoinet::FlowIdx f = 0; f < flows.size(); ++f)
    if (flows[f].cls == aoinet::FlowClass::Lda || lambda > 0.0)
      vars.push_back(f);
  return grid_max(net, flows, vars, step, [&](const std::vector<double>& x) {
    double v = 0.0;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (flows[vars[i]].cls == aoinet::FlowClass::Lda) {
        v += x[i];
      } else {
        if (!(x[i] > 0.0)) return -kInf;
        v -= lambda / (2.0 * x[i]);
      }
    }
    return v;
  });
}

// Reference MinAoI cost: min sum s_lda/(2 r_f) + sum 1/(2 mu_f).
inline double min_aoi_value(const aoinet::Network& net,
                            const std::vector<aoinet::FlowSpec>& flows,
                            double s_lda_bits, double step = 1e-3) {
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<aoinet::FlowIdx> vars(flows.size());
  for (aoinet::FlowIdx f = 0; f < flows.size(); ++f) vars[f] = f;
  double best = grid_max(net, flows, vars, step,
                         [&](const std::vector<double>& x) {
                           double cost = 0.0;
                           for (size_t i = 0; i < vars.size(); ++i) {
                             if (!(x[i] > 0.0)) return -kInf;
                             double beta = flows[vars[i]].cls ==
                                                   aoinet::FlowClass::Lda
                                               ? s_lda_bits
                                               : 1.0;
                             cost += beta / (2.0 * x[i]);
                           }
                           return -cost;
                         });
  return -best;
}

}  // namespace gridoracle
