#include "aoinet/closed_form.hpp"

#include <algorithm>
#include <cmath>

namespace aoinet {

double tdm_throughput(const SingleLinkParams& p) {
  double a = 1.0 - (p.dt_s / p.ti_s) * p.gamma;
  double b = (1.0 - p.dt_s / p.ti_s) * (p.dt_s / p.frame_s);
  return p.capacity_bps * (a - b);
}

double tdm_aoi(const SingleLinkParams& p) {
  double lda_phase = (1.0 - p.gamma) * p.frame_s + p.dt_s;
  return lda_phase * lda_phase / (2.0 * p.frame_s) + p.ti_s / 2.0 + p.dt_s +
         p.dp_s;
}

double sdm_throughput(const SingleLinkParams& p) {
  return p.capacity_bps * (1.0 - p.gamma);
}

double sdm_aoi(const SingleLinkParams& p) {
  return 0.5 * (p.dt_s / p.gamma + p.ti_s) + p.dt_s + p.dp_s;
}

double optimal_gamma_tdm(double lambda, double ti_s, double dt_s,
                         double frame_s) {
  double g = 1.0 + dt_s / frame_s - dt_s * dt_s / (2.0 * lambda * frame_s * ti_s);
  return std::clamp(g, 0.0, 1.0);
}

double optimal_gamma_sdm(double lambda) {
  return std::clamp(std::sqrt(lambda), 0.0, 1.0);
}

double tradeoff_objective(double throughput_bps, double aoi_s,
                          double capacity_bps, double dt_s, double lambda) {
  return throughput_bps / capacity_bps - lambda * aoi_s / (dt_s / 2.0);
}

double ifil_gap_bound(double ti_s) { return ti_s / 2.0; }

double waiting_oracle_period(double ti_s, double dt_s) {
  // ceil with a relative guard so exact multiples stay exact under FP.
  double k = std::ceil(dt_s / ti_s - 1e-9);
  return ti_s * std::max(1.0, k);
}

bool sdm_regime_ok(const SingleLinkParams& p) {
  if (p.gamma <= 0.0 || p.gamma > 1.0) return false;
  return p.dt_s / p.gamma >= p.ti_s;
}

bool tdm_regime_ok(const SingleLinkParams& p) {
  if (p.gamma <= 0.0 || p.gamma >= 1.0) return false;
  if (p.frame_s < p.ti_s) return false;
  return p.gamma * p.frame_s >= p.dt_s && p.dt_s <= p.ti_s;
}

}  // namespace aoinet
