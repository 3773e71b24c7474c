#pragma once

// Closed-form throughput and AoI for a single link shared by one periodic
// AoI flow (inter-arrival T_i, per-update transmission delay d_t, propagation
// d_p) and saturating LDA traffic modeled as fluid, under the TDM and SDM
// schedulers with AoI ratio gamma. Also the optimal gamma for a normalized
// throughput/AoI trade-off objective.

namespace aoinet {

struct SingleLinkParams {
  double capacity_bps = 1.0;  // C
  double ti_s = 1.0;          // AoI inter-arrival time
  double dt_s = 0.1;          // AoI transmission delay
  double dp_s = 0.0;          // propagation delay
  double frame_s = 1.0;       // TDM frame T_f
  double gamma = 0.5;         // AoI capacity share
};

double tdm_throughput(const SingleLinkParams& p);
double tdm_aoi(const SingleLinkParams& p);
double sdm_throughput(const SingleLinkParams& p);
double sdm_aoi(const SingleLinkParams& p);

// argmax of tradeoff_objective over gamma, clamped to [0, 1].
double optimal_gamma_tdm(double lambda, double ti_s, double dt_s,
                         double frame_s);
double optimal_gamma_sdm(double lambda);

// throughput/C - lambda * aoi/(d_t/2): both terms normalized by their best
// achievable single-link values.
double tradeoff_objective(double throughput_bps, double aoi_s,
                          double capacity_bps, double dt_s, double lambda);

// Worst-case AoI excess of IFIL over the optimal (waiting) policy.
double ifil_gap_bound(double ti_s);

// Service period of the waiting policy: smallest multiple of T_i >= d_t.
double waiting_oracle_period(double ti_s, double dt_s);

// Parameter regions where the closed forms track the packet-level system:
// SDM needs its effective output period d_t/gamma >= T_i; TDM needs the AoI
// phase to fit at least one update per frame and updates faster than frames.
bool sdm_regime_ok(const SingleLinkParams& p);
bool tdm_regime_ok(const SingleLinkParams& p);

}  // namespace aoinet
