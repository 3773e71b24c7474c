#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoinet/aaq.hpp"
#include "aoinet/net_model.hpp"

// Deterministic discrete-event simulator. Store-and-forward: a packet is
// serialized onto a link for size/capacity seconds, then propagates for the
// link latency and is enqueued at the next hop. Events at equal timestamps
// are ordered by (node, kind, flow, seq) with generations/arrivals sorting
// before transmit completions, so a packet arriving exactly when the link
// frees is eligible for that transmission slot.

namespace aoinet {

enum class SchedulerKind : uint8_t {
  Sdm,            // AAQ with size-driven multiplexing
  Tdm,            // AAQ with time-division multiplexing
  FifoBaseline,   // one shared tail-drop FIFO, no classification
  PriorityAoi,    // AAQ with strict AoI-first priority
  PerFlowShare,   // fluid per-flow capacity shares (analysis oracle)
  WaitingOracle,  // AoI sends gated to a fixed period grid (analysis oracle)
};

const char* to_string(SchedulerKind k);
bool scheduler_from_string(const std::string& s, SchedulerKind* out);

enum class LdaSourceMode : uint8_t {
  Paced,   // fixed-size packets emitted periodically at the assigned rate
  Greedy,  // keeps the first-hop LDA subqueue backlogged
};

struct Scenario {
  Network net;
  std::vector<FlowSpec> flows;
  std::optional<RateAllocation> alloc;  // overrides declared rate/freq
  SchedulerKind scheduler = SchedulerKind::Sdm;
  LdaSourceMode lda_mode = LdaSourceMode::Paced;
  double tdm_frame_s = 1.0;
  double duration_s = 100.0;
  double warmup_s = -1.0;  // < 0: max(10% of duration, flow's first delivery)
  uint64_t seed = 1;       // metadata; the engine itself is deterministic
  double fifo_capacity_packets = 100.0;
  bool ifil_move_to_back = false;
  bool debug_checks = false;  // run conservation/causality audits
  std::string trace_path;     // per-event text trace when non-empty
};

struct DeliveryRecord {
  double time_s = 0.0;
  double gen_s = 0.0;
};

struct FlowReport {
  std::string id;
  FlowClass cls = FlowClass::Lda;
  double rate_assigned = 0.0;  // r (bps) or mu (Hz)
  uint64_t generated = 0;
  uint64_t delivered = 0;
  uint64_t dropped = 0;
  uint64_t replaced = 0;
  double throughput_bps = 0.0;
  double aoi_s = 0.0;  // +inf when starved
  double u_avg = 0.0, p_avg = 0.0, q_avg = 0.0;
  double window_start_s = 0.0;
  bool starved = false;
};

struct LinkReport {
  std::string id;
  double tx_bits_lda = 0.0;  // inside the measurement window
  double tx_bits_aoi = 0.0;
  double busy_lda_s = 0.0;
  double busy_aoi_s = 0.0;
  double gamma_achieved = 1.0;  // AoI share of transmitted bits
};

struct SimReport {
  std::vector<FlowReport> flows;
  std::vector<LinkReport> links;
  double duration_s = 0.0;
  double warmup_s = 0.0;  // global window start used for link stats
  uint64_t seed = 0;
  uint64_t events = 0;
  SchedulerKind scheduler = SchedulerKind::Sdm;
  double total_lda_throughput_bps = 0.0;
  double total_aoi_s = 0.0;  // sum over AoI flows, +inf if any starved
};

// Runs the scenario to completion. Throws std::invalid_argument on structural
// problems (invalid network, zero-frequency AoI flow with traffic, LDA flows
// under WaitingOracle, zero-share flow under PerFlowShare).
SimReport run(const Scenario& sc);

// Time-average age over [w0, w1) from a delivery log (records need not be
// deduplicated; stale deliveries are ignored). Before the first delivery the
// age is measured from age_origin (the flow's first generation instant).
// Throws std::runtime_error if there are no deliveries before w1 or the
// window is empty.
double measure_aoi(const std::vector<DeliveryRecord>& log, double age_origin_s,
                   double w0_s, double w1_s);

// Delivered payload rate over [w0, w1), counting deliveries in the window.
double measure_throughput(const std::vector<DeliveryRecord>& log,
                          double size_bits, double w0_s, double w1_s);

struct AgeDecomposition {
  double u = 0.0;  // 1/(2 mu): sampling staleness
  double p = 0.0;  // path delay d_f + sum size/c_l
  double q = 0.0;  // residual: queueing/scheduling
};

AgeDecomposition decompose_age(double aoi_s, double mu_hz, double path_delay_s);

// Event sequence helpers, exposed for tests.
std::vector<double> periodic_source_times(double phase_s, double freq_hz,
                                          double until_s);
std::vector<double> paced_lda_source_times(double phase_s, double rate_bps,
                                           double size_bits, double until_s);

// Capacity share a flow receives under the per-flow-share schedule:
// c_l * load_f / (S_LDA + S_AoI); never below its own load when feasible.
double per_flow_share(double capacity_bps, double flow_load_bps,
                      double total_load_bps);

std::string report_to_json(const SimReport& rep);

}  // namespace aoinet
