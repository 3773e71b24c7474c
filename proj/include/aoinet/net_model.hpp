#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Network model: directed links with finite capacity and propagation latency,
// flows that are either throughput-seeking (LDA) or freshness-seeking (AoI).
// All rates are bits/second, sizes are bits, times are seconds.

namespace aoinet {

using NodeIdx = uint32_t;
using LinkIdx = uint32_t;
using FlowIdx = uint32_t;

constexpr uint32_t kInvalidIdx = UINT32_MAX;

enum class FlowClass : uint8_t { Lda = 0, Aoi = 1 };

const char* to_string(FlowClass c);

struct Link {
  std::string id;
  NodeIdx src = kInvalidIdx;
  NodeIdx dst = kInvalidIdx;
  double capacity_bps = 0.0;
  double latency_s = 0.0;
};

struct FlowSpec {
  std::string id;
  FlowClass cls = FlowClass::Lda;
  NodeIdx src = kInvalidIdx;
  NodeIdx dst = kInvalidIdx;
  std::vector<LinkIdx> path;   // consecutive links src -> dst
  double size_bits = 0.0;      // s_f: packet/update size
  double rate_bps = 0.0;       // declared r_f (LDA), 0 = unset
  double freq_hz = 0.0;        // declared mu_f (AoI), 0 = unset
  double phase_s = 0.0;        // first generation instant
};

struct Network {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  std::unordered_map<std::string, NodeIdx> node_index;
  std::unordered_map<std::string, LinkIdx> link_index;

  NodeIdx add_node(const std::string& name);
  LinkIdx add_link(const std::string& id, const std::string& src,
                   const std::string& dst, double capacity_bps,
                   double latency_s);
  NodeIdx node(const std::string& name) const;   // kInvalidIdx if unknown
  LinkIdx link(const std::string& id) const;
};

// One solved operating point: r_f for LDA flows, mu_f for AoI flows, plus the
// per-link load split and AoI capacity ratio gamma derived from it.
struct RateAllocation {
  std::vector<double> value;          // per flow, same order as the flow list
  std::vector<double> lda_load_bps;   // per link
  std::vector<double> aoi_load_bps;   // per link
  std::vector<double> gamma;          // per link
  double objective = 0.0;
  double lambda = 0.0;

  // Recomputes loads and gamma from `value`; call after filling `value`.
  void finalize(const Network& net, const std::vector<FlowSpec>& flows);
};

// gamma_l: fraction of carried load that is AoI traffic; 1 on unloaded links.
double aoi_ratio(double lda_load_bps, double aoi_load_bps);

// Structural checks; returns human-readable violations, empty when valid.
std::vector<std::string> validate_network(const Network& net,
                                          const std::vector<FlowSpec>& flows);

// d_f: sum of link latencies along the path.
double propagation_delay(const Network& net, const std::vector<LinkIdx>& path);

// Sum of size/capacity over the path (the store-and-forward component of p_f).
double path_transmission_delay(const Network& net,
                               const std::vector<LinkIdx>& path,
                               double size_bits);

// p_f = d_f + sum size/c_l.
double path_delay(const Network& net, const std::vector<LinkIdx>& path,
                  double size_bits);

// Minimum-hop path; among equal-hop paths picks the lexicographically
// smallest sequence of link ids. Empty if unreachable.
std::vector<LinkIdx> shortest_path_route(const Network& net, NodeIdx src,
                                         NodeIdx dst);

// Topology + flow list serialized as JSON (schema mirrored by load).
struct Topology {
  Network net;
  std::vector<FlowSpec> flows;
};

Topology load_topology_json(const std::string& text);
Topology load_topology_file(const std::string& path);
std::string topology_to_json(const Topology& topo);

}  // namespace aoinet
