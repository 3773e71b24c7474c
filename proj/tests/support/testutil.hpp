#pragma once

#include <string>
#include <vector>

#include "aoinet/net_model.hpp"

// Small builders shared by the test files.

namespace testutil {

// Chain n0 -> n1 -> ... with one directed link per hop. caps/lats are per
// link; lats defaults to all-zero.
inline aoinet::Network make_chain(const std::vector<double>& caps,
                                  const std::vector<double>& lats = {}) {
  aoinet::Network net;
  for (size_t i = 0; i <= caps.size(); ++i)
    net.add_node("n" + std::to_string(i));
  for (size_t i = 0; i < caps.size(); ++i) {
    double lat = i < lats.size() ? lats[i] : 0.0;
    net.add_link("l" + std::to_string(i), "n" + std::to_string(i),
                 "n" + std::to_string(i + 1), caps[i], lat);
  }
  return net;
}

inline aoinet::FlowSpec make_flow(const std::string& id, aoinet::FlowClass cls,
                                  const aoinet::Network& net,
                                  std::vector<aoinet::LinkIdx> path,
                                  double size_bits) {
  aoinet::FlowSpec f;
  f.id = id;
  f.cls = cls;
  f.path = std::move(path);
  f.src = net.links[f.path.front()].src;
  f.dst = net.links[f.path.back()].dst;
  f.size_bits = size_bits;
  return f;
}

// Contiguous link index range [first, first+len) on a chain network.
inline std::vector<aoinet::LinkIdx> span(aoinet::LinkIdx first, uint32_t len) {
  std::vector<aoinet::LinkIdx> p;
  for (uint32_t i = 0; i < len; ++i) p.push_back(first + i);
  return p;
}

}  // namespace testutil
