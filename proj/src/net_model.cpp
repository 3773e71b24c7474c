#include "aoinet/net_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aoinet {

using nlohmann::json;

const char* to_string(FlowClass c) {
  return c == FlowClass::Lda ? "LDA" : "AoI";
}

NodeIdx Network::add_node(const std::string& name) {
  auto it = node_index.find(name);
  if (it != node_index.end()) return it->second;
  NodeIdx idx = static_cast<NodeIdx>(nodes.size());
  nodes.push_back(name);
  node_index.emplace(name, idx);
  return idx;
}

LinkIdx Network::add_link(const std::string& id, const std::string& src,
                          const std::string& dst, double capacity_bps,
                          double latency_s) {
  if (link_index.count(id))
    throw std::runtime_error("duplicate link id: " + id);
  Link l;
  l.id = id;
  l.src = add_node(src);
  l.dst = add_node(dst);
  l.capacity_bps = capacity_bps;
  l.latency_s = latency_s;
  LinkIdx idx = static_cast<LinkIdx>(links.size());
  links.push_back(std::move(l));
  link_index.emplace(id, idx);
  return idx;
}

NodeIdx Network::node(const std::string& name) const {
  auto it = node_index.find(name);
  return it == node_index.end() ? kInvalidIdx : it->second;
}

LinkIdx Network::link(const std::string& id) const {
  auto it = link_index.find(id);
  return it == link_index.end() ? kInvalidIdx : it->second;
}

double aoi_ratio(double lda_load_bps, double aoi_load_bps) {
  double total = lda_load_bps + aoi_load_bps;
  if (total <= 0.0) return 1.0;
  return aoi_load_bps / total;
}

void RateAllocation::finalize(const Network& net,
                              const std::vector<FlowSpec>& flows) {
  lda_load_bps.assign(net.links.size(), 0.0);
  aoi_load_bps.assign(net.links.size(), 0.0);
  gamma.assign(net.links.size(), 1.0);
  for (size_t f = 0; f < flows.size(); ++f) {
    double load = flows[f].cls == FlowClass::Lda ? value[f]
                                                 : value[f] * flows[f].size_bits;
    for (LinkIdx l : flows[f].path) {
      if (flows[f].cls == FlowClass::Lda)
        lda_load_bps[l] += load;
      else
        aoi_load_bps[l] += load;
    }
  }
  for (size_t l = 0; l < net.links.size(); ++l)
    gamma[l] = aoi_ratio(lda_load_bps[l], aoi_load_bps[l]);
}

std::vector<std::string> validate_network(const Network& net,
                                          const std::vector<FlowSpec>& flows) {
  std::vector<std::string> out;
  for (const Link& l : net.links) {
    if (!(l.capacity_bps > 0.0))
      out.push_back("link " + l.id + ": capacity must be positive");
    if (l.latency_s < 0.0)
      out.push_back("link " + l.id + ": latency must be nonnegative");
    if (l.src == l.dst) out.push_back("link " + l.id + ": self loop");
    if (l.src >= net.nodes.size() || l.dst >= net.nodes.size())
      out.push_back("link " + l.id + ": unknown endpoint");
  }
  for (const FlowSpec& f : flows) {
    if (!(f.size_bits > 0.0))
      out.push_back("flow " + f.id + ": size_bits must be positive");
    if (f.rate_bps < 0.0)
      out.push_back("flow " + f.id + ": negative rate_bps");
    if (f.freq_hz < 0.0)
      out.push_back("flow " + f.id + ": negative freq_hz");
    if (f.phase_s < 0.0)
      out.push_back("flow " + f.id + ": negative phase_s");
    if (f.path.empty()) {
      out.push_back("flow " + f.id + ": empty path");
      continue;
    }
    bool ok = true;
    for (LinkIdx l : f.path)
      if (l >= net.links.size()) {
        out.push_back("flow " + f.id + ": unknown link in path");
        ok = false;
      }
    if (!ok) continue;
    for (size_t i = 0; i + 1 < f.path.size(); ++i)
      if (net.links[f.path[i]].dst != net.links[f.path[i + 1]].src)
        out.push_back("flow " + f.id + ": path discontinuity after link " +
                      net.links[f.path[i]].id);
    if (f.src != kInvalidIdx && net.links[f.path.front()].src != f.src)
      out.push_back("flow " + f.id + ": path does not start at src");
    if (f.dst != kInvalidIdx && net.links[f.path.back()].dst != f.dst)
      out.push_back("flow " + f.id + ": path does not end at dst");
  }
  return out;
}

double propagation_delay(const Network& net,
                         const std::vector<LinkIdx>& path) {
  double d = 0.0;
  for (LinkIdx l : path) d += net.links[l].latency_s;
  return d;
}

double path_transmission_delay(const Network& net,
                               const std::vector<LinkIdx>& path,
                               double size_bits) {
  double d = 0.0;
  for (LinkIdx l : path) d += size_bits / net.links[l].capacity_bps;
  return d;
}

double path_delay(const Network& net, const std::vector<LinkIdx>& path,
                  double size_bits) {
  return propagation_delay(net, path) +
         path_transmission_delay(net, path, size_bits);
}

std::vector<LinkIdx> shortest_path_route(const Network& net, NodeIdx src,
                                         NodeIdx dst) {
  const size_t n = net.nodes.size();
  if (src >= n || dst >= n) return {};
  if (src == dst) return {};

  std::vector<std::vector<LinkIdx>> out_links(n);
  for (LinkIdx l = 0; l < net.links.size(); ++l)
    out_links[net.links[l].src].push_back(l);

  // BFS by hop count, then per-node lexicographic best id sequence among
  // minimum-hop predecessors. Graphs here are small; sequence compares are
  // cheap enough.
  std::vector<int> dist(n, -1);
  std::vector<std::vector<NodeIdx>> order_by_level;
  dist[src] = 0;
  std::deque<NodeIdx> q{src};
  std::vector<NodeIdx> bfs_order;
  while (!q.empty()) {
    NodeIdx u = q.front();
    q.pop_front();
    bfs_order.push_back(u);
    for (LinkIdx l : out_links[u]) {
      NodeIdx v = net.links[l].dst;
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  if (dist[dst] < 0) return {};

  std::vector<std::vector<std::string>> best_ids(n);
  std::vector<std::vector<LinkIdx>> best_path(n);
  // Build incrementally in BFS order: when visiting u, relax its out-links.
  for (NodeIdx u : bfs_order) {
    for (LinkIdx l : out_links[u]) {
      NodeIdx v = net.links[l].dst;
      if (dist[v] != dist[u] + 1) continue;
      std::vector<std::string> cand_ids = best_ids[u];
      cand_ids.push_back(net.links[l].id);
      if (best_ids[v].empty() && best_path[v].empty()) {
        best_ids[v] = std::move(cand_ids);
        best_path[v] = best_path[u];
        best_path[v].push_back(l);
      } else if (cand_ids < best_ids[v]) {
        best_ids[v] = std::move(cand_ids);
        best_path[v] = best_path[u];
        best_path[v].push_back(l);
      }
    }
  }
  return best_path[dst];
}

namespace {

double require_number(const json& j, const std::string& key,
                      const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::runtime_error(ctx + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key,
                           const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::runtime_error(ctx + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

Topology load_topology_json(const std::string& text) {
  json j = json::parse(text);
  Topology topo;
  if (j.contains("nodes"))
    for (const auto& n : j["nodes"]) topo.net.add_node(n.get<std::string>());
  if (!j.contains("links") || !j["links"].is_array())
    throw std::runtime_error("topology: missing links array");
  for (const auto& jl : j["links"]) {
    std::string id = require_string(jl, "id", "link");
    double latency =
        jl.contains("latency_s") ? jl["latency_s"].get<double>() : 0.0;
    topo.net.add_link(id, require_string(jl, "src", "link " + id),
                      require_string(jl, "dst", "link " + id),
                      require_number(jl, "capacity_bps", "link " + id),
                      latency);
  }
  if (j.contains("flows")) {
    for (const auto& jf : j["flows"]) {
      FlowSpec f;
      f.id = require_string(jf, "id", "flow");
      std::string cls = require_string(jf, "class", "flow " + f.id);
      std::string lc = cls;
      for (char& c : lc) c = static_cast<char>(std::tolower(c));
      if (lc == "lda")
        f.cls = FlowClass::Lda;
      else if (lc == "aoi")
        f.cls = FlowClass::Aoi;
      else
        throw std::runtime_error("flow " + f.id + ": unknown class " + cls);
      f.size_bits = require_number(jf, "size_bits", "flow " + f.id);
      if (jf.contains("rate_bps")) f.rate_bps = jf["rate_bps"].get<double>();
      if (jf.contains("freq_hz")) f.freq_hz = jf["freq_hz"].get<double>();
      if (jf.contains("phase_s")) f.phase_s = jf["phase_s"].get<double>();
      if (jf.contains("path")) {
        for (const auto& lid : jf["path"]) {
          LinkIdx l = topo.net.link(lid.get<std::string>());
          if (l == kInvalidIdx)
            throw std::runtime_error("flow " + f.id + ": unknown link " +
                                     lid.get<std::string>());
          f.path.push_back(l);
        }
        if (!f.path.empty()) {
          f.src = topo.net.links[f.path.front()].src;
          f.dst = topo.net.links[f.path.back()].dst;
        }
      } else {
        std::string s = require_string(jf, "src", "flow " + f.id);
        std::string d = require_string(jf, "dst", "flow " + f.id);
        f.src = topo.net.node(s);
        f.dst = topo.net.node(d);
        if (f.src == kInvalidIdx || f.dst == kInvalidIdx)
          throw std::runtime_error("flow " + f.id + ": unknown endpoint");
        f.path = shortest_path_route(topo.net, f.src, f.dst);
        if (f.path.empty())
          throw std::runtime_error("flow " + f.id + ": no route from " + s +
                                   " to " + d);
      }
      topo.flows.push_back(std::move(f));
    }
  }
  return topo;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology_json(ss.str());
}

std::string topology_to_json(const Topology& topo) {
  json j;
  j["nodes"] = topo.net.nodes;
  j["links"] = json::array();
  for (const Link& l : topo.net.links)
    j["links"].push_back({{"id", l.id},
                          {"src", topo.net.nodes[l.src]},
                          {"dst", topo.net.nodes[l.dst]},
                          {"capacity_bps", l.capacity_bps},
                          {"latency_s", l.latency_s}});
  j["flows"] = json::array();
  for (const FlowSpec& f : topo.flows) {
    json jf = {{"id", f.id},
               {"class", to_string(f.cls)},
               {"size_bits", f.size_bits},
               {"phase_s", f.phase_s}};
    if (f.rate_bps > 0.0) jf["rate_bps"] = f.rate_bps;
    if (f.freq_hz > 0.0) jf["freq_hz"] = f.freq_hz;
    json path = json::array();
    for (LinkIdx l : f.path) path.push_back(topo.net.links[l].id);
    jf["path"] = path;
    j["flows"].push_back(std::move(jf));
  }
  return j.dump(2);
}

}  // namespace aoinet
