#include "aoinet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "aoinet/rng.hpp"

namespace aoinet {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

// The LDA packet size used by the min-AoI objective: uniform across the
// scenario, so take the largest (they typically agree).
double scenario_s_lda(const std::vector<FlowSpec>& flows) {
  double s = 0.0;
  for (const FlowSpec& f : flows)
    if (f.cls == FlowClass::Lda) s = std::max(s, f.size_bits);
  return s > 0.0 ? s : 1.0;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<FlowSpec> generate_traffic(const Network& net,
                                       const TrafficTemplate& tmpl,
                                       uint64_t seed) {
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob_ok(tmpl.lda_pair_prob) || !prob_ok(tmpl.aoi_pair_prob))
    throw std::invalid_argument("traffic template: probability outside [0,1]");
  if (tmpl.lda_pair_prob > 0.0 && !(tmpl.lda_size_bits > 0.0))
    throw std::invalid_argument("traffic template: lda_size_bits required");
  if (tmpl.aoi_pair_prob > 0.0 && !(tmpl.aoi_size_bits > 0.0))
    throw std::invalid_argument("traffic template: aoi_size_bits required");

  Rng rng(seed);
  std::vector<FlowSpec> flows;
  for (NodeIdx i = 0; i < net.nodes.size(); ++i) {
    for (NodeIdx j = 0; j < net.nodes.size(); ++j) {
      if (i == j) continue;
      bool want_lda = rng.bernoulli(tmpl.lda_pair_prob);
      bool want_aoi = rng.bernoulli(tmpl.aoi_pair_prob);
      if (!want_lda && !want_aoi) continue;
      std::vector<LinkIdx> path = shortest_path_route(net, i, j);
      if (path.empty()) continue;  // unreachable pair
      auto make = [&](FlowClass cls, double size) {
        FlowSpec f;
        f.id = std::string(cls == FlowClass::Lda ? "lda_" : "aoi_") +
               net.nodes[i] + "_" + net.nodes[j];
        f.cls = cls;
        f.src = i;
        f.dst = j;
        f.path = path;
        f.size_bits = size;
        if (tmpl.phase_jitter_s > 0.0)
          f.phase_s = rng.uniform(0.0, tmpl.phase_jitter_s);
        flows.push_back(std::move(f));
      };
      if (want_lda) make(FlowClass::Lda, tmpl.lda_size_bits);
      if (want_aoi) make(FlowClass::Aoi, tmpl.aoi_size_bits);
    }
  }
  return flows;
}

ScenarioFile load_scenario_json(const std::string& text) {
  ScenarioFile sf;
  sf.topo = load_topology_json(text);

  json j = json::parse(text);
  if (j.contains("lambda") && !j.contains("objective"))
    throw std::invalid_argument("objective required when lambda is set");
  if (j.contains("objective")) {
    if (!objective_from_string(j["objective"].get<std::string>(),
                               &sf.objective))
      throw std::invalid_argument("unknown objective: " +
                                  j["objective"].get<std::string>());
  }
  sf.lambda = get_or(j, "lambda", sf.lambda);
  if (j.contains("use_declared_rates"))
    sf.use_declared_rates = j["use_declared_rates"].get<bool>();

  if (j.contains("sim")) {
    const json& s = j["sim"];
    if (s.contains("scheduler")) {
      if (!scheduler_from_string(s["scheduler"].get<std::string>(),
                                 &sf.sim.scheduler))
        throw std::invalid_argument("unknown scheduler: " +
                                    s["scheduler"].get<std::string>());
    }
    if (s.contains("lda_mode")) {
      std::string m = s["lda_mode"].get<std::string>();
      if (m == "paced")
        sf.sim.lda_mode = LdaSourceMode::Paced;
      else if (m == "greedy")
        sf.sim.lda_mode = LdaSourceMode::Greedy;
      else
        throw std::invalid_argument("unknown lda_mode: " + m);
    }
    sf.sim.tdm_frame_s = get_or(s, "tdm_frame_s", sf.sim.tdm_frame_s);
    sf.sim.duration_s = get_or(s, "duration_s", sf.sim.duration_s);
    sf.sim.warmup_s = get_or(s, "warmup_s", sf.sim.warmup_s);
    if (s.contains("seed")) sf.sim.seed = s["seed"].get<uint64_t>();
    sf.sim.fifo_capacity_packets =
        get_or(s, "fifo_capacity_packets", sf.sim.fifo_capacity_packets);
    if (s.contains("ifil_move_to_back"))
      sf.sim.ifil_move_to_back = s["ifil_move_to_back"].get<bool>();
    if (s.contains("debug_checks"))
      sf.sim.debug_checks = s["debug_checks"].get<bool>();
  }

  if (j.contains("traffic_template")) {
    const json& t = j["traffic_template"];
    TrafficTemplate tmpl;
    tmpl.lda_pair_prob = get_or(t, "lda_pair_prob", tmpl.lda_pair_prob);
    tmpl.aoi_pair_prob = get_or(t, "aoi_pair_prob", tmpl.aoi_pair_prob);
    tmpl.lda_size_bits = get_or(t, "lda_size_bits", tmpl.lda_size_bits);
    tmpl.aoi_size_bits = get_or(t, "aoi_size_bits", tmpl.aoi_size_bits);
    tmpl.phase_jitter_s = get_or(t, "phase_jitter_s", tmpl.phase_jitter_s);
    sf.traffic = tmpl;
  }

  auto violations = validate_network(sf.topo.net, sf.topo.flows);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return sf;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_json(ss.str());
}

void instantiate(ScenarioFile* sf) {
  if (sf->traffic) {
    auto generated = generate_traffic(sf->topo.net, *sf->traffic, sf->sim.seed);
    sf->topo.flows.insert(sf->topo.flows.end(), generated.begin(),
                          generated.end());
    sf->traffic.reset();  // applied once
  }
  sf->sim.net = sf->topo.net;
  sf->sim.flows = sf->topo.flows;
}

double predicted_lda_throughput(const std::vector<FlowSpec>& flows,
                                const RateAllocation& alloc) {
  double sum = 0.0;
  for (FlowIdx f = 0; f < flows.size(); ++f)
    if (flows[f].cls == FlowClass::Lda) sum += alloc.value[f];
  return sum;
}

double predicted_total_aoi(const Network& net,
                           const std::vector<FlowSpec>& flows,
                           const RateAllocation& alloc) {
  double sum = 0.0;
  for (FlowIdx f = 0; f < flows.size(); ++f) {
    if (flows[f].cls != FlowClass::Aoi) continue;
    double mu = alloc.value[f];
    if (!(mu > 0.0)) return kInf;
    sum += 1.0 / (2.0 * mu) +
           path_delay(net, flows[f].path, flows[f].size_bits);
  }
  return sum;
}

SweepRow run_cell(const ScenarioFile& sf, Objective obj, double lambda,
                  SchedulerKind sched, uint64_t seed, bool simulate) {
  SweepRow row;
  row.objective = obj;
  row.lambda = lambda;
  row.scheduler = sched;
  row.seed = seed;
  row.total_lda_throughput_bps = 0.0;
  row.total_aoi_s = kInf;

  ScenarioFile inst = sf;
  inst.sim.seed = seed;
  try {
    instantiate(&inst);
    RateAllocation alloc;
    if (inst.use_declared_rates) {
      for (const FlowSpec& f : inst.sim.flows)
        alloc.value.push_back(f.cls == FlowClass::Lda ? f.rate_bps
                                                      : f.freq_hz);
      alloc.finalize(inst.sim.net, inst.sim.flows);
    } else {
      SolverDiagnostics diag;
      alloc = solve(inst.sim.net, inst.sim.flows, obj, lambda,
                    scenario_s_lda(inst.sim.flows), SolverConfig{}, &diag);
      if (diag.status != SolveStatus::Optimal) {
        row.status = "failed: solver " + std::string(to_string(diag.status)) +
                     (diag.message.empty() ? "" : " (" + diag.message + ")");
        return row;
      }
    }
    row.alloc = alloc;
    if (!simulate) {
      row.total_lda_throughput_bps =
          predicted_lda_throughput(inst.sim.flows, alloc);
      row.total_aoi_s =
          predicted_total_aoi(inst.sim.net, inst.sim.flows, alloc);
      return row;
    }
    Scenario sc = inst.sim;
    sc.alloc = alloc;
    sc.scheduler = sched;
    SimReport rep = run(sc);
    row.total_lda_throughput_bps = rep.total_lda_throughput_bps;
    row.total_aoi_s = rep.total_aoi_s;
    row.report = std::move(rep);
  } catch (const std::exception& e) {
    row.status = std::string("failed: ") + e.what();
  }
  return row;
}

namespace {

void sort_rows(std::vector<SweepRow>* rows) {
  std::stable_sort(rows->begin(), rows->end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return std::make_tuple(static_cast<int>(a.objective),
                                            a.lambda,
                                            static_cast<int>(a.scheduler),
                                            a.seed) <
                            std::make_tuple(static_cast<int>(b.objective),
                                            b.lambda,
                                            static_cast<int>(b.scheduler),
                                            b.seed);
                   });
}

}  // namespace

TradeoffCurve run_sweep(const ScenarioFile& sf, const SweepSpec& spec) {
  if (spec.lambdas.empty())
    throw std::invalid_argument("sweep needs a non-empty lambda list");
  std::vector<Objective> objs =
      spec.objectives.empty() ? std::vector<Objective>{sf.objective}
                              : spec.objectives;
  std::vector<SchedulerKind> scheds =
      spec.schedulers.empty() ? std::vector<SchedulerKind>{sf.sim.scheduler}
                              : spec.schedulers;
  std::vector<uint64_t> seeds =
      spec.seeds.empty() ? std::vector<uint64_t>{sf.sim.seed} : spec.seeds;

  TradeoffCurve curve;
  for (Objective obj : objs)
    for (double lambda : spec.lambdas)
      for (SchedulerKind sched : scheds)
        for (uint64_t seed : seeds)
          curve.rows.push_back(
              run_cell(sf, obj, lambda, sched, seed, spec.simulate));
  sort_rows(&curve.rows);
  return curve;
}

TradeoffCurve run_compare(const ScenarioFile& sf, double lambda,
                          const std::vector<Objective>& objectives,
                          const std::vector<SchedulerKind>& schedulers) {
  if (objectives.empty() || schedulers.empty())
    throw std::invalid_argument("compare needs objectives and schedulers");
  TradeoffCurve curve;
  for (Objective obj : objectives)
    for (SchedulerKind sched : schedulers)
      curve.rows.push_back(
          run_cell(sf, obj, lambda, sched, sf.sim.seed, true));
  sort_rows(&curve.rows);
  return curve;
}

std::string curve_to_csv(const TradeoffCurve& curve) {
  std::string out =
      "objective,lambda,scheduler,seed,total_lda_throughput_bps,"
      "total_aoi_s,status\n";
  for (const SweepRow& r : curve.rows) {
    out += to_string(r.objective);
    out += ',';
    out += fmt(r.lambda);
    out += ',';
    out += to_string(r.scheduler);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += fmt(r.total_lda_throughput_bps);
    out += ',';
    out += fmt(r.total_aoi_s);
    out += ',';
    out += csv_field(r.status);
    out += '\n';
  }
  return out;
}

std::string curve_to_json(const TradeoffCurve& curve) {
  json rows = json::array();
  for (const SweepRow& r : curve.rows) {
    json jr;
    jr["objective"] = to_string(r.objective);
    jr["lambda"] = r.lambda;
    jr["scheduler"] = to_string(r.scheduler);
    jr["seed"] = r.seed;
    jr["total_lda_throughput_bps"] = r.total_lda_throughput_bps;
    jr["total_aoi_s"] = r.total_aoi_s;
    jr["status"] = r.status;
    if (r.alloc) {
      json values = json::array();
      for (double v : r.alloc->value) values.push_back(v);
      jr["allocation"] = std::move(values);
    }
    if (r.report) jr["report"] = json::parse(report_to_json(*r.report));
    rows.push_back(std::move(jr));
  }
  return json{{"rows", std::move(rows)}}.dump(2);
}

std::string analyze_gamma_csv(const SingleLinkParams& base, double lambda,
                              int steps) {
  if (steps < 2) throw std::invalid_argument("analyze needs >= 2 grid steps");
  std::string out =
      "gamma,tdm_throughput_bps,tdm_aoi_s,sdm_throughput_bps,sdm_aoi_s,"
      "objective\n";
  for (int k = 1; k <= steps; ++k) {
    SingleLinkParams p = base;
    p.gamma = static_cast<double>(k) / (steps + 1);
    double tt = tdm_throughput(p);
    double ta = tdm_aoi(p);
    double st = sdm_throughput(p);
    double sa = sdm_aoi(p);
    double obj = tradeoff_objective(st, sa, p.capacity_bps, p.dt_s, lambda);
    out += fmt(p.gamma);
    out += ',';
    out += fmt(tt);
    out += ',';
    out += fmt(ta);
    out += ',';
    out += fmt(st);
    out += ',';
    out += fmt(sa);
    out += ',';
    out += fmt(obj);
    out += '\n';
  }
  return out;
}

SingleLinkParams single_link_params(const ScenarioFile& sf) {
  if (sf.topo.net.links.size() != 1)
    throw std::invalid_argument("analyze expects a single-link scenario");
  const Link& link = sf.topo.net.links[0];
  const FlowSpec* aoi = nullptr;
  for (const FlowSpec& f : sf.topo.flows) {
    if (f.cls != FlowClass::Aoi) continue;
    if (aoi) throw std::invalid_argument("analyze expects one AoI flow");
    aoi = &f;
  }
  if (!aoi || !(aoi->freq_hz > 0.0))
    throw std::invalid_argument(
        "analyze expects one AoI flow with freq_hz set");
  SingleLinkParams p;
  p.capacity_bps = link.capacity_bps;
  p.ti_s = 1.0 / aoi->freq_hz;
  p.dt_s = aoi->size_bits / link.capacity_bps;
  p.dp_s = link.latency_s;
  p.frame_s = sf.sim.tdm_frame_s;
  return p;
}

}  // namespace aoinet
