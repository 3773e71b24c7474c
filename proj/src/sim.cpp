#include "aoinet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "aoinet/closed_form.hpp"
#include "aoinet/solver.hpp"

namespace aoinet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum EvKind : uint8_t { kGen = 0, kArrival = 1, kTxComplete = 2, kTimer = 3 };

const char* kind_name(uint8_t k) {
  switch (k) {
    case kGen:
      return "gen";
    case kArrival:
      return "arrival";
    case kTxComplete:
      return "tx_complete";
    case kTimer:
      return "timer";
  }
  return "?";
}

struct Event {
  double t = 0.0;
  uint32_t node = 0;
  uint8_t kind = kGen;
  uint32_t flow = kInvalidIdx;
  uint64_t seq = 0;
  uint32_t link = kInvalidIdx;
  double tx_start = 0.0;  // kTxComplete only
  Packet pkt;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    if (a.node != b.node) return a.node > b.node;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.flow != b.flow) return a.flow > b.flow;
    return a.seq > b.seq;
  }
};

struct FlowRt {
  double rate = 0.0;    // effective r (bps) or mu (Hz)
  double period = 0.0;  // emission period, 0 = no periodic source
  uint64_t next_label = 0;
  uint64_t generated = 0, delivered = 0, dropped = 0, replaced = 0;
  std::vector<DeliveryRecord> log;
};

struct Outport {
  std::optional<FifoQueue> lda;
  std::optional<IfilQueue> aoi;
  SdmState sdm;
  std::optional<TdmState> tdm;
  bool busy = false;
  FlowClass tdm_phase0 = FlowClass::Lda;  // phase snapshot at tx start
  double tdm_phase_end0 = 0.0;
  std::vector<double> lane_free;   // PerFlowShare, indexed by flow
  std::vector<double> lane_share;  // 0 = flow not on this link
  double slot_phase = 0.0;         // WaitingOracle
  double slot_period = 0.0;
  double win_bits[2] = {0.0, 0.0};  // [FlowClass] inside measurement window
  double win_busy[2] = {0.0, 0.0};
};

class Engine {
 public:
  explicit Engine(const Scenario& sc)
      : _sc(sc), _net(sc.net), _flows(sc.flows) {}

  SimReport run();

 private:
  void init();
  void dispatch(const Event& ev);
  void handle_gen(const Event& ev);
  void handle_arrival(const Event& ev);
  void handle_tx_complete(const Event& ev);
  void handle_timer(const Event& ev);
  void enqueue_at(LinkIdx l, const Packet& p, double now);
  void try_start(LinkIdx l, double now);
  void start_tx(LinkIdx l, const Packet& p, double now);
  void forward(const Packet& p, double done_t);
  void account_window(Outport& op, FlowClass cls, double start, double end,
                      double size_bits);
  void audit() const;
  SimReport build_report();

  double effective_rate(FlowIdx f) const {
    if (_sc.alloc) return _sc.alloc->value[f];
    return _flows[f].cls == FlowClass::Lda ? _flows[f].rate_bps
                                           : _flows[f].freq_hz;
  }

  const Scenario& _sc;
  const Network& _net;
  const std::vector<FlowSpec>& _flows;
  std::priority_queue<Event, std::vector<Event>, EventAfter> _heap;
  std::vector<FlowRt> _rt;
  std::vector<Outport> _ports;
  double _w0 = 0.0;  // global window start for link stats
  uint64_t _events = 0;
  std::ofstream _trace;
};

void Engine::account_window(Outport& op, FlowClass cls, double start,
                            double end, double size_bits) {
  double a = std::max(start, _w0);
  double b = std::min(end, _sc.duration_s);
  if (b <= a) return;
  double frac = (b - a) / (end - start);
  op.win_busy[static_cast<int>(cls)] += b - a;
  op.win_bits[static_cast<int>(cls)] += size_bits * frac;
}

void Engine::init() {
  auto violations = validate_network(_net, _flows);
  if (!violations.empty())
    throw std::invalid_argument("invalid scenario: " + violations.front());
  if (_sc.alloc && (_sc.alloc->value.size() != _flows.size() ||
                    _sc.alloc->gamma.size() != _net.links.size()))
    throw std::invalid_argument(
        "allocation does not match scenario (finalize it first)");
  if (!(_sc.duration_s > 0.0))
    throw std::invalid_argument("duration must be positive");

  _w0 = _sc.warmup_s >= 0.0 ? _sc.warmup_s : 0.1 * _sc.duration_s;
  if (_w0 >= _sc.duration_s)
    throw std::invalid_argument("warmup must end before duration");

  const bool greedy = _sc.lda_mode == LdaSourceMode::Greedy;
  if (greedy && (_sc.scheduler == SchedulerKind::PerFlowShare ||
                 _sc.scheduler == SchedulerKind::WaitingOracle))
    throw std::invalid_argument("greedy LDA needs a queue-based scheduler");

  if (_sc.scheduler == SchedulerKind::WaitingOracle)
    for (const FlowSpec& f : _flows)
      if (f.cls == FlowClass::Lda)
        throw std::invalid_argument("WaitingOracle scenarios are AoI-only");

  _rt.resize(_flows.size());
  for (FlowIdx f = 0; f < _flows.size(); ++f) {
    double rate = effective_rate(f);
    if (rate < 0.0)
      throw std::invalid_argument("flow " + _flows[f].id + ": negative rate");
    _rt[f].rate = rate;
    if (_flows[f].cls == FlowClass::Aoi)
      _rt[f].period = rate > 0.0 ? 1.0 / rate : 0.0;
    else
      _rt[f].period = rate > 0.0 ? _flows[f].size_bits / rate : 0.0;
  }

  // Per-link loads from the effective rates; used for gamma and the
  // per-flow-share schedule.
  std::vector<double> values(_flows.size());
  for (FlowIdx f = 0; f < _flows.size(); ++f) values[f] = _rt[f].rate;
  LinkLoads loads = link_loads(_net, _flows, values);

  _ports.resize(_net.links.size());
  for (LinkIdx l = 0; l < _net.links.size(); ++l) {
    Outport& op = _ports[l];
    double gamma = _sc.alloc ? _sc.alloc->gamma[l]
                             : aoi_ratio(loads.lda_bps[l], loads.aoi_bps[l]);

    double max_lda_size = 0.0, max_any_size = 0.0;
    const FlowSpec* aoi_flow = nullptr;
    int aoi_count = 0;
    for (FlowIdx f = 0; f < _flows.size(); ++f) {
      bool on_link = std::find(_flows[f].path.begin(), _flows[f].path.end(),
                               l) != _flows[f].path.end();
      if (!on_link) continue;
      max_any_size = std::max(max_any_size, _flows[f].size_bits);
      if (_flows[f].cls == FlowClass::Lda)
        max_lda_size = std::max(max_lda_size, _flows[f].size_bits);
      else {
        aoi_flow = &_flows[f];
        ++aoi_count;
      }
    }

    switch (_sc.scheduler) {
      case SchedulerKind::FifoBaseline:
        op.lda.emplace(_sc.fifo_capacity_packets * std::max(max_any_size, 1.0));
        break;
      case SchedulerKind::PerFlowShare: {
        op.lane_free.assign(_flows.size(), 0.0);
        op.lane_share.assign(_flows.size(), 0.0);
        double total = loads.lda_bps[l] + loads.aoi_bps[l];
        for (FlowIdx f = 0; f < _flows.size(); ++f) {
          bool on_link = std::find(_flows[f].path.begin(),
                                   _flows[f].path.end(),
                                   l) != _flows[f].path.end();
          if (!on_link) continue;
          double load = _flows[f].cls == FlowClass::Lda
                            ? values[f]
                            : values[f] * _flows[f].size_bits;
          op.lane_share[f] =
              per_flow_share(_net.links[l].capacity_bps, load, total);
        }
        break;
      }
      case SchedulerKind::WaitingOracle: {
        op.aoi.emplace(_sc.ifil_move_to_back);
        if (aoi_count > 1)
          throw std::invalid_argument(
              "WaitingOracle supports one AoI flow per link");
        if (aoi_flow) {
          FlowIdx f = static_cast<FlowIdx>(aoi_flow - _flows.data());
          if (!(_rt[f].rate > 0.0))
            throw std::invalid_argument("zero-frequency flow scheduled");
          double ti = 1.0 / _rt[f].rate;
          double dt = aoi_flow->size_bits / _net.links[l].capacity_bps;
          op.slot_period = waiting_oracle_period(ti, dt);
          op.slot_phase = aoi_flow->phase_s;
          if (op.slot_phase <= _sc.duration_s)
            _heap.push(Event{op.slot_phase, _net.links[l].src, kTimer,
                             kInvalidIdx, 0, l, 0.0, Packet{}});
        }
        break;
      }
      default:  // Sdm, Tdm, PriorityAoi
        op.lda.emplace(_sc.fifo_capacity_packets * std::max(max_lda_size, 1.0));
        op.aoi.emplace(_sc.ifil_move_to_back);
        op.sdm.gamma = gamma;
        if (_sc.scheduler == SchedulerKind::Tdm)
          op.tdm.emplace(_sc.tdm_frame_s, gamma);
        break;
    }
  }

  for (FlowIdx f = 0; f < _flows.size(); ++f) {
    const FlowSpec& fs = _flows[f];
    bool emits = _rt[f].rate > 0.0 ||
                 (greedy && fs.cls == FlowClass::Lda);
    if (!emits) continue;
    if (fs.phase_s <= _sc.duration_s)
      _heap.push(Event{fs.phase_s, _net.links[fs.path.front()].src, kGen, f, 0,
                       fs.path.front(), 0.0, Packet{}});
  }

  if (!_sc.trace_path.empty()) {
    _trace.open(_sc.trace_path);
    if (!_trace) throw std::runtime_error("cannot open " + _sc.trace_path);
  }
}

void Engine::handle_gen(const Event& ev) {
  FlowRt& rt = _rt[ev.flow];
  const FlowSpec& fs = _flows[ev.flow];
  Packet p;
  p.flow = ev.flow;
  p.cls = fs.cls;
  p.size_bits = fs.size_bits;
  p.gen_time_s = ev.t;
  p.seq = rt.next_label++;
  p.hop = 0;
  ++rt.generated;
  enqueue_at(fs.path.front(), p, ev.t);

  bool greedy_lda = _sc.lda_mode == LdaSourceMode::Greedy &&
                    fs.cls == FlowClass::Lda;
  if (!greedy_lda && rt.period > 0.0) {
    // next emission computed from the label to avoid cumulative FP drift
    double next = fs.phase_s + static_cast<double>(rt.next_label) * rt.period;
    if (next <= _sc.duration_s)
      _heap.push(Event{next, ev.node, kGen, ev.flow, rt.next_label, ev.link,
                       0.0, Packet{}});
  }
}

void Engine::enqueue_at(LinkIdx l, const Packet& p, double now) {
  Outport& op = _ports[l];
  switch (_sc.scheduler) {
    case SchedulerKind::PerFlowShare: {
      double share = op.lane_share[p.flow];
      if (!(share > 0.0))
        throw std::invalid_argument("zero-share flow scheduled: " +
                                    _flows[p.flow].id);
      double start = std::max(now, op.lane_free[p.flow]);
      double end = start + p.size_bits / share;
      op.lane_free[p.flow] = end;
      _heap.push(Event{end, _net.links[l].src, kTxComplete, p.flow, p.seq, l,
                       start, p});
      return;
    }
    case SchedulerKind::FifoBaseline: {
      if (op.lda->enqueue(p) == EnqueueOutcome::Dropped)
        ++_rt[p.flow].dropped;
      break;
    }
    case SchedulerKind::WaitingOracle: {
      if (op.aoi->enqueue(p) == EnqueueOutcome::Replaced)
        ++_rt[p.flow].replaced;
      return;  // transmissions start only on slot timers
    }
    default: {
      if (p.cls == FlowClass::Lda) {
        if (op.lda->enqueue(p) == EnqueueOutcome::Dropped)
          ++_rt[p.flow].dropped;
      } else {
        if (op.aoi->enqueue(p) == EnqueueOutcome::Replaced)
          ++_rt[p.flow].replaced;
      }
      break;
    }
  }
  try_start(l, now);
}

void Engine::try_start(LinkIdx l, double now) {
  Outport& op = _ports[l];
  if (op.busy) return;

  SendChoice choice = SendChoice::Idle;
  switch (_sc.scheduler) {
    case SchedulerKind::FifoBaseline:
      choice = op.lda->empty() ? SendChoice::Idle : SendChoice::Lda;
      break;
    case SchedulerKind::PriorityAoi:
      if (!op.aoi->empty())
        choice = SendChoice::Aoi;
      else if (!op.lda->empty())
        choice = SendChoice::Lda;
      break;
    case SchedulerKind::Sdm:
      choice = op.sdm.decide(op.lda->empty(), op.aoi->empty());
      break;
    case SchedulerKind::Tdm:
      choice = op.tdm->decide(now, op.lda->empty(), op.aoi->empty());
      op.tdm_phase0 = op.tdm->current_phase(now);
      op.tdm_phase_end0 = op.tdm->current_phase_end(now);
      break;
    default:
      return;  // PerFlowShare and WaitingOracle do not start here
  }
  if (choice == SendChoice::Idle) return;

  Packet p;
  if (choice == SendChoice::Aoi) {
    p = *op.aoi->dequeue();
  } else {
    p = *op.lda->dequeue();
    // greedy sources keep their first-hop backlog topped up
    if (_sc.lda_mode == LdaSourceMode::Greedy && p.hop == 0 &&
        _flows[p.flow].cls == FlowClass::Lda) {
      FlowRt& rt = _rt[p.flow];
      Packet refill = p;
      refill.gen_time_s = now;
      refill.seq = rt.next_label++;
      ++rt.generated;
      op.lda->enqueue(refill);
    }
  }
  start_tx(l, p, now);
}

void Engine::start_tx(LinkIdx l, const Packet& p, double now) {
  Outport& op = _ports[l];
  op.busy = true;
  if (_sc.scheduler == SchedulerKind::Sdm) op.sdm.account(p.cls, p.size_bits);
  double end = now + p.size_bits / _net.links[l].capacity_bps;
  _heap.push(Event{end, _net.links[l].src, kTxComplete, p.flow, p.seq, l, now,
                   p});
}

void Engine::forward(const Packet& p, double done_t) {
  const FlowSpec& fs = _flows[p.flow];
  double arr_t = done_t + _net.links[fs.path[p.hop]].latency_s;
  Packet np = p;
  np.hop = p.hop + 1;
  uint32_t node = np.hop == fs.path.size()
                      ? _net.links[fs.path.back()].dst
                      : _net.links[fs.path[np.hop]].src;
  _heap.push(Event{arr_t, node, kArrival, p.flow, p.seq, kInvalidIdx, 0.0, np});
}

void Engine::handle_arrival(const Event& ev) {
  const FlowSpec& fs = _flows[ev.flow];
  if (ev.pkt.hop == fs.path.size()) {
    FlowRt& rt = _rt[ev.flow];
    rt.log.push_back(DeliveryRecord{ev.t, ev.pkt.gen_time_s});
    ++rt.delivered;
    return;
  }
  enqueue_at(fs.path[ev.pkt.hop], ev.pkt, ev.t);
}

void Engine::handle_tx_complete(const Event& ev) {
  Outport& op = _ports[ev.link];
  account_window(op, ev.pkt.cls, ev.tx_start, ev.t, ev.pkt.size_bits);
  if (_sc.scheduler == SchedulerKind::PerFlowShare) {
    forward(ev.pkt, ev.t);
    return;
  }
  if (op.tdm)
    op.tdm->account(ev.pkt.cls, op.tdm_phase0, op.tdm_phase_end0, ev.t);
  op.busy = false;
  forward(ev.pkt, ev.t);
  try_start(ev.link, ev.t);
}

void Engine::handle_timer(const Event& ev) {
  Outport& op = _ports[ev.link];
  uint64_t k = ev.seq + 1;
  double next = op.slot_phase + static_cast<double>(k) * op.slot_period;
  if (next <= _sc.duration_s)
    _heap.push(Event{next, ev.node, kTimer, kInvalidIdx, k, ev.link, 0.0,
                     Packet{}});
  if (op.busy || op.aoi->empty()) return;
  Packet p = *op.aoi->dequeue();
  start_tx(ev.link, p, ev.t);
}

void Engine::dispatch(const Event& ev) {
  if (_trace.is_open())
    _trace << ev.t << ' ' << _net.nodes[ev.node] << ' ' << kind_name(ev.kind)
           << ' ' << (ev.flow == kInvalidIdx ? "-" : _flows[ev.flow].id) << ' '
           << ev.seq << '\n';
  switch (ev.kind) {
    case kGen:
      handle_gen(ev);
      break;
    case kArrival:
      handle_arrival(ev);
      break;
    case kTxComplete:
      handle_tx_complete(ev);
      break;
    case kTimer:
      handle_timer(ev);
      break;
  }
}

void Engine::audit() const {
  // packet conservation: generated = delivered + dropped + replaced + in flight
  std::vector<uint64_t> in_flight(_flows.size(), 0);
  auto heap_copy = _heap;
  while (!heap_copy.empty()) {
    const Event& ev = heap_copy.top();
    if (ev.kind == kArrival || ev.kind == kTxComplete)
      ++in_flight[ev.pkt.flow];
    heap_copy.pop();
  }
  for (const Outport& op : _ports) {
    if (op.lda)
      for (const Packet& p : op.lda->contents()) ++in_flight[p.flow];
    if (op.aoi)
      for (const Packet& p : op.aoi->contents()) ++in_flight[p.flow];
  }
  for (FlowIdx f = 0; f < _flows.size(); ++f) {
    const FlowRt& rt = _rt[f];
    if (rt.generated !=
        rt.delivered + rt.dropped + rt.replaced + in_flight[f])
      throw std::logic_error("packet conservation violated for flow " +
                             _flows[f].id);
    double pf = path_delay(_net, _flows[f].path, _flows[f].size_bits);
    for (const DeliveryRecord& r : rt.log)
      if (r.time_s < r.gen_s + pf - 1e-9)
        throw std::logic_error("causality violated for flow " + _flows[f].id);
  }
}

SimReport Engine::build_report() {
  SimReport rep;
  rep.duration_s = _sc.duration_s;
  rep.warmup_s = _w0;
  rep.seed = _sc.seed;
  rep.events = _events;
  rep.scheduler = _sc.scheduler;

  for (FlowIdx f = 0; f < _flows.size(); ++f) {
    const FlowSpec& fs = _flows[f];
    FlowRt& rt = _rt[f];
    FlowReport fr;
    fr.id = fs.id;
    fr.cls = fs.cls;
    fr.rate_assigned = rt.rate;
    fr.generated = rt.generated;
    fr.delivered = rt.delivered;
    fr.dropped = rt.dropped;
    fr.replaced = rt.replaced;
    fr.throughput_bps =
        measure_throughput(rt.log, fs.size_bits, _w0, _sc.duration_s);

    if (fs.cls == FlowClass::Aoi) {
      double w = _w0;
      if (_sc.warmup_s < 0.0 && !rt.log.empty())
        w = std::max(w, rt.log.front().time_s);
      fr.window_start_s = w;
      try {
        fr.aoi_s = measure_aoi(rt.log, fs.phase_s, w, _sc.duration_s);
        AgeDecomposition dec = decompose_age(
            fr.aoi_s, rt.rate, path_delay(_net, fs.path, fs.size_bits));
        fr.u_avg = dec.u;
        fr.p_avg = dec.p;
        fr.q_avg = dec.q;
      } catch (const std::runtime_error&) {
        fr.starved = true;
        fr.aoi_s = kInf;
        fr.u_avg = fr.p_avg = fr.q_avg = kInf;
      }
      rep.total_aoi_s += fr.aoi_s;
    } else {
      rep.total_lda_throughput_bps += fr.throughput_bps;
    }
    rep.flows.push_back(std::move(fr));
  }

  for (LinkIdx l = 0; l < _net.links.size(); ++l) {
    const Outport& op = _ports[l];
    LinkReport lr;
    lr.id = _net.links[l].id;
    lr.tx_bits_lda = op.win_bits[0];
    lr.tx_bits_aoi = op.win_bits[1];
    lr.busy_lda_s = op.win_busy[0];
    lr.busy_aoi_s = op.win_busy[1];
    lr.gamma_achieved = aoi_ratio(op.win_bits[0], op.win_bits[1]);
    rep.links.push_back(std::move(lr));
  }
  return rep;
}

SimReport Engine::run() {
  init();
  while (!_heap.empty()) {
    if (_heap.top().t > _sc.duration_s) break;
    Event ev = _heap.top();
    _heap.pop();
    ++_events;
    dispatch(ev);
  }
  if (_sc.debug_checks) audit();
  return build_report();
}

}  // namespace

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Sdm:
      return "sdm";
    case SchedulerKind::Tdm:
      return "tdm";
    case SchedulerKind::FifoBaseline:
      return "fifo";
    case SchedulerKind::PriorityAoi:
      return "priority_aoi";
    case SchedulerKind::PerFlowShare:
      return "per_flow_share";
    case SchedulerKind::WaitingOracle:
      return "waiting_oracle";
  }
  return "?";
}

bool scheduler_from_string(const std::string& s, SchedulerKind* out) {
  if (s == "sdm")
    *out = SchedulerKind::Sdm;
  else if (s == "tdm")
    *out = SchedulerKind::Tdm;
  else if (s == "fifo")
    *out = SchedulerKind::FifoBaseline;
  else if (s == "priority_aoi")
    *out = SchedulerKind::PriorityAoi;
  else if (s == "per_flow_share")
    *out = SchedulerKind::PerFlowShare;
  else if (s == "waiting_oracle")
    *out = SchedulerKind::WaitingOracle;
  else
    return false;
  return true;
}

SimReport run(const Scenario& sc) {
  Engine eng(sc);
  return eng.run();
}

double measure_aoi(const std::vector<DeliveryRecord>& log, double age_origin_s,
                   double w0_s, double w1_s) {
  double w0 = std::max(w0_s, age_origin_s);
  if (!(w1_s > w0)) throw std::runtime_error("measure_aoi: empty window");

  // Freshness staircase: generation time of the freshest delivered update.
  // Deliveries that do not improve it (stale, out of order) are ignored.
  struct Step {
    double at, gen;
  };
  std::vector<Step> steps;
  double best = -kInf;
  bool any_before_end = false;
  for (const DeliveryRecord& r : log) {
    if (r.time_s < w1_s) any_before_end = true;
    if (r.gen_s > best) {
      best = r.gen_s;
      steps.push_back({r.time_s, r.gen_s});
    }
  }
  if (!any_before_end)
    throw std::runtime_error("measure_aoi: no deliveries before window end");

  // age over [w0, w1): t - G(t), with G(t) = age_origin before the first step
  double area = 0.0;
  auto add_segment = [&](double from, double to, double gen) {
    double a = std::max(from, w0);
    double b = std::min(to, w1_s);
    if (b <= a) return;
    area += ((a - gen) + (b - gen)) * (b - a) / 2.0;
  };
  double prev_t = w0;
  double prev_gen = age_origin_s;
  for (const Step& s : steps) {
    if (s.at > prev_t) {
      add_segment(prev_t, s.at, prev_gen);
      prev_t = s.at;
    }
    if (s.gen > prev_gen) prev_gen = s.gen;
  }
  add_segment(prev_t, w1_s, prev_gen);
  return area / (w1_s - w0);
}

double measure_throughput(const std::vector<DeliveryRecord>& log,
                          double size_bits, double w0_s, double w1_s) {
  if (!(w1_s > w0_s)) return 0.0;
  uint64_t count = 0;
  for (const DeliveryRecord& r : log)
    if (r.time_s >= w0_s && r.time_s < w1_s) ++count;
  return static_cast<double>(count) * size_bits / (w1_s - w0_s);
}

AgeDecomposition decompose_age(double aoi_s, double mu_hz,
                               double path_delay_s) {
  AgeDecomposition d;
  d.u = mu_hz > 0.0 ? 1.0 / (2.0 * mu_hz) : kInf;
  d.p = path_delay_s;
  d.q = aoi_s - d.u - d.p;
  return d;
}

std::vector<double> periodic_source_times(double phase_s, double freq_hz,
                                          double until_s) {
  std::vector<double> out;
  if (!(freq_hz > 0.0)) return out;
  double period = 1.0 / freq_hz;
  for (uint64_t k = 0;; ++k) {
    double t = phase_s + static_cast<double>(k) * period;
    if (t > until_s) break;
    out.push_back(t);
  }
  return out;
}

std::vector<double> paced_lda_source_times(double phase_s, double rate_bps,
                                           double size_bits, double until_s) {
  if (!(rate_bps > 0.0)) return {};
  return periodic_source_times(phase_s, rate_bps / size_bits, until_s);
}

double per_flow_share(double capacity_bps, double flow_load_bps,
                      double total_load_bps) {
  if (!(total_load_bps > 0.0)) return 0.0;
  return capacity_bps * flow_load_bps / total_load_bps;
}

std::string report_to_json(const SimReport& rep) {
  nlohmann::json j;
  j["scheduler"] = to_string(rep.scheduler);
  j["duration_s"] = rep.duration_s;
  j["warmup_s"] = rep.warmup_s;
  j["seed"] = rep.seed;
  j["events"] = rep.events;
  j["total_lda_throughput_bps"] = rep.total_lda_throughput_bps;
  j["total_aoi_s"] = rep.total_aoi_s;
  j["flows"] = nlohmann::json::array();
  for (const FlowReport& f : rep.flows) {
    nlohmann::json jf = {{"id", f.id},
                         {"class", to_string(f.cls)},
                         {"rate_assigned", f.rate_assigned},
                         {"generated", f.generated},
                         {"delivered", f.delivered},
                         {"dropped", f.dropped},
                         {"replaced", f.replaced},
                         {"throughput_bps", f.throughput_bps}};
    if (f.cls == FlowClass::Aoi) {
      jf["aoi_s"] = f.aoi_s;
      jf["u_avg"] = f.u_avg;
      jf["p_avg"] = f.p_avg;
      jf["q_avg"] = f.q_avg;
      jf["window_start_s"] = f.window_start_s;
      jf["starved"] = f.starved;
    }
    j["flows"].push_back(std::move(jf));
  }
  j["links"] = nlohmann::json::array();
  for (const LinkReport& l : rep.links)
    j["links"].push_back({{"id", l.id},
                          {"tx_bits_lda", l.tx_bits_lda},
                          {"tx_bits_aoi", l.tx_bits_aoi},
                          {"busy_lda_s", l.busy_lda_s},
                          {"busy_aoi_s", l.busy_aoi_s},
                          {"gamma_achieved", l.gamma_achieved}});
  return j.dump(2);
}

}  // namespace aoinet
