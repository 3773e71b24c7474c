#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "aoinet/net_model.hpp"

// AoI-aware queueing at an outport: a classifier splits traffic into an LDA
// subqueue (plain FIFO, tail drop) and an AoI subqueue (IFIL: FIFO across
// flows, newest-wins within a flow, at most one update per flow). A scheduler
// (SDM or TDM) picks which subqueue sends next.

namespace aoinet {

struct Packet {
  FlowIdx flow = 0;
  FlowClass cls = FlowClass::Lda;
  double size_bits = 0.0;
  double gen_time_s = 0.0;
  uint64_t seq = 0;
  uint32_t hop = 0;  // index into the flow's path while in transit
};

enum class EnqueueOutcome : uint8_t { Inserted, Replaced, Dropped };

// Inter-flow FIFO, intra-flow LIFO with replacement. One slot per flow; a
// newer update overwrites the queued one. By default the replacement keeps
// the victim's position in the inter-flow order; move_to_back re-queues it
// at the tail instead (kept for comparison).
class IfilQueue {
 public:
  explicit IfilQueue(bool move_to_back = false)
      : _move_to_back(move_to_back) {}

  EnqueueOutcome enqueue(const Packet& p);
  std::optional<Packet> dequeue();
  bool empty() const { return _order.empty(); }
  size_t size() const { return _order.size(); }
  uint64_t replaced_count() const { return _replaced; }
  const std::list<Packet>& contents() const { return _order; }

 private:
  std::list<Packet> _order;  // front = next to send
  std::unordered_map<FlowIdx, std::list<Packet>::iterator> _slot;
  bool _move_to_back;
  uint64_t _replaced = 0;
};

// Tail-drop FIFO holding at most max_bits worth of payload.
class FifoQueue {
 public:
  explicit FifoQueue(double max_bits) : _max_bits(max_bits) {}

  EnqueueOutcome enqueue(const Packet& p);
  std::optional<Packet> dequeue();
  bool empty() const { return _q.empty(); }
  size_t size() const { return _q.size(); }
  double bits() const { return _bits; }
  uint64_t dropped_count() const { return _dropped; }
  const std::list<Packet>& contents() const { return _q; }

 private:
  std::list<Packet> _q;
  double _max_bits;
  double _bits = 0.0;
  uint64_t _dropped = 0;
};

FlowClass classify(const Packet& p, const std::vector<FlowSpec>& flows);

enum class SendChoice : uint8_t { Lda, Aoi, Idle };

// Size-driven multiplexing: budget b starts at 0; sending LDA earns
// gamma * size, sending AoI spends (1 - gamma) * size. Positive budget means
// the AoI subqueue has credit and goes first. Work conserving.
struct SdmState {
  double gamma = 1.0;
  double budget_bits = 0.0;

  SendChoice decide(bool lda_empty, bool aoi_empty) const;
  void account(FlowClass sent, double size_bits);
};

// Time-division multiplexing: frames of length frame_s split into an LDA
// phase (1 - gamma) * frame_s followed by an AoI phase gamma * frame_s. A
// transmission of the phase's own class that overruns the phase end by delta
// extends the other class's next phase by delta / share_own, repaying the
// stolen head of that phase plus its proportional slice so the long-run
// busy-time ratio stays gamma : (1 - gamma). Extensions accumulate as
// carryover debt. Work conserving.
class TdmState {
 public:
  TdmState(double frame_s, double gamma);

  SendChoice decide(double now_s, bool lda_empty, bool aoi_empty);
  // Call when a transmission finishes. phase/phase_end must be the values
  // captured by current_phase()/current_phase_end() when it started.
  void account(FlowClass sent, FlowClass phase_at_start,
               double phase_end_at_start, double end_s);

  FlowClass current_phase(double now_s);
  double current_phase_end(double now_s);

 private:
  void advance(double now_s);

  double _frame_s;
  double _gamma;
  FlowClass _phase = FlowClass::Lda;
  double _phase_end;
  double _debt_lda = 0.0;  // pending extension for the next LDA phase
  double _debt_aoi = 0.0;
};

}  // namespace aoinet
