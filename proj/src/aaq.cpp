#include "aoinet/aaq.hpp"

#include <stdexcept>

namespace aoinet {

EnqueueOutcome IfilQueue::enqueue(const Packet& p) {
  auto it = _slot.find(p.flow);
  if (it == _slot.end()) {
    _order.push_back(p);
    _slot.emplace(p.flow, std::prev(_order.end()));
    return EnqueueOutcome::Inserted;
  }
  ++_replaced;
  if (_move_to_back) {
    _order.erase(it->second);
    _order.push_back(p);
    it->second = std::prev(_order.end());
  } else {
    *it->second = p;  // keep the victim's place in the inter-flow order
  }
  return EnqueueOutcome::Replaced;
}

std::optional<Packet> IfilQueue::dequeue() {
  if (_order.empty()) return std::nullopt;
  Packet p = _order.front();
  _order.pop_front();
  _slot.erase(p.flow);
  return p;
}

EnqueueOutcome FifoQueue::enqueue(const Packet& p) {
  if (_bits + p.size_bits > _max_bits) {
    ++_dropped;
    return EnqueueOutcome::Dropped;
  }
  _q.push_back(p);
  _bits += p.size_bits;
  return EnqueueOutcome::Inserted;
}

std::optional<Packet> FifoQueue::dequeue() {
  if (_q.empty()) return std::nullopt;
  Packet p = _q.front();
  _q.pop_front();
  _bits -= p.size_bits;
  if (_q.empty()) _bits = 0.0;  // kill accumulated rounding
  return p;
}

FlowClass classify(const Packet& p, const std::vector<FlowSpec>& flows) {
  if (p.flow >= flows.size())
    throw std::out_of_range("classify: unknown flow index");
  return flows[p.flow].cls;
}

SendChoice SdmState::decide(bool lda_empty, bool aoi_empty) const {
  if (budget_bits > 0.0) {
    if (!aoi_empty) return SendChoice::Aoi;
    if (!lda_empty) return SendChoice::Lda;
  } else {
    if (!lda_empty) return SendChoice::Lda;
    if (!aoi_empty) return SendChoice::Aoi;
  }
  return SendChoice::Idle;
}

void SdmState::account(FlowClass sent, double size_bits) {
  if (sent == FlowClass::Lda)
    budget_bits += gamma * size_bits;
  else
    budget_bits -= (1.0 - gamma) * size_bits;
}

TdmState::TdmState(double frame_s, double gamma)
    : _frame_s(frame_s), _gamma(gamma) {
  if (!(frame_s > 0.0)) throw std::invalid_argument("TDM frame must be > 0");
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("TDM gamma out of [0,1]");
  _phase = FlowClass::Lda;
  _phase_end = (1.0 - _gamma) * _frame_s;
}

void TdmState::advance(double now_s) {
  // Flip through any elapsed (possibly zero-length) phases. At least one of
  // the two base lengths is positive, so this terminates.
  while (now_s >= _phase_end) {
    if (_phase == FlowClass::Lda) {
      _phase = FlowClass::Aoi;
      _phase_end += _gamma * _frame_s + _debt_aoi;
      _debt_aoi = 0.0;
    } else {
      _phase = FlowClass::Lda;
      _phase_end += (1.0 - _gamma) * _frame_s + _debt_lda;
      _debt_lda = 0.0;
    }
  }
}

SendChoice TdmState::decide(double now_s, bool lda_empty, bool aoi_empty) {
  advance(now_s);
  if (_phase == FlowClass::Lda) {
    if (!lda_empty) return SendChoice::Lda;
    if (!aoi_empty) return SendChoice::Aoi;
  } else {
    if (!aoi_empty) return SendChoice::Aoi;
    if (!lda_empty) return SendChoice::Lda;
  }
  return SendChoice::Idle;
}

void TdmState::account(FlowClass sent, FlowClass phase_at_start,
                       double phase_end_at_start, double end_s) {
  if (sent != phase_at_start) return;  // borrowed slot, no compensation
  double overrun = end_s - phase_end_at_start;
  if (overrun <= 0.0) return;
  double share_own = sent == FlowClass::Lda ? 1.0 - _gamma : _gamma;
  if (share_own <= 0.0) return;  // phase existed only through debt
  // The overrun eats the head of the other phase under lazy advance, so the
  // other class must be repaid the stolen time plus its proportional slice:
  // (own + d) / (other - d + d/own) == own / other exactly.
  double extension = overrun / share_own;
  if (sent == FlowClass::Lda)
    _debt_aoi += extension;
  else
    _debt_lda += extension;
}

FlowClass TdmState::current_phase(double now_s) {
  advance(now_s);
  return _phase;
}

double TdmState::current_phase_end(double now_s) {
  advance(now_s);
  return _phase_end;
}

}  // namespace aoinet
