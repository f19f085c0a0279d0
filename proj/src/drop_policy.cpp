/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/drop_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pafd {

void PafdConfig::validate() const {
  if (!(0 <= buf_min && buf_min < buf_max && buf_max <= 1))
    throw ConfigError("pafd.buf_min", "need 0 <= buf_min < buf_max <= 1");
  if (!(buf_min <= buf_medium && buf_medium <= buf_max))
    throw ConfigError("pafd.buf_medium", "must lie between buf_min and buf_max");
  if (!(0 <= p_self && p_self <= 1)) throw ConfigError("pafd.p_self", "must lie in [0,1]");
  if (!(alpha_offset_low >= 0))
    throw ConfigError("pafd.alpha_offset_low", "must be non-negative");
  if (!(0 <= beta_knee && beta_knee <= 1))
    throw ConfigError("pafd.beta_knee", "must lie in [0,1]");
  if (!(0 < beta_min && beta_min <= 1)) throw ConfigError("pafd.beta_min", "must lie in (0,1]");
}

RedConfig RedConfig::defaults_for(Bytes capacity) {
  RedConfig c;
  c.min_th = 0.25 * static_cast<double>(capacity);
  c.max_th = 0.75 * static_cast<double>(capacity);
  return c;
}

void RedConfig::validate(Bytes capacity) const {
  if (!(0 < w_q && w_q < 1)) throw ConfigError("red.w_q", "must lie in (0,1)");
  if (!(0 <= min_th && min_th < max_th))
    throw ConfigError("red.min_th", "need 0 <= min_th < max_th");
  if (!(max_th <= static_cast<double>(capacity)))
    throw ConfigError("red.max_th", "must not exceed the buffer capacity");
  if (!(0 < max_p && max_p <= 1)) throw ConfigError("red.max_p", "must lie in (0,1]");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Admit: return "admit";
    case Verdict::DropArrival: return "drop-arrival";
    case Verdict::EvictThenAdmit: return "evict-then-admit";
  }
  return "?";
}

std::vector<Packet> apply_decision(SharedBuffer& buffer, const Packet& arrival,
                                   const PolicyDecision& decision) {
  if (decision.verdict == Verdict::EvictThenAdmit && decision.evictions.empty())
    throw InvariantViolation("EvictThenAdmit without evictions");
  std::vector<Packet> evicted;
  evicted.reserve(decision.evictions.size());
  for (const auto& e : decision.evictions) {
    Packet p = buffer.pop_head(e.flow);
    if (p.id != e.packet) throw InvariantViolation("eviction does not match flow head");
    evicted.push_back(p);
  }
  if (decision.admits()) buffer.enqueue(arrival);
  return evicted;
}

double compute_alpha(double occupancy, double buf_min, double buf_max) {
  const double cur2 = occupancy * occupancy;
  const double min2 = buf_min * buf_min;
  const double max2 = buf_max * buf_max;
  if (cur2 < min2) return 0.0;
  if (cur2 > max2) return 1.0;
  return std::clamp(1.0 - (cur2 - min2) / (max2 - min2), 0.0, 1.0);
}

double compute_beta(PriorityClass priority, double load, const PafdConfig& cfg) {
  if (priority == PriorityClass::High) return 1.0;
  load = std::clamp(load, 0.0, 1.0);
  if (load <= cfg.beta_knee || cfg.beta_knee >= 1.0) return 1.0;
  const double t = (load - cfg.beta_knee) / (1.0 - cfg.beta_knee);
  return 1.0 - (1.0 - cfg.beta_min) * t;
}

namespace {

double blend(double alpha, double u_hat, double v_hat, double beta) {
  return (alpha * u_hat + (1.0 - alpha) * v_hat) * beta;
}

}  // namespace

double synthetic_weight(double alpha, double u_hat, double v_hat, double beta) {
  const double w = blend(alpha, u_hat, v_hat, beta);
  if (!(w > 0)) throw std::domain_error("degenerate weight");
  return w;
}

OccupancyView OccupancyView::of(const SharedBuffer& buffer) {
  OccupancyView v;
  v.capacity = buffer.capacity();
  v.occupied = buffer.occupied();
  v.flows.reserve(buffer.flow_count());
  for (const auto& f : buffer.flows())
    v.flows.push_back({f.id(), f.u(), f.priority(), f.queued_bytes()});
  return v;
}

BlendParams blend_params(const OccupancyView& view, const PafdConfig& cfg, double load) {
  const double occupancy =
      static_cast<double>(view.occupied) / static_cast<double>(view.capacity);
  const double alpha_high = compute_alpha(occupancy, cfg.buf_min, cfg.buf_max);
  BlendParams p;
  p.alpha.reserve(view.flows.size());
  p.beta.reserve(view.flows.size());
  for (const auto& f : view.flows) {
    if (cfg.diffserv && f.priority == PriorityClass::Low) {
      p.alpha.push_back(std::clamp(alpha_high - cfg.alpha_offset_low, 0.0, 1.0));
      p.beta.push_back(compute_beta(PriorityClass::Low, load, cfg));
    } else {
      p.alpha.push_back(alpha_high);
      p.beta.push_back(1.0);
    }
  }
  return p;
}

FlowId select_victim(const OccupancyView& view, std::span<const double> alpha,
                     std::span<const double> beta) {
  const std::size_t n = view.flows.size();
  if (alpha.size() != n || beta.size() != n)
    throw std::invalid_argument("alpha/beta must have one entry per flow");
  if (view.occupied == 0) throw std::domain_error("no victim available");

  // A single flow has no queue-length share to compare against.
  if (n == 1) return view.flows.front().id;

  const double sum_u = std::accumulate(view.flows.begin(), view.flows.end(), 0.0,
                                       [](double acc, const FlowOccupancy& f) { return acc + f.u; });
  const double occupied = static_cast<double>(view.occupied);
  const double others = static_cast<double>(n - 1);

  std::optional<FlowId> best;
  double best_score = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = view.flows[i];
    if (f.queued == 0) continue;
    const double c = static_cast<double>(f.queued);
    const double u_hat = f.u / sum_u;
    const double v_hat = (1.0 - c / occupied) / others;
    const double w = blend(alpha[i], u_hat, v_hat, beta[i]);
    const double score = w > 0 ? c / w : std::numeric_limits<double>::infinity();
    if (score > best_score) {
      best_score = score;
      best = f.id;
    }
  }
  if (!best) throw std::domain_error("no victim available");
  return *best;
}

FlowId select_victim(const OccupancyView& view, const PafdConfig& cfg, double load) {
  const auto params = blend_params(view, cfg, load);
  return select_victim(view, params.alpha, params.beta);
}

FlowId select_victim(const SharedBuffer& buffer, const PafdConfig& cfg, double load) {
  return select_victim(OccupancyView::of(buffer), cfg, load);
}

PolicyDecision pafd_admit(const Packet& packet, const SharedBuffer& buffer,
                          const PafdConfig& cfg, double load, Rng& rng) {
  if (packet.length > buffer.capacity()) {
    auto d = PolicyDecision::drop_arrival();
    d.oversize = true;
    return d;
  }
  if (buffer.remaining() >= packet.length) return PolicyDecision::admit();

  OccupancyView view = OccupancyView::of(buffer);
  std::vector<std::size_t> next_head(view.flows.size(), 0);
  PolicyDecision decision;

  // Each pass either evicts one queued packet or drops the arrival, so the
  // loop runs at most (queued packets + 1) times.
  for (;;) {
    const FlowId victim = select_victim(view, cfg, load);
    const double draw = rng.uniform01();
    const bool drop_arrival =
        victim == packet.flow ? draw < cfg.p_self : !(draw < 1.0 - cfg.p_self);
    if (drop_arrival) {
      decision.verdict = Verdict::DropArrival;
      return decision;
    }

    const auto& queue = buffer.flow(victim).queue();
    const Packet& head = queue[next_head[victim.index()]++];
    decision.evictions.push_back({victim, head.id, head.length});
    view.flows[victim.index()].queued -= head.length;
    view.occupied -= head.length;

    if (view.capacity - view.occupied >= packet.length) {
      decision.verdict = Verdict::EvictThenAdmit;
      return decision;
    }
  }
}

double red_drop_probability(double avg, int count, const RedConfig& cfg) {
  const double pb = cfg.max_p * (avg - cfg.min_th) / (cfg.max_th - cfg.min_th);
  const double denom = 1.0 - static_cast<double>(count) * pb;
  if (denom <= 0) return 1.0;
  return std::clamp(pb / denom, 0.0, 1.0);
}

PolicyDecision red_admit(const Packet& packet, const SharedBuffer& buffer, RedState& state,
                         const RedConfig& cfg, Rng& rng, Time now) {
  if (buffer.occupied() > 0) {
    state.avg = (1.0 - cfg.w_q) * state.avg + cfg.w_q * static_cast<double>(buffer.occupied());
  } else if (state.idle_since) {
    // Decay as if m typical packets had gone by while the queue sat empty.
    const double m = static_cast<double>((now - *state.idle_since).count()) /
                     static_cast<double>(std::max<std::int64_t>(state.typical_tx.count(), 1));
    state.avg *= std::pow(1.0 - cfg.w_q, m);
    state.idle_since = now;
  }

  if (buffer.remaining() < packet.length) {
    state.count = 0;
    auto d = PolicyDecision::drop_arrival();
    d.oversize = packet.length > buffer.capacity();
    return d;
  }
  if (state.avg < cfg.min_th) {
    state.count = -1;
    return PolicyDecision::admit();
  }
  if (state.avg >= cfg.max_th) {
    state.count = 0;
    return PolicyDecision::drop_arrival();
  }
  ++state.count;
  if (rng.uniform01() < red_drop_probability(state.avg, state.count, cfg)) {
    state.count = 0;
    return PolicyDecision::drop_arrival();
  }
  return PolicyDecision::admit();
}

void red_on_queue_empty(RedState& state, Time now) { state.idle_since = now; }

PolicyDecision td_admit(const Packet& packet, const SharedBuffer& buffer) {
  if (buffer.remaining() >= packet.length) return PolicyDecision::admit();
  auto d = PolicyDecision::drop_arrival();
  d.oversize = packet.length > buffer.capacity();
  return d;
}

PriorityClass classify_sla(const Packet& packet, const SlaTable& sla) {
  const auto it = sla.find(packet.flow);
  return it == sla.end() ? PriorityClass::Low : it->second;
}

}  // namespace pafd
