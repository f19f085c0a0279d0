/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>
#include <thread>

namespace pafd {

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Pafd: return "pafd";
    case PolicyKind::PafdDiffServ: return "pafd-ds";
    case PolicyKind::Red: return "red";
    case PolicyKind::TailDrop: return "td";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "pafd") return PolicyKind::Pafd;
  if (name == "pafd-ds") return PolicyKind::PafdDiffServ;
  if (name == "red") return PolicyKind::Red;
  if (name == "td") return PolicyKind::TailDrop;
  return std::nullopt;
}

namespace {

const char* policy_label(PolicyKind k) {
  switch (k) {
    case PolicyKind::Pafd: return "PAFD";
    case PolicyKind::PafdDiffServ: return "DSPAFD";
    case PolicyKind::Red: return "RED";
    case PolicyKind::TailDrop: return "TD";
  }
  return "?";
}

const char* scheduler_label(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Bcf: return "BCF";
    case SchedulerKind::Lqf: return "LQF";
    case SchedulerKind::RoundRobin: return "RR";
  }
  return "?";
}

}  // namespace

std::string Combo::label() const {
  return std::string(policy_label(policy)) + "-" + scheduler_label(scheduler);
}

std::optional<Combo> Combo::parse(std::string_view label) {
  for (auto p : {PolicyKind::Pafd, PolicyKind::PafdDiffServ, PolicyKind::Red,
                 PolicyKind::TailDrop})
    for (auto s : {SchedulerKind::Bcf, SchedulerKind::Lqf, SchedulerKind::RoundRobin}) {
      const Combo c{p, s};
      if (c.label() == label) return c;
    }
  return std::nullopt;
}

const std::vector<Combo>& standard_combos() {
  static const std::vector<Combo> combos{
      {PolicyKind::Pafd, SchedulerKind::Bcf},     {PolicyKind::Pafd, SchedulerKind::Lqf},
      {PolicyKind::Red, SchedulerKind::Bcf},      {PolicyKind::Red, SchedulerKind::Lqf},
      {PolicyKind::TailDrop, SchedulerKind::Bcf}, {PolicyKind::TailDrop, SchedulerKind::Lqf},
  };
  return combos;
}

// ---------------------------------------------------------------------------
// SimConfig
// ---------------------------------------------------------------------------

std::vector<double> SimConfig::resolved_phi() const {
  std::vector<double> phi;
  phi.reserve(flows.size());
  const bool explicit_phi = !flows.empty() && flows.front().phi.has_value();
  if (explicit_phi) {
    for (const auto& f : flows) phi.push_back(f.phi.value_or(0.0));
    return phi;
  }
  const double total_u = std::accumulate(flows.begin(), flows.end(), 0.0,
                                         [](double acc, const FlowConfig& f) { return acc + f.u; });
  for (const auto& f : flows) phi.push_back(f.u / total_u);
  return phi;
}

double SimConfig::nominal_load() const {
  if (load) return *load;
  double offered = 0;
  for (const auto& f : flows)
    if (f.source.on_rate > 0) offered += f.source.mean_rate();
  return offered / link_rate;
}

void SimConfig::validate() const {
  if (duration.count() <= 0) throw ConfigError("duration_s", "must be positive");
  const Time w = effective_warmup();
  if (w.count() < 0 || w >= duration)
    throw ConfigError("warmup_s", "need 0 <= warmup < duration");
  if (!(link_rate > 0)) throw ConfigError("link_rate", "must be positive");
  if (buffer_capacity == 0) throw ConfigError("buffer_capacity", "must be positive");
  if (load_window.count() <= 0) throw ConfigError("load_window_ms", "must be positive");
  if (flows.empty()) throw ConfigError("flows", "at least one flow is required");

  pafd.validate();
  effective_red().validate(buffer_capacity);
  channel.validate();

  const bool explicit_phi = flows.front().phi.has_value();
  for (const auto& f : flows) {
    if (!(f.u > 0)) throw ConfigError("u", "static weights must be positive");
    if (f.phi.has_value() != explicit_phi)
      throw ConfigError("phi", "give phi for every flow or for none");
    if (f.phi && !(*f.phi > 0 && *f.phi <= 1)) throw ConfigError("phi", "must lie in (0,1]");
    if (f.source.on_rate < 0) throw ConfigError("on_rate", "must be non-negative");
    if (f.source.mean_on.count() <= 0) throw ConfigError("mean_on_ms", "must be positive");
    if (f.source.mean_off.count() <= 0) throw ConfigError("mean_off_ms", "must be positive");
    const auto& l = f.source.lengths;
    if (l.low == 0 || l.low > l.high) throw ConfigError("lengths", "need 1 <= low <= high");
  }
  const auto phi = resolved_phi();
  const double phi_sum = std::accumulate(phi.begin(), phi.end(), 0.0);
  if (std::abs(phi_sum - 1.0) > 1e-9) throw ConfigError("phi", "GPS weights must sum to 1");

  if (load) {
    if (!(*load > 0)) throw ConfigError("load", "must be positive");
    const bool any_rate = std::any_of(flows.begin(), flows.end(),
                                      [](const FlowConfig& f) { return f.source.on_rate > 0; });
    if (!any_rate) throw ConfigError("load", "no flow has a positive on_rate to scale");
  }
}

SimConfig SimConfig::standard(LengthConfig lengths) {
  SimConfig cfg;
  cfg.flows.reserve(16);
  for (int i = 0; i < 16; ++i) {
    FlowConfig f;
    const bool heavy = i < 8;
    f.u = heavy ? 2.0 : 1.0;
    f.source.on_rate = heavy ? 2.0 : 1.0;  // relative; rescaled by `load`
    f.source.lengths = lengths;
    cfg.flows.push_back(f);
  }
  cfg.load = 1.0;
  return cfg;
}

SimConfig with_load(const SimConfig& cfg, double load) {
  SimConfig out = cfg;
  out.load = load;
  return out;
}

// ---------------------------------------------------------------------------
// EventQueue
// ---------------------------------------------------------------------------

void EventQueue::push(Event e) {
  e.seq = next_seq_++;
  heap_.push(e);
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

std::vector<double> scaled_rates(const SimConfig& cfg) {
  std::vector<double> rates;
  rates.reserve(cfg.flows.size());
  for (const auto& f : cfg.flows) rates.push_back(f.source.on_rate);
  if (!cfg.load) return rates;

  double offered = 0;
  for (const auto& f : cfg.flows)
    if (f.source.on_rate > 0) offered += f.source.mean_rate();
  const double scale = *cfg.load * cfg.link_rate / offered;
  for (auto& r : rates) r *= scale;
  return rates;
}

struct FlowStats {
  Bytes offered_bytes = 0;
  Bytes delivered_bytes = 0;
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  std::uint64_t evicted = 0;
  std::uint64_t oversize = 0;
  std::vector<DelayRecord> delays;
};

class Simulation {
public:
  explicit Simulation(const SimConfig& cfg)
      : cfg_(cfg),
        warmup_(cfg.effective_warmup()),
        buffer_(make_buffer(cfg)),
        red_cfg_(cfg.effective_red()),
        policy_rng_(cfg.seed, kStreamPolicy),
        stats_(cfg.flows.size()) {
    const auto rates = scaled_rates(cfg);
    const double mean_len = cfg.flows.front().source.lengths.mean();
    red_.typical_tx = Time{std::max<std::int64_t>(1, std::llround(mean_len * 1e6 / cfg.link_rate))};

    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
      const auto id = FlowId::from_index(i);
      source_rngs_.emplace_back(cfg.seed ^ id.value(), kStreamSource);
      channel_rngs_.emplace_back(cfg.seed ^ id.value(), kStreamChannel);

      const bool good = channel_rngs_.back().bernoulli(cfg.channel.stationary_good());
      buffer_.set_channel(id, good ? ChannelState{Channel::Good, cfg.channel.r_good}
                                   : ChannelState{Channel::Bad, cfg.channel.r_bad});

      if (rates[i] > 0) {
        OnOffParams params = cfg.flows[i].source;
        params.on_rate = rates[i];
        sources_.emplace_back(OnOffSource(id, params, source_rngs_.back()));
        schedule_source(id, Time{0});
      } else {
        sources_.emplace_back(std::nullopt);
      }
    }
    events_.push({cfg.channel.step, 0, EventKind::ChannelTick, FlowId{}, {}});
  }

  RunReport run() {
    while (!events_.empty() && events_.next_time() <= cfg_.duration) {
      const Event e = events_.pop();
      if (e.at < now_) throw InvariantViolation("event time went backwards");
      now_ = e.at;
      switch (e.kind) {
        case EventKind::Source: on_source(e); break;
        case EventKind::TransmissionComplete: on_tx_complete(); break;
        case EventKind::ChannelTick: on_channel_tick(); break;
      }
      if (!link_busy_ && !buffer_.all_empty())
        throw InvariantViolation("link idle while packets are queued");
    }
    return report();
  }

private:
  static SharedBuffer make_buffer(const SimConfig& cfg) {
    SlaTable sla;
    for (std::size_t i = 0; i < cfg.flows.size(); ++i)
      if (cfg.flows[i].priority) sla[FlowId::from_index(i)] = *cfg.flows[i].priority;

    const auto phi = cfg.resolved_phi();
    std::vector<ServiceFlow> flows;
    flows.reserve(cfg.flows.size());
    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
      const auto id = FlowId::from_index(i);
      const Packet probe{0, id, 1, Time{0}};
      flows.emplace_back(id, cfg.flows[i].u, phi[i], classify_sla(probe, sla));
    }
    return SharedBuffer(cfg.buffer_capacity, std::move(flows),
                        {cfg.pafd.buf_min, cfg.pafd.buf_medium, cfg.pafd.buf_max});
  }

  bool measuring() const { return now_ >= warmup_; }

  void schedule_source(FlowId id, Time now) {
    auto& src = *sources_[id.index()];
    const SourceEvent se = next_source_event(src, now, source_rngs_[id.index()]);
    events_.push({se.at, 0, EventKind::Source, id, se});
  }

  double observe_load(Bytes length) {
    recent_.push_back({now_, length});
    recent_bytes_ += length;
    while (recent_.front().first <= now_ - cfg_.load_window) {
      recent_bytes_ -= recent_.front().second;
      recent_.pop_front();
    }
    const double window_s = static_cast<double>(cfg_.load_window.count()) / 1e6;
    return static_cast<double>(recent_bytes_) / (cfg_.link_rate * window_s);
  }

  PolicyDecision decide(const Packet& p, double load) {
    switch (cfg_.policy) {
      case PolicyKind::Pafd:
      case PolicyKind::PafdDiffServ: {
        PafdConfig pc = cfg_.pafd;
        pc.diffserv = cfg_.policy == PolicyKind::PafdDiffServ;
        return pafd_admit(p, buffer_, pc, load, policy_rng_);
      }
      case PolicyKind::Red:
        return red_admit(p, buffer_, red_, red_cfg_, policy_rng_, now_);
      case PolicyKind::TailDrop:
        return td_admit(p, buffer_);
    }
    throw std::logic_error("unknown policy");
  }

  void on_source(const Event& e) {
    if (e.source.kind == SourceEventKind::EmitPacket) on_arrival(e.flow, e.source.length);
    schedule_source(e.flow, now_);
  }

  void on_arrival(FlowId flow, std::uint32_t length) {
    const Packet p{next_packet_id_++, flow, length, now_};
    auto& st = stats_[flow.index()];
    const double load = observe_load(length);
    const PolicyDecision d = decide(p, load);
    const auto evicted = apply_decision(buffer_, p, d);

    for (const auto& ev : evicted) {
      conservation_.evicted += ev.length;
      if (measuring()) ++stats_[ev.flow.index()].evicted;
    }
    if (d.admits()) conservation_.admitted += length;
    if (measuring()) {
      st.offered_bytes += length;
      if (d.admits()) ++st.admitted;
      else ++st.dropped;
      if (d.oversize) ++st.oversize;
    }
    try_start();
  }

  void try_start() {
    if (link_busy_ || buffer_.all_empty()) return;
    std::optional<FlowId> next;
    switch (cfg_.scheduler) {
      case SchedulerKind::Bcf: next = bcf_next(buffer_); break;
      case SchedulerKind::Lqf: next = lqf_next(buffer_); break;
      case SchedulerKind::RoundRobin: next = rr_next(rr_cursor_, buffer_); break;
    }
    if (!next) throw InvariantViolation("scheduler found no flow in a non-empty buffer");

    // The channel multiplier is fixed for the whole packet at transmission start.
    const double mult = buffer_.flow(*next).channel().rate_multiplier;
    in_flight_ = buffer_.pop_head(*next);
    if (buffer_.all_empty()) red_on_queue_empty(red_, now_);
    const double tx_us = static_cast<double>(in_flight_.length) * 1e6 / (cfg_.link_rate * mult);
    link_busy_ = true;
    events_.push({now_ + Time{std::max<std::int64_t>(1, std::llround(tx_us))}, 0,
                  EventKind::TransmissionComplete, in_flight_.flow, {}});
  }

  void on_tx_complete() {
    conservation_.delivered += in_flight_.length;
    if (measuring()) {
      auto& st = stats_[in_flight_.flow.index()];
      st.delivered_bytes += in_flight_.length;
      st.delays.push_back({in_flight_.arrival, now_});
    }
    link_busy_ = false;
    try_start();
  }

  void on_channel_tick() {
    for (std::size_t i = 0; i < buffer_.flow_count(); ++i) {
      const auto id = FlowId::from_index(i);
      buffer_.set_channel(id, channel_step(cfg_.channel, buffer_.flow(id).channel(),
                                           channel_rngs_[i]));
    }
    events_.push({now_ + cfg_.channel.step, 0, EventKind::ChannelTick, FlowId{}, {}});
  }

  RunReport report() {
    buffer_.check_invariants();
    conservation_.residual = buffer_.occupied() + (link_busy_ ? in_flight_.length : 0);
    if (!conservation_.holds()) throw InvariantViolation("byte conservation failed");

    RunReport r;
    const Combo combo{cfg_.policy, cfg_.scheduler};
    r.combo = combo.label();
    r.policy = to_string(cfg_.policy);
    r.scheduler = to_string(cfg_.scheduler);
    r.load = cfg_.nominal_load();
    r.seed = cfg_.seed;
    r.window = cfg_.duration - warmup_;
    r.conservation = conservation_;

    const double window_s = static_cast<double>(r.window.count()) / 1e6;
    std::vector<double> goodput;
    std::vector<double> weights;
    std::vector<DelayRecord> all_delays;
    Bytes delivered = 0;
    Bytes offered = 0;
    for (std::size_t i = 0; i < stats_.size(); ++i) {
      const auto& st = stats_[i];
      const auto& f = buffer_.flows()[i];
      FlowReport fr;
      fr.id = f.id();
      fr.priority = f.priority();
      fr.u = f.u();
      fr.goodput = static_cast<double>(st.delivered_bytes) / window_s;
      fr.offered_bytes = st.offered_bytes;
      fr.delivered_bytes = st.delivered_bytes;
      fr.delivered = st.delays.size();
      fr.admitted = st.admitted;
      fr.dropped = st.dropped;
      fr.evicted = st.evicted;
      fr.oversize = st.oversize;
      if (auto d = avg_queuing_delay(st.delays)) fr.mean_delay_us = d->count();
      r.flows.push_back(fr);

      goodput.push_back(fr.goodput);
      weights.push_back(f.u());
      all_delays.insert(all_delays.end(), st.delays.begin(), st.delays.end());
      delivered += st.delivered_bytes;
      offered += st.offered_bytes;
    }
    r.goodput_total = static_cast<double>(delivered) / window_s;
    r.offered_load = static_cast<double>(offered) / (cfg_.link_rate * window_s);
    r.throughput_effectiveness =
        throughput_effectiveness(static_cast<double>(delivered), cfg_.link_rate, r.window);
    if (auto d = avg_queuing_delay(all_delays)) r.avg_delay_us = d->count();
    if (delivered > 0) r.fairness = fairness_index(goodput, weights);
    return r;
  }

  const SimConfig& cfg_;
  Time warmup_;
  SharedBuffer buffer_;
  RedConfig red_cfg_;
  RedState red_;
  Rng policy_rng_;
  std::vector<Rng> source_rngs_;
  std::vector<Rng> channel_rngs_;
  std::vector<std::optional<OnOffSource>> sources_;
  EventQueue events_;
  std::vector<FlowStats> stats_;
  Conservation conservation_;

  Time now_{0};
  PacketId next_packet_id_ = 1;
  bool link_busy_ = false;
  Packet in_flight_;
  std::optional<FlowId> rr_cursor_;
  std::deque<std::pair<Time, Bytes>> recent_;
  Bytes recent_bytes_ = 0;
};

}  // namespace

RunReport run(const SimConfig& config) {
  config.validate();
  Simulation sim(config);
  return sim.run();
}

std::vector<SweepCell> sweep(const SimConfig& base, std::span<const double> loads,
                             std::span<const Combo> combos, unsigned threads) {
  std::vector<SweepCell> cells;
  for (const auto& c : combos)
    for (double l : loads) cells.push_back({c, l, std::nullopt, {}});

  auto run_cell = [&base](SweepCell& cell) {
    try {
      SimConfig cfg = with_load(base, cell.load);
      cfg.policy = cell.combo.policy;
      cfg.scheduler = cell.combo.scheduler;
      cell.report = run(cfg);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    for (auto& cell : cells) run_cell(cell);
    return cells;
  }
  // Each worker owns a disjoint stride of cells; results land by index.
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < cells.size(); i += threads) run_cell(cells[i]);
    }));
  for (auto& f : workers) f.get();
  return cells;
}

}  // namespace pafd
