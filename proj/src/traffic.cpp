/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace pafd {

std::string LengthConfig::name() const {
  if (low == high) return "fixed" + std::to_string(low);
  return "rand" + std::to_string(low) + "-" + std::to_string(high);
}

const std::array<LengthConfig, 8>& standard_length_configs() {
  static const std::array<LengthConfig, 8> configs{{
      {64, 64},
      {65, 65},
      {128, 128},
      {129, 129},
      {256, 256},
      {64, 128},
      {64, 256},
      {64, 1500},
  }};
  return configs;
}

std::optional<LengthConfig> parse_length_config(std::string_view name) {
  for (const auto& c : standard_length_configs())
    if (c.name() == name) return c;
  return std::nullopt;
}

std::uint32_t sample_packet_length(const LengthConfig& cfg, Rng& rng) {
  if (cfg.low == cfg.high) return cfg.low;
  return static_cast<std::uint32_t>(rng.uniform_int(cfg.low, cfg.high));
}

double OnOffParams::mean_rate() const {
  const double on = static_cast<double>(mean_on.count());
  const double off = static_cast<double>(mean_off.count());
  return on_rate * on / (on + off);
}

OnOffSource::OnOffSource(FlowId flow, OnOffParams params, Rng& rng)
    : flow_(flow), params_(params) {
  if (!(params_.on_rate > 0)) throw ConfigError("on_rate", "must be positive");
  if (params_.mean_on.count() <= 0) throw ConfigError("mean_on_ms", "must be positive");
  if (params_.mean_off.count() <= 0) throw ConfigError("mean_off_ms", "must be positive");
  if (params_.lengths.low == 0 || params_.lengths.low > params_.lengths.high)
    throw ConfigError("lengths", "need 1 <= low <= high");

  const double on = static_cast<double>(params_.mean_on.count());
  const double off = static_cast<double>(params_.mean_off.count());
  state_ = rng.bernoulli(on / (on + off)) ? SourceState::On : SourceState::Off;
  dwell_end_us_ = rng.exponential(state_ == SourceState::On ? on : off);
  on_since_us_ = 0;
  pending_ = sample_packet_length(params_.lengths, rng);
}

SourceEvent next_source_event(OnOffSource& src, Time now, Rng& rng) {
  const auto& p = src.params_;
  const double bytes_per_us = p.on_rate / 1e6;
  SourceEvent ev;
  double at_us = 0;

  if (src.state_ == SourceState::On) {
    const double emit_us =
        src.on_since_us_ + (static_cast<double>(src.pending_) - src.carried_bytes_) / bytes_per_us;
    if (emit_us <= src.dwell_end_us_) {
      ev.kind = SourceEventKind::EmitPacket;
      ev.state = SourceState::On;
      ev.length = src.pending_;
      at_us = emit_us;
      src.on_since_us_ = emit_us;
      src.carried_bytes_ = 0;
      src.pending_ = sample_packet_length(p.lengths, rng);
    } else {
      ev.kind = SourceEventKind::ToggleState;
      ev.state = SourceState::Off;
      at_us = src.dwell_end_us_;
      src.carried_bytes_ += (src.dwell_end_us_ - src.on_since_us_) * bytes_per_us;
      src.state_ = SourceState::Off;
      src.dwell_end_us_ += rng.exponential(static_cast<double>(p.mean_off.count()));
    }
  } else {
    ev.kind = SourceEventKind::ToggleState;
    ev.state = SourceState::On;
    at_us = src.dwell_end_us_;
    src.state_ = SourceState::On;
    src.on_since_us_ = src.dwell_end_us_;
    src.dwell_end_us_ += rng.exponential(static_cast<double>(p.mean_on.count()));
  }

  ev.at = std::max(Time{std::llround(at_us)}, now + Time{1});
  return ev;
}

void ChannelProcess::validate() const {
  if (!(0 <= p_gb && p_gb <= 1)) throw ConfigError("channel.p_gb", "must lie in [0,1]");
  if (!(0 <= p_bg && p_bg <= 1)) throw ConfigError("channel.p_bg", "must lie in [0,1]");
  if (!(0 < r_bad && r_bad < r_good && r_good <= 1))
    throw ConfigError("channel.r_bad", "need 0 < r_bad < r_good <= 1");
  if (step.count() <= 0) throw ConfigError("channel.step_us", "must be positive");
}

double ChannelProcess::stationary_good() const {
  if (p_gb + p_bg == 0) return 1.0;
  return p_bg / (p_gb + p_bg);
}

ChannelState channel_step(const ChannelProcess& ch, const ChannelState& state, Rng& rng) {
  const double draw = rng.uniform01();
  Channel next = state.state;
  if (state.state == Channel::Good && draw < ch.p_gb) next = Channel::Bad;
  if (state.state == Channel::Bad && draw < ch.p_bg) next = Channel::Good;
  return {next, next == Channel::Good ? ch.r_good : ch.r_bad};
}

}  // namespace pafd
