/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "pafd/core.hpp"
#include "pafd/random.hpp"

namespace pafd {

/// Packet-length distribution: fixed when low == high, otherwise integer
/// uniform on [low, high].
struct LengthConfig {
  std::uint32_t low = 64;
  std::uint32_t high = 64;

  double mean() const { return (static_cast<double>(low) + high) / 2.0; }
  std::string name() const;

  friend bool operator==(const LengthConfig&, const LengthConfig&) = default;
};

/// The eight workload cases, in canonical order: fixed64, fixed65, fixed128,
/// fixed129, fixed256, rand64-128, rand64-256, rand64-1500.
const std::array<LengthConfig, 8>& standard_length_configs();
std::optional<LengthConfig> parse_length_config(std::string_view name);

std::uint32_t sample_packet_length(const LengthConfig& cfg, Rng& rng);

enum class SourceState { On, Off };

struct OnOffParams {
  Time mean_on{400'000};
  Time mean_off{600'000};
  double on_rate = 0;  // bytes/second while ON
  LengthConfig lengths;

  /// Long-run offered rate, on_rate * mean_on / (mean_on + mean_off).
  double mean_rate() const;
};

enum class SourceEventKind { ToggleState, EmitPacket };

struct SourceEvent {
  Time at{0};
  SourceEventKind kind = SourceEventKind::EmitPacket;
  SourceState state = SourceState::On;  // state in force after the event
  std::uint32_t length = 0;             // EmitPacket only
};

/// Exponential ON/OFF source emitting a constant-rate fluid while ON, cut
/// into packets: a packet is released once the fluid emitted since the last
/// release covers its length. Fluid left over at the end of an ON period
/// carries into the next one, so the long-run rate is exact.
class OnOffSource {
public:
  /// Draws the initial state from the stationary ON probability.
  OnOffSource(FlowId flow, OnOffParams params, Rng& rng);

  FlowId flow() const { return flow_; }
  const OnOffParams& params() const { return params_; }
  SourceState state() const { return state_; }

private:
  friend SourceEvent next_source_event(OnOffSource& src, Time now, Rng& rng);

  FlowId flow_;
  OnOffParams params_;
  SourceState state_ = SourceState::Off;
  double dwell_end_us_ = 0;  // end of the current ON or OFF period
  double on_since_us_ = 0;   // fluid clock origin inside the current ON period
  double carried_bytes_ = 0; // fluid emitted before on_since_ toward pending_
  std::uint32_t pending_ = 0;
};

/// Advances `src` to its next event. Returned times are strictly after `now`
/// so per-flow event times are strictly increasing.
SourceEvent next_source_event(OnOffSource& src, Time now, Rng& rng);

struct ChannelProcess {
  double p_gb = 0.1;  // Good -> Bad per step
  double p_bg = 0.3;  // Bad -> Good per step
  double r_good = 1.0;
  double r_bad = 0.25;
  Time step{1000};

  void validate() const;
  /// Long-run fraction of steps spent Good, p_bg / (p_gb + p_bg).
  double stationary_good() const;
};

ChannelState channel_step(const ChannelProcess& ch, const ChannelState& state, Rng& rng);

}  // namespace pafd
