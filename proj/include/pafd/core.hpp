/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace pafd {

// Simulation clock: integer microseconds since start of run.
using Time = std::chrono::duration<std::int64_t, std::micro>;
using Bytes = std::uint64_t;
using PacketId = std::uint64_t;

/// 1-based flow identifier. Flows of a buffer are stored in id order, so
/// `index()` addresses them directly.
class FlowId {
public:
  constexpr FlowId() = default;
  constexpr explicit FlowId(std::uint32_t value) : value_(value) {}
  static constexpr FlowId from_index(std::size_t index) {
    return FlowId(static_cast<std::uint32_t>(index + 1));
  }

  constexpr std::uint32_t value() const { return value_; }
  constexpr std::size_t index() const { return value_ - 1; }

  friend constexpr auto operator<=>(FlowId, FlowId) = default;

private:
  std::uint32_t value_ = 0;
};

struct Packet {
  PacketId id = 0;
  FlowId flow;
  std::uint32_t length = 0;  // bytes, >= 1
  Time arrival{0};
};

enum class PriorityClass { High, Low };

const char* to_string(PriorityClass p);

enum class Channel { Good, Bad };

struct ChannelState {
  Channel state = Channel::Good;
  double rate_multiplier = 1.0;
};

/// Raised when a run configuration or parameter set is invalid. `field()`
/// names the offending configuration key.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// Raised when a checked runtime invariant does not hold.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ServiceFlow {
public:
  ServiceFlow(FlowId id, double u, double phi, PriorityClass priority);

  FlowId id() const { return id_; }
  double u() const { return u_; }
  double phi() const { return phi_; }
  PriorityClass priority() const { return priority_; }

  const std::deque<Packet>& queue() const { return queue_; }
  bool empty() const { return queue_.empty(); }
  Bytes queued_bytes() const { return queued_bytes_; }

  const ChannelState& channel() const { return channel_; }
  void set_channel(ChannelState c) { channel_ = c; }

private:
  friend class SharedBuffer;

  FlowId id_;
  double u_;
  double phi_;
  PriorityClass priority_;
  std::deque<Packet> queue_;
  Bytes queued_bytes_ = 0;
  ChannelState channel_;
};

struct CongestionThresholds {
  double buf_min = 0.85;
  double buf_medium = 0.92;
  double buf_max = 0.98;
};

/// Shared byte-accounted buffer holding one FIFO per service flow.
class SharedBuffer {
public:
  SharedBuffer(Bytes capacity, std::vector<ServiceFlow> flows,
               CongestionThresholds thresholds = {});

  Bytes capacity() const { return capacity_; }
  Bytes occupied() const { return occupied_; }
  Bytes remaining() const { return capacity_ - occupied_; }
  const CongestionThresholds& thresholds() const { return thresholds_; }

  std::size_t flow_count() const { return flows_.size(); }
  const std::vector<ServiceFlow>& flows() const { return flows_; }
  const ServiceFlow& flow(FlowId id) const;
  void set_channel(FlowId id, ChannelState c);

  bool all_empty() const { return occupied_ == 0; }

  /// Appends to the packet's flow. Throws InvariantViolation if the packet
  /// does not fit.
  void enqueue(const Packet& p);
  /// Removes and returns the head of `id`. Throws if that flow is empty.
  Packet pop_head(FlowId id);

  /// Recomputes every byte counter from the queues and throws on mismatch.
  void check_invariants() const;

private:
  ServiceFlow& mut_flow(FlowId id);

  Bytes capacity_;
  Bytes occupied_ = 0;
  std::vector<ServiceFlow> flows_;
  CongestionThresholds thresholds_;
};

/// occupied / capacity.
double occupancy_rate(const SharedBuffer& buffer);

/// queued_bytes(flow) / occupied. Throws std::domain_error on an empty buffer.
double occupancy_share(const SharedBuffer& buffer, FlowId flow);

}  // namespace pafd
