/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/core.hpp"

#include <numeric>
#include <utility>

namespace pafd {

const char* to_string(PriorityClass p) {
  return p == PriorityClass::High ? "high" : "low";
}

ServiceFlow::ServiceFlow(FlowId id, double u, double phi, PriorityClass priority)
    : id_(id), u_(u), phi_(phi), priority_(priority) {
  if (id.value() == 0) throw ConfigError("flows", "flow ids are 1-based");
  if (!(u > 0)) throw ConfigError("u", "static weight must be positive");
  if (!(phi > 0 && phi <= 1)) throw ConfigError("phi", "GPS weight must lie in (0,1]");
}

SharedBuffer::SharedBuffer(Bytes capacity, std::vector<ServiceFlow> flows,
                           CongestionThresholds thresholds)
    : capacity_(capacity), flows_(std::move(flows)), thresholds_(thresholds) {
  if (capacity_ == 0) throw ConfigError("buffer_capacity", "must be positive");
  if (flows_.empty()) throw ConfigError("flows", "at least one flow is required");
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].id() != FlowId::from_index(i))
      throw ConfigError("flows", "flow ids must be 1..N in order");
    if (!flows_[i].empty()) throw ConfigError("flows", "flows must start empty");
  }
  const auto& t = thresholds_;
  if (!(0 < t.buf_min && t.buf_min < t.buf_medium && t.buf_medium < t.buf_max &&
        t.buf_max <= 1))
    throw ConfigError("thresholds", "need 0 < buf_min < buf_medium < buf_max <= 1");
}

const ServiceFlow& SharedBuffer::flow(FlowId id) const {
  if (id.value() == 0 || id.index() >= flows_.size())
    throw std::out_of_range("unknown flow id " + std::to_string(id.value()));
  return flows_[id.index()];
}

ServiceFlow& SharedBuffer::mut_flow(FlowId id) {
  return const_cast<ServiceFlow&>(std::as_const(*this).flow(id));
}

void SharedBuffer::set_channel(FlowId id, ChannelState c) { mut_flow(id).set_channel(c); }

void SharedBuffer::enqueue(const Packet& p) {
  if (p.length == 0) throw InvariantViolation("packet length must be >= 1");
  if (p.length > remaining())
    throw InvariantViolation("enqueue would exceed buffer capacity");
  auto& f = mut_flow(p.flow);
  f.queue_.push_back(p);
  f.queued_bytes_ += p.length;
  occupied_ += p.length;
}

Packet SharedBuffer::pop_head(FlowId id) {
  auto& f = mut_flow(id);
  if (f.queue_.empty())
    throw InvariantViolation("pop from empty flow " + std::to_string(id.value()));
  Packet p = f.queue_.front();
  f.queue_.pop_front();
  f.queued_bytes_ -= p.length;
  occupied_ -= p.length;
  return p;
}

void SharedBuffer::check_invariants() const {
  Bytes total = 0;
  for (const auto& f : flows_) {
    const Bytes sum = std::accumulate(
        f.queue().begin(), f.queue().end(), Bytes{0},
        [](Bytes acc, const Packet& p) { return acc + p.length; });
    if (sum != f.queued_bytes())
      throw InvariantViolation("queued_bytes mismatch on flow " +
                               std::to_string(f.id().value()));
    total += sum;
  }
  if (total != occupied_) throw InvariantViolation("occupied != sum of queued bytes");
  if (occupied_ > capacity_) throw InvariantViolation("occupied exceeds capacity");
}

double occupancy_rate(const SharedBuffer& buffer) {
  return static_cast<double>(buffer.occupied()) / static_cast<double>(buffer.capacity());
}

double occupancy_share(const SharedBuffer& buffer, FlowId flow) {
  if (buffer.occupied() == 0) throw std::domain_error("empty buffer has no shares");
  return static_cast<double>(buffer.flow(flow).queued_bytes()) /
         static_cast<double>(buffer.occupied());
}

}  // namespace pafd
