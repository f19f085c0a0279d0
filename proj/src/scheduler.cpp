/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/scheduler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pafd {

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Bcf: return "bcf";
    case SchedulerKind::Lqf: return "lqf";
    case SchedulerKind::RoundRobin: return "rr";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view name) {
  if (name == "bcf") return SchedulerKind::Bcf;
  if (name == "lqf") return SchedulerKind::Lqf;
  if (name == "rr") return SchedulerKind::RoundRobin;
  return std::nullopt;
}

namespace {

// Argmax of key(flow) over non-empty flows; strict comparison keeps the
// lowest id on ties.
template <typename Key>
std::optional<FlowId> argmax_nonempty(const SharedBuffer& buffer, Key key) {
  std::optional<FlowId> best;
  double best_key = 0;
  for (const auto& f : buffer.flows()) {
    if (f.empty()) continue;
    const double k = key(f);
    if (!best || k > best_key) {
      best = f.id();
      best_key = k;
    }
  }
  return best;
}

}  // namespace

std::optional<FlowId> lqf_next(const SharedBuffer& buffer) {
  return argmax_nonempty(buffer, [](const ServiceFlow& f) {
    return f.u() * static_cast<double>(f.queued_bytes());
  });
}

std::optional<FlowId> bcf_next(const SharedBuffer& buffer) {
  return argmax_nonempty(buffer,
                         [](const ServiceFlow& f) { return f.channel().rate_multiplier; });
}

std::optional<FlowId> rr_next(std::optional<FlowId>& cursor, const SharedBuffer& buffer) {
  const std::size_t n = buffer.flow_count();
  const std::size_t start = cursor ? cursor->index() + 1 : 0;
  for (std::size_t step = 0; step < n; ++step) {
    const auto id = FlowId::from_index((start + step) % n);
    if (!buffer.flow(id).empty()) {
      cursor = id;
      return id;
    }
  }
  return std::nullopt;
}

std::vector<double> gps_ideal_share(std::span<const double> phi,
                                    std::span<const FlowId> backlogged, double bandwidth) {
  if (backlogged.empty()) throw std::invalid_argument("no backlogged flows");
  const double total = std::accumulate(phi.begin(), phi.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("phi must sum to 1");

  double active = 0;
  for (FlowId id : backlogged) {
    if (id.value() == 0 || id.index() >= phi.size())
      throw std::out_of_range("backlogged flow out of range");
    active += phi[id.index()];
  }
  std::vector<double> share(phi.size(), 0.0);
  for (FlowId id : backlogged) share[id.index()] = phi[id.index()] / active * bandwidth;
  return share;
}

}  // namespace pafd
