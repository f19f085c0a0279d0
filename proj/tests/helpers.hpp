/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <vector>

#include "pafd/core.hpp"

namespace testing {

inline pafd::SharedBuffer make_buffer(pafd::Bytes capacity, const std::vector<double>& u,
                                      const std::vector<pafd::PriorityClass>& prio = {}) {
  std::vector<pafd::ServiceFlow> flows;
  double total = 0;
  for (double w : u) total += w;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto p = i < prio.size() ? prio[i] : pafd::PriorityClass::High;
    flows.emplace_back(pafd::FlowId::from_index(i), u[i], u[i] / total, p);
  }
  return pafd::SharedBuffer(capacity, std::move(flows));
}

inline pafd::Packet packet(pafd::PacketId id, std::uint32_t flow, std::uint32_t length) {
  return {id, pafd::FlowId(flow), length, pafd::Time{0}};
}

}  // namespace testing
