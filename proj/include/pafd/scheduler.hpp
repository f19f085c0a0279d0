/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pafd/core.hpp"

namespace pafd {

enum class SchedulerKind { Bcf, Lqf, RoundRobin };

const char* to_string(SchedulerKind k);                // "bcf" | "lqf" | "rr"
std::optional<SchedulerKind> parse_scheduler(std::string_view name);

/// Longest weighted queue: argmax u_i * queued_bytes_i over non-empty flows.
std::optional<FlowId> lqf_next(const SharedBuffer& buffer);

/// Best channel: non-empty flow with the highest current rate multiplier.
std::optional<FlowId> bcf_next(const SharedBuffer& buffer);

/// Cyclic order by id. `cursor` holds the last flow served (none before the
/// first pick) and is advanced to the returned flow.
std::optional<FlowId> rr_next(std::optional<FlowId>& cursor, const SharedBuffer& buffer);

/// Ideal fluid share of `bandwidth` for each flow: phi_i / sum(phi over
/// backlogged) for backlogged flows, 0 otherwise. `phi` is indexed by flow
/// index and must sum to 1.
std::vector<double> gps_ideal_share(std::span<const double> phi,
                                    std::span<const FlowId> backlogged, double bandwidth);

}  // namespace pafd
