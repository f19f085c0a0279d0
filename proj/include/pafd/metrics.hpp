/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pafd/core.hpp"

namespace pafd {

using Microseconds = std::chrono::duration<double, std::micro>;

/// Weighted Jain index over goodput-to-weight ratios:
/// (sum G_i/W_i)^2 / (N * sum (G_i/W_i)^2).
/// Throws std::domain_error if all goodputs are zero or any weight is <= 0.
double fairness_index(std::span<const double> goodput, std::span<const double> weights);

/// delivered / (link_rate * window), clamped to [0,1].
double throughput_effectiveness(double delivered_bytes, double link_rate, Time window);

struct DelayRecord {
  Time arrival{0};
  Time departure{0};
};

/// Mean of departure - arrival; nullopt when there are no records.
std::optional<Microseconds> avg_queuing_delay(std::span<const DelayRecord> records);

struct FlowReport {
  FlowId id;
  PriorityClass priority = PriorityClass::High;
  double u = 1;
  double goodput = 0;  // bytes/second over the measurement window
  Bytes offered_bytes = 0;
  Bytes delivered_bytes = 0;
  std::uint64_t delivered = 0;
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  std::uint64_t evicted = 0;
  std::uint64_t oversize = 0;
  std::optional<double> mean_delay_us;
};

/// Whole-run byte accounting; admitted == delivered + evicted + residual must
/// hold exactly. Residual includes a packet still on the wire at the end.
struct Conservation {
  Bytes admitted = 0;
  Bytes delivered = 0;
  Bytes evicted = 0;
  Bytes residual = 0;

  bool holds() const { return admitted == delivered + evicted + residual; }
};

/// Per-run results. Per-flow counters and the aggregate metrics cover the
/// measurement window (warmup excluded).
struct RunReport {
  std::string combo;
  std::string policy;
  std::string scheduler;
  double load = 0;          // nominal offered load / link rate
  double offered_load = 0;  // measured over the window
  std::uint64_t seed = 0;
  Time window{0};
  std::vector<FlowReport> flows;
  double goodput_total = 0;
  double throughput_effectiveness = 0;
  std::optional<double> avg_delay_us;
  std::optional<double> fairness;
  Conservation conservation;
};

}  // namespace pafd
