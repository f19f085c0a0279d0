/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace pafd {

double fairness_index(std::span<const double> goodput, std::span<const double> weights) {
  if (goodput.empty()) throw std::domain_error("fairness needs at least one flow");
  if (goodput.size() != weights.size())
    throw std::invalid_argument("goodput and weights differ in length");

  double sum = 0;
  double sum_sq = 0;
  bool any = false;
  for (std::size_t i = 0; i < goodput.size(); ++i) {
    if (!(weights[i] > 0)) throw std::domain_error("weights must be positive");
    if (goodput[i] < 0) throw std::domain_error("goodput must be non-negative");
    const double r = goodput[i] / weights[i];
    any = any || r > 0;
    sum += r;
    sum_sq += r * r;
  }
  if (!any) throw std::domain_error("no throughput");
  return sum * sum / (static_cast<double>(goodput.size()) * sum_sq);
}

double throughput_effectiveness(double delivered_bytes, double link_rate, Time window) {
  if (window.count() <= 0) throw std::domain_error("window must be positive");
  const double capacity = link_rate * static_cast<double>(window.count()) / 1e6;
  return std::clamp(delivered_bytes / capacity, 0.0, 1.0);
}

std::optional<Microseconds> avg_queuing_delay(std::span<const DelayRecord> records) {
  if (records.empty()) return std::nullopt;
  double total = 0;
  for (const auto& r : records) total += static_cast<double>((r.departure - r.arrival).count());
  return Microseconds{total / static_cast<double>(records.size())};
}

}  // namespace pafd
