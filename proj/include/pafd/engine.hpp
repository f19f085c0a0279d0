/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pafd/drop_policy.hpp"
#include "pafd/metrics.hpp"
#include "pafd/scheduler.hpp"
#include "pafd/traffic.hpp"

namespace pafd {

enum class PolicyKind { Pafd, PafdDiffServ, Red, TailDrop };

const char* to_string(PolicyKind k);  // "pafd" | "pafd-ds" | "red" | "td"
std::optional<PolicyKind> parse_policy(std::string_view name);

struct Combo {
  PolicyKind policy = PolicyKind::Pafd;
  SchedulerKind scheduler = SchedulerKind::Lqf;

  /// Report label such as "PAFD-BCF" or "DSPAFD-LQF".
  std::string label() const;
  static std::optional<Combo> parse(std::string_view label);

  friend bool operator==(const Combo&, const Combo&) = default;
};

/// PAFD-BCF, PAFD-LQF, RED-BCF, RED-LQF, TD-BCF, TD-LQF.
const std::vector<Combo>& standard_combos();

struct FlowConfig {
  double u = 1;
  std::optional<double> phi;                // defaults to u normalised
  std::optional<PriorityClass> priority;    // absent: no SLA entry (Low)
  OnOffParams source;                       // on_rate 0 means a silent flow
};

struct SimConfig {
  Time duration{60'000'000};
  std::optional<Time> warmup;  // defaults to 10% of duration
  double link_rate = 1.25e6;   // bytes/second
  Bytes buffer_capacity = 64 * 1024;
  PolicyKind policy = PolicyKind::Pafd;
  PafdConfig pafd;
  std::optional<RedConfig> red;  // defaults derived from capacity
  SchedulerKind scheduler = SchedulerKind::Lqf;
  ChannelProcess channel;
  Time load_window{100'000};
  std::vector<FlowConfig> flows;
  std::uint64_t seed = 1;
  /// When set, source on_rates are rescaled so the long-run offered load is
  /// load * link_rate.
  std::optional<double> load;

  Time effective_warmup() const { return warmup.value_or(duration / 10); }
  RedConfig effective_red() const { return red.value_or(RedConfig::defaults_for(buffer_capacity)); }
  /// Resolved GPS weights, one per flow.
  std::vector<double> resolved_phi() const;
  /// Load implied by the configured rates (or `load` when set).
  double nominal_load() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// 16 flows, u = 2 for flows 1-8 and 1 for 9-16, ON rates 2:1 in the same
  /// split, all flows on `lengths`, offered load 1.0.
  static SimConfig standard(LengthConfig lengths = {64, 1500});
};

/// Copy of `cfg` with source on_rates scaled so the offered load is `load`.
SimConfig with_load(const SimConfig& cfg, double load);

// ---------------------------------------------------------------------------

enum class EventKind { Source, TransmissionComplete, ChannelTick };

struct Event {
  Time at{0};
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Source;
  FlowId flow;
  SourceEvent source;
};

/// Min-heap on (time, insertion sequence): equal-time events pop FIFO.
class EventQueue {
public:
  void push(Event e);
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  Time next_time() const { return heap_.top().at; }

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

/// Runs one simulation. Identical configs produce identical reports.
RunReport run(const SimConfig& config);

struct SweepCell {
  Combo combo;
  double load = 0;
  std::optional<RunReport> report;
  std::string error;  // set when the cell failed
};

/// Runs every (combo, load) cell; rows are combo-major, load-minor. Cells may
/// execute on up to `threads` workers; a failing cell is recorded, not thrown.
std::vector<SweepCell> sweep(const SimConfig& base, std::span<const double> loads,
                             std::span<const Combo> combos, unsigned threads = 0);

}  // namespace pafd
