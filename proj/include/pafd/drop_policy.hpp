/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pafd/core.hpp"
#include "pafd/random.hpp"

namespace pafd {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Parameters of the adaptive fair-dropping policy.
///
/// `buf_min`/`buf_max` bound the occupancy band over which the weight blend
/// moves from the static QoS weight towards queue length. `diffserv` enables
/// the two-class variant: Low-priority flows get an α reduced by
/// `alpha_offset_low` and a load-dependent β that ramps linearly from 1 at
/// `beta_knee` down to `beta_min` at full load.
struct PafdConfig {
  double buf_min = 0.85;
  double buf_medium = 0.92;  // carried for reporting only
  double buf_max = 0.98;
  double p_self = 0.5;
  double alpha_offset_low = 0.1;
  double beta_knee = 0.5;
  double beta_min = 0.5;
  bool diffserv = false;

  void validate() const;
};

/// Random Early Detection parameters. Thresholds are in bytes of average
/// occupancy.
struct RedConfig {
  double w_q = 0.002;
  double min_th = 0;
  double max_th = 0;
  double max_p = 0.1;

  /// w_q=0.002, min_th=25%, max_th=75% of capacity, max_p=0.1.
  static RedConfig defaults_for(Bytes capacity);
  void validate(Bytes capacity) const;
};

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

enum class Verdict { Admit, DropArrival, EvictThenAdmit };

const char* to_string(Verdict v);

struct Eviction {
  FlowId flow;
  PacketId packet = 0;
  std::uint32_t length = 0;

  friend bool operator==(const Eviction&, const Eviction&) = default;
};

/// Outcome of one admission attempt. A DropArrival may still carry the
/// evictions chosen before the arrival itself was dropped; they are applied
/// all the same. EvictThenAdmit always carries at least one eviction.
struct PolicyDecision {
  Verdict verdict = Verdict::Admit;
  std::vector<Eviction> evictions;
  bool oversize = false;

  bool admits() const { return verdict != Verdict::DropArrival; }

  static PolicyDecision admit() { return {}; }
  static PolicyDecision drop_arrival() { return {Verdict::DropArrival, {}, false}; }

  friend bool operator==(const PolicyDecision&, const PolicyDecision&) = default;
};

/// Applies `decision` to `buffer`: pops every listed eviction from the head of
/// its flow (checking the packet id), then enqueues `arrival` if admitted.
/// Returns the evicted packets in eviction order.
std::vector<Packet> apply_decision(SharedBuffer& buffer, const Packet& arrival,
                                   const PolicyDecision& decision);

// ---------------------------------------------------------------------------
// PAFD building blocks
// ---------------------------------------------------------------------------

/// Congestion-adaptive blend factor: 0 below buf_min, 1 above buf_max and a
/// quadratic fall from 1 to 0 in between (so the value jumps at buf_min).
double compute_alpha(double occupancy, double buf_min, double buf_max);

/// Per-class fairness scale: 1 for High, and for Low 1 up to the knee then a
/// linear ramp to beta_min at load 1. Loads above 1 are clamped.
double compute_beta(PriorityClass priority, double load, const PafdConfig& cfg);

/// (α·û + (1−α)·v̂)·β. Throws std::domain_error("degenerate weight") when the
/// result is zero.
double synthetic_weight(double alpha, double u_hat, double v_hat, double beta);

/// Lightweight copy of the byte counters that victim selection reads. PAFD
/// admission works on one of these while it plans evictions so the real
/// buffer is left untouched until the decision is applied.
struct FlowOccupancy {
  FlowId id;
  double u = 1;
  PriorityClass priority = PriorityClass::High;
  Bytes queued = 0;
};

struct OccupancyView {
  Bytes capacity = 0;
  Bytes occupied = 0;
  std::vector<FlowOccupancy> flows;

  static OccupancyView of(const SharedBuffer& buffer);
};

/// Per-flow α and β for a given view, as PAFD derives them from occupancy,
/// priority and load.
struct BlendParams {
  std::vector<double> alpha;
  std::vector<double> beta;
};

BlendParams blend_params(const OccupancyView& view, const PafdConfig& cfg, double load);

/// Flow maximising C_i / W_i among flows holding bytes, with explicit
/// per-flow α and β. Ties go to the lowest id. Throws std::domain_error("no
/// victim available") when every queue is empty.
FlowId select_victim(const OccupancyView& view, std::span<const double> alpha,
                     std::span<const double> beta);

FlowId select_victim(const OccupancyView& view, const PafdConfig& cfg, double load);
FlowId select_victim(const SharedBuffer& buffer, const PafdConfig& cfg, double load);

/// Full PAFD admission: fast path when the packet fits, otherwise the
/// choose-victim / coin / evict loop until the arrival fits or is dropped.
PolicyDecision pafd_admit(const Packet& packet, const SharedBuffer& buffer,
                          const PafdConfig& cfg, double load, Rng& rng);

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

struct RedState {
  double avg = 0;
  int count = -1;
  std::optional<Time> idle_since = Time{0};
  Time typical_tx{1};  // transmission time of a typical packet, for idle decay
};

/// Middle-band drop probability p_a = p_b / (1 − count·p_b), capped at 1.
double red_drop_probability(double avg, int count, const RedConfig& cfg);

PolicyDecision red_admit(const Packet& packet, const SharedBuffer& buffer, RedState& state,
                         const RedConfig& cfg, Rng& rng, Time now);

/// Marks the start of an idle period (the buffer just drained).
void red_on_queue_empty(RedState& state, Time now);

PolicyDecision td_admit(const Packet& packet, const SharedBuffer& buffer);

using SlaTable = std::map<FlowId, PriorityClass>;

/// Contracted class of the packet's flow; flows without a contract are Low.
PriorityClass classify_sla(const Packet& packet, const SlaTable& sla);

}  // namespace pafd
