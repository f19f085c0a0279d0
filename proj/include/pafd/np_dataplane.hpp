/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Behavioural model of a network-processor queue manager: 64 ports x 16
// queues whose descriptors live in a simulated SRAM table, with a 16-entry
// CAM-indexed working set, linked-list packet chains and a bounded ring
// carrying empty/non-empty transitions to the scheduler stage. Not cycle
// accurate.

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pafd/core.hpp"

namespace pafd::np {

inline constexpr std::size_t kPorts = 64;
inline constexpr std::size_t kQueuesPerPort = 16;
inline constexpr std::size_t kQueues = kPorts * kQueuesPerPort;
inline constexpr std::size_t kCacheEntries = 16;
inline constexpr std::size_t kRingCapacity = 128;
inline constexpr std::uint32_t kMaxPacketCount = 0xFFFF;
inline constexpr std::uint32_t kNil = 0xFFFFFFFF;

struct QueueId {
  std::uint8_t port = 0;
  std::uint8_t queue = 0;

  std::uint16_t flat() const { return static_cast<std::uint16_t>(port * kQueuesPerPort + queue); }
  static QueueId from_flat(std::size_t flat);
  /// Throws std::out_of_range unless port < 64 and queue < 16.
  static QueueId make(unsigned port, unsigned queue);

  friend bool operator==(QueueId, QueueId) = default;
};

struct PacketRef {
  std::uint32_t handle = 0;
  std::uint32_t length = 0;

  friend bool operator==(const PacketRef&, const PacketRef&) = default;
};

/// Queue descriptor: head/tail node indices into the packet chain store and
/// a 16-bit packet counter.
struct Descriptor {
  std::uint32_t head = kNil;
  std::uint32_t tail = kNil;
  std::uint16_t packet_count = 0;
};

class DescriptorCache {
public:
  struct Stats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t writebacks = 0;
  };

  DescriptorCache();

  /// CAM lookup. A hit refreshes recency; a miss writes the least recently
  /// used resident entry back to SRAM (when the table is full) and loads `q`.
  Descriptor& lookup_or_load(QueueId q);

  bool is_resident(QueueId q) const;
  std::size_t resident_count() const;
  std::vector<QueueId> residents() const;
  /// Current descriptor value whether resident or not, without touching
  /// recency or statistics.
  Descriptor peek(QueueId q) const;
  /// SRAM copy only; stale for resident entries.
  const Descriptor& backing(QueueId q) const { return sram_[q.flat()]; }

  const Stats& stats() const { return stats_; }

private:
  struct Entry {
    bool valid = false;
    std::uint16_t tag = 0;
    std::uint64_t last_use = 0;
    Descriptor desc;
  };

  std::array<Entry, kCacheEntries> cam_{};
  std::vector<Descriptor> sram_;
  std::uint64_t clock_ = 0;
  Stats stats_;
};

enum class TransitionKind { BecameNonEmpty, BecameEmpty };

const char* to_string(TransitionKind k);

struct TransitionMessage {
  QueueId queue;
  TransitionKind kind = TransitionKind::BecameNonEmpty;
  std::uint64_t seq = 0;

  friend bool operator==(const TransitionMessage&, const TransitionMessage&) = default;
};

/// "M <seq> <kind> <port> <queue>"
std::string format_message(const TransitionMessage& m);

/// Bounded FIFO standing in for the ring between buffer manager and
/// scheduler. Pushing into a full ring is an invariant violation.
class MessageRing {
public:
  explicit MessageRing(std::size_t capacity = kRingCapacity) : capacity_(capacity) {}

  void push(const TransitionMessage& m);
  std::optional<TransitionMessage> pop();
  std::vector<TransitionMessage> drain();
  std::size_t size() const { return q_.size(); }
  std::size_t capacity() const { return capacity_; }

private:
  std::size_t capacity_;
  std::deque<TransitionMessage> q_;
};

/// Admission hook consulted on every enqueue with the freshly loaded
/// descriptor; returning false drops the packet.
using AdmitHook = std::function<bool(QueueId, const Descriptor&, const PacketRef&)>;

class QueuePipeline {
public:
  QueuePipeline();

  /// Loads the descriptor, asks `admit` (admit-all when empty), links the
  /// packet at the tail and bumps the counter. Emits BecameNonEmpty on 0->1.
  std::vector<TransitionMessage> enqueue(QueueId q, PacketRef packet, const AdmitHook& admit = {});

  /// Unlinks the head if any. Emits BecameEmpty on 1->0.
  std::pair<std::optional<PacketRef>, std::vector<TransitionMessage>> dequeue(QueueId q);

  MessageRing& ring() { return ring_; }
  const DescriptorCache& cache() const { return cache_; }
  std::size_t queue_length(QueueId q) const { return cache_.peek(q).packet_count; }
  /// Walks the packet chain of `q` head to tail.
  std::vector<PacketRef> contents(QueueId q) const;

private:
  struct Node {
    PacketRef ref;
    std::uint32_t next = kNil;
  };

  std::uint32_t alloc_node(PacketRef ref);
  void emit(QueueId q, TransitionKind kind, std::vector<TransitionMessage>& out);

  DescriptorCache cache_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_nodes_;
  MessageRing ring_;
  std::uint64_t next_seq_ = 1;
};

// ---------------------------------------------------------------------------
// Trace replay
// ---------------------------------------------------------------------------

struct TraceOp {
  enum class Kind { Enqueue, Dequeue };
  Kind kind = Kind::Enqueue;
  QueueId queue;
  std::uint32_t length = 0;
  std::size_t line = 0;
};

class TraceParseError : public std::runtime_error {
public:
  TraceParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// One op per line: "E <port> <queue> <len>" or "D <port> <queue>". Blank
/// lines and lines starting with '#' are skipped.
std::vector<TraceOp> parse_trace(std::string_view text);

/// Tracks per-queue message alternation and sequence order; throws
/// InvariantViolation naming the broken rule.
class TransitionChecker {
public:
  void observe(const TransitionMessage& m);
  /// Net (non-empty - empty) messages seen for `q`.
  int balance(QueueId q) const { return balance_[q.flat()]; }

private:
  std::array<int, kQueues> balance_{};
  std::uint64_t last_seq_ = 0;
};

struct ReplayResult {
  std::vector<TransitionMessage> messages;
  std::string output;  // one formatted message per line
};

/// Replays `ops` on a fresh pipeline, draining the ring after every op and
/// checking the pipeline invariants as it goes.
ReplayResult replay_trace(const std::vector<TraceOp>& ops);

}  // namespace pafd::np
