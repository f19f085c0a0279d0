/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <array>
#include <deque>
#include <string>
#include <vector>

#include "pafd/np_dataplane.hpp"
#include "pafd/random.hpp"

using namespace pafd;
using namespace pafd::np;

TEST_CASE("queue ids") {
  CHECK(QueueId::make(3, 5).flat() == 53);
  CHECK(QueueId::from_flat(1023) == QueueId{63, 15});
  CHECK_THROWS_AS(QueueId::make(64, 0), std::out_of_range);
  CHECK_THROWS_AS(QueueId::make(0, 16), std::out_of_range);
}

TEST_CASE("descriptor cache hits, misses and LRU writeback") {
  DescriptorCache cache;
  for (unsigned q = 0; q < 16; ++q) cache.lookup_or_load(QueueId::make(0, q)).packet_count = q + 1;
  CHECK(cache.resident_count() == 16);
  CHECK(cache.stats().misses == 16);
  CHECK(cache.stats().writebacks == 0);

  cache.lookup_or_load(QueueId::make(0, 0));  // refresh queue 0
  CHECK(cache.stats().hits == 1);

  cache.lookup_or_load(QueueId::make(1, 0));  // evicts (0,1), the least recent
  CHECK(cache.resident_count() == 16);
  CHECK(cache.stats().writebacks == 1);
  CHECK_FALSE(cache.is_resident(QueueId::make(0, 1)));
  CHECK(cache.is_resident(QueueId::make(0, 0)));
  CHECK(cache.backing(QueueId::make(0, 1)).packet_count == 2);
  CHECK(cache.peek(QueueId::make(0, 1)).packet_count == 2);

  CHECK(cache.lookup_or_load(QueueId::make(0, 1)).packet_count == 2);
}

TEST_CASE("pipeline emits one message per empty/non-empty transition") {
  QueuePipeline pipe;
  const auto q = QueueId::make(2, 7);
  auto m = pipe.enqueue(q, {1, 64});
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == TransitionKind::BecameNonEmpty);
  CHECK(pipe.enqueue(q, {2, 64}).empty());
  CHECK(pipe.queue_length(q) == 2);

  auto [p1, m1] = pipe.dequeue(q);
  CHECK(p1 == PacketRef{1, 64});
  CHECK(m1.empty());
  auto [p2, m2] = pipe.dequeue(q);
  CHECK(p2 == PacketRef{2, 64});
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].kind == TransitionKind::BecameEmpty);
  CHECK(m2[0].seq == 2);
  auto [p3, m3] = pipe.dequeue(q);
  CHECK_FALSE(p3);
  CHECK(m3.empty());
  CHECK(pipe.ring().size() == 2);
  CHECK(format_message(pipe.ring().drain()[0]) == "M 1 BecameNonEmpty 2 7");
}

TEST_CASE("admit hook sees the descriptor and can refuse") {
  QueuePipeline pipe;
  const auto q = QueueId::make(0, 0);
  const AdmitHook cap3 = [](QueueId, const Descriptor& d, const PacketRef&) {
    return d.packet_count < 3;
  };
  for (std::uint32_t h = 1; h <= 5; ++h) pipe.enqueue(q, {h, 100}, cap3);
  CHECK(pipe.queue_length(q) == 3);
  CHECK(pipe.contents(q) == std::vector<PacketRef>{{1, 100}, {2, 100}, {3, 100}});
}

TEST_CASE("message ring overflow is an invariant violation") {
  MessageRing ring(2);
  ring.push({});
  ring.push({});
  CHECK_THROWS_AS(ring.push({}), InvariantViolation);
}

TEST_CASE("packet counter saturates at 16 bits") {
  QueuePipeline pipe;
  const auto q = QueueId::make(0, 0);
  for (std::uint32_t i = 0; i < kMaxPacketCount; ++i) pipe.enqueue(q, {i, 64});
  pipe.ring().drain();
  CHECK(pipe.queue_length(q) == kMaxPacketCount);
  CHECK_THROWS_AS(pipe.enqueue(q, {0, 64}), InvariantViolation);
}

TEST_CASE("trace parsing") {
  const auto ops = parse_trace("# header\nE 0 0 64\n\n  D 0 0\r\nE 63 15 1500\n");
  REQUIRE(ops.size() == 3);
  CHECK(ops[0].kind == TraceOp::Kind::Enqueue);
  CHECK(ops[1].kind == TraceOp::Kind::Dequeue);
  CHECK(ops[1].line == 4);
  CHECK(ops[2].queue == QueueId{63, 15});
  CHECK(ops[2].length == 1500);

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_trace(text);
    } catch (const TraceParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("E 0 0 64\nX 1 1\n") == 2);
  CHECK(line_of("E 0 0\n") == 1);
  CHECK(line_of("E 0 0 64\nE 0 0 64\nD 64 0\n") == 3);
  CHECK(line_of("D 0 16\n") == 1);
  CHECK(line_of("E 0 0 0\n") == 1);
  CHECK(line_of("E 0 0 -5\n") == 1);
}

TEST_CASE("trace replay output") {
  const auto r = replay_trace(parse_trace("E 0 0 64\nE 0 0 64\nE 1 3 64\nD 0 0\nD 0 0\nD 0 0\n"));
  CHECK(r.output ==
        "M 1 BecameNonEmpty 0 0\n"
        "M 2 BecameNonEmpty 1 3\n"
        "M 3 BecameEmpty 0 0\n");
}

TEST_CASE("transition checker rejects broken sequences") {
  TransitionChecker c;
  const auto q = QueueId::make(0, 1);
  c.observe({q, TransitionKind::BecameNonEmpty, 1});
  CHECK_THROWS_AS(c.observe({q, TransitionKind::BecameNonEmpty, 2}), InvariantViolation);
  TransitionChecker d;
  CHECK_THROWS_AS(d.observe({q, TransitionKind::BecameEmpty, 1}), InvariantViolation);
  TransitionChecker e;
  e.observe({q, TransitionKind::BecameNonEmpty, 5});
  CHECK_THROWS_AS(e.observe({q, TransitionKind::BecameEmpty, 5}), InvariantViolation);
}

TEST_CASE("randomized traces match a flat-array oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    QueuePipeline pipe;
    std::vector<std::deque<PacketRef>> oracle(kQueues);
    std::array<bool, kQueues> non_empty{};
    std::uint32_t handle = 1;
    // A 40-queue hot set keeps the 16-entry cache under constant pressure.
    std::vector<QueueId> hot;
    for (int i = 0; i < 40; ++i) hot.push_back(QueueId::from_flat(rng.uniform_int(0, kQueues - 1)));

    for (int op = 0; op < 10000; ++op) {
      const QueueId q = rng.bernoulli(0.9) ? hot[rng.uniform_int(0, hot.size() - 1)]
                                           : QueueId::from_flat(rng.uniform_int(0, kQueues - 1));
      if (rng.bernoulli(0.55)) {
        const PacketRef ref{handle++, static_cast<std::uint32_t>(rng.uniform_int(64, 1500))};
        pipe.enqueue(q, ref);
        oracle[q.flat()].push_back(ref);
      } else {
        const auto [got, msgs] = pipe.dequeue(q);
        auto& o = oracle[q.flat()];
        if (o.empty()) {
          REQUIRE_FALSE(got);
        } else {
          REQUIRE(got == o.front());
          o.pop_front();
        }
      }
      REQUIRE(pipe.cache().resident_count() <= kCacheEntries);
      for (const auto& m : pipe.ring().drain()) {
        auto& ne = non_empty[m.queue.flat()];
        REQUIRE(ne == (m.kind == TransitionKind::BecameEmpty));
        ne = !ne;
      }
      REQUIRE(pipe.queue_length(q) == oracle[q.flat()].size());
      REQUIRE(non_empty[q.flat()] == !oracle[q.flat()].empty());
    }
    for (std::size_t f = 0; f < kQueues; ++f) {
      const auto q = QueueId::from_flat(f);
      const auto contents = pipe.contents(q);
      REQUIRE(std::vector<PacketRef>(oracle[f].begin(), oracle[f].end()) == contents);
    }
  }
}
