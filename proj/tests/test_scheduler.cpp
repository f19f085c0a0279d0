/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "pafd/random.hpp"
#include "pafd/scheduler.hpp"

using namespace pafd;
using testing::make_buffer;
using testing::packet;

TEST_CASE("schedulers return nothing on an empty buffer") {
  auto buf = make_buffer(1000, {1, 1});
  std::optional<FlowId> cursor;
  CHECK_FALSE(lqf_next(buf));
  CHECK_FALSE(bcf_next(buf));
  CHECK_FALSE(rr_next(cursor, buf));
}

TEST_CASE("LQF weighs queued bytes by static weight") {
  auto buf = make_buffer(10000, {1, 3});
  buf.enqueue(packet(1, 1, 500));
  buf.enqueue(packet(2, 2, 200));
  CHECK(lqf_next(buf) == FlowId(2));  // 500 vs 600
  buf.enqueue(packet(3, 1, 101));
  CHECK(lqf_next(buf) == FlowId(1));  // 601 vs 600
}

TEST_CASE("LQF ties go to the lowest id") {
  auto buf = make_buffer(10000, {1, 1, 1});
  buf.enqueue(packet(1, 3, 300));
  buf.enqueue(packet(2, 2, 300));
  CHECK(lqf_next(buf) == FlowId(2));
}

TEST_CASE("BCF prefers the best channel among backlogged flows") {
  auto buf = make_buffer(10000, {1, 1, 1});
  buf.enqueue(packet(1, 1, 100));
  buf.enqueue(packet(2, 3, 100));
  buf.set_channel(FlowId(1), {Channel::Bad, 0.25});
  buf.set_channel(FlowId(2), {Channel::Good, 1.0});
  buf.set_channel(FlowId(3), {Channel::Good, 1.0});
  CHECK(bcf_next(buf) == FlowId(3));
  buf.set_channel(FlowId(3), {Channel::Bad, 0.25});
  CHECK(bcf_next(buf) == FlowId(1));
}

TEST_CASE("round robin cycles through backlogged flows") {
  auto buf = make_buffer(10000, {1, 1, 1, 1});
  for (std::uint32_t f : {1u, 2u, 4u}) buf.enqueue(packet(f, f, 100));
  std::optional<FlowId> cursor;
  std::vector<std::uint32_t> order;
  for (int i = 0; i < 6; ++i) order.push_back(rr_next(cursor, buf)->value());
  CHECK(order == std::vector<std::uint32_t>{1, 2, 4, 1, 2, 4});
}

TEST_CASE("GPS share example") {
  const std::vector<double> phi{0.5, 0.25, 0.25};
  const std::vector<FlowId> all{FlowId(1), FlowId(2), FlowId(3)};
  const auto s = gps_ideal_share(phi, all, 1000);
  CHECK(s[0] == doctest::Approx(500));
  CHECK(s[1] == doctest::Approx(250));
  const std::vector<FlowId> two{FlowId(2), FlowId(3)};
  const auto t = gps_ideal_share(phi, two, 1000);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == doctest::Approx(500));
}

TEST_CASE("GPS shares are proportional and exhaust the bandwidth") {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 16));
    std::vector<double> phi(n);
    for (auto& p : phi) p = 0.01 + rng.uniform01();
    const double sum = std::accumulate(phi.begin(), phi.end(), 0.0);
    for (auto& p : phi) p /= sum;
    std::vector<FlowId> backlogged;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.bernoulli(0.6)) backlogged.push_back(FlowId::from_index(i));
    if (backlogged.empty()) backlogged.push_back(FlowId(1));

    const double bw = 1e6 * (0.1 + rng.uniform01());
    const auto s = gps_ideal_share(phi, backlogged, bw);
    double total = 0;
    for (double x : s) total += x;
    REQUIRE(std::abs(total - bw) <= 1e-9 * bw);
    for (FlowId a : backlogged)
      for (FlowId b : backlogged) {
        const double ra = s[a.index()] / phi[a.index()], rb = s[b.index()] / phi[b.index()];
        REQUIRE(std::abs(ra - rb) <= 1e-9 * std::max(ra, rb));
      }
  }
}

TEST_CASE("GPS input validation") {
  const std::vector<double> phi{0.5, 0.25};
  CHECK_THROWS_AS(gps_ideal_share(phi, std::vector<FlowId>{FlowId(1)}, 1), std::invalid_argument);
  const std::vector<double> ok{0.5, 0.5};
  CHECK_THROWS_AS(gps_ideal_share(ok, std::vector<FlowId>{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(gps_ideal_share(ok, std::vector<FlowId>{FlowId(3)}, 1), std::out_of_range);
}

TEST_CASE("scheduler names round-trip") {
  for (auto k : {SchedulerKind::Bcf, SchedulerKind::Lqf, SchedulerKind::RoundRobin})
    CHECK(parse_scheduler(to_string(k)) == k);
  CHECK_FALSE(parse_scheduler("wfq"));
}
