/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "pafd/pafd.h"

namespace {

const char* kShortRun = R"({"duration_s": 2, "load": 1.2, "seed": 4})";

std::string take(char* s) {
  std::string out = s ? s : "";
  pafd_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version string") { CHECK(std::string(pafd_version()) == "1.0.0"); }

TEST_CASE("run through the C interface") {
  pafd_config* cfg = nullptr;
  REQUIRE(pafd_config_parse(kShortRun, &cfg) == PAFD_OK);
  uint64_t seed = 0;
  CHECK(pafd_config_get_seed(cfg, &seed) == PAFD_OK);
  CHECK(seed == 4);

  pafd_report* rep = nullptr;
  REQUIRE(pafd_run(cfg, &rep) == PAFD_OK);
  pafd_metrics m{};
  REQUIRE(pafd_report_metrics(rep, &m) == PAFD_OK);
  CHECK(m.flow_count == 16);
  CHECK(m.load == doctest::Approx(1.2));
  CHECK(m.has_fairness);
  CHECK(m.admitted_bytes == m.delivered_bytes + m.evicted_bytes + m.residual_bytes);

  double g = 0, sum = 0;
  for (size_t i = 0; i < m.flow_count; ++i) {
    REQUIRE(pafd_report_flow_goodput(rep, i, &g) == PAFD_OK);
    sum += g;
  }
  CHECK(sum == doctest::Approx(m.goodput_total));
  CHECK(pafd_report_flow_goodput(rep, 16, &g) == PAFD_ERR_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(pafd_report_csv(rep, &csv) == PAFD_OK);
  const auto text = take(csv);
  CHECK(text.rfind("combo,load,", 0) == 0);

  char* js = nullptr;
  REQUIRE(pafd_report_json(rep, &js) == PAFD_OK);
  CHECK(take(js).find("\"fairness\"") != std::string::npos);

  // Same config and seed reproduce the report; another seed does not.
  pafd_report* again = nullptr;
  REQUIRE(pafd_run(cfg, &again) == PAFD_OK);
  REQUIRE(pafd_report_csv(again, &csv) == PAFD_OK);
  CHECK(take(csv) == text);
  pafd_report_free(again);

  REQUIRE(pafd_config_set_seed(cfg, 5) == PAFD_OK);
  REQUIRE(pafd_run(cfg, &again) == PAFD_OK);
  REQUIRE(pafd_report_csv(again, &csv) == PAFD_OK);
  CHECK(take(csv) != text);
  pafd_report_free(again);

  pafd_report_free(rep);
  pafd_config_free(cfg);
}

TEST_CASE("config errors carry the field") {
  pafd_config* cfg = nullptr;
  CHECK(pafd_config_parse(R"({"pafd": {"buf_max": 3}})", &cfg) == PAFD_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(pafd_last_error_field()) == "pafd.buf_min");
  CHECK(std::strlen(pafd_last_error()) > 0);

  CHECK(pafd_config_load("/nonexistent/x.json", &cfg) == PAFD_ERR_IO);

  REQUIRE(pafd_config_parse("{}", &cfg) == PAFD_OK);
  CHECK(pafd_config_set_load(cfg, -1) == PAFD_ERR_CONFIG);
  CHECK(std::string(pafd_last_error_field()) == "load");
  CHECK(pafd_config_set_load(cfg, 0.7) == PAFD_OK);
  pafd_config_free(cfg);
}

TEST_CASE("null arguments are rejected") {
  CHECK(pafd_config_parse(nullptr, nullptr) == PAFD_ERR_ARGUMENT);
  CHECK(pafd_run(nullptr, nullptr) == PAFD_ERR_ARGUMENT);
  CHECK(pafd_config_set_seed(nullptr, 1) == PAFD_ERR_ARGUMENT);
  pafd_config_free(nullptr);
  pafd_report_free(nullptr);
  pafd_sweep_free(nullptr);
  pafd_np_free(nullptr);
}

TEST_CASE("sweep through the C interface") {
  pafd_config* cfg = nullptr;
  REQUIRE(pafd_config_parse(R"({"duration_s": 1})", &cfg) == PAFD_OK);
  const double loads[] = {0.4, 1.4};
  pafd_sweep* sw = nullptr;
  REQUIRE(pafd_sweep_run(cfg, loads, 2, "PAFD-BCF,TD-LQF", 1, &sw) == PAFD_OK);
  CHECK(pafd_sweep_size(sw) == 4);
  for (size_t i = 0; i < 4; ++i) CHECK(pafd_sweep_cell_error(sw, i) == nullptr);
  char* csv = nullptr;
  REQUIRE(pafd_sweep_csv(sw, &csv) == PAFD_OK);
  const auto text = take(csv);
  CHECK(text.find("\nPAFD-BCF,0.4,") != std::string::npos);
  CHECK(text.find("\nTD-LQF,1.4,") != std::string::npos);
  pafd_sweep_free(sw);

  CHECK(pafd_sweep_run(cfg, loads, 2, "PAFD-XYZ", 1, &sw) == PAFD_ERR_CONFIG);
  CHECK(pafd_sweep_run(cfg, loads, 0, "all", 1, &sw) == PAFD_ERR_CONFIG);
  pafd_config_free(cfg);
}

namespace {

int admit_short(void* user, uint8_t, uint8_t, uint16_t count, uint32_t) {
  ++*static_cast<int*>(user);
  return count < 2;
}

}  // namespace

TEST_CASE("queue pipeline through the C interface") {
  pafd_np* np = nullptr;
  REQUIRE(pafd_np_create(&np) == PAFD_OK);
  int calls = 0;
  REQUIRE(pafd_np_set_admit(np, admit_short, &calls) == PAFD_OK);

  size_t emitted = 0;
  for (uint32_t h = 1; h <= 3; ++h) REQUIRE(pafd_np_enqueue(np, 5, 9, h, 64, &emitted) == PAFD_OK);
  CHECK(calls == 3);
  size_t len = 0;
  REQUIRE(pafd_np_queue_length(np, 5, 9, &len) == PAFD_OK);
  CHECK(len == 2);
  CHECK(pafd_np_resident_count(np) == 1);

  int has = 0;
  uint32_t handle = 0, length = 0;
  REQUIRE(pafd_np_dequeue(np, 5, 9, &has, &handle, &length, &emitted) == PAFD_OK);
  CHECK(has == 1);
  CHECK(handle == 1);
  REQUIRE(pafd_np_dequeue(np, 5, 9, &has, &handle, &length, &emitted) == PAFD_OK);
  CHECK(emitted == 1);

  pafd_np_message msgs[8];
  size_t n = 0;
  REQUIRE(pafd_np_drain(np, msgs, 8, &n) == PAFD_OK);
  REQUIRE(n == 2);
  CHECK(msgs[0].kind == PAFD_NP_BECAME_NON_EMPTY);
  CHECK(msgs[1].kind == PAFD_NP_BECAME_EMPTY);
  CHECK(msgs[1].port == 5);
  CHECK(msgs[1].queue == 9);

  CHECK(pafd_np_enqueue(np, 64, 0, 1, 64, nullptr) == PAFD_ERR_ARGUMENT);
  pafd_np_free(np);
}

TEST_CASE("trace replay through the C interface") {
  char* out = nullptr;
  REQUIRE(pafd_np_replay("E 1 2 64\nD 1 2\n", &out) == PAFD_OK);
  CHECK(take(out) == "M 1 BecameNonEmpty 1 2\nM 2 BecameEmpty 1 2\n");
  CHECK(pafd_np_replay("E 1 2 64\nQ\n", &out) == PAFD_ERR_PARSE);
  CHECK(pafd_last_error_line() == 2);
}
