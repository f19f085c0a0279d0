/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/pafd.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "pafd/engine.hpp"
#include "pafd/io.hpp"
#include "pafd/np_dataplane.hpp"

struct pafd_config {
  pafd::SimConfig cfg;
};

struct pafd_report {
  pafd::RunReport report;
};

struct pafd_sweep {
  std::vector<pafd::SweepCell> cells;
};

struct pafd_np {
  pafd::np::QueuePipeline pipe;
  pafd_np_admit_fn admit = nullptr;
  void* user = nullptr;
};

namespace {

struct ErrorState {
  std::string message;
  std::string field;
  std::size_t line = 0;
};

thread_local ErrorState g_error;

pafd_status fail(pafd_status status, std::string message, std::string field = {},
                 std::size_t line = 0) {
  g_error.message = std::move(message);
  g_error.field = std::move(field);
  g_error.line = line;
  return status;
}

// Maps the core's exception types onto status codes.
template <typename F>
pafd_status guarded(F&& body) {
  try {
    body();
    return PAFD_OK;
  } catch (const pafd::ConfigError& e) {
    return fail(PAFD_ERR_CONFIG, e.what(), e.field());
  } catch (const pafd::IoError& e) {
    return fail(PAFD_ERR_IO, e.what());
  } catch (const pafd::np::TraceParseError& e) {
    return fail(PAFD_ERR_PARSE, e.what(), {}, e.line());
  } catch (const pafd::InvariantViolation& e) {
    return fail(PAFD_ERR_INVARIANT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(PAFD_ERR_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PAFD_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PAFD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PAFD_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define PAFD_REQUIRE(cond, what) \
  do {                           \
    if (!(cond)) return fail(PAFD_ERR_ARGUMENT, what); \
  } while (0)

std::vector<pafd::Combo> parse_combos(const char* list) {
  const std::string s = list ? list : "all";
  if (s == "all") return pafd::standard_combos();
  std::vector<pafd::Combo> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto label = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto combo = pafd::Combo::parse(label);
    if (!combo) throw pafd::ConfigError("combos", "unknown combo '" + label + "'");
    out.push_back(*combo);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

extern "C" {

const char* pafd_version(void) { return "1.0.0"; }
const char* pafd_last_error(void) { return g_error.message.c_str(); }
const char* pafd_last_error_field(void) { return g_error.field.c_str(); }
size_t pafd_last_error_line(void) { return g_error.line; }
void pafd_string_free(char* s) { std::free(s); }

pafd_status pafd_config_parse(const char* json, pafd_config** out) {
  PAFD_REQUIRE(json && out, "null argument");
  return guarded([&] { *out = new pafd_config{pafd::parse_config(json)}; });
}

pafd_status pafd_config_load(const char* path, pafd_config** out) {
  PAFD_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new pafd_config{pafd::load_config(path)}; });
}

void pafd_config_free(pafd_config* cfg) { delete cfg; }

pafd_status pafd_config_set_seed(pafd_config* cfg, uint64_t seed) {
  PAFD_REQUIRE(cfg, "null config");
  cfg->cfg.seed = seed;
  return PAFD_OK;
}

pafd_status pafd_config_get_seed(const pafd_config* cfg, uint64_t* seed) {
  PAFD_REQUIRE(cfg && seed, "null argument");
  *seed = cfg->cfg.seed;
  return PAFD_OK;
}

pafd_status pafd_config_set_load(pafd_config* cfg, double load) {
  PAFD_REQUIRE(cfg, "null config");
  return guarded([&] {
    auto next = pafd::with_load(cfg->cfg, load);
    next.validate();
    cfg->cfg = std::move(next);
  });
}

pafd_status pafd_run(const pafd_config* cfg, pafd_report** out) {
  PAFD_REQUIRE(cfg && out, "null argument");
  return guarded([&] { *out = new pafd_report{pafd::run(cfg->cfg)}; });
}

void pafd_report_free(pafd_report* report) { delete report; }

pafd_status pafd_report_metrics(const pafd_report* report, pafd_metrics* out) {
  PAFD_REQUIRE(report && out, "null argument");
  const auto& r = report->report;
  *out = pafd_metrics{};
  out->load = r.load;
  out->offered_load = r.offered_load;
  out->goodput_total = r.goodput_total;
  out->effectiveness = r.throughput_effectiveness;
  out->has_avg_delay = r.avg_delay_us.has_value();
  out->avg_delay_us = r.avg_delay_us.value_or(0.0);
  out->has_fairness = r.fairness.has_value();
  out->fairness = r.fairness.value_or(0.0);
  out->flow_count = r.flows.size();
  out->admitted_bytes = r.conservation.admitted;
  out->delivered_bytes = r.conservation.delivered;
  out->evicted_bytes = r.conservation.evicted;
  out->residual_bytes = r.conservation.residual;
  return PAFD_OK;
}

pafd_status pafd_report_flow_goodput(const pafd_report* report, size_t index, double* out) {
  PAFD_REQUIRE(report && out, "null argument");
  PAFD_REQUIRE(index < report->report.flows.size(), "flow index out of range");
  *out = report->report.flows[index].goodput;
  return PAFD_OK;
}

pafd_status pafd_report_json(const pafd_report* report, char** out) {
  PAFD_REQUIRE(report && out, "null argument");
  return guarded([&] { *out = dup_string(pafd::report_to_json(report->report)); });
}

pafd_status pafd_report_csv(const pafd_report* report, char** out) {
  PAFD_REQUIRE(report && out, "null argument");
  return guarded([&] { *out = dup_string(pafd::report_to_csv(report->report)); });
}

pafd_status pafd_sweep_run(const pafd_config* base, const double* loads, size_t n_loads,
                           const char* combos, unsigned threads, pafd_sweep** out) {
  PAFD_REQUIRE(base && out && (loads || n_loads == 0), "null argument");
  return guarded([&] {
    if (n_loads == 0) throw pafd::ConfigError("loads", "at least one load is required");
    for (size_t i = 0; i < n_loads; ++i)
      if (!(loads[i] > 0)) throw pafd::ConfigError("loads", "loads must be positive");
    const auto list = parse_combos(combos);
    auto cells = pafd::sweep(base->cfg, {loads, n_loads}, list, threads);
    *out = new pafd_sweep{std::move(cells)};
  });
}

void pafd_sweep_free(pafd_sweep* sweep) { delete sweep; }

size_t pafd_sweep_size(const pafd_sweep* sweep) { return sweep ? sweep->cells.size() : 0; }

const char* pafd_sweep_cell_error(const pafd_sweep* sweep, size_t index) {
  if (!sweep || index >= sweep->cells.size()) return "index out of range";
  const auto& cell = sweep->cells[index];
  return cell.report ? nullptr : cell.error.c_str();
}

pafd_status pafd_sweep_csv(const pafd_sweep* sweep, char** out) {
  PAFD_REQUIRE(sweep && out, "null argument");
  return guarded([&] { *out = dup_string(pafd::sweep_to_csv(sweep->cells)); });
}

pafd_status pafd_np_create(pafd_np** out) {
  PAFD_REQUIRE(out, "null argument");
  return guarded([&] { *out = new pafd_np{}; });
}

void pafd_np_free(pafd_np* np) { delete np; }

pafd_status pafd_np_set_admit(pafd_np* np, pafd_np_admit_fn fn, void* user) {
  PAFD_REQUIRE(np, "null pipeline");
  np->admit = fn;
  np->user = user;
  return PAFD_OK;
}

pafd_status pafd_np_enqueue(pafd_np* np, unsigned port, unsigned queue, uint32_t handle,
                            uint32_t length, size_t* emitted) {
  PAFD_REQUIRE(np, "null pipeline");
  return guarded([&] {
    const auto q = pafd::np::QueueId::make(port, queue);
    pafd::np::AdmitHook hook;
    if (np->admit) {
      hook = [np](pafd::np::QueueId id, const pafd::np::Descriptor& d,
                  const pafd::np::PacketRef& p) {
        return np->admit(np->user, id.port, id.queue, d.packet_count, p.length) != 0;
      };
    }
    const auto msgs = np->pipe.enqueue(q, {handle, length}, hook);
    if (emitted) *emitted = msgs.size();
  });
}

pafd_status pafd_np_dequeue(pafd_np* np, unsigned port, unsigned queue, int* has_packet,
                            uint32_t* handle, uint32_t* length, size_t* emitted) {
  PAFD_REQUIRE(np, "null pipeline");
  return guarded([&] {
    const auto [packet, msgs] = np->pipe.dequeue(pafd::np::QueueId::make(port, queue));
    if (has_packet) *has_packet = packet.has_value();
    if (packet && handle) *handle = packet->handle;
    if (packet && length) *length = packet->length;
    if (emitted) *emitted = msgs.size();
  });
}

pafd_status pafd_np_drain(pafd_np* np, pafd_np_message* buf, size_t cap, size_t* n) {
  PAFD_REQUIRE(np && n && (buf || cap == 0), "null argument");
  size_t count = 0;
  while (count < cap) {
    const auto m = np->pipe.ring().pop();
    if (!m) break;
    buf[count++] = {m->seq,
                    m->kind == pafd::np::TransitionKind::BecameNonEmpty ? PAFD_NP_BECAME_NON_EMPTY
                                                                         : PAFD_NP_BECAME_EMPTY,
                    m->queue.port, m->queue.queue};
  }
  *n = count;
  return PAFD_OK;
}

pafd_status pafd_np_queue_length(const pafd_np* np, unsigned port, unsigned queue, size_t* out) {
  PAFD_REQUIRE(np && out, "null argument");
  return guarded([&] { *out = np->pipe.queue_length(pafd::np::QueueId::make(port, queue)); });
}

size_t pafd_np_resident_count(const pafd_np* np) {
  return np ? np->pipe.cache().resident_count() : 0;
}

pafd_status pafd_np_replay(const char* trace, char** output) {
  PAFD_REQUIRE(trace && output, "null argument");
  return guarded([&] {
    const auto ops = pafd::np::parse_trace(trace);
    *output = dup_string(pafd::np::replay_trace(ops).output);
  });
}

}  // extern "C"
