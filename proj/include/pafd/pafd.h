/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef PAFD_PAFD_H
#define PAFD_PAFD_H

/*
 * C interface to the pafdsim shared library.
 *
 * Objects are opaque handles created by pafd_*_create/parse/load/run and
 * released with the matching pafd_*_free. Every fallible call returns a
 * pafd_status; on failure a description is available from pafd_last_error()
 * (per thread, valid until the next failing call on that thread). Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with pafd_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PAFD_BUILDING_LIBRARY)
#    define PAFD_API __declspec(dllexport)
#  else
#    define PAFD_API __declspec(dllimport)
#  endif
#else
#  define PAFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pafd_status {
  PAFD_OK = 0,
  PAFD_ERR_IO = 1,        /* a file could not be read */
  PAFD_ERR_CONFIG = 2,    /* validation failed; pafd_last_error_field() names the key */
  PAFD_ERR_INVARIANT = 3, /* a checked runtime invariant did not hold */
  PAFD_ERR_PARSE = 4,     /* trace text is malformed; see pafd_last_error_line() */
  PAFD_ERR_ARGUMENT = 5,  /* bad argument (null handle, out-of-range index, ...) */
  PAFD_ERR_INTERNAL = 6
} pafd_status;

typedef struct pafd_config pafd_config;
typedef struct pafd_report pafd_report;
typedef struct pafd_sweep pafd_sweep;
typedef struct pafd_np pafd_np;

PAFD_API const char* pafd_version(void);
PAFD_API const char* pafd_last_error(void);
PAFD_API const char* pafd_last_error_field(void);
PAFD_API size_t pafd_last_error_line(void);
PAFD_API void pafd_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

PAFD_API pafd_status pafd_config_parse(const char* json, pafd_config** out);
PAFD_API pafd_status pafd_config_load(const char* path, pafd_config** out);
PAFD_API void pafd_config_free(pafd_config* cfg);
PAFD_API pafd_status pafd_config_set_seed(pafd_config* cfg, uint64_t seed);
PAFD_API pafd_status pafd_config_get_seed(const pafd_config* cfg, uint64_t* seed);
PAFD_API pafd_status pafd_config_set_load(pafd_config* cfg, double load);

/* ---- single run ------------------------------------------------------- */

typedef struct pafd_metrics {
  double load;
  double offered_load;
  double goodput_total; /* bytes/second */
  double effectiveness;
  double avg_delay_us;  /* valid when has_avg_delay */
  double fairness;      /* valid when has_fairness */
  int has_avg_delay;
  int has_fairness;
  size_t flow_count;
  uint64_t admitted_bytes;
  uint64_t delivered_bytes;
  uint64_t evicted_bytes;
  uint64_t residual_bytes;
} pafd_metrics;

PAFD_API pafd_status pafd_run(const pafd_config* cfg, pafd_report** out);
PAFD_API void pafd_report_free(pafd_report* report);
PAFD_API pafd_status pafd_report_metrics(const pafd_report* report, pafd_metrics* out);
PAFD_API pafd_status pafd_report_flow_goodput(const pafd_report* report, size_t index,
                                              double* out);
PAFD_API pafd_status pafd_report_json(const pafd_report* report, char** out);
PAFD_API pafd_status pafd_report_csv(const pafd_report* report, char** out);

/* ---- sweeps ----------------------------------------------------------- */

/* `combos` is "all" or a comma-separated list of labels such as
 * "PAFD-BCF,TD-LQF". threads == 0 picks the hardware concurrency. */
PAFD_API pafd_status pafd_sweep_run(const pafd_config* base, const double* loads, size_t n_loads,
                                    const char* combos, unsigned threads, pafd_sweep** out);
PAFD_API void pafd_sweep_free(pafd_sweep* sweep);
PAFD_API size_t pafd_sweep_size(const pafd_sweep* sweep);
/* NULL when the cell succeeded. */
PAFD_API const char* pafd_sweep_cell_error(const pafd_sweep* sweep, size_t index);
PAFD_API pafd_status pafd_sweep_csv(const pafd_sweep* sweep, char** out);

/* ---- network-processor queue pipeline --------------------------------- */

typedef enum pafd_np_kind { PAFD_NP_BECAME_NON_EMPTY = 0, PAFD_NP_BECAME_EMPTY = 1 } pafd_np_kind;

typedef struct pafd_np_message {
  uint64_t seq;
  pafd_np_kind kind;
  uint8_t port;
  uint8_t queue;
} pafd_np_message;

/* Return non-zero to admit. `count` is the queue's current packet count. */
typedef int (*pafd_np_admit_fn)(void* user, uint8_t port, uint8_t queue, uint16_t count,
                                uint32_t length);

PAFD_API pafd_status pafd_np_create(pafd_np** out);
PAFD_API void pafd_np_free(pafd_np* np);
PAFD_API pafd_status pafd_np_set_admit(pafd_np* np, pafd_np_admit_fn fn, void* user);
/* Messages go to the pipeline's ring (128 entries); drain it with
 * pafd_np_drain. `emitted` (may be NULL) receives the number produced. */
PAFD_API pafd_status pafd_np_enqueue(pafd_np* np, unsigned port, unsigned queue, uint32_t handle,
                                     uint32_t length, size_t* emitted);
PAFD_API pafd_status pafd_np_dequeue(pafd_np* np, unsigned port, unsigned queue, int* has_packet,
                                     uint32_t* handle, uint32_t* length, size_t* emitted);
PAFD_API pafd_status pafd_np_drain(pafd_np* np, pafd_np_message* buf, size_t cap, size_t* n);
PAFD_API pafd_status pafd_np_queue_length(const pafd_np* np, unsigned port, unsigned queue,
                                          size_t* out);
PAFD_API size_t pafd_np_resident_count(const pafd_np* np);

/* Replays a trace ("E p q len" / "D p q" lines) and returns the emitted
 * messages, one "M <seq> <kind> <port> <queue>" line each. */
PAFD_API pafd_status pafd_np_replay(const char* trace, char** output);

#ifdef __cplusplus
}
#endif

#endif /* PAFD_PAFD_H */
