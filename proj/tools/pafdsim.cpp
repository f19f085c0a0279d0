/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// pafdsim: run shared-buffer experiments, load sweeps and dataplane trace
// replays through the libpafd C interface.

#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pafd/pafd.h"

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct ConfigDeleter {
  void operator()(pafd_config* c) const { pafd_config_free(c); }
};
struct ReportDeleter {
  void operator()(pafd_report* r) const { pafd_report_free(r); }
};
struct SweepDeleter {
  void operator()(pafd_sweep* s) const { pafd_sweep_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { pafd_string_free(s); }
};
using ConfigPtr = std::unique_ptr<pafd_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<pafd_report, ReportDeleter>;
using SweepPtr = std::unique_ptr<pafd_sweep, SweepDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code(pafd_status s) {
  switch (s) {
    case PAFD_OK: return kExitOk;
    case PAFD_ERR_CONFIG: return kExitConfig;
    case PAFD_ERR_INVARIANT: return kExitInvariant;
    default: return kExitIo;
  }
}

int report_error(pafd_status s) {
  std::cerr << "pafdsim: " << pafd_last_error() << "\n";
  return exit_code(s);
}

std::optional<std::uint64_t> parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

// Loads the config and applies the seed precedence flag > PAFD_SEED > file.
int load_config(const std::string& path, const std::optional<std::uint64_t>& seed_flag,
                ConfigPtr& out) {
  pafd_config* raw = nullptr;
  if (const auto s = pafd_config_load(path.c_str(), &raw); s != PAFD_OK) return report_error(s);
  out.reset(raw);

  std::optional<std::uint64_t> seed = seed_flag;
  if (!seed) {
    if (const char* env = std::getenv("PAFD_SEED"); env && *env) {
      seed = parse_u64(env);
      if (!seed) {
        std::cerr << "pafdsim: seed: PAFD_SEED is not a non-negative integer\n";
        return kExitConfig;
      }
    }
  }
  if (seed) pafd_config_set_seed(out.get(), *seed);
  return kExitOk;
}

int write_output(const std::string& out_path, const char* text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "pafdsim: cannot write '" << out_path << "'\n";
    return kExitIo;
  }
  f << text;
  return f ? kExitOk : kExitIo;
}

std::optional<std::vector<double>> parse_loads(const std::string& text) {
  std::vector<double> loads;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !(v > 0)) return std::nullopt;
    loads.push_back(v);
  }
  if (loads.empty()) return std::nullopt;
  return loads;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::string& out, const std::string& format) {
  ConfigPtr cfg;
  if (const int rc = load_config(config_path, seed, cfg); rc != kExitOk) return rc;

  pafd_report* raw = nullptr;
  if (const auto s = pafd_run(cfg.get(), &raw); s != PAFD_OK) return report_error(s);
  ReportPtr report(raw);

  char* text = nullptr;
  const auto s = format == "json" ? pafd_report_json(report.get(), &text)
                                  : pafd_report_csv(report.get(), &text);
  if (s != PAFD_OK) return report_error(s);
  StringPtr owned(text);
  return write_output(out, owned.get());
}

int cmd_sweep(const std::string& config_path, const std::optional<std::uint64_t>& seed,
              const std::string& loads_text, const std::string& combos, const std::string& out,
              unsigned threads) {
  const auto loads = parse_loads(loads_text);
  if (!loads) {
    std::cerr << "pafdsim: loads: expected a comma-separated list of positive numbers\n";
    return kExitConfig;
  }
  ConfigPtr cfg;
  if (const int rc = load_config(config_path, seed, cfg); rc != kExitOk) return rc;

  pafd_sweep* raw = nullptr;
  if (const auto s = pafd_sweep_run(cfg.get(), loads->data(), loads->size(), combos.c_str(),
                                    threads, &raw);
      s != PAFD_OK)
    return report_error(s);
  SweepPtr sweep(raw);

  int rc = kExitOk;
  for (size_t i = 0; i < pafd_sweep_size(sweep.get()); ++i) {
    if (const char* err = pafd_sweep_cell_error(sweep.get(), i)) {
      std::cerr << "pafdsim: cell " << i << ": " << err << "\n";
      rc = kExitInvariant;
    }
  }
  char* text = nullptr;
  if (const auto s = pafd_sweep_csv(sweep.get(), &text); s != PAFD_OK) return report_error(s);
  StringPtr owned(text);
  const int wrc = write_output(out, owned.get());
  return wrc != kExitOk ? wrc : rc;
}

int cmd_nptrace(const std::string& trace_path) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) {
    std::cerr << "pafdsim: cannot read trace file '" << trace_path << "'\n";
    return kExitIo;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  char* text = nullptr;
  const auto s = pafd_np_replay(buf.str().c_str(), &text);
  if (s == PAFD_ERR_PARSE) {
    std::cerr << "pafdsim: " << trace_path << ":" << pafd_last_error_line() << ": "
              << pafd_last_error() << "\n";
    return kExitIo;
  }
  if (s == PAFD_ERR_INVARIANT) {
    std::cerr << "pafdsim: invariant violated: " << pafd_last_error() << "\n";
    return kExitInvariant;
  }
  if (s != PAFD_OK) return report_error(s);
  StringPtr owned(text);
  std::cout << owned.get();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-buffer queue management simulator (PAFD, RED, tail drop)"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run one experiment and write its report");
  run->add_option("config", config_path, "JSON configuration file")->required();
  run->add_option("--seed", seed, "Random seed (overrides PAFD_SEED and the config)");
  run->add_option("--out", out, "Output file (default: stdout)");
  run->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string loads = "0.2,0.6,1.0,1.4";
  std::string combos = "all";
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a load sweep over policy/scheduler combos");
  sweep->add_option("config", config_path, "JSON configuration file")->required();
  sweep->add_option("--loads", loads, "Comma-separated offered loads");
  sweep->add_option("--combos", combos, "\"all\" or labels such as PAFD-BCF,TD-LQF");
  sweep->add_option("--out", out, "Output CSV file (default: stdout)");
  sweep->add_option("--seed", seed, "Random seed (overrides PAFD_SEED and the config)");
  sweep->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  std::string trace_path;
  auto* nptrace = app.add_subcommand("nptrace", "Replay a queue-pipeline trace");
  nptrace->add_option("trace", trace_path, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*run) return cmd_run(config_path, seed, out, format);
  if (*sweep) return cmd_sweep(config_path, seed, loads, combos, out, threads);
  if (*nptrace) return cmd_nptrace(trace_path);
  return kExitOk;
}
