/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pafd/engine.hpp"

namespace pafd {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON run configuration. Keys that are absent keep the defaults of
/// SimConfig::standard(); unknown keys are rejected. Throws ConfigError.
SimConfig parse_config(std::string_view json_text);

/// Reads and parses a config file. Throws IoError if it cannot be read.
SimConfig load_config(const std::filesystem::path& path);

std::string report_to_json(const RunReport& report);

/// Locale-independent number with 6 significant digits.
std::string format_number(double value);

/// combo,load,goodput_total,effectiveness,avg_delay_us,fairness,G_1..G_n
std::string csv_header(std::size_t flow_count);
std::string csv_row(const RunReport& report);
std::string report_to_csv(const RunReport& report);

/// Header plus one row per cell. Failed cells keep combo and load and leave
/// the metric columns empty.
std::string sweep_to_csv(std::span<const SweepCell> cells);

}  // namespace pafd
