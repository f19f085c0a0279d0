/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pafd {

using nlohmann::json;

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

void reject_unknown(const json& obj, std::string_view prefix,
                    std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> keys(allowed);
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError(join(prefix, it.key()), "unknown key");
}

const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  return j;
}

double get_number(const json& obj, std::string_view key, std::string_view prefix) {
  const auto& v = obj.at(std::string(key));
  if (!v.is_number()) throw ConfigError(join(prefix, key), "expected a number");
  return v.get<double>();
}

template <typename T>
void maybe_number(const json& obj, std::string_view key, std::string_view prefix, T& out) {
  if (obj.contains(std::string(key))) out = static_cast<T>(get_number(obj, key, prefix));
}

std::uint64_t get_unsigned(const json& obj, std::string_view key, std::string_view prefix) {
  const auto& v = obj.at(std::string(key));
  if (!v.is_number_unsigned())
    throw ConfigError(join(prefix, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, std::string_view key, std::string_view prefix) {
  const auto& v = obj.at(std::string(key));
  if (!v.is_string()) throw ConfigError(join(prefix, key), "expected a string");
  return v.get<std::string>();
}

Time seconds(double s) { return Time{std::llround(s * 1e6)}; }
Time millis(double ms) { return Time{std::llround(ms * 1e3)}; }

LengthConfig get_lengths(const json& obj, std::string_view prefix) {
  const auto name = get_string(obj, "lengths", prefix);
  const auto cfg = parse_length_config(name);
  if (!cfg) throw ConfigError(join(prefix, "lengths"), "unknown length config '" + name + "'");
  return *cfg;
}

PriorityClass get_priority(const json& obj, std::string_view prefix) {
  const auto name = get_string(obj, "priority", prefix);
  if (name == "high") return PriorityClass::High;
  if (name == "low") return PriorityClass::Low;
  throw ConfigError(join(prefix, "priority"), "expected \"high\" or \"low\"");
}

void apply_source_defaults(const json& src, OnOffParams& p, std::string_view prefix) {
  if (src.contains("mean_on_ms")) p.mean_on = millis(get_number(src, "mean_on_ms", prefix));
  if (src.contains("mean_off_ms")) p.mean_off = millis(get_number(src, "mean_off_ms", prefix));
}

}  // namespace

SimConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  require_object(doc, "config");
  reject_unknown(doc, "",
                 {"duration_s", "warmup_s", "link_rate", "buffer_capacity", "policy", "scheduler",
                  "pafd", "red", "channel", "load_window_ms", "lengths", "source", "flows", "seed",
                  "load"});

  const LengthConfig lengths = doc.contains("lengths") ? get_lengths(doc, "") : LengthConfig{64, 1500};
  SimConfig cfg = SimConfig::standard(lengths);

  if (doc.contains("duration_s")) cfg.duration = seconds(get_number(doc, "duration_s", ""));
  if (doc.contains("warmup_s")) cfg.warmup = seconds(get_number(doc, "warmup_s", ""));
  maybe_number(doc, "link_rate", "", cfg.link_rate);
  if (doc.contains("buffer_capacity")) cfg.buffer_capacity = get_unsigned(doc, "buffer_capacity", "");
  if (doc.contains("seed")) cfg.seed = get_unsigned(doc, "seed", "");
  if (doc.contains("load_window_ms"))
    cfg.load_window = millis(get_number(doc, "load_window_ms", ""));

  if (doc.contains("policy")) {
    const auto name = get_string(doc, "policy", "");
    const auto p = parse_policy(name);
    if (!p) throw ConfigError("policy", "unknown policy '" + name + "'");
    cfg.policy = *p;
  }
  if (doc.contains("scheduler")) {
    const auto name = get_string(doc, "scheduler", "");
    const auto s = parse_scheduler(name);
    if (!s) throw ConfigError("scheduler", "unknown scheduler '" + name + "'");
    cfg.scheduler = *s;
  }

  if (doc.contains("pafd")) {
    const auto& p = require_object(doc["pafd"], "pafd");
    reject_unknown(p, "pafd",
                   {"buf_min", "buf_medium", "buf_max", "p_self", "alpha_offset_low", "beta_knee",
                    "beta_min"});
    maybe_number(p, "buf_min", "pafd", cfg.pafd.buf_min);
    maybe_number(p, "buf_medium", "pafd", cfg.pafd.buf_medium);
    maybe_number(p, "buf_max", "pafd", cfg.pafd.buf_max);
    maybe_number(p, "p_self", "pafd", cfg.pafd.p_self);
    maybe_number(p, "alpha_offset_low", "pafd", cfg.pafd.alpha_offset_low);
    maybe_number(p, "beta_knee", "pafd", cfg.pafd.beta_knee);
    maybe_number(p, "beta_min", "pafd", cfg.pafd.beta_min);
  }

  if (doc.contains("red")) {
    const auto& r = require_object(doc["red"], "red");
    reject_unknown(r, "red", {"w_q", "min_th", "max_th", "max_p"});
    RedConfig red = RedConfig::defaults_for(cfg.buffer_capacity);
    maybe_number(r, "w_q", "red", red.w_q);
    maybe_number(r, "min_th", "red", red.min_th);
    maybe_number(r, "max_th", "red", red.max_th);
    maybe_number(r, "max_p", "red", red.max_p);
    cfg.red = red;
  }

  if (doc.contains("channel")) {
    const auto& c = require_object(doc["channel"], "channel");
    reject_unknown(c, "channel", {"p_gb", "p_bg", "r_good", "r_bad", "step_us"});
    maybe_number(c, "p_gb", "channel", cfg.channel.p_gb);
    maybe_number(c, "p_bg", "channel", cfg.channel.p_bg);
    maybe_number(c, "r_good", "channel", cfg.channel.r_good);
    maybe_number(c, "r_bad", "channel", cfg.channel.r_bad);
    if (c.contains("step_us"))
      cfg.channel.step = Time{std::llround(get_number(c, "step_us", "channel"))};
  }

  OnOffParams source_defaults;
  source_defaults.lengths = lengths;
  if (doc.contains("source")) {
    const auto& s = require_object(doc["source"], "source");
    reject_unknown(s, "source", {"mean_on_ms", "mean_off_ms"});
    apply_source_defaults(s, source_defaults, "source");
    for (auto& f : cfg.flows) {
      f.source.mean_on = source_defaults.mean_on;
      f.source.mean_off = source_defaults.mean_off;
    }
  }

  if (doc.contains("flows")) {
    const auto& arr = doc["flows"];
    if (!arr.is_array() || arr.empty()) throw ConfigError("flows", "expected a non-empty array");
    cfg.flows.clear();
    cfg.load.reset();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string prefix = "flows[" + std::to_string(i) + "]";
      const auto& jf = require_object(arr[i], prefix);
      reject_unknown(jf, prefix,
                     {"u", "phi", "priority", "on_rate", "mean_on_ms", "mean_off_ms", "lengths"});
      FlowConfig f;
      f.source = source_defaults;
      maybe_number(jf, "u", prefix, f.u);
      if (jf.contains("phi")) f.phi = get_number(jf, "phi", prefix);
      if (jf.contains("priority")) f.priority = get_priority(jf, prefix);
      maybe_number(jf, "on_rate", prefix, f.source.on_rate);
      apply_source_defaults(jf, f.source, prefix);
      if (jf.contains("lengths")) f.source.lengths = get_lengths(jf, prefix);
      cfg.flows.push_back(f);
    }
  }

  if (doc.contains("load")) {
    if (doc["load"].is_null()) cfg.load.reset();
    else cfg.load = get_number(doc, "load", "");
  }

  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string report_to_json(const RunReport& r) {
  json flows = json::array();
  for (const auto& f : r.flows) {
    flows.push_back({
        {"id", f.id.value()},
        {"priority", to_string(f.priority)},
        {"u", f.u},
        {"goodput", f.goodput},
        {"offered_bytes", f.offered_bytes},
        {"delivered_bytes", f.delivered_bytes},
        {"delivered", f.delivered},
        {"admitted", f.admitted},
        {"dropped", f.dropped},
        {"evicted", f.evicted},
        {"oversize", f.oversize},
        {"mean_delay_us", optional_number(f.mean_delay_us)},
    });
  }
  const json doc{
      {"combo", r.combo},
      {"policy", r.policy},
      {"scheduler", r.scheduler},
      {"load", r.load},
      {"offered_load", r.offered_load},
      {"seed", r.seed},
      {"window_us", r.window.count()},
      {"goodput_total", r.goodput_total},
      {"effectiveness", r.throughput_effectiveness},
      {"avg_delay_us", optional_number(r.avg_delay_us)},
      {"fairness", optional_number(r.fairness)},
      {"conservation",
       {{"admitted", r.conservation.admitted},
        {"delivered", r.conservation.delivered},
        {"evicted", r.conservation.evicted},
        {"residual", r.conservation.residual}}},
      {"flows", flows},
  };
  return doc.dump(2) + "\n";
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string csv_header(std::size_t flow_count) {
  std::string h = "combo,load,goodput_total,effectiveness,avg_delay_us,fairness";
  for (std::size_t i = 1; i <= flow_count; ++i) h += ",G_" + std::to_string(i);
  return h + "\n";
}

namespace {

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

std::string csv_row(const RunReport& r) {
  std::string row = r.combo + "," + format_number(r.load) + "," + format_number(r.goodput_total) +
                    "," + format_number(r.throughput_effectiveness) + "," +
                    optional_cell(r.avg_delay_us) + "," + optional_cell(r.fairness);
  for (const auto& f : r.flows) row += "," + format_number(f.goodput);
  return row + "\n";
}

std::string report_to_csv(const RunReport& r) { return csv_header(r.flows.size()) + csv_row(r); }

std::string sweep_to_csv(std::span<const SweepCell> cells) {
  std::size_t flows = 0;
  for (const auto& c : cells)
    if (c.report) flows = std::max(flows, c.report->flows.size());
  std::string out = csv_header(flows);
  for (const auto& c : cells) {
    if (c.report) {
      out += csv_row(*c.report);
    } else {
      out += c.combo.label() + "," + format_number(c.load) + ",,,,";
      out += std::string(flows, ',');
      out += "\n";
    }
  }
  return out;
}

}  // namespace pafd
