// Copyright 2026 The abcpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABCPT_CLI_RUN_SPEC_HPP
#define ABCPT_CLI_RUN_SPEC_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "abcpt/config.hpp"
#include "abcpt/error.hpp"
#include "abcpt/schedule.hpp"
#include "abcpt/tb_model.hpp"
#include "abcpt/toy_model.hpp"
#include "json.hpp"

namespace abcpt::cli {

enum class Algorithm { rejection, mcmc, pt };
enum class ModelKind { toy, tb };
enum class TraceFormat { binary, csv };

/// Everything a `run` needs. Fields below `workers` affect execution only and
/// are left out of the canonical config and its hash.
struct RunSpec {
  std::string preset = "toy";
  ModelKind model = ModelKind::toy;
  Algorithm algorithm = Algorithm::pt;
  std::string toy_variant = "paper";

  std::vector<std::pair<std::uint32_t, std::uint32_t>> tb_observed;  // empty: built-in data
  std::size_t tb_stop_size = 10000;
  std::uint64_t tb_max_events = 500'000'000;
  KernelTempering tb_tempering = KernelTempering::matrix_power;

  PtConfig pt;
  std::size_t samples = 1000;  // rejection only

  std::size_t workers = 1;
  bool check_invariants = false;
  std::string out_dir;
  TraceFormat trace_format = TraceFormat::binary;
};

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rejection: return "rejection";
    case Algorithm::mcmc: return "mcmc";
    case Algorithm::pt: return "pt";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "rejection") return Algorithm::rejection;
  if (s == "mcmc") return Algorithm::mcmc;
  if (s == "pt") return Algorithm::pt;
  throw InvalidArgument("unknown algorithm '" + s + "' (expected rejection, mcmc or pt)");
}

inline TraceFormat parse_trace_format(const std::string& s) {
  if (s == "binary") return TraceFormat::binary;
  if (s == "csv") return TraceFormat::csv;
  throw InvalidArgument("unknown trace format '" + s + "' (expected binary or csv)");
}

inline std::string to_string(KernelTempering t) {
  return t == KernelTempering::matrix_power ? "matrix_power" : "entrywise";
}

inline KernelTempering parse_kernel_tempering(const std::string& s) {
  if (s == "matrix_power") return KernelTempering::matrix_power;
  if (s == "entrywise") return KernelTempering::entrywise;
  throw InvalidArgument("unknown kernel_tempering '" + s + "' (expected matrix_power or entrywise)");
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"toy", "toy-paper", "tb"};
  return names;
}

inline RunSpec preset(const std::string& name) {
  RunSpec s;
  s.preset = name;
  if (name == "toy" || name == "toy-paper") {
    s.model = ModelKind::toy;
    s.pt.tolerances = ToleranceSchedule::log_spaced(0.025, 2.0, 15);
    s.pt.temperatures = TemperatureSchedule::log_spaced(4.0, 15);
    s.pt.iterations = name == "toy" ? 50000 : 600000;
    s.pt.burn_in = name == "toy" ? 5000 : 150000;
  } else if (name == "tb") {
    s.model = ModelKind::tb;
    s.pt.tolerances = ToleranceSchedule::log_spaced(0.01, 0.1, 7);
    s.pt.temperatures = TemperatureSchedule::log_spaced(2.0, 7);
    s.pt.iterations = 20000;
    s.pt.burn_in = 2000;
  } else {
    throw InvalidArgument("unknown preset '" + name + "' (expected toy, toy-paper or tb)");
  }
  s.pt.master_seed = 1;
  return s;
}

// ---------------------------------------------------------------------------
// YAML config file

namespace detail {

inline std::string at_line(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? "line " + std::to_string(mark.line + 1) : "line ?";
}

[[noreturn]] inline void fail(const std::string& where, const YAML::Node& node, const std::string& what) {
  throw InvalidArgument(where + " " + at_line(node) + ": " + what);
}

template <class T>
T scalar(const std::string& where, const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(where, node, "'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

inline void check_keys(const std::string& where, const YAML::Node& map, const std::string& section,
                       const std::vector<std::string>& allowed) {
  if (!map.IsMap()) fail(where, map, "section '" + section + "' must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(where, kv.first, "unknown key '" + key + "' in " + section);
  }
}

inline std::vector<double> schedule_values(const std::string& where, const YAML::Node& node, const std::string& key,
                                           bool temperatures) {
  if (node.IsSequence()) {
    std::vector<double> v;
    for (const auto& item : node) v.push_back(scalar<double>(where, item, key));
    return v;
  }
  if (!node.IsMap()) fail(where, node, "'" + key + "' must be a list or a {lo, hi, count, spacing} generator");
  check_keys(where, node, key, {"lo", "hi", "count", "spacing"});
  if (!node["hi"] || !node["count"]) fail(where, node, "'" + key + "' generator needs 'hi' and 'count'");
  if (!temperatures && !node["lo"]) fail(where, node, "'" + key + "' generator needs 'lo'");
  if (node["spacing"] && scalar<std::string>(where, node["spacing"], "spacing") != "log")
    fail(where, node["spacing"], "only 'log' spacing is supported");
  const double lo = node["lo"] ? scalar<double>(where, node["lo"], "lo") : 1.0;
  if (temperatures && lo != 1.0) fail(where, node["lo"], "temperature schedules start at 1");
  const double hi = scalar<double>(where, node["hi"], "hi");
  const auto count = scalar<std::size_t>(where, node["count"], "count");
  try {
    return log_spaced_schedule(lo, hi, count);
  } catch (const InvalidArgument& e) {
    fail(where, node, e.what());
  }
}

}  // namespace detail

/// Applies a parsed YAML document on top of `spec`. `where` names the source
/// in error messages.
inline void apply_yaml(RunSpec& spec, const YAML::Node& root, const std::string& where) {
  using detail::fail;
  using detail::scalar;
  if (!root || root.IsNull()) return;
  detail::check_keys(where, root, "config",
                     {"preset", "model", "algorithm", "seed", "workers", "schedule", "run", "toy", "tb", "output"});

  if (const auto n = root["model"]) {
    const auto m = scalar<std::string>(where, n, "model");
    if (m == "toy") spec.model = ModelKind::toy;
    else if (m == "tb") spec.model = ModelKind::tb;
    else fail(where, n, "unknown model '" + m + "' (expected toy or tb)");
  }
  if (const auto n = root["algorithm"]) {
    try {
      spec.algorithm = parse_algorithm(scalar<std::string>(where, n, "algorithm"));
    } catch (const InvalidArgument& e) {
      fail(where, n, e.what());
    }
  }
  if (const auto n = root["seed"]) spec.pt.master_seed = scalar<std::uint64_t>(where, n, "seed");
  if (const auto n = root["workers"]) spec.workers = scalar<std::size_t>(where, n, "workers");

  if (const auto sched = root["schedule"]) {
    detail::check_keys(where, sched, "schedule", {"tolerances", "temperatures"});
    if (const auto n = sched["tolerances"]) {
      try {
        spec.pt.tolerances = ToleranceSchedule(detail::schedule_values(where, n, "tolerances", false));
      } catch (const InvalidArgument& e) {
        if (std::string(e.what()).rfind(where, 0) == 0) throw;
        fail(where, n, e.what());
      }
    }
    if (const auto n = sched["temperatures"]) {
      try {
        spec.pt.temperatures = TemperatureSchedule(detail::schedule_values(where, n, "temperatures", true));
      } catch (const InvalidArgument& e) {
        if (std::string(e.what()).rfind(where, 0) == 0) throw;
        fail(where, n, e.what());
      }
    }
  }

  if (const auto run = root["run"]) {
    detail::check_keys(where, run, "run",
                       {"iterations", "burn_in", "thinning", "exchanges", "rings", "rejection_cap", "samples",
                        "check_invariants"});
    if (const auto n = run["iterations"]) spec.pt.iterations = scalar<std::uint64_t>(where, n, "iterations");
    if (const auto n = run["burn_in"]) spec.pt.burn_in = scalar<std::uint64_t>(where, n, "burn_in");
    if (const auto n = run["thinning"]) spec.pt.thinning = scalar<std::uint64_t>(where, n, "thinning");
    if (const auto n = run["exchanges"]) spec.pt.exchanges_per_iteration = scalar<std::size_t>(where, n, "exchanges");
    if (const auto n = run["rings"]) {
      const auto k = scalar<std::size_t>(where, n, "rings");
      spec.pt.ring_count = k == 0 ? std::nullopt : std::optional<std::size_t>(k);
    }
    if (const auto n = run["rejection_cap"]) spec.pt.rejection_cap = scalar<std::uint64_t>(where, n, "rejection_cap");
    if (const auto n = run["samples"]) spec.samples = scalar<std::size_t>(where, n, "samples");
    if (const auto n = run["check_invariants"]) spec.check_invariants = scalar<bool>(where, n, "check_invariants");
  }

  if (const auto toy = root["toy"]) {
    detail::check_keys(where, toy, "toy", {"variant"});
    if (const auto n = toy["variant"]) {
      const auto v = scalar<std::string>(where, n, "variant");
      if (v != "paper" && v != "standard") fail(where, n, "toy variant must be 'paper' or 'standard'");
      spec.toy_variant = v;
    }
  }

  if (const auto tb = root["tb"]) {
    detail::check_keys(where, tb, "tb", {"observed", "observed_file", "stop_size", "max_events", "kernel_tempering"});
    if (const auto n = tb["observed"]) {
      if (!n.IsSequence()) fail(where, n, "'observed' must be a list of [size, count] pairs");
      spec.tb_observed.clear();
      for (const auto& pair : n) {
        if (!pair.IsSequence() || pair.size() != 2) fail(where, pair, "each observed entry must be [size, count]");
        const auto size = scalar<std::uint32_t>(where, pair[0], "size");
        const auto count = scalar<std::uint32_t>(where, pair[1], "count");
        if (size == 0 || count == 0) fail(where, pair, "cluster size and count must be positive");
        spec.tb_observed.emplace_back(size, count);
      }
    }
    if (const auto n = tb["observed_file"]) {
      const auto path = scalar<std::string>(where, n, "observed_file");
      std::ifstream in(path);
      if (!in) fail(where, n, "cannot open cluster file '" + path + "'");
      try {
        spec.tb_observed = read_cluster_configuration(in).size_counts();
      } catch (const InvalidArgument& e) {
        fail(where, n, path + ": " + e.what());
      }
    }
    if (const auto n = tb["stop_size"]) spec.tb_stop_size = scalar<std::size_t>(where, n, "stop_size");
    if (const auto n = tb["max_events"]) spec.tb_max_events = scalar<std::uint64_t>(where, n, "max_events");
    if (const auto n = tb["kernel_tempering"]) {
      try {
        spec.tb_tempering = parse_kernel_tempering(scalar<std::string>(where, n, "kernel_tempering"));
      } catch (const InvalidArgument& e) {
        fail(where, n, e.what());
      }
    }
  }

  if (const auto out = root["output"]) {
    detail::check_keys(where, out, "output", {"dir", "trace_format"});
    if (const auto n = out["dir"]) spec.out_dir = scalar<std::string>(where, n, "dir");
    if (const auto n = out["trace_format"]) {
      try {
        spec.trace_format = parse_trace_format(scalar<std::string>(where, n, "trace_format"));
      } catch (const InvalidArgument& e) {
        fail(where, n, e.what());
      }
    }
  }
}

inline YAML::Node parse_yaml(const std::string& text, const std::string& where) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw InvalidArgument(where + " line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

/// Builds a spec from config text: the preset named by `preset_override`, or
/// else by the file's `preset` key, or else `toy`, then the file's fields.
inline RunSpec load_run_spec(const std::string& text, const std::string& where,
                             const std::optional<std::string>& preset_override = {}) {
  const auto root = parse_yaml(text, where);
  std::string base = "toy";
  if (root && root.IsMap() && root["preset"])
    base = detail::scalar<std::string>(where, root["preset"], "preset");
  if (preset_override) base = *preset_override;
  RunSpec spec;
  try {
    spec = preset(base);
  } catch (const InvalidArgument& e) {
    if (root && root.IsMap() && root["preset"] && !preset_override) detail::fail(where, root["preset"], e.what());
    throw;
  }
  apply_yaml(spec, root, where);
  return spec;
}

inline RunSpec load_run_spec_file(const std::string& path, const std::optional<std::string>& preset_override = {}) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_run_spec(buf.str(), path, preset_override);
}

// ---------------------------------------------------------------------------
// Canonical form and hash

/// Semantic configuration: every field that can change the computed result.
inline nlohmann::json canonical_config(const RunSpec& s) {
  nlohmann::json j;
  j["preset"] = s.preset;
  j["algorithm"] = to_string(s.algorithm);
  j["seed"] = s.pt.master_seed;
  j["tolerances"] = std::vector<double>(s.pt.tolerances.values().begin(), s.pt.tolerances.values().end());
  j["temperatures"] = std::vector<double>(s.pt.temperatures.values().begin(), s.pt.temperatures.values().end());
  j["iterations"] = s.pt.iterations;
  j["burn_in"] = s.pt.burn_in;
  j["thinning"] = s.pt.thinning;
  j["exchanges_per_iteration"] = s.pt.exchanges();
  j["rings"] = s.pt.ring_count ? nlohmann::json(*s.pt.ring_count) : nlohmann::json(nullptr);
  j["rejection_cap"] = s.pt.rejection_cap;
  j["samples"] = s.samples;
  if (s.model == ModelKind::toy) {
    j["model"] = "toy";
    j["toy_variant"] = s.toy_variant;
  } else {
    j["model"] = "tb";
    const auto observed = s.tb_observed.empty() ? san_francisco_clusters().size_counts() : s.tb_observed;
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [size, count] : ClusterConfiguration::from_size_counts(observed).size_counts())
      pairs.push_back({size, count});
    j["tb_observed"] = pairs;
    j["tb_stop_size"] = s.tb_stop_size;
    j["tb_max_events"] = s.tb_max_events;
    j["tb_kernel_tempering"] = to_string(s.tb_tempering);
  }
  return j;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const RunSpec& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config(s).dump())));
  return buf;
}

inline ToyOptions toy_options(const RunSpec& s) {
  return s.toy_variant == "standard" ? ToyOptions::standard() : ToyOptions{};
}

inline TbOptions tb_options(const RunSpec& s) {
  TbOptions o;
  if (!s.tb_observed.empty()) o.observed = ClusterConfiguration::from_size_counts(s.tb_observed);
  o.stop_size = s.tb_stop_size;
  o.max_events = s.tb_max_events;
  o.tempering = s.tb_tempering;
  return o;
}

}  // namespace abcpt::cli

#endif  // ABCPT_CLI_RUN_SPEC_HPP
