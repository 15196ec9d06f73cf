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

#ifndef ABCPT_CLI_COMMANDS_HPP
#define ABCPT_CLI_COMMANDS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <locale>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "abcpt/cli/run_spec.hpp"
#include "abcpt/cli/trace_io.hpp"
#include "abcpt/diagnostics.hpp"
#include "abcpt/normal.hpp"
#include "abcpt/oracles.hpp"
#include "abcpt/parallel_tempering.hpp"
#include "abcpt/samplers.hpp"
#include "abcpt/tb_model.hpp"
#include "abcpt/toy_model.hpp"
#include "json.hpp"

namespace abcpt::cli {

namespace fs = std::filesystem;

inline constexpr const char* kOutputDirEnv = "ABCPT_OUTPUT_DIR";

/// --out, then the config file, then $ABCPT_OUTPUT_DIR, then ./abcpt-out.
inline std::string resolve_output_dir(const std::optional<std::string>& flag, const std::string& from_config) {
  if (flag && !flag->empty()) return *flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "abcpt-out";
}

inline std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("output", "cannot open '" + path.string() + "' for writing");
  out.imbue(std::locale::classic());
  return out;
}

inline std::vector<std::string> parameter_names(const std::string& model, std::size_t dim) {
  if (model == "toy" && dim == 1) return {"theta"};
  if (model == "tb" && dim == 3) return {"alpha", "delta", "theta_mut"};
  std::vector<std::string> names;
  for (std::size_t c = 0; c < dim; ++c) names.push_back("theta_" + std::to_string(c + 1));
  return names;
}

inline nlohmann::json summary_json(const PosteriorSummary& s, const std::vector<std::string>& names) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t c = 0; c < s.coordinates.size(); ++c) {
    const auto& cs = s.coordinates[c];
    out[names[c]] = {{"mean", cs.mean}, {"median", cs.median}, {"ci_low", cs.ci_low}, {"ci_high", cs.ci_high}};
  }
  return out;
}

inline void write_acceptance_csv(std::ostream& out, const AcceptanceTable& table) {
  out << "chain,local_rate,local_accepted,accepted_exchanges\n";
  for (std::size_t c = 0; c < table.local_rate.size(); ++c)
    out << c + 1 << ',' << format_double(table.local_rate[c]) << ',' << table.local_accepted[c] << ','
        << table.accepted_exchanges[c] << '\n';
}

/// Upper-triangular layout: header row of chain numbers, blank cells below
/// the diagonal.
inline void write_exchange_matrix_csv(std::ostream& out, const ExchangeMatrix& m) {
  out << "chain";
  for (std::size_t j = 0; j < m.n; ++j) out << ',' << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out << i + 1;
    for (std::size_t j = 0; j < m.n; ++j) {
      out << ',';
      if (j >= i) out << format_double(m(i, j));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// run

struct RunOutcome {
  StoredTrace stored;
  nlohmann::json report;
  std::vector<std::string> written;
};

namespace detail {

struct Sampled {
  Trace trace;
  std::optional<RingPartition> rings;
  std::vector<std::uint64_t> init_attempts;
  nlohmann::json extra = nlohmann::json::object();
};

template <Model M>
Sampled sample(const RunSpec& spec, const M& model) {
  Sampled s;
  const double eps = spec.pt.tolerances.front();
  switch (spec.algorithm) {
    case Algorithm::rejection: {
      Rng rng = rng_streams(spec.pt.master_seed, 1)[0];
      const auto result = abc_rejection(model, eps, spec.samples, rng, spec.pt.rejection_cap);
      s.trace = Trace(1, M::dimension);
      const std::uint8_t one = 1;
      for (const auto& theta : result.samples) s.trace.append_iteration(theta, std::span<const std::uint8_t>(&one, 1));
      s.extra["epsilon"] = eps;
      s.extra["proposals_used"] = result.proposals_used;
      s.extra["acceptance_rate"] = result.acceptance_rate();
      break;
    }
    case Algorithm::mcmc: {
      Rng rng = rng_streams(spec.pt.master_seed, 1)[0];
      auto [init, attempts] = rejection_draw(model, eps, rng, spec.pt.rejection_cap);
      s.init_attempts.push_back(attempts);
      auto run = abc_mcmc_run(model, eps, spec.pt.iterations, spec.pt.burn_in, std::move(init), rng, spec.pt.thinning);
      s.trace = std::move(run.trace);
      s.extra["epsilon"] = eps;
      break;
    }
    case Algorithm::pt: {
      auto run = run_abc_pt(spec.pt, model, ExecutionOptions{spec.workers, spec.check_invariants});
      s.trace = std::move(run.trace);
      s.rings = run.rings;
      s.init_attempts = std::move(run.init_attempts);
      break;
    }
  }
  return s;
}

inline std::string mode_name(const RunSpec& spec) {
  switch (spec.algorithm) {
    case Algorithm::rejection: return "rejection";
    case Algorithm::mcmc: return "abc-mcmc";
    case Algorithm::pt:
      if (spec.pt.independent_chains()) return "independent-chains";
      return spec.pt.ring_count ? "abc-pt-rings" : "abc-pt";
  }
  return "?";
}

}  // namespace detail

/// Validates the spec, runs it and writes the trace, report.json and
/// acceptance.csv into `spec.out_dir`.
inline RunOutcome cmd_run(const RunSpec& spec) {
  if (spec.algorithm != Algorithm::rejection) spec.pt.validate();
  if (spec.algorithm == Algorithm::rejection && spec.samples < 1) throw InvalidArgument("samples must be >= 1");
  if (spec.workers < 1) throw InvalidArgument("workers must be >= 1");

  const auto started = std::chrono::steady_clock::now();
  detail::Sampled sampled;
  std::string model_name;
  if (spec.model == ModelKind::toy) {
    model_name = "toy";
    sampled = detail::sample(spec, ToyModel(toy_options(spec)));
  } else {
    model_name = "tb";
    sampled = detail::sample(spec, TbModel(tb_options(spec)));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  RunOutcome out;
  const bool chained = spec.algorithm != Algorithm::rejection;
  out.stored.model = model_name;
  out.stored.burn_in = chained ? spec.pt.burn_in : 0;
  out.stored.thinning = chained ? spec.pt.thinning : 1;
  out.stored.trace = std::move(sampled.trace);
  const Trace& trace = out.stored.trace;

  const fs::path dir(spec.out_dir.empty() ? "abcpt-out" : spec.out_dir);
  fs::create_directories(dir);

  nlohmann::json& r = out.report;
  r["config"] = canonical_config(spec);
  r["config_hash"] = config_hash(spec);
  r["seed"] = spec.pt.master_seed;
  r["mode"] = detail::mode_name(spec);
  r["independent_chains"] = spec.algorithm == Algorithm::pt && spec.pt.independent_chains();
  r["n_chains"] = trace.n_chains();
  r["iterations_recorded"] = trace.iterations();
  if (sampled.rings) {
    const auto b = sampled.rings->boundaries();
    const auto g = sampled.rings->group_sizes();
    r["rings"] = {{"count", sampled.rings->ring_count()},
                  {"boundaries", std::vector<double>(b.begin(), b.end())},
                  {"group_sizes", std::vector<std::size_t>(g.begin(), g.end())}};
  } else {
    r["rings"] = nullptr;
  }
  if (!sampled.init_attempts.empty()) r["init_attempts"] = sampled.init_attempts;
  for (auto& [k, v] : sampled.extra.items()) r[k] = v;

  if (trace.iterations() > 0) {
    const auto table = acceptance_table(trace);
    r["acceptance"] = {{"local_rate", table.local_rate},
                       {"accepted_exchanges", table.accepted_exchanges},
                       {"exchanges_per_iteration", table.exchanges_per_iteration()},
                       {"skipped_exchanges", trace.skipped_exchanges()}};
    auto f = open_output(dir / "acceptance.csv");
    write_acceptance_csv(f, table);
    out.written.push_back((dir / "acceptance.csv").string());
  }
  const auto primary = trace.samples(0, out.stored.burn_in, out.stored.thinning);
  if (primary.size() >= 2)
    r["primary_summary"] = summary_json(posterior_summary(primary), parameter_names(model_name, trace.dimension()));

  nlohmann::json artifacts = nlohmann::json::array();
  if (spec.trace_format == TraceFormat::binary) {
    write_trace_file((dir / "trace.bin").string(), out.stored);
    out.written.push_back((dir / "trace.bin").string());
    artifacts.push_back("trace.bin");
  } else {
    auto t = open_output(dir / "trace.csv");
    write_trace_csv(t, trace);
    auto e = open_output(dir / "exchanges.csv");
    write_exchanges_csv(e, trace);
    out.written.push_back((dir / "trace.csv").string());
    out.written.push_back((dir / "exchanges.csv").string());
    artifacts.push_back("trace.csv");
    artifacts.push_back("exchanges.csv");
  }
  artifacts.push_back("acceptance.csv");
  r["artifacts"] = artifacts;
  r["execution"] = {{"workers", spec.workers}, {"check_invariants", spec.check_invariants}};
  r["timing"] = {{"wall_seconds", wall}};

  auto f = open_output(dir / "report.json");
  f << r.dump(2) << '\n';
  out.written.push_back((dir / "report.json").string());
  return out;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseOptions {
  std::string trace_path;
  std::vector<std::string> requests;
  std::size_t chain = 1;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::vector<std::size_t> lags{1, 10, 20};
  std::vector<std::size_t> thinnings{1, 10, 50};
  std::string exchange_mode = "per-iteration";
  std::string transform = "none";
  std::size_t coordinate = 1;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::size_t grid_points = 201;
  std::size_t bins = 50;
  std::optional<double> bandwidth;
  std::string out_dir;
};

inline const std::vector<std::string>& diagnose_requests() {
  static const std::vector<std::string> names{"acceptance", "exchange-matrix", "acf", "summary", "density",
                                              "trace-csv"};
  return names;
}

/// Writes one CSV per request and returns the paths written.
inline std::vector<std::string> cmd_diagnose(const DiagnoseOptions& opt) {
  if (opt.requests.empty()) throw InvalidArgument("diagnose: no --request given");
  for (const auto& req : opt.requests) {
    const auto base = req.substr(0, req.find(':'));
    if (std::find(diagnose_requests().begin(), diagnose_requests().end(), base) == diagnose_requests().end())
      throw InvalidArgument("diagnose: unknown request '" + req +
                            "' (expected acceptance, exchange-matrix, acf, summary, density or trace-csv)");
  }
  if (opt.transform != "none" && opt.transform != "tb")
    throw InvalidArgument("diagnose: unknown transform '" + opt.transform + "' (expected none or tb)");

  const auto stored = read_trace_file(opt.trace_path);
  const Trace& trace = stored.trace;
  if (opt.chain < 1 || opt.chain > trace.n_chains())
    throw InvalidArgument("diagnose: chain must lie in [1, " + std::to_string(trace.n_chains()) + "]");
  const std::size_t chain = opt.chain - 1;
  const std::uint64_t burn_in = opt.burn_in.value_or(stored.burn_in);
  const std::uint64_t thinning = opt.thin.value_or(stored.thinning);
  if (burn_in >= trace.iterations()) throw InvalidArgument("diagnose: burn-in covers the whole trace");

  const fs::path dir(opt.out_dir.empty() ? fs::path(opt.trace_path).parent_path() : fs::path(opt.out_dir));
  if (!dir.empty()) fs::create_directories(dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
    auto f = open_output(dir / name);
    body(f);
    written.push_back((dir / name).string());
  };

  for (const auto& req : opt.requests) {
    const auto colon = req.find(':');
    const auto base = req.substr(0, colon);
    const auto arg = colon == std::string::npos ? std::string() : req.substr(colon + 1);
    if (base == "acceptance") {
      emit("acceptance.csv", [&](std::ostream& o) { write_acceptance_csv(o, acceptance_table(trace)); });
    } else if (base == "exchange-matrix") {
      const auto mode = parse_exchange_rate_mode(arg.empty() ? opt.exchange_mode : arg);
      emit("exchange_matrix_" + std::string(to_string(mode)) + ".csv",
           [&](std::ostream& o) { write_exchange_matrix_csv(o, exchange_matrix(trace, mode)); });
    } else if (base == "acf") {
      const auto series = trace.series(chain, opt.coordinate - 1, burn_in, 1);
      emit("acf.csv", [&](std::ostream& o) {
        o << "thinning";
        for (auto lag : opt.lags) o << ",lag_" << lag;
        o << '\n';
        for (auto k : opt.thinnings) {
          const auto thinned = thin(series, k);
          o << k;
          for (auto lag : opt.lags) {
            o << ',';
            if (lag < thinned.size()) o << format_double(autocorrelation(thinned, lag));
            else o << "nan";
          }
          o << '\n';
        }
      });
    } else if (base == "summary") {
      const auto samples = trace.samples(chain, burn_in, thinning);
      std::vector<std::string> names = parameter_names(stored.model, trace.dimension());
      SampleTransform transform;
      if (opt.transform == "tb") {
        if (trace.dimension() != 3) throw InvalidArgument("diagnose: the tb transform needs 3-dimensional samples");
        names = {"transmission_rate", "doubling_time", "reproductive_value"};
        transform = [](std::span<const double> r) {
          const auto d = tb_derived_params({r[0], r[1], r[2]});
          return std::vector<double>{d.transmission_rate, d.doubling_time, d.reproductive_value};
        };
      }
      const auto summary = posterior_summary(samples, transform);
      emit("summary.csv", [&](std::ostream& o) {
        o << "parameter,mean,median,ci_low,ci_high\n";
        for (std::size_t c = 0; c < summary.coordinates.size(); ++c) {
          const auto& s = summary.coordinates[c];
          o << names[c] << ',' << format_double(s.mean) << ',' << format_double(s.median) << ','
            << format_double(s.ci_low) << ',' << format_double(s.ci_high) << '\n';
        }
      });
    } else if (base == "density") {
      if (opt.coordinate < 1 || opt.coordinate > trace.dimension())
        throw InvalidArgument("diagnose: coordinate out of range");
      const auto values = trace.series(chain, opt.coordinate - 1, burn_in, thinning);
      GridSpec grid;
      grid.bandwidth = opt.bandwidth;
      const double h = opt.bandwidth ? *opt.bandwidth : silverman_bandwidth(values);
      const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
      grid.lo = opt.grid_lo.value_or(*mn - 4.0 * h);
      grid.hi = opt.grid_hi.value_or(*mx + 4.0 * h);
      grid.points = opt.grid_points;
      grid.bins = opt.bins;
      const auto d = density_export(values, grid);
      emit("density.csv", [&](std::ostream& o) {
        o << "x,density\n";
        for (std::size_t k = 0; k < d.grid.size(); ++k)
          o << format_double(d.grid[k]) << ',' << format_double(d.density[k]) << '\n';
      });
      emit("histogram.csv", [&](std::ostream& o) {
        o << "bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < d.counts.size(); ++b)
          o << format_double(d.bin_edges[b]) << ',' << format_double(d.bin_edges[b + 1]) << ',' << d.counts[b] << '\n';
      });
    } else if (base == "trace-csv") {
      emit("trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
      emit("exchanges.csv", [&](std::ostream& o) { write_exchanges_csv(o, trace); });
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// validate

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  std::uint64_t seed = 20260101;
  std::string inject_fault;  // "" or "exchange-predicate"
};

inline std::vector<CheckResult> cmd_validate(const ValidateOptions& opt) {
  if (!opt.inject_fault.empty() && opt.inject_fault != "exchange-predicate")
    throw InvalidArgument("validate: unknown fault '" + opt.inject_fault + "' (expected exchange-predicate)");
  std::vector<CheckResult> results;
  auto streams = rng_streams(opt.seed, 4);
  char buf[160];

  {
    const auto eps = ToleranceSchedule::log_spaced(0.025, 2.0, 15);
    const double expected[] = {0.025,  0.0342, 0.0468, 0.0639, 0.0874, 0.1196, 0.1635, 0.2236,
                               0.3058, 0.4182, 0.5719, 0.7820, 1.0694, 1.4625, 2.0};
    bool ok = true;
    for (std::size_t k = 0; k < 15; ++k) ok = ok && std::abs(eps[k] - expected[k]) < 5e-5;
    const auto rings = ring_partition(eps, 3);
    ok = ok && std::abs(rings.boundaries()[1] - 0.103) < 1e-3 && std::abs(rings.boundaries()[2] - 0.495) < 1e-3;
    std::snprintf(buf, sizeof buf, "ring boundaries %.4f %.4f", rings.boundaries()[1], rings.boundaries()[2]);
    results.push_back({"schedule-and-rings", ok, buf});
  }

  {
    ToyModel toy;
    const double eps = 0.025;
    const int draws = 200000;
    int worst_k = 0;
    double worst = 0.0;
    bool ok = true;
    for (int k = 0; k <= 10; ++k) {
      const double theta = -2.5 + 0.5 * k;
      int hits = 0;
      for (int d = 0; d < draws; ++d) hits += std::abs(toy.simulate({theta}, streams[0])) < eps ? 1 : 0;
      const double p = toy_eps_posterior_unnormalized(toy, theta, eps);
      const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
      const double z = std::abs(static_cast<double>(hits) / draws - p) / se;
      if (z > worst) {
        worst = z;
        worst_k = k;
      }
      ok = ok && z <= 4.0;
    }
    std::snprintf(buf, sizeof buf, "max |z| %.2f at theta %.1f (limit 4)", worst, -2.5 + 0.5 * worst_k);
    results.push_back({"toy-eps-posterior-vs-mc", ok, buf});
  }

  {
    const bool flip = opt.inject_fault == "exchange-predicate";
    auto predicate = [flip](double d, double e) { return flip ? !(d < e) : d < e; };
    std::size_t mismatches = 0;
    const int instances = 10000;
    for (int k = 0; k < instances; ++k) {
      const auto inst = oracle::random_exchange_instance(streams[1]);
      std::vector<ChainState<ToyModel>> states(inst.distances.size());
      for (std::size_t c = 0; c < states.size(); ++c) {
        states[c].theta = {static_cast<double>(c)};
        states[c].distance = inst.distances[c];
        states[c].level = c;
      }
      const bool accepted = pt_exchange_attempt(states, ToleranceSchedule(inst.epsilons), inst.i, inst.j, predicate);
      if ((accepted ? 1.0 : 0.0) != oracle::exchange_metropolis_ratio(inst)) ++mismatches;
    }
    std::snprintf(buf, sizeof buf, "%zu mismatches in %d instances", mismatches, instances);
    results.push_back({"exchange-indicator-vs-detailed-balance", mismatches == 0, buf});
  }

  {
    const double alpha = 2.0, delta = 1.0;
    const std::size_t stop = 100;
    const int runs = 100000;
    int extinct = 0;
    for (int k = 0; k < runs; ++k)
      extinct += simulate_epidemic({alpha, delta, 0.0}, stop, 10'000'000, streams[2]) ? 0 : 1;
    const double p = oracle::ruin_extinction_probability(alpha, delta, stop);
    const double se = std::sqrt(p * (1 - p) / runs);
    const double freq = static_cast<double>(extinct) / runs;
    const bool ok = std::abs(freq - p) <= 3.0 * se && std::abs(p - delta / alpha) < 1e-12;
    std::snprintf(buf, sizeof buf, "extinct %.4f vs %.4f (3 SE %.4f)", freq, p, 3.0 * se);
    results.push_back({"tb-extinction-probability", ok, buf});
  }

  {
    const auto obs = san_francisco_clusters();
    const bool ok = stat_g(obs) == 326 && stat_H(obs) == 1.0 - 2411.0 / 223729.0;
    std::snprintf(buf, sizeof buf, "g %zu H %.6f", stat_g(obs), stat_H(obs));
    results.push_back({"tb-observed-summaries", ok, buf});
  }
  return results;
}

}  // namespace abcpt::cli

#endif  // ABCPT_CLI_COMMANDS_HPP
