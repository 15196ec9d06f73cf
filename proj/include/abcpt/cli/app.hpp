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

#ifndef ABCPT_CLI_APP_HPP
#define ABCPT_CLI_APP_HPP

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abcpt/cli/commands.hpp"
#include "abcpt/cli/run_spec.hpp"

namespace abcpt::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct RunFlags {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> rings;
  std::optional<std::size_t> exchanges;
  std::optional<std::uint64_t> iterations;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::optional<std::string> out;
  std::optional<std::string> algorithm;
  std::optional<std::string> trace_format;
  std::optional<std::size_t> samples;
  bool check_invariants = false;
};

/// Preset, then config file, then flags.
inline RunSpec build_run_spec(const RunFlags& f) {
  RunSpec spec = f.config ? load_run_spec_file(*f.config, f.preset) : preset(f.preset.value_or("toy"));
  if (f.seed) spec.pt.master_seed = *f.seed;
  if (f.workers) spec.workers = *f.workers;
  if (f.rings) spec.pt.ring_count = *f.rings == 0 ? std::nullopt : std::optional<std::size_t>(*f.rings);
  if (f.exchanges) spec.pt.exchanges_per_iteration = *f.exchanges;
  if (f.iterations) spec.pt.iterations = *f.iterations;
  if (f.burn_in) spec.pt.burn_in = *f.burn_in;
  if (f.thin) spec.pt.thinning = *f.thin;
  if (f.algorithm) spec.algorithm = parse_algorithm(*f.algorithm);
  if (f.trace_format) spec.trace_format = parse_trace_format(*f.trace_format);
  if (f.samples) spec.samples = *f.samples;
  if (f.check_invariants) spec.check_invariants = true;
  spec.out_dir = resolve_output_dir(f.out, spec.out_dir);
  return spec;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"abcpt: likelihood-free inference with tempered ABC chains"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "run a sampler and write trace, report and tables");
  run->add_option("--config", rf.config, "YAML config file");
  run->add_option("--preset", rf.preset, "toy | toy-paper | tb");
  run->add_option("--seed", rf.seed, "master seed");
  run->add_option("--workers", rf.workers, "worker threads (results do not depend on it)");
  run->add_option("--rings", rf.rings, "number of rings, 0 for uniform pairs");
  run->add_option("--exchanges", rf.exchanges, "exchange proposals per iteration, 0 for independent chains");
  run->add_option("--iterations", rf.iterations, "iterations");
  run->add_option("--burn-in", rf.burn_in, "burn-in iterations");
  run->add_option("--thin", rf.thin, "thinning of the primary samples");
  run->add_option("--out", rf.out, "output directory (default $ABCPT_OUTPUT_DIR or ./abcpt-out)");
  run->add_option("--algorithm", rf.algorithm, "rejection | mcmc | pt");
  run->add_option("--trace-format", rf.trace_format, "binary | csv");
  run->add_option("--samples", rf.samples, "accepted samples for the rejection algorithm");
  run->add_flag("--check-invariants", rf.check_invariants, "fault if any chain leaves its tolerance");

  DiagnoseOptions dopt;
  std::optional<std::uint64_t> d_burn, d_thin;
  std::optional<double> d_lo, d_hi, d_bw;
  auto* diag = app.add_subcommand("diagnose", "tables and densities from a stored trace");
  diag->add_option("--trace", dopt.trace_path, "trace.bin written by run")->required();
  diag->add_option("--request", dopt.requests,
                   "acceptance | exchange-matrix[:per-iteration|:per-proposal] | acf | summary | density | trace-csv")
      ->required();
  diag->add_option("--chain", dopt.chain, "chain number, 1 is the chain of interest");
  diag->add_option("--burn-in", d_burn, "override the stored burn-in");
  diag->add_option("--thin", d_thin, "override the stored thinning");
  diag->add_option("--lags", dopt.lags, "ACF lags")->delimiter(',');
  diag->add_option("--thinnings", dopt.thinnings, "ACF thinnings")->delimiter(',');
  diag->add_option("--exchange-mode", dopt.exchange_mode, "per-iteration | per-proposal");
  diag->add_option("--transform", dopt.transform, "none | tb");
  diag->add_option("--coordinate", dopt.coordinate, "parameter coordinate for density and acf");
  diag->add_option("--grid-lo", d_lo, "density grid start");
  diag->add_option("--grid-hi", d_hi, "density grid end");
  diag->add_option("--grid-points", dopt.grid_points, "density grid points");
  diag->add_option("--bins", dopt.bins, "histogram bins");
  diag->add_option("--bandwidth", d_bw, "KDE bandwidth (default Silverman)");
  diag->add_option("--out", dopt.out_dir, "output directory (default: next to the trace)");

  ValidateOptions vopt;
  auto* val = app.add_subcommand("validate", "fast analytic-oracle checks");
  val->add_option("--seed", vopt.seed, "seed for the Monte Carlo checks");
  val->add_option("--inject-fault", vopt.inject_fault, "exchange-predicate: flip the exchange inequality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*run) {
      const auto spec = build_run_spec(rf);
      const auto result = cmd_run(spec);
      out << "seed " << spec.pt.master_seed << '\n';
      out << "config_hash " << result.report["config_hash"].get<std::string>() << '\n';
      out << "mode " << result.report["mode"].get<std::string>() << '\n';
      for (const auto& p : result.written) out << "wrote " << p << '\n';
      return kOk;
    }
    if (*diag) {
      dopt.burn_in = d_burn;
      dopt.thin = d_thin;
      dopt.grid_lo = d_lo;
      dopt.grid_hi = d_hi;
      dopt.bandwidth = d_bw;
      for (const auto& p : cmd_diagnose(dopt)) out << "wrote " << p << '\n';
      return kOk;
    }
    if (*val) {
      bool all = true;
      for (const auto& r : cmd_validate(vopt)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        all = all && r.passed;
      }
      return all ? kOk : kFailure;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RuntimeFailure& e) {
    err << "error [" << e.component() << "]: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace abcpt::cli

#endif  // ABCPT_CLI_APP_HPP
