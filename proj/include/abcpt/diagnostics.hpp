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

#ifndef ABCPT_DIAGNOSTICS_HPP
#define ABCPT_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abcpt/error.hpp"
#include "abcpt/trace.hpp"

namespace abcpt {

/// Sample autocorrelation at `lag`, normalized by the lag-0 autocovariance
/// (both with divisor n).
inline double autocorrelation(std::span<const double> series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag >= n) throw InvalidArgument("autocorrelation: lag must be smaller than the series length");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0.0)) throw InvalidArgument("autocorrelation: undefined for a constant series");
  double ck = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) ck += (series[t] - mean) * (series[t + lag] - mean);
  return ck / c0;
}

/// Every k-th element starting at index 0.
template <class T>
std::vector<T> thin(std::span<const T> series, std::size_t k) {
  if (k < 1) throw InvalidArgument("thin: k must be >= 1");
  std::vector<T> out;
  out.reserve((series.size() + k - 1) / k);
  for (std::size_t t = 0; t < series.size(); t += k) out.push_back(series[t]);
  return out;
}

inline std::vector<double> thin(const std::vector<double>& series, std::size_t k) {
  return thin(std::span<const double>(series), k);
}

struct AcceptanceTable {
  std::vector<double> local_rate;
  std::vector<std::uint64_t> local_accepted;
  std::vector<std::uint64_t> accepted_exchanges;  // accepted swaps involving the chain
  std::uint64_t iterations = 0;
  std::uint64_t total_accepted_exchanges = 0;

  double exchanges_per_iteration() const {
    return iterations == 0 ? 0.0 : static_cast<double>(total_accepted_exchanges) / static_cast<double>(iterations);
  }
};

inline AcceptanceTable acceptance_table(const Trace& trace) {
  if (trace.iterations() == 0) throw InvalidArgument("acceptance_table: empty trace");
  const std::size_t n = trace.n_chains();
  AcceptanceTable table;
  table.iterations = trace.iterations();
  table.local_accepted.assign(n, 0);
  table.accepted_exchanges.assign(n, 0);
  const auto flags = trace.raw_accepted();
  for (std::size_t k = 0; k < flags.size(); ++k) table.local_accepted[k % n] += flags[k];
  for (std::size_t c = 0; c < n; ++c)
    table.local_rate.push_back(static_cast<double>(table.local_accepted[c]) / static_cast<double>(trace.iterations()));
  for (const auto& e : trace.exchanges()) {
    if (!e.accepted) continue;
    ++table.accepted_exchanges[e.i];
    ++table.accepted_exchanges[e.j];
    ++table.total_accepted_exchanges;
  }
  return table;
}

enum class ExchangeRateMode { per_iteration, per_proposal };

inline ExchangeRateMode parse_exchange_rate_mode(std::string_view s) {
  if (s == "per-iteration") return ExchangeRateMode::per_iteration;
  if (s == "per-proposal") return ExchangeRateMode::per_proposal;
  throw InvalidArgument("unknown exchange matrix mode '" + std::string(s) + "'");
}

inline std::string_view to_string(ExchangeRateMode m) {
  return m == ExchangeRateMode::per_iteration ? "per-iteration" : "per-proposal";
}

/// Upper-triangular matrix of exchange rates with local acceptance rates on
/// the diagonal. Off-diagonal (i, j), i < j, holds accepted swaps divided by
/// iterations or by proposals of that pair.
struct ExchangeMatrix {
  std::size_t n = 0;
  ExchangeRateMode mode = ExchangeRateMode::per_iteration;
  std::vector<double> values;
  std::vector<std::uint64_t> accepted;
  std::vector<std::uint64_t> proposed;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double off_diagonal_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += values[i * n + j];
    return s;
  }
};

inline ExchangeMatrix exchange_matrix(const Trace& trace, ExchangeRateMode mode) {
  const auto table = acceptance_table(trace);
  const std::size_t n = trace.n_chains();
  ExchangeMatrix m{n, mode, std::vector<double>(n * n, 0.0), std::vector<std::uint64_t>(n * n, 0),
                   std::vector<std::uint64_t>(n * n, 0)};
  for (const auto& e : trace.exchanges()) {
    ++m.proposed[e.i * n + e.j];
    if (e.accepted) ++m.accepted[e.i * n + e.j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.values[i * n + i] = table.local_rate[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto a = static_cast<double>(m.accepted[i * n + j]);
      if (mode == ExchangeRateMode::per_iteration) {
        m.values[i * n + j] = a / static_cast<double>(trace.iterations());
      } else {
        const auto p = m.proposed[i * n + j];
        m.values[i * n + j] = p == 0 ? 0.0 : a / static_cast<double>(p);
      }
    }
  }
  return m;
}

/// Quantile with linear interpolation between order statistics
/// (position q * (n - 1) in the sorted sample).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct CoordinateSummary {
  double mean = 0.0;
  double median = 0.0;
  double ci_low = 0.0;   // 2.5% quantile
  double ci_high = 0.0;  // 97.5% quantile
};

struct PosteriorSummary {
  std::vector<CoordinateSummary> coordinates;
};

inline CoordinateSummary summarize_values(std::vector<double> values) {
  if (values.size() < 2) throw InvalidArgument("posterior_summary needs at least 2 samples");
  std::sort(values.begin(), values.end());
  CoordinateSummary s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  s.median = quantile_sorted(values, 0.5);
  s.ci_low = quantile_sorted(values, 0.025);
  s.ci_high = quantile_sorted(values, 0.975);
  return s;
}

using SampleTransform = std::function<std::vector<double>(std::span<const double>)>;

/// Mean, median and central 95% interval of every coordinate, optionally
/// after mapping each sample through `transform`.
inline PosteriorSummary posterior_summary(const Samples& samples, const SampleTransform& transform = {}) {
  if (samples.size() < 2) throw InvalidArgument("posterior_summary needs at least 2 samples");
  std::vector<std::vector<double>> columns;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto row = samples.row(k);
    const std::vector<double> mapped = transform ? transform(row) : std::vector<double>(row.begin(), row.end());
    if (columns.empty()) columns.resize(mapped.size());
    if (mapped.size() != columns.size()) throw InvalidArgument("transform changed output dimension");
    for (std::size_t c = 0; c < mapped.size(); ++c) columns[c].push_back(mapped[c]);
  }
  PosteriorSummary out;
  for (auto& col : columns) out.coordinates.push_back(summarize_values(std::move(col)));
  return out;
}

/// Fraction of values falling in [a, b].
inline double mass_fraction(std::span<const double> values, double a, double b) {
  if (values.empty()) return 0.0;
  std::size_t hits = 0;
  for (double v : values) hits += (v >= a && v <= b) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

/// Silverman's rule: 0.9 min(sd, IQR / 1.34) n^(-1/5), falling back to the
/// sd alone when the IQR vanishes.
inline double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidArgument("bandwidth needs at least 2 samples");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 201;
  std::size_t bins = 100;
  std::optional<double> bandwidth;
};

struct DensityExport {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  std::vector<double> bin_edges;  // bins + 1 edges
  std::vector<std::uint64_t> counts;
};

/// Gaussian KDE on an even grid plus fixed-width histogram counts over
/// [lo, hi]. Values outside the range are not counted in the histogram.
inline DensityExport density_export(std::span<const double> values, const GridSpec& spec) {
  if (values.size() < 2) throw InvalidArgument("density_export needs at least 2 samples");
  if (!(spec.lo < spec.hi) || spec.points < 2 || spec.bins < 1) throw InvalidArgument("invalid density grid");
  DensityExport out;
  out.bandwidth = spec.bandwidth ? *spec.bandwidth : silverman_bandwidth(values);
  if (!(out.bandwidth > 0.0) || !std::isfinite(out.bandwidth))
    throw InvalidArgument("degenerate KDE bandwidth; pass an explicit positive bandwidth");

  const double h = out.bandwidth;
  const double step = (spec.hi - spec.lo) / static_cast<double>(spec.points - 1);
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t g = 0; g < spec.points; ++g) {
    const double x = spec.lo + step * static_cast<double>(g);
    // Kernel contributions beyond 9 bandwidths are below 1e-17.
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - 9.0 * h);
    const auto last = std::upper_bound(sorted.begin(), sorted.end(), x + 9.0 * h);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out.grid.push_back(x);
    out.density.push_back(acc * norm);
  }

  const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
  for (std::size_t b = 0; b <= spec.bins; ++b) out.bin_edges.push_back(spec.lo + width * static_cast<double>(b));
  out.counts.assign(spec.bins, 0);
  for (double v : values) {
    if (v < spec.lo || v > spec.hi) continue;
    auto b = static_cast<std::size_t>((v - spec.lo) / width);
    ++out.counts[std::min(b, spec.bins - 1)];
  }
  return out;
}

}  // namespace abcpt

#endif  // ABCPT_DIAGNOSTICS_HPP
