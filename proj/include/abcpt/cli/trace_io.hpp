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

#ifndef ABCPT_CLI_TRACE_IO_HPP
#define ABCPT_CLI_TRACE_IO_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "abcpt/error.hpp"
#include "abcpt/trace.hpp"

namespace abcpt::cli {

static_assert(std::endian::native == std::endian::little, "trace files are written little-endian");

inline constexpr std::array<char, 8> kTraceMagic{'A', 'B', 'C', 'P', 'T', 'T', 'R', 'C'};
inline constexpr std::uint32_t kTraceVersion = 1;

/// A trace plus the metadata needed to analyse it on its own.
struct StoredTrace {
  std::string model;  // "toy" or "tb"
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  Trace trace;
};

namespace detail {

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw InvalidArgument("trace file is truncated");
  return v;
}

}  // namespace detail

/// Layout: magic, version u32, model name (u32 length + bytes), n_chains u32,
/// dimension u32, iterations u64, burn_in u64, thinning u64, thetas f64[],
/// local flags u8[], exchange count u64, exchanges (u32 iteration, u16 i,
/// u16 j, u8 accepted), skipped u64.
inline void write_trace(std::ostream& out, const StoredTrace& st) {
  const Trace& t = st.trace;
  out.write(kTraceMagic.data(), kTraceMagic.size());
  detail::put(out, kTraceVersion);
  detail::put(out, static_cast<std::uint32_t>(st.model.size()));
  out.write(st.model.data(), static_cast<std::streamsize>(st.model.size()));
  detail::put(out, static_cast<std::uint32_t>(t.n_chains()));
  detail::put(out, static_cast<std::uint32_t>(t.dimension()));
  detail::put(out, t.iterations());
  detail::put(out, st.burn_in);
  detail::put(out, st.thinning);
  const auto thetas = t.raw_thetas();
  out.write(reinterpret_cast<const char*>(thetas.data()), static_cast<std::streamsize>(thetas.size_bytes()));
  const auto flags = t.raw_accepted();
  out.write(reinterpret_cast<const char*>(flags.data()), static_cast<std::streamsize>(flags.size_bytes()));
  detail::put(out, static_cast<std::uint64_t>(t.exchanges().size()));
  for (const auto& e : t.exchanges()) {
    detail::put(out, e.iteration);
    detail::put(out, e.i);
    detail::put(out, e.j);
    detail::put(out, static_cast<std::uint8_t>(e.accepted ? 1 : 0));
  }
  detail::put(out, t.skipped_exchanges());
  if (!out) throw RuntimeFailure("trace_io", "failed writing trace");
}

inline StoredTrace read_trace(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kTraceMagic)
    throw InvalidArgument("not an abcpt trace file (bad magic)");
  const auto version = detail::get<std::uint32_t>(in);
  if (version != kTraceVersion) throw InvalidArgument("unsupported trace version " + std::to_string(version));
  StoredTrace st;
  const auto name_len = detail::get<std::uint32_t>(in);
  if (name_len > 64) throw InvalidArgument("trace file has a corrupt model name");
  st.model.resize(name_len);
  if (!in.read(st.model.data(), name_len)) throw InvalidArgument("trace file is truncated");
  const auto n = detail::get<std::uint32_t>(in);
  const auto dim = detail::get<std::uint32_t>(in);
  const auto iterations = detail::get<std::uint64_t>(in);
  st.burn_in = detail::get<std::uint64_t>(in);
  st.thinning = detail::get<std::uint64_t>(in);
  if (n == 0 || dim == 0 || iterations > (1ULL << 40) / (static_cast<std::uint64_t>(n) * dim))
    throw InvalidArgument("trace file header is corrupt");
  std::vector<double> thetas(iterations * n * dim);
  if (!in.read(reinterpret_cast<char*>(thetas.data()), static_cast<std::streamsize>(thetas.size() * sizeof(double))))
    throw InvalidArgument("trace file is truncated");
  std::vector<std::uint8_t> flags(iterations * n);
  if (!in.read(reinterpret_cast<char*>(flags.data()), static_cast<std::streamsize>(flags.size())))
    throw InvalidArgument("trace file is truncated");
  const auto n_events = detail::get<std::uint64_t>(in);
  std::vector<ExchangeEvent> events;
  events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n_events, 1ULL << 26)));
  for (std::uint64_t k = 0; k < n_events; ++k) {
    ExchangeEvent e;
    e.iteration = detail::get<std::uint32_t>(in);
    e.i = detail::get<std::uint16_t>(in);
    e.j = detail::get<std::uint16_t>(in);
    e.accepted = detail::get<std::uint8_t>(in) != 0;
    events.push_back(e);
  }
  const auto skipped = detail::get<std::uint64_t>(in);
  st.trace = Trace::from_parts(n, dim, iterations, std::move(thetas), std::move(flags), std::move(events), skipped);
  return st;
}

inline void write_trace_file(const std::string& path, const StoredTrace& st) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("trace_io", "cannot open '" + path + "' for writing");
  write_trace(out, st);
}

inline StoredTrace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open trace file '" + path + "'");
  return read_trace(in);
}

/// Shortest decimal text that reads back to the same double, independent of
/// the global locale.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  for (int digits = 1; digits < 17; ++digits) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

/// One row per (iteration, chain): iteration,chain,theta_1..theta_d,accepted.
/// Chains are numbered from 1.
inline void write_trace_csv(std::ostream& out, const Trace& t) {
  out << "iteration,chain";
  for (std::size_t c = 0; c < t.dimension(); ++c) out << ",theta_" << c + 1;
  out << ",accepted\n";
  for (std::uint64_t it = 0; it < t.iterations(); ++it)
    for (std::size_t k = 0; k < t.n_chains(); ++k) {
      out << it << ',' << k + 1;
      for (std::size_t c = 0; c < t.dimension(); ++c) out << ',' << format_double(t.theta(it, k, c));
      out << ',' << (t.local_accepted(it, k) ? 1 : 0) << '\n';
    }
}

inline void write_exchanges_csv(std::ostream& out, const Trace& t) {
  out << "iteration,i,j,accepted\n";
  for (const auto& e : t.exchanges())
    out << e.iteration << ',' << e.i + 1 << ',' << e.j + 1 << ',' << (e.accepted ? 1 : 0) << '\n';
}

}  // namespace abcpt::cli

#endif  // ABCPT_CLI_TRACE_IO_HPP
