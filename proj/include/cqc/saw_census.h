// Copyright 2026 The cqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqc/injection_site.h"

namespace cqc {

enum class ChainKind : std::uint8_t { kPrimal, kDual };

std::string_view to_string(ChainKind k);
ChainKind chain_kind_from_string(std::string_view s);

// Exact chain counts per length. counts has max_len + 1 entries; counts[0] is
// always zero.
//
// Primal chains are closed self-avoiding loops of edge qubits, avoiding the
// defect interior, whose crossing number with the half-plane y = axis, x >
// axis is odd (odd linking with the tube). By convention the single length-1
// primal chain is the singular face qubit itself. Dual chains are
// self-avoiding paths of cells that leave an upper defect cell, pass through
// non-defect cells only, and stop on entering a lower defect cell; every face
// they cross is a vacuum qubit.
struct WalkCensus {
  ChainKind kind = ChainKind::kPrimal;
  std::vector<std::uint64_t> counts;
  int max_len = 0;
  std::string geometry_version;

  std::uint64_t count(int length) const;
};

struct ErrorPolynomials {
  std::map<int, std::int64_t> x_coeffs;
  std::map<int, std::int64_t> z_coeffs;
  int truncation_degree = 0;
};

struct EnumerationOptions {
  int hard_cap = 16;
  bool allow_above_cap = false;
  unsigned workers = 0;  // 0: hardware concurrency
  // Called with (finished prefixes, total prefixes); may come from any worker.
  std::function<void(std::size_t, std::size_t)> progress;
};

WalkCensus enumerate_chains(const InjectionSite& site, ChainKind kind, int max_len,
                            const EnumerationOptions& options = {});

// Plain recursive DFS straight over the lattice qubits, with no distance
// pruning and an angle-sum winding test. Slow; used as an independent oracle.
WalkCensus enumerate_chains_reference(const InjectionSite& site, ChainKind kind, int max_len);

// Number of self-avoiding walks of exactly `length` steps from the origin of
// the simple cubic lattice, by brute force.
std::uint64_t count_cubic_saws(int length);

ErrorPolynomials census_to_polynomials(const WalkCensus& primal, const WalkCensus& dual, int truncation);

struct LogicalRates {
  double qx = 0;
  double qz = 0;
};

LogicalRates logical_error_rates(const ErrorPolynomials& polys, double q);

// N * (6/5) * 5^L; +inf once it overflows.
double saw_upper_bound(double n, int length);

struct TailBound {
  double value = 0;
  bool diverges = false;
};

// Upper bound on sum_{L >= from_len} count(L) q^L. Exact counts are used up to
// max_len; beyond it the last nonzero count c_m at length m is continued by the
// five-way branching bound c_m 5^(L-m) (the per-step growth factor of the
// (6/5)5^L self-avoiding walk bound). Diverges when 5q >= 1.
TailBound truncation_tail(const WalkCensus& census, double q, int from_len);

std::string census_to_csv(std::span<const WalkCensus> censuses);
std::vector<WalkCensus> census_from_csv(std::string_view text);
std::string census_to_json(std::span<const WalkCensus> censuses);
std::vector<WalkCensus> census_from_json(std::string_view text);

}  // namespace cqc
