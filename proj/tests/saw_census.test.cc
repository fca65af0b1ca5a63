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


#include "cqc/saw_census.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cqc/errors.h"

namespace cqc {
namespace {

const std::vector<std::uint64_t> kPrimal = {0, 1, 0, 0, 7, 0, 106, 0, 1520, 0, 24220, 0, 409208, 0, 7165474};
const std::vector<std::uint64_t> kDual = {0,     0,      0,       4,        8,        52,       200,     1060,
                                          4084,  23128,  90636,   507936,   2039320,  11220284, 45854572};

InjectionSite site_for(int max_len) { return injection_site(build_lattice(census_lattice_dims(max_len), Boundary::kOpen)); }

WalkCensus table_census(ChainKind kind, int max_len) {
  const auto& src = kind == ChainKind::kPrimal ? kPrimal : kDual;
  WalkCensus c{kind, std::vector<std::uint64_t>(src.begin(), src.begin() + max_len + 1), max_len,
               kInjectionGeometryVersion};
  return c;
}

TEST(SawCensus, ShortLengthsMatchTable) {
  auto site = site_for(8);
  auto primal = enumerate_chains(site, ChainKind::kPrimal, 8);
  auto dual = enumerate_chains(site, ChainKind::kDual, 8);
  for (int l = 1; l <= 8; ++l) {
    EXPECT_EQ(primal.count(l), kPrimal[l]) << "primal L=" << l;
    EXPECT_EQ(dual.count(l), kDual[l]) << "dual L=" << l;
  }
  EXPECT_EQ(primal.geometry_version, kInjectionGeometryVersion);
}

TEST(SawCensus, ZeroPattern) {
  auto site = site_for(11);
  auto primal = enumerate_chains(site, ChainKind::kPrimal, 11);
  auto dual = enumerate_chains(site, ChainKind::kDual, 11);
  for (int l : {2, 3, 5, 7, 9, 11}) EXPECT_EQ(primal.count(l), 0u) << l;
  EXPECT_EQ(dual.count(1), 0u);
  EXPECT_EQ(dual.count(2), 0u);
  EXPECT_EQ(primal.count(1), 1u);
  EXPECT_EQ(dual.count(3), 4u);
}

TEST(SawCensus, ReferenceEnumeratorAgrees) {
  const int max_len = 8;
  auto site = site_for(max_len);
  for (ChainKind kind : {ChainKind::kPrimal, ChainKind::kDual}) {
    auto fast = enumerate_chains(site, kind, max_len);
    auto slow = enumerate_chains_reference(site, kind, max_len);
    EXPECT_EQ(fast.counts, slow.counts) << to_string(kind);
  }
}

TEST(SawCensus, IndependentOfWorkerCount) {
  auto site = site_for(10);
  for (ChainKind kind : {ChainKind::kPrimal, ChainKind::kDual}) {
    EnumerationOptions one;
    one.workers = 1;
    EnumerationOptions many;
    many.workers = 7;
    EXPECT_EQ(enumerate_chains(site, kind, 10, one).counts, enumerate_chains(site, kind, 10, many).counts);
  }
}

TEST(SawCensus, LatticeSizeStability) {
  auto small = site_for(8);
  Dims d = census_lattice_dims(8);
  auto big = injection_site(build_lattice({d.x + 4, d.y + 2, d.z + 6}, Boundary::kOpen));
  for (ChainKind kind : {ChainKind::kPrimal, ChainKind::kDual}) {
    EXPECT_EQ(enumerate_chains(small, kind, 8).counts, enumerate_chains(big, kind, 8).counts);
  }
}

TEST(SawCensus, ProgressReported) {
  auto site = site_for(6);
  std::size_t last = 0, total = 0;
  EnumerationOptions opts;
  opts.workers = 2;
  opts.progress = [&](std::size_t done, std::size_t all) {
    last = std::max(last, done);
    total = all;
  };
  enumerate_chains(site, ChainKind::kDual, 6, opts);
  EXPECT_GT(total, 0u);
  EXPECT_EQ(last, total);
}

TEST(SawCensus, Guards) {
  auto site = site_for(6);
  EXPECT_THROW(enumerate_chains(site, ChainKind::kDual, 17), ResourceGuardError);
  EXPECT_THROW(enumerate_chains(site, ChainKind::kDual, 0), ConfigError);
  auto tiny = injection_site(build_lattice({8, 8, 8}, Boundary::kOpen));
  EXPECT_THROW(enumerate_chains(tiny, ChainKind::kPrimal, 10), ConfigError);
}

TEST(SawCensus, CubicSawOracleUnderBound) {
  const std::vector<std::uint64_t> known = {1, 6, 30, 150, 726, 3534, 16926, 81390, 387966};
  for (int l = 1; l < static_cast<int>(known.size()); ++l) {
    auto n = count_cubic_saws(l);
    EXPECT_EQ(n, known[l]);
    EXPECT_LE(static_cast<double>(n), saw_upper_bound(1, l));
  }
  EXPECT_LE(static_cast<double>(count_cubic_saws(10)), saw_upper_bound(1, 10));
}

TEST(SawCensus, UpperBoundValues) {
  EXPECT_DOUBLE_EQ(saw_upper_bound(1, 1), 6.0);
  EXPECT_DOUBLE_EQ(saw_upper_bound(1, 3), 150.0);
  EXPECT_DOUBLE_EQ(saw_upper_bound(4, 2), 120.0);
  EXPECT_TRUE(std::isinf(saw_upper_bound(1, 1000)));
}

TEST(Polynomials, LowOrderCoefficients) {
  auto p = census_to_polynomials(table_census(ChainKind::kPrimal, 14), table_census(ChainKind::kDual, 14), 6);
  EXPECT_EQ(p.x_coeffs, (std::map<int, std::int64_t>{{3, 4}, {4, 8}, {5, 52}, {6, 200}}));
  EXPECT_EQ(p.z_coeffs, (std::map<int, std::int64_t>{{1, 1}, {4, 7}, {6, 106}}));
  auto p4 = census_to_polynomials(table_census(ChainKind::kPrimal, 14), table_census(ChainKind::kDual, 14), 4);
  EXPECT_EQ(p4.x_coeffs, (std::map<int, std::int64_t>{{3, 4}, {4, 8}}));
  EXPECT_EQ(p4.z_coeffs, (std::map<int, std::int64_t>{{1, 1}, {4, 7}}));
}

TEST(Polynomials, EmptyCensusesGiveZero) {
  WalkCensus primal{ChainKind::kPrimal, {0, 0, 0}, 2, "g"};
  WalkCensus dual{ChainKind::kDual, {0, 0, 0}, 2, "g"};
  auto p = census_to_polynomials(primal, dual, 2);
  EXPECT_TRUE(p.x_coeffs.empty());
  EXPECT_TRUE(p.z_coeffs.empty());
  auto r = logical_error_rates(p, 0.3);
  EXPECT_EQ(r.qx, 0.0);
  EXPECT_EQ(r.qz, 0.0);
}

TEST(Polynomials, RejectsMismatch) {
  auto primal = table_census(ChainKind::kPrimal, 6);
  auto dual = table_census(ChainKind::kDual, 6);
  dual.geometry_version = "other";
  EXPECT_THROW(census_to_polynomials(primal, dual, 6), ConfigError);
  EXPECT_THROW(census_to_polynomials(primal, table_census(ChainKind::kDual, 6), 7), ConfigError);
  EXPECT_THROW(census_to_polynomials(table_census(ChainKind::kDual, 6), primal, 6), ConfigError);
}

TEST(Polynomials, RateEvaluation) {
  auto p = census_to_polynomials(table_census(ChainKind::kPrimal, 6), table_census(ChainKind::kDual, 6), 6);
  auto zero = logical_error_rates(p, 0.0);
  EXPECT_EQ(zero.qx, 0.0);
  EXPECT_EQ(zero.qz, 0.0);
  auto r = logical_error_rates(p, 0.1);
  EXPECT_NEAR(r.qx, 0.00552, 1e-15);
  EXPECT_NEAR(r.qz, 0.100806, 1e-15);
  auto s = logical_error_rates(p, 0.134);
  EXPECT_NEAR(s.qx / 2 + s.qz, 0.1447, 5e-4);
  EXPECT_THROW(logical_error_rates(p, 0.6), ConfigError);
  EXPECT_THROW(logical_error_rates(p, -0.1), ConfigError);
}

TEST(TruncationTail, Values) {
  auto dual = table_census(ChainKind::kDual, 14);
  EXPECT_EQ(truncation_tail(dual, 0.0, 15).value, 0.0);
  auto t = truncation_tail(dual, 0.134, 15);
  EXPECT_FALSE(t.diverges);
  EXPECT_GT(t.value, 0.0);
  EXPECT_LT(t.value, 1e-4);
  // Tail from inside the census adds the exact terms.
  auto u = truncation_tail(dual, 0.1, 14);
  EXPECT_NEAR(u.value - truncation_tail(dual, 0.1, 15).value, 45854572 * std::pow(0.1, 14), 1e-18);
  EXPECT_TRUE(truncation_tail(dual, 0.25, 15).diverges);
  EXPECT_THROW(truncation_tail(dual, 0.1, 16), ConfigError);
}

TEST(CensusIo, CsvAndJsonRoundTrip) {
  std::vector<WalkCensus> cs = {table_census(ChainKind::kPrimal, 12), table_census(ChainKind::kDual, 12)};
  auto csv = census_to_csv(cs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,length,count,geometry_version");
  for (const auto& back : {census_from_csv(csv), census_from_json(census_to_json(cs))}) {
    ASSERT_EQ(back.size(), 2u);
    for (int i = 0; i < 2; ++i) {
      EXPECT_EQ(back[i].kind, cs[i].kind);
      EXPECT_EQ(back[i].counts, cs[i].counts);
      EXPECT_EQ(back[i].max_len, 12);
      EXPECT_EQ(back[i].geometry_version, kInjectionGeometryVersion);
    }
  }
}

}  // namespace
}  // namespace cqc
