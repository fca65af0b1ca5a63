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


#include "cqc/landscape.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cqc/errors.h"
#include "cqc/noise_thresholds.h"
#include "json.hpp"

namespace cqc {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

ErrorPolynomials table_polys() {
  const std::int64_t primal[] = {0, 1, 0, 0, 7, 0, 106, 0, 1520, 0, 24220, 0, 409208, 0, 7165474};
  const std::int64_t dual[] = {0, 0, 0, 4, 8, 52, 200, 1060, 4084, 23128, 90636, 507936, 2039320, 11220284, 45854572};
  ErrorPolynomials p;
  p.truncation_degree = 14;
  for (int d = 1; d <= 14; ++d) {
    if (primal[d]) p.z_coeffs[d] = primal[d];
    if (dual[d]) p.x_coeffs[d] = dual[d];
  }
  return p;
}

TEST(Curves, EndpointValues) {
  EXPECT_NEAR(stabilizer_curve(0), (1 - 1 / std::numbers::sqrt2) / 2, 1e-12);
  EXPECT_NEAR(stabilizer_curve(0), 0.146447, 1e-6);
  EXPECT_NEAR(separable_curve(0), std::numbers::sqrt2 - 1, 1e-12);
  EXPECT_NEAR(separable_curve(kQuarterPi), 0, 1e-12);
  // theta = 0 bonds are product states, but the inputs still need the octahedron.
  EXPECT_NEAR(stabilizer_curve(kQuarterPi), stabilizer_curve(0), 1e-12);
  EXPECT_THROW(stabilizer_curve(-0.1), ConfigError);
}

TEST(Curves, StabilizerCurveRisesSharplyNearZero) {
  double prev = stabilizer_curve(0);
  for (int i = 1; i <= 50; ++i) {
    double q = stabilizer_curve(0.2 * i / 50);
    EXPECT_GT(q, prev);
    prev = q;
  }
  for (int i = 1; i <= 50; ++i) EXPECT_LT(separable_curve(kQuarterPi * i / 50), separable_curve(kQuarterPi * (i - 1) / 50));
}

TEST(Classify, ZeroAngleColumn) {
  LandscapeOptions opts(solve_depth4_boundary(table_polys()).solved_value);
  EXPECT_NEAR(opts.q_limit, 0.134, 1e-3);
  EXPECT_EQ(classify(0, 0.146448, opts), LandscapeClass::kClassicalStabilizer);
  EXPECT_EQ(classify(0, 0.3, opts), LandscapeClass::kClassicalStabilizer);
  EXPECT_EQ(classify(0, 0.146446, opts), LandscapeClass::kUnresolved);
  EXPECT_EQ(classify(0, 0.14, opts), LandscapeClass::kUnresolved);
  EXPECT_EQ(classify(0, 0.134, opts), LandscapeClass::kIntractable);
  EXPECT_EQ(classify(0, 0.05, opts), LandscapeClass::kIntractable);
}

TEST(Classify, IntractableFormula) {
  LandscapeOptions opts;
  EXPECT_NEAR(opts.q_limit, (1 - 1 / std::numbers::sqrt2) / 2, 1e-15);
  double lhs = std::pow(1 - 2 * std::pow(std::sin(0.1), 2), 4) * (1 - 2 * 0.05);
  bool expect = lhs >= 0.6 && 0.05 < opts.q_limit;
  EXPECT_TRUE(expect);
  EXPECT_EQ(classify(0.1, 0.05, opts) == LandscapeClass::kIntractable, expect);
  // Past the column where cos^4(2 phi) < 0.6 nothing is intractable.
  EXPECT_LT(intractable_curve(0.3), 0);
  EXPECT_NE(classify(0.3, 0.0, opts), LandscapeClass::kIntractable);
  EXPECT_NEAR(intractable_curve(0.1), std::min(opts.q_limit, (1 - 0.6 / std::pow(std::cos(0.2), 4)) / 2), 1e-15);
}

TEST(Classify, RegionsAreConsistentWithCurves) {
  LandscapeOptions opts;
  for (int i = 0; i <= 40; ++i) {
    double phi = kQuarterPi * i / 40;
    for (int j = 0; j <= 40; ++j) {
      double q = 0.5 * j / 40;
      auto c = classify(phi, q, opts);
      bool classical = q >= std::min(stabilizer_curve(phi), separable_curve(phi)) + 1e-12;
      if (classical) EXPECT_TRUE(c == LandscapeClass::kClassicalStabilizer || c == LandscapeClass::kClassicalSeparable);
      if (c == LandscapeClass::kIntractable) {
        EXPECT_LE(q, intractable_curve(phi, opts) + 1e-15);
        // Intractable points never sit inside a classical region.
        EXPECT_LT(q, stabilizer_curve(phi));
        EXPECT_LT(q, separable_curve(phi));
      }
    }
  }
}

// The exponent-4 global bound puts the crossing of the two classical curves near 0.0326.
// Reference value: 0.0144.
TEST(Crossing, MatchesReferenceValue) {
  auto c = classical_crossing();
  EXPECT_NEAR(stabilizer_curve(c.phi), separable_curve(c.phi), 1e-10);
  EXPECT_NEAR(c.phi, 0.0144, 0.002);
}

TEST(Landscape, GridAndEmission) {
  auto phi = uniform_grid(0, kQuarterPi, 5);
  auto q = uniform_grid(0, 0.5, 4);
  auto l = compute_landscape(phi, q);
  EXPECT_EQ(l.classes.size(), 20u);
  EXPECT_EQ(l.stabilizer.size(), 5u);
  EXPECT_EQ(l.at(0, 3), LandscapeClass::kClassicalStabilizer);
  auto csv = landscape_csv(l);
  EXPECT_EQ(csv.rfind("phi,q,class\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  auto j = nlohmann::json::parse(landscape_json(l));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["curves"]["separable"]["q"].size(), 5u);
  EXPECT_EQ(landscape_csv(compute_landscape(phi, q)), csv);

  std::vector<double> bad = {0.1, 1.0};
  EXPECT_THROW(compute_landscape(bad, q), ConfigError);
  std::vector<double> bad_q = {0.6};
  EXPECT_THROW(compute_landscape(phi, bad_q), ConfigError);
}

TEST(Landscape, ConcurrenceGrid) {
  auto check = check_concurrence_boundary(50, 50);
  EXPECT_EQ(check.mismatches, 0u);
  EXPECT_GT(check.points, 2400u);
  EXPECT_LT(check.max_boundary_deviation, 1e-6);
}

}  // namespace
}  // namespace cqc
