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


// Complexity landscape of depth-four commuting circuits over (phi, q), phi = |pi/4 - theta|.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqc {

enum class LandscapeClass : std::uint8_t { kClassicalSeparable, kClassicalStabilizer, kIntractable, kUnresolved };

std::string_view to_string(LandscapeClass c);

struct LandscapeOptions {
  // Intractable points also need q below this limit. Defaults to the octahedron
  // bound; pass the depth-four root to leave the gap up to it unresolved.
  double q_limit;
  double intractable_constant = 0.6;

  LandscapeOptions();
  explicit LandscapeOptions(double limit) : q_limit(limit) {}
};

// Smallest q at which every bond and input is a stabilizer mixture:
// 1 - 2q = h(phi)^4 / sqrt(2), h(x) = cos 2x + sin 2x - sqrt(2 cos 2x sin 2x).
double stabilizer_curve(double phi);
// Smallest q at which the transverse bonds are separable: 1 - 2q = a(pi/4 - phi)^2,
// a(theta) = -sin 2theta + sqrt(sin^2 2theta + 1).
double separable_curve(double phi);
// Largest q in the intractable region at phi, or a negative value when the column has none.
double intractable_curve(double phi, const LandscapeOptions& options = {});

LandscapeClass classify(double phi, double q, const LandscapeOptions& options = {});

struct CurveCrossing {
  double phi = 0;
  double q = 0;
};

// First phi > 0 where the two classical curves meet (scan, then bisection).
CurveCrossing classical_crossing();

struct CurvePoint {
  double phi = 0;
  double q = 0;
};

struct Landscape {
  LandscapeOptions options;
  std::vector<double> phi_grid;
  std::vector<double> q_grid;
  std::vector<LandscapeClass> classes;  // phi-major: classes[i * q_grid.size() + j]
  std::vector<CurvePoint> stabilizer;
  std::vector<CurvePoint> separable;
  std::vector<CurvePoint> intractable;  // only columns that have an intractable part
  CurveCrossing crossing;

  LandscapeClass at(std::size_t phi_index, std::size_t q_index) const;
};

// Throws ConfigError when a grid value lies outside [0, pi/4] x [0, 1/2].
Landscape compute_landscape(std::span<const double> phi_grid, std::span<const double> q_grid,
                            const LandscapeOptions& options = {});

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

// phi,q,class rows with a header.
std::string landscape_csv(const Landscape& l);
std::string landscape_json(const Landscape& l);

struct ConcurrenceGridCheck {
  std::size_t points = 0;
  std::size_t mismatches = 0;       // grid points where concurrence and the closed form disagree
  double max_boundary_deviation = 0;  // |bisected boundary - closed form| in q, over the theta grid
};

// theta_points x q_points grid over [0, pi/4] x [0, 1/2]; points within `band` of the boundary are skipped.
ConcurrenceGridCheck check_concurrence_boundary(std::size_t theta_points, std::size_t q_points, double band = 1e-8);

}  // namespace cqc
