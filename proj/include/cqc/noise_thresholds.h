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

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqc/saw_census.h"

namespace cqc {

using Complex = std::complex<double>;

// Single-qubit Pauli channel rho -> sum_A p_A A rho A.
struct PauliChannel {
  double p_i = 1;
  double p_x = 0;
  double p_y = 0;
  double p_z = 0;

  static PauliChannel identity() { return {}; }
  static PauliChannel dephasing(double q);
  // rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
  static PauliChannel depolarizing(double p);

  // Probability that an X-basis outcome is flipped.
  double x_flip() const { return p_y + p_z; }
  void validate() const;
};

// Kraus operators W_i = sum_l c_il sigma_l over (I, X, Y, Z).
struct CptpSpec {
  std::vector<std::array<Complex, 4>> kraus_coeffs;

  static CptpSpec identity();
  static CptpSpec dephasing(double p);
  static CptpSpec depolarizing(double p);
  static CptpSpec amplitude_damping(double gamma);
  // Random channel with `rank` Kraus operators, from a Haar-ish isometry.
  static CptpSpec random(std::mt19937_64& rng, int rank = 4);

  // Throws ConfigError unless sum_i W_i^dag W_i = I within 1e-10.
  void validate() const;
};

// Pauli twirl of a channel: p_l = sum_i |c_il|^2.
PauliChannel pauli_twirl(const CptpSpec& chan);

// Dephasing rate of the twirled channel, sum_i |c_i2|^2 + |c_i3|^2.
double twirl_to_dephasing(const CptpSpec& chan);

// 1 - p_I.
double pauli_channel_distance(const PauliChannel& chan);

struct GeometricBound {
  double value = 0;
  double base = 0;
  bool divergent = false;  // base >= 1: the sum does not shrink with L_d
};

// Upper limit of the length sum. kUnbounded sums to infinity (value is +inf
// when divergent).
inline constexpr std::int64_t kUnbounded = -1;

// N (6/5) sum_{L=L_d}^{upper} base^L with base = 5 2^(2k^2-2k+1) (2 eps/(1-eps))^(1/(2k-1)).
// upper defaults to N.
GeometricBound postselected_failure_bound(double eps, int k, std::int64_t l_d, std::int64_t n,
                                          std::optional<std::int64_t> upper = std::nullopt);

// Same sum with base 5q/(1-q).
GeometricBound dephasing_failure_bound(double q, std::int64_t l_d, std::int64_t n,
                                       std::optional<std::int64_t> upper = std::nullopt);

enum class SolveMethod : std::uint8_t { kClosedForm, kRootFind };

struct ThresholdReport {
  std::string name;
  double solved_value = 0;
  std::optional<double> published_value;
  SolveMethod method = SolveMethod::kClosedForm;
  double bracket_lo = 0;
  double bracket_hi = 0;
  double tolerance = 0;
  double residual = 0;
  std::string note;
};

inline constexpr double kRootTolerance = 1e-10;

// eps* = x/(2+x), x = 1/(5 2^(2k^2-2k+1))^(2k-1).
ThresholdReport solve_topological_threshold(int k);
// q* = 1/6, where 5q/(1-q) = 1.
ThresholdReport dephasing_topological_threshold();

// (1 - sqrt(2)/2)/2: the octahedron face through the T-type magic axis.
double distillation_threshold();

// Root of qx(q)/2 + qz(q) = distillation_threshold(), bisected on [0, threshold].
ThresholdReport solve_depth4_boundary(const ErrorPolynomials& polys);

struct DepolModel {
  double p1 = 0;
  double p2 = 0;

  void validate() const;
};

struct DepolRates {
  double q_ind = 0;
  double q_cor = 0;
  double p_s = 0;
  double q_eff = 0;
};

DepolRates depolarizing_rates(const DepolModel& model);

// Expected +-1 unit-cell parity.
double expected_parity(double q);
double expected_parity(const DepolModel& model);

enum class NoiseClass : std::uint8_t { kDephasing1Local, kDepolarizing };

std::string_view to_string(NoiseClass c);
NoiseClass noise_class_from_string(std::string_view s);

double parity_threshold(NoiseClass c);

struct Verdict {
  bool quantum_side = false;
  double deviation = 0;  // Hoeffding term sqrt(2 ln(1/delta) / n)
  double threshold = 0;
  double margin = 0;     // observed - deviation - threshold
};

Verdict single_shot_verdict(double observed_mean, std::int64_t n_cells, double confidence_delta, NoiseClass noise);

enum class DepolReconstruction : std::uint8_t {
  // p_s + [qz(q_eff) - z_1 q_eff] + qx(q_eff)/2 <= distillation threshold
  kPsPlusHigherOrders,
  // p_s <= distillation threshold
  kPsLeadingOnly,
};

std::string_view to_string(DepolReconstruction r);
DepolReconstruction depol_reconstruction_from_string(std::string_view s);

struct DepolThresholds {
  ThresholdReport quantum_side;    // root of the reconstructed condition in p = p1 = p2
  ThresholdReport classical_side;  // root of p_s(p) = distillation threshold
};

DepolThresholds solve_depolarizing_threshold(DepolReconstruction reconstruction, const ErrorPolynomials& polys);

// (s^2 + 2^(2k-1) (2^n - 2s)^2) / ((1 + 2^(2k)) (s^2 + (2^n - s)^2)), evaluated exactly.
double postbqp_probability(int n, std::int64_t s, int k);

struct PostbqpCheck {
  int n = 0;
  std::int64_t cases = 0;
  std::int64_t violations = 0;
  double min_probability = 1;
  double bound = 0;  // 2^(-6n-4)
};

// Exhaustive exact comparison of postbqp_probability against 2^(-6n-4) over
// every 0 <= s <= 2^n, -n <= k <= n.
PostbqpCheck check_postbqp_bound(int n);

std::string reports_to_json(std::span<const ThresholdReport> reports);

}  // namespace cqc
