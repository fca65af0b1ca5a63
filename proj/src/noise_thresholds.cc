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


#include "cqc/noise_thresholds.h"

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "cqc/errors.h"
#include "json.hpp"

namespace cqc {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

std::array<Eigen::Matrix2cd, 4> paulis() {
  const Complex i(0, 1);
  std::array<Eigen::Matrix2cd, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -i, i, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

double poly(const std::map<int, std::int64_t>& coeffs, double q, int skip_degree = -1) {
  double v = 0;
  for (auto [d, c] : coeffs) {
    if (d != skip_degree) v += static_cast<double>(c) * std::pow(q, d);
  }
  return v;
}

template <class F>
ThresholdReport bisect(std::string name, F f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) hi = lo;
  if (fhi == 0) lo = hi;
  if (flo * fhi > 0) throw std::runtime_error(name + ": no sign change in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  ThresholdReport r;
  r.name = std::move(name);
  r.method = SolveMethod::kRootFind;
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.tolerance = kRootTolerance;
  if (lo == hi) {
    r.solved_value = lo;
  } else {
    auto [a, b] = boost::math::tools::bisect(f, lo, hi, [](double x, double y) { return std::abs(y - x) < 1e-13; });
    r.solved_value = (a + b) / 2;
  }
  r.residual = std::abs(f(r.solved_value));
  return r;
}

GeometricBound geometric(double base, std::int64_t l_d, std::int64_t n, std::optional<std::int64_t> upper) {
  std::int64_t hi = upper.value_or(n);
  GeometricBound g;
  g.base = base;
  g.divergent = base >= 1.0;
  if (base == 0.0) return g;
  double pre = static_cast<double>(n) * 1.2;
  if (hi == kUnbounded) {
    g.value = g.divergent ? std::numeric_limits<double>::infinity()
                          : pre * std::pow(base, static_cast<double>(l_d)) / (1.0 - base);
    return g;
  }
  if (hi < l_d) return g;
  double terms = static_cast<double>(hi - l_d + 1);
  double first = std::pow(base, static_cast<double>(l_d));
  if (std::abs(base - 1.0) < 1e-12) {
    g.value = pre * first * terms;
  } else {
    // first * (base^terms - 1) / (base - 1), stable near base = 1
    double lb = std::log(base);
    g.value = pre * first * std::expm1(terms * lb) / std::expm1(lb);
  }
  return g;
}

}  // namespace

PauliChannel PauliChannel::dephasing(double q) { return {1 - q, 0, 0, q}; }

PauliChannel PauliChannel::depolarizing(double p) { return {1 - p, p / 3, p / 3, p / 3}; }

void PauliChannel::validate() const {
  for (double p : {p_i, p_x, p_y, p_z}) {
    if (!(p >= 0.0)) throw ConfigError("pauli channel probabilities must be nonnegative");
  }
  if (std::abs(p_i + p_x + p_y + p_z - 1.0) > 1e-12) throw ConfigError("pauli channel probabilities must sum to 1");
}

CptpSpec CptpSpec::identity() { return {{{1, 0, 0, 0}}}; }

CptpSpec CptpSpec::dephasing(double p) { return {{{std::sqrt(1 - p), 0, 0, 0}, {0, 0, 0, std::sqrt(p)}}}; }

CptpSpec CptpSpec::depolarizing(double p) {
  double a = std::sqrt(p / 3);
  return {{{std::sqrt(1 - p), 0, 0, 0}, {0, a, 0, 0}, {0, 0, a, 0}, {0, 0, 0, a}}};
}

CptpSpec CptpSpec::amplitude_damping(double gamma) {
  // K0 = |0><0| + sqrt(1-g)|1><1|, K1 = sqrt(g)|0><1| = sqrt(g)(X + iY)/2
  double s = std::sqrt(1 - gamma);
  double g = std::sqrt(gamma);
  return {{{(1 + s) / 2, 0, 0, (1 - s) / 2}, {0, g / 2, Complex(0, g / 2), 0}}};
}

CptpSpec CptpSpec::random(std::mt19937_64& rng, int rank) {
  if (rank < 1) throw ConfigError("kraus rank must be >= 1");
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd g(2 * rank, 2);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * rank, 2);
  auto s = paulis();
  CptpSpec out;
  for (int i = 0; i < rank; ++i) {
    Eigen::Matrix2cd w = v.block(2 * i, 0, 2, 2);
    std::array<Complex, 4> c;
    for (int l = 0; l < 4; ++l) c[l] = (s[l] * w).trace() / 2.0;
    out.kraus_coeffs.push_back(c);
  }
  return out;
}

void CptpSpec::validate() const {
  if (kraus_coeffs.empty()) throw ConfigError("cptp spec has no kraus operators");
  auto s = paulis();
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& c : kraus_coeffs) {
    Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();
    for (int l = 0; l < 4; ++l) w += c[l] * s[l];
    sum += w.adjoint() * w;
  }
  if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("cptp spec violates completeness");
  }
}

PauliChannel pauli_twirl(const CptpSpec& chan) {
  chan.validate();
  std::array<double, 4> p{};
  for (const auto& c : chan.kraus_coeffs) {
    for (int l = 0; l < 4; ++l) p[l] += std::norm(c[l]);
  }
  return {p[0], p[1], p[2], p[3]};
}

double twirl_to_dephasing(const CptpSpec& chan) {
  auto p = pauli_twirl(chan);
  return std::clamp(p.p_y + p.p_z, 0.0, 1.0);
}

double pauli_channel_distance(const PauliChannel& chan) {
  chan.validate();
  return 1.0 - chan.p_i;
}

GeometricBound postselected_failure_bound(double eps, int k, std::int64_t l_d, std::int64_t n,
                                          std::optional<std::int64_t> upper) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ConfigError("eps must lie in [0, 1)");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (l_d < 1 || l_d > n) throw ConfigError("need 1 <= L_d <= N");
  double e = static_cast<double>(2 * k * k - 2 * k + 1);
  double base = 5.0 * std::exp2(e) * std::pow(2 * eps / (1 - eps), 1.0 / (2 * k - 1));
  return geometric(base, l_d, n, upper);
}

GeometricBound dephasing_failure_bound(double q, std::int64_t l_d, std::int64_t n, std::optional<std::int64_t> upper) {
  if (!(q >= 0.0 && q < 1.0)) throw ConfigError("q must lie in [0, 1)");
  if (l_d < 1 || n < 1) throw ConfigError("need L_d >= 1 and N >= 1");
  // At q = 1/6 the base is exactly one; avoid a rounding ulp deciding divergence.
  double base = std::abs(q - 1.0 / 6) < 1e-15 ? 1.0 : 5 * q / (1 - q);
  return geometric(base, l_d, n, upper);
}

ThresholdReport solve_topological_threshold(int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  double e = static_cast<double>(2 * k * k - 2 * k + 1);
  // x = 1 / (5 2^e)^(2k-1), in logs to survive large k.
  double x = std::exp(-(2 * k - 1) * (std::log(5.0) + e * std::numbers::ln2));
  ThresholdReport r;
  r.name = "topological_threshold_k" + std::to_string(k);
  r.solved_value = x / (2 + x);
  r.method = SolveMethod::kClosedForm;
  r.bracket_lo = 0;
  r.bracket_hi = 1;
  r.tolerance = 1e-12;
  double eps = r.solved_value;
  double base = 5.0 * std::exp2(e) * std::pow(2 * eps / (1 - eps), 1.0 / (2 * k - 1));
  r.residual = std::abs(base - 1.0);
  return r;
}

ThresholdReport dephasing_topological_threshold() {
  ThresholdReport r;
  r.name = "topological_threshold_dephasing";
  r.solved_value = 1.0 / 6;
  r.published_value = 0.167;
  r.method = SolveMethod::kClosedForm;
  r.bracket_lo = 0;
  r.bracket_hi = 0.5;
  r.tolerance = 1e-12;
  r.residual = std::abs(5 * r.solved_value / (1 - r.solved_value) - 1);
  return r;
}

double distillation_threshold() { return (1.0 - std::numbers::sqrt2 / 2) / 2; }

ThresholdReport solve_depth4_boundary(const ErrorPolynomials& polys) {
  double target = distillation_threshold();
  auto f = [&](double q) { return poly(polys.x_coeffs, q) / 2 + poly(polys.z_coeffs, q) - target; };
  // qx, qz >= 0 with qz(q) >= q whenever z_1 = 1, so the root never exceeds the target.
  auto r = bisect("depth4_boundary", f, 0.0, target);
  r.published_value = 0.134;
  r.note = "truncation degree " + std::to_string(polys.truncation_degree);
  return r;
}

void DepolModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 0.75)) throw ConfigError("p1 must lie in [0, 3/4]");
  if (!(p2 >= 0.0 && p2 <= 15.0 / 16)) throw ConfigError("p2 must lie in [0, 15/16]");
}

DepolRates depolarizing_rates(const DepolModel& model) {
  model.validate();
  double a = 1 - 16 * model.p2 / 15;
  double b = 1 - 4 * model.p1 / 3;
  if (a < 0) throw ConfigError("depolarizing rates: negative square-root argument");
  DepolRates r;
  r.q_ind = 0.5 * (1 - std::pow(a, 4) * b * b);
  r.q_cor = 0.5 * (1 - std::sqrt(a));
  r.p_s = (8 * model.p2 / 15 + 3 * model.p1 / 3) + (4 * model.p2 / 15 + 2 * model.p1 / 3) / 2;
  r.q_eff = r.q_ind + 4 * r.q_cor + std::sqrt(r.q_cor);
  return r;
}

double expected_parity(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q must lie in [0, 1]");
  return std::pow(1 - 2 * q, 6);
}

double expected_parity(const DepolModel& model) {
  auto r = depolarizing_rates(model);
  return std::pow((1 - 2 * r.q_ind) * std::pow(1 - 2 * r.q_cor, 4), 6);
}

std::string_view to_string(NoiseClass c) {
  return c == NoiseClass::kDephasing1Local ? "dephasing-1local" : "depolarizing";
}

NoiseClass noise_class_from_string(std::string_view s) {
  if (s == "dephasing-1local" || s == "dephasing") return NoiseClass::kDephasing1Local;
  if (s == "depolarizing") return NoiseClass::kDepolarizing;
  throw ConfigError("unknown noise class: " + std::string(s));
}

double parity_threshold(NoiseClass c) { return c == NoiseClass::kDephasing1Local ? 0.154 : 0.225; }

Verdict single_shot_verdict(double observed_mean, std::int64_t n_cells, double confidence_delta, NoiseClass noise) {
  if (n_cells < 1) throw ConfigError("n_cells must be >= 1");
  if (!(observed_mean >= -1.0 && observed_mean <= 1.0)) throw ConfigError("observed mean must lie in [-1, 1]");
  if (!(confidence_delta > 0.0 && confidence_delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  Verdict v;
  v.deviation = std::sqrt(2 * std::log(1 / confidence_delta) / static_cast<double>(n_cells));
  v.threshold = parity_threshold(noise);
  v.margin = observed_mean - v.deviation - v.threshold;
  v.quantum_side = v.margin > 0;
  return v;
}

std::string_view to_string(DepolReconstruction r) {
  return r == DepolReconstruction::kPsPlusHigherOrders ? "ps-plus-higher-orders" : "ps-leading-only";
}

DepolReconstruction depol_reconstruction_from_string(std::string_view s) {
  if (s == "ps-plus-higher-orders") return DepolReconstruction::kPsPlusHigherOrders;
  if (s == "ps-leading-only") return DepolReconstruction::kPsLeadingOnly;
  throw ConfigError("unknown depolarizing reconstruction: " + std::string(s));
}

DepolThresholds solve_depolarizing_threshold(DepolReconstruction reconstruction, const ErrorPolynomials& polys) {
  double target = distillation_threshold();
  bool higher = reconstruction == DepolReconstruction::kPsPlusHigherOrders;
  auto f = [&](double p) {
    auto r = depolarizing_rates({p, p});
    double v = r.p_s - target;
    if (higher) v += poly(polys.z_coeffs, r.q_eff, 1) + poly(polys.x_coeffs, r.q_eff) / 2;
    return v;
  };
  DepolThresholds out;
  out.quantum_side = bisect("depolarizing_threshold", f, 0.0, 0.15);
  out.quantum_side.published_value = 0.0270;
  out.quantum_side.note = std::string(to_string(reconstruction)) + ", truncation degree " +
                          std::to_string(polys.truncation_degree);
  auto g = [&](double p) { return depolarizing_rates({p, p}).p_s - target; };
  out.classical_side = bisect("depolarizing_classical_side", g, 0.0, 0.15);
  out.classical_side.published_value = 0.0998;
  out.classical_side.note = "p_s = 2p under p1 = p2; differs from the published 0.0998";
  return out;
}

namespace {

Rational pow2(int e) {
  cpp_int one = 1;
  return e >= 0 ? Rational(one << e) : Rational(cpp_int(1), one << -e);
}

Rational postbqp_exact(int n, std::int64_t s, int k) {
  cpp_int big = cpp_int(1) << n;
  cpp_int si = s;
  Rational num = Rational(si * si) + pow2(2 * k - 1) * Rational((big - 2 * si) * (big - 2 * si));
  Rational den = (1 + pow2(2 * k)) * Rational(si * si + (big - si) * (big - si));
  return num / den;
}

void check_postbqp_args(int n, std::int64_t s, int k) {
  if (n < 1 || n > 30) throw ConfigError("n must lie in [1, 30]");
  if (s < 0 || s > (std::int64_t{1} << n)) throw ConfigError("s must lie in [0, 2^n]");
  if (k < -n || k > n) throw ConfigError("k must lie in [-n, n]");
}

}  // namespace

double postbqp_probability(int n, std::int64_t s, int k) {
  check_postbqp_args(n, s, k);
  return static_cast<double>(postbqp_exact(n, s, k));
}

PostbqpCheck check_postbqp_bound(int n) {
  check_postbqp_args(n, 0, 0);
  if (n > 20) throw ResourceGuardError("exhaustive postbqp check is limited to n <= 20");
  PostbqpCheck c;
  c.n = n;
  Rational bound = pow2(-6 * n - 4);
  c.bound = static_cast<double>(bound);
  std::int64_t top = std::int64_t{1} << n;
  for (std::int64_t s = 0; s <= top; ++s) {
    for (int k = -n; k <= n; ++k) {
      Rational p = postbqp_exact(n, s, k);
      ++c.cases;
      if (!(p > bound)) ++c.violations;
      c.min_probability = std::min(c.min_probability, static_cast<double>(p));
    }
  }
  return c;
}

std::string reports_to_json(std::span<const ThresholdReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["name"] = r.name;
    j["solved_value"] = r.solved_value;
    j["published_value"] = r.published_value ? nlohmann::json(*r.published_value) : nlohmann::json(nullptr);
    j["method"] = r.method == SolveMethod::kClosedForm ? "closed-form" : "root-find";
    j["bracket"] = {r.bracket_lo, r.bracket_hi};
    j["tolerance"] = r.tolerance;
    j["residual"] = r.residual;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace cqc
