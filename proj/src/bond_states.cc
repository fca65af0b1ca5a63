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


#include "cqc/bond_states.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "cqc/errors.h"
#include "cqc/linear_feasibility.h"

namespace cqc {

namespace {

constexpr double kDensityTolerance = 1e-10;

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

int pauli_index(char p) {
  switch (p) {
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: return 0;
  }
}

Eigen::Matrix4cd pauli_string_matrix(const PauliString& p) {
  auto s = pauli_basis();
  Eigen::Matrix4cd m = kron(s[pauli_index(p.at(0))], s[pauli_index(p.at(1))]);
  return p.negative() ? Eigen::Matrix4cd(-m) : m;
}

std::vector<TwoQubitStabilizerState> generate_states() {
  std::vector<PauliString> signed_paulis;
  for (int code = 1; code < 16; ++code) {
    for (bool neg : {false, true}) {
      PauliString p(2);
      p.set(0, "IXYZ"[code / 4]);
      p.set(1, "IXYZ"[code % 4]);
      p.set_negative(neg);
      signed_paulis.push_back(p);
    }
  }
  std::vector<TwoQubitStabilizerState> out;
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  for (std::size_t i = 0; i < signed_paulis.size(); ++i) {
    for (std::size_t j = i + 1; j < signed_paulis.size(); ++j) {
      const auto& g1 = signed_paulis[i];
      const auto& g2 = signed_paulis[j];
      if (!g1.commutes(g2)) continue;
      if (g1.x_words()[0] == g2.x_words()[0] && g1.z_words()[0] == g2.z_words()[0]) continue;
      Eigen::Matrix4cd rho = (id + pauli_string_matrix(g1)) * (id + pauli_string_matrix(g2)) / 4.0;
      if (std::abs(rho.trace() - 1.0) > 1e-12) continue;
      bool seen = std::any_of(out.begin(), out.end(),
                              [&](const TwoQubitStabilizerState& s) { return (s.rho - rho).cwiseAbs().maxCoeff() < 1e-12; });
      if (seen) continue;
      TwoQubitStabilizerState s;
      s.id = static_cast<int>(out.size());
      s.generators = {g1, g2};
      s.rho = rho;
      s.entangled = concurrence(rho) > 0.5;
      Eigen::Vector4d d = rho.diagonal().real();
      s.diag_a = {d(0) + d(1), d(2) + d(3)};
      s.diag_b = {d(0) + d(2), d(1) + d(3)};
      s.product_diagonal = true;
      for (int k = 0; k < 4; ++k) {
        if (std::abs(d(k) - s.diag_a[k / 2] * s.diag_b[k % 2]) > 1e-12) s.product_diagonal = false;
      }
      out.push_back(std::move(s));
    }
  }
  if (out.size() != 60) throw std::logic_error("expected 60 two-qubit stabilizer states, got " + std::to_string(out.size()));
  return out;
}

BondDecomposition finish(BondDecomposition d, const Eigen::Matrix4cd& rho) {
  d.reconstruction_error = (d.reconstruct() - rho).cwiseAbs().maxCoeff();
  return d;
}

}  // namespace

std::array<Eigen::Matrix2cd, 4> pauli_basis() {
  const Complex i(0, 1);
  std::array<Eigen::Matrix2cd, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -i, i, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

Eigen::Matrix<double, 16, 1> pauli_coefficients(const Eigen::Matrix4cd& rho) {
  auto s = pauli_basis();
  Eigen::Matrix<double, 16, 1> c;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) c(4 * a + b) = (rho * kron(s[a], s[b])).trace().real();
  }
  return c;
}

Eigen::Matrix4cd from_pauli_coefficients(const Eigen::Matrix<double, 16, 1>& c) {
  auto s = pauli_basis();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) rho += c(4 * a + b) * kron(s[a], s[b]);
  }
  return rho / 4.0;
}

BondState bond_density_matrix(double theta, double q_bond) {
  if (!(theta >= 0 && theta <= std::numbers::pi / 4 + 1e-15)) throw ConfigError("bond angle outside [0, pi/4]");
  if (!(q_bond >= 0 && q_bond <= 0.5)) throw ConfigError("bond dephasing outside [0, 1/2]");
  const double r = 1 - 2 * q_bond;
  Eigen::Matrix<double, 16, 1> c = Eigen::Matrix<double, 16, 1>::Zero();
  c(0) = 1;
  c(1) = c(4) = r * std::cos(2 * theta);             // IX, XI
  c(4 * 3 + 2) = c(4 * 2 + 3) = -r * std::sin(2 * theta);  // ZY, YZ
  c(4 * 1 + 1) = r * r;                              // XX
  return {theta, q_bond, from_pauli_coefficients(c)};
}

void validate_density_matrix(const Eigen::Matrix4cd& rho) {
  if (!rho.allFinite()) throw ConfigError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) throw ConfigError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kDensityTolerance) throw ConfigError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  if (es.eigenvalues().minCoeff() < -kDensityTolerance) throw ConfigError("density matrix is not positive semidefinite");
}

double concurrence(const Eigen::Matrix4cd& rho) {
  validate_density_matrix(rho);
  Eigen::Matrix4cd h = (rho + rho.adjoint()) / 2.0;
  auto s = pauli_basis();
  Eigen::Matrix4cd yy = kron(s[2], s[2]);
  Eigen::Matrix4cd flipped = yy * h.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::Matrix4cd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::Matrix4cd m = root * flipped * root;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2((m + m.adjoint()) / 2.0);
  Eigen::Vector4d lam = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double separable_amplitude(double theta) {
  double s = std::sin(2 * theta);
  return -s + std::sqrt(s * s + 1);
}

double stabilizer_amplitude(double theta) {
  // sin of the complement keeps cos(2 theta) exactly zero at pi/4, where the root is steep.
  double c = std::sin(std::numbers::pi / 2 - 2 * theta), s = std::sin(2 * theta);
  return c + s - std::sqrt(std::max(0.0, 2 * c * s));
}

BondThresholds boundary_thresholds(double theta) {
  if (!(theta >= 0 && theta <= std::numbers::pi / 4 + 1e-15)) throw ConfigError("bond angle outside [0, pi/4]");
  return {(1 - separable_amplitude(theta)) / 2, (1 - stabilizer_amplitude(theta)) / 2};
}

double concurrence_boundary(double theta) {
  auto entangled = [&](double q) { return concurrence(bond_density_matrix(theta, q).rho) > 0; };
  if (!entangled(0)) return 0;
  double lo = 0, hi = 0.5;
  // Concurrence is continuous and decreasing in q; bisect on its positivity.
  auto f = [&](double q) { return concurrence(bond_density_matrix(theta, q).rho) > 1e-15 ? -1.0 : 1.0; };
  auto r = boost::math::tools::bisect(f, lo, hi, [](double a, double b) { return std::abs(b - a) < 1e-13; });
  return (r.first + r.second) / 2;
}

const std::vector<TwoQubitStabilizerState>& two_qubit_stabilizer_states() {
  static const std::vector<TwoQubitStabilizerState> states = generate_states();
  return states;
}

std::string_view to_string(DecompositionKind k) {
  switch (k) {
    case DecompositionKind::kSeparable: return "separable";
    case DecompositionKind::kStabilizerMixture: return "stabilizer-mixture";
    case DecompositionKind::kEntangled: return "entangled";
  }
  return "?";
}

Eigen::Matrix2cd bloch_to_density(const Eigen::Vector3d& r) {
  auto s = pauli_basis();
  return (s[0] + r(0) * s[1] + r(1) * s[2] + r(2) * s[3]) / 2.0;
}

Eigen::Matrix4cd BondDecomposition::reconstruct() const {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& c : product) rho += c.weight * kron(bloch_to_density(c.bloch_a), bloch_to_density(c.bloch_b));
  const auto& states = two_qubit_stabilizer_states();
  for (const auto& c : stabilizer) rho += c.weight * states.at(c.state_id).rho;
  return rho;
}

double BondDecomposition::total_weight() const {
  double w = 0;
  for (const auto& c : product) w += c.weight;
  for (const auto& c : stabilizer) w += c.weight;
  return w;
}

std::optional<BondDecomposition> stabilizer_decompose(const Eigen::Matrix4cd& rho, StabilizerSet set) {
  validate_density_matrix(rho);
  const auto& states = two_qubit_stabilizer_states();
  std::vector<int> ids;
  for (const auto& s : states) {
    if (set == StabilizerSet::kAll || s.product_diagonal) ids.push_back(s.id);
  }
  Eigen::MatrixXd a(16, static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = pauli_coefficients(states[ids[k]].rho);
  auto sol = find_nonnegative_solution(a, pauli_coefficients(rho));
  if (!sol) return std::nullopt;
  BondDecomposition d;
  d.kind = DecompositionKind::kStabilizerMixture;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    double w = sol->weights(static_cast<Eigen::Index>(k));
    if (w > 0) d.stabilizer.push_back({w, ids[k]});
  }
  return finish(std::move(d), rho);
}

const std::vector<Eigen::Vector3d>& bloch_frame() {
  static const std::vector<Eigen::Vector3d> frame = [] {
    std::vector<Eigen::Vector3d> f;
    for (int x = -1; x <= 1; ++x) {
      for (int y = -1; y <= 1; ++y) {
        for (int z = -1; z <= 1; ++z) {
          if (x == 0 && y == 0 && z == 0) continue;
          f.push_back(Eigen::Vector3d(x, y, z).normalized());
        }
      }
    }
    return f;
  }();
  return frame;
}

std::optional<BondDecomposition> separable_decompose(const Eigen::Matrix4cd& rho) {
  validate_density_matrix(rho);
  const auto& frame = bloch_frame();
  const auto nf = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd a(16, nf * nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    Eigen::Vector4d ua(1, frame[i](0), frame[i](1), frame[i](2));
    for (Eigen::Index j = 0; j < nf; ++j) {
      Eigen::Vector4d ub(1, frame[j](0), frame[j](1), frame[j](2));
      for (int p = 0; p < 4; ++p) {
        for (int r = 0; r < 4; ++r) a(4 * p + r, i * nf + j) = ua(p) * ub(r);
      }
    }
  }
  auto sol = find_nonnegative_solution(a, pauli_coefficients(rho));
  if (!sol) return std::nullopt;
  BondDecomposition d;
  d.kind = DecompositionKind::kSeparable;
  for (Eigen::Index k = 0; k < nf * nf; ++k) {
    double w = sol->weights(k);
    if (w > 0) d.product.push_back({w, frame[k / nf], frame[k % nf]});
  }
  return finish(std::move(d), rho);
}

}  // namespace cqc
