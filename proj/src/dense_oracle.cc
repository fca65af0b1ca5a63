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


#include "cqc/dense_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cqc/errors.h"
#include "cqc/stabilizer_tableau.h"

namespace cqc {

namespace {

const Complex kI(0, 1);

std::array<Complex, 4> pauli_matrix(char p) {
  switch (p) {
    case 'I': return {1, 0, 0, 1};
    case 'X': return {0, 1, 1, 0};
    case 'Y': return {0, -kI, kI, 0};
    case 'Z': return {1, 0, 0, -1};
  }
  throw ConfigError(std::string("unknown pauli '") + p + "'");
}

void check_size(std::size_t n) {
  if (n == 0) throw ConfigError("dense oracle needs at least one qubit");
  if (n > kDenseMaxQubits) {
    throw ResourceGuardError("dense oracle limited to " + std::to_string(kDenseMaxQubits) + " qubits, got " +
                             std::to_string(n));
  }
}

// In-place Walsh-Hadamard transform with 1/sqrt2 per qubit.
void hadamard_all(std::vector<Complex>& a, std::size_t n) {
  const double s = std::numbers::sqrt2 / 2;
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i & bit) continue;
      Complex u = a[i], v = a[i | bit];
      a[i] = s * (u + v);
      a[i | bit] = s * (u - v);
    }
  }
}

}  // namespace

DenseState::DenseState(const std::vector<InputState>& inputs) : n_(inputs.size()) {
  check_size(n_);
  amps_.assign(std::size_t{1} << n_, Complex(1, 0));
  for (std::size_t q = 0; q < n_; ++q) {
    const InputState& in = inputs[q];
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      switch (in.kind) {
        case InputState::Kind::kZero:
          if (i & bit) amps_[i] = 0;
          break;
        case InputState::Kind::kPlus:
          amps_[i] *= std::numbers::sqrt2 / 2;
          break;
        case InputState::Kind::kRotated:
          amps_[i] *= std::exp(kI * ((i & bit) ? -in.theta : in.theta)) * (std::numbers::sqrt2 / 2);
          break;
      }
    }
  }
}

void DenseState::apply_diagonal(std::size_t q, Complex d0, Complex d1) {
  std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? d1 : d0;
}

void DenseState::apply_single(std::size_t q, const std::array<Complex, 4>& m) {
  if (q >= n_) throw std::out_of_range("qubit out of range");
  std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    Complex u = amps_[i], v = amps_[i | bit];
    amps_[i] = m[0] * u + m[1] * v;
    amps_[i | bit] = m[2] * u + m[3] * v;
  }
}

void DenseState::apply_pauli(std::size_t q, char p) { apply_single(q, pauli_matrix(p)); }

void DenseState::apply(const Gate& g) {
  if (g.a >= n_ || (is_two_qubit(g.kind) && (g.b >= n_ || g.a == g.b))) {
    throw ConfigError("gate " + std::string(to_string(g.kind)) + " has invalid qubit indices");
  }
  const double r = std::numbers::sqrt2 / 2;
  std::size_t ba = std::size_t{1} << g.a, bb = std::size_t{1} << g.b;
  switch (g.kind) {
    case GateKind::kI: return;
    case GateKind::kX: return apply_pauli(g.a, 'X');
    case GateKind::kY: return apply_pauli(g.a, 'Y');
    case GateKind::kZ: return apply_pauli(g.a, 'Z');
    case GateKind::kH: return apply_single(g.a, {r, r, r, -r});
    case GateKind::kS: return apply_diagonal(g.a, 1, kI);
    case GateKind::kSdg: return apply_diagonal(g.a, 1, -kI);
    case GateKind::kT: return apply_diagonal(g.a, 1, std::exp(kI * (std::numbers::pi / 4)));
    case GateKind::kRz: return apply_diagonal(g.a, std::exp(kI * g.theta), std::exp(-kI * g.theta));
    case GateKind::kCx:
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & ba) && !(i & bb)) std::swap(amps_[i], amps_[i | bb]);
      }
      return;
    case GateKind::kCz:
    case GateKind::kZzQuarter:
    case GateKind::kZzPhase: {
      double theta = g.kind == GateKind::kZzQuarter ? std::numbers::pi / 4 : g.theta;
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        bool odd = ((i & ba) != 0) != ((i & bb) != 0);
        if (g.kind == GateKind::kCz) {
          if ((i & ba) && (i & bb)) amps_[i] = -amps_[i];
        } else {
          amps_[i] *= std::exp(kI * (odd ? -theta : theta));
        }
      }
      return;
    }
  }
}

std::vector<double> DenseState::x_distribution() const {
  std::vector<Complex> a = amps_;
  hadamard_all(a, n_);
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = std::norm(a[i]);
  return p;
}

std::vector<double> dense_oracle(const DenseCircuit& c) {
  check_size(c.n);
  std::vector<InputState> inputs = c.inputs;
  if (inputs.empty()) inputs.assign(c.n, InputState::plus());
  if (inputs.size() != c.n) throw ConfigError("dense circuit input count does not match qubit count");
  if (!c.pauli_noise.empty() && c.pauli_noise.size() != c.n) {
    throw ConfigError("dense circuit noise count does not match qubit count");
  }
  DenseState psi(inputs);
  for (const Gate& g : c.gates) psi.apply(g);

  std::vector<double> dist;
  if (c.kraus_noise.empty()) {
    dist = psi.x_distribution();
  } else {
    std::size_t combos = 1;
    for (const auto& [q, chan] : c.kraus_noise) {
      if (q >= c.n) throw ConfigError("kraus noise on an unknown qubit");
      chan.validate();
      combos *= chan.kraus_coeffs.size();
      if (combos > 4096) throw ResourceGuardError("too many kraus branches for the dense oracle");
    }
    dist.assign(std::size_t{1} << c.n, 0.0);
    auto ops = pauli_matrix;
    for (std::size_t k = 0; k < combos; ++k) {
      DenseState branch = psi;
      std::size_t rest = k;
      for (const auto& [q, chan] : c.kraus_noise) {
        const auto& coeffs = chan.kraus_coeffs[rest % chan.kraus_coeffs.size()];
        rest /= chan.kraus_coeffs.size();
        std::array<Complex, 4> m{};
        for (int a = 0; a < 4; ++a) {
          auto s = ops("IXYZ"[a]);
          for (int e = 0; e < 4; ++e) m[e] += coeffs[a] * s[e];
        }
        branch.apply_single(q, m);
      }
      auto part = branch.x_distribution();
      for (std::size_t i = 0; i < dist.size(); ++i) dist[i] += part[i];
    }
  }

  for (std::size_t q = 0; q < c.pauli_noise.size(); ++q) {
    c.pauli_noise[q].validate();
    double f = c.pauli_noise[q].x_flip();
    if (f == 0) continue;
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (i & bit) continue;
      double u = dist[i], v = dist[i | bit];
      dist[i] = (1 - f) * u + f * v;
      dist[i | bit] = f * u + (1 - f) * v;
    }
  }
  return dist;
}

std::vector<double> x_marginals(std::span<const double> dist, std::size_t n) {
  if (dist.size() != (std::size_t{1} << n)) throw std::invalid_argument("distribution size mismatch");
  std::vector<double> m(n, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t q = 0; q < n; ++q) {
      if ((i >> q) & 1) m[q] += dist[i];
    }
  }
  return m;
}

StabilizerOracleReport stabilizer_oracle_check(std::size_t circuits, std::size_t max_qubits, std::size_t max_depth,
                                               std::uint64_t seed) {
  if (max_qubits == 0 || max_qubits > kDenseMaxQubits) throw ConfigError("oracle check needs 1..14 qubits");
  std::mt19937_64 rng(seed);
  StabilizerOracleReport report;
  for (std::size_t i = 0; i < circuits; ++i) {
    auto rc = random_clifford_circuit(rng, max_qubits, max_depth);
    StabilizerTableau t(rc.n, Basis::kAllZero);
    for (const auto& g : rc.gates) apply_gate(t, g);
    DenseCircuit dc;
    dc.n = rc.n;
    dc.inputs.assign(rc.n, InputState::zero());
    dc.gates = rc.gates;
    auto marg = x_marginals(dense_oracle(dc), rc.n);
    for (std::size_t q = 0; q < rc.n; ++q) {
      double flip = (1.0 - t.expectation(PauliString::single(rc.n, q, 'X'))) / 2;
      report.max_deviation = std::max(report.max_deviation, std::abs(flip - marg[q]));
    }
    ++report.circuits;
    report.qubits_checked += rc.n;
  }
  return report;
}

}  // namespace cqc
