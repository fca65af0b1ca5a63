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


// Dense statevector reference for small commuting circuits measured in X.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <cstdint>
#include <utility>
#include <vector>

#include "cqc/circuit.h"
#include "cqc/noise_thresholds.h"

namespace cqc {

inline constexpr std::size_t kDenseMaxQubits = 14;

class DenseState {
 public:
  explicit DenseState(const std::vector<InputState>& inputs);

  std::size_t num_qubits() const { return n_; }
  std::span<const Complex> amplitudes() const { return amps_; }

  void apply(const Gate& g);
  void apply_single(std::size_t q, const std::array<Complex, 4>& m);  // row-major 2x2
  void apply_pauli(std::size_t q, char p);

  // Probabilities of X-basis outcome strings; bit q of the index is 1 for outcome -1 on qubit q.
  std::vector<double> x_distribution() const;

 private:
  void apply_diagonal(std::size_t q, Complex d0, Complex d1);

  std::size_t n_;
  std::vector<Complex> amps_;
};

struct DenseCircuit {
  std::size_t n = 0;
  std::vector<InputState> inputs;  // one per qubit; empty means all plus
  std::vector<Gate> gates;
  // Noise acting just before the X measurement. `pauli_noise` is empty or one per qubit.
  std::vector<PauliChannel> pauli_noise;
  std::vector<std::pair<std::size_t, CptpSpec>> kraus_noise;
};

// Exact X-outcome distribution (2^n entries). Throws ResourceGuardError for n > 14.
std::vector<double> dense_oracle(const DenseCircuit& circuit);

// P(outcome -1) on each qubit.
std::vector<double> x_marginals(std::span<const double> dist, std::size_t n);

struct StabilizerOracleReport {
  std::size_t circuits = 0;
  std::size_t qubits_checked = 0;
  double max_deviation = 0;  // max |P_tableau(-1) - P_dense(-1)| over all qubits
};

// Runs random_clifford_circuit instances through the tableau and the dense oracle and
// compares exact X marginals.
StabilizerOracleReport stabilizer_oracle_check(std::size_t circuits, std::size_t max_qubits, std::size_t max_depth,
                                               std::uint64_t seed);

}  // namespace cqc
