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


// Dephased two-qubit bond states, their entanglement, and convex decompositions.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "cqc/stabilizer_tableau.h"

namespace cqc {

// exp(i theta ZZ)|++> with both halves dephased at rate q_bond.
struct BondState {
  double theta = 0;
  double q_bond = 0;
  Eigen::Matrix4cd rho;
};

BondState bond_density_matrix(double theta, double q_bond);

// 16 real coefficients c_ab = Tr(rho s_a (x) s_b), a and b over I, X, Y, Z (index 4a + b).
Eigen::Matrix<double, 16, 1> pauli_coefficients(const Eigen::Matrix4cd& rho);
Eigen::Matrix4cd from_pauli_coefficients(const Eigen::Matrix<double, 16, 1>& c);
std::array<Eigen::Matrix2cd, 4> pauli_basis();

// Throws ConfigError unless rho is Hermitian, unit trace and positive semidefinite (1e-10).
void validate_density_matrix(const Eigen::Matrix4cd& rho);

// Wootters concurrence.
double concurrence(const Eigen::Matrix4cd& rho);

// Largest 1 - 2q for which the bond is separable / a stabilizer mixture.
double separable_amplitude(double theta);
double stabilizer_amplitude(double theta);

struct BondThresholds {
  double q_sep = 0;
  double q_stab = 0;
};

BondThresholds boundary_thresholds(double theta);

// Smallest q at which the bond's concurrence vanishes, by bisection on the Wootters formula.
double concurrence_boundary(double theta);

struct TwoQubitStabilizerState {
  int id = 0;
  std::array<PauliString, 2> generators;
  Eigen::Matrix4cd rho;
  bool entangled = false;
  // The computational-basis diagonal is a product diag_a (x) diag_b.
  bool product_diagonal = false;
  std::array<double, 2> diag_a{};
  std::array<double, 2> diag_b{};
};

// All 60 pure two-qubit stabilizer states, generated from commuting Pauli pairs.
const std::vector<TwoQubitStabilizerState>& two_qubit_stabilizer_states();

enum class DecompositionKind : std::uint8_t { kSeparable, kStabilizerMixture, kEntangled };

std::string_view to_string(DecompositionKind k);

struct ProductComponent {
  double weight = 0;
  Eigen::Vector3d bloch_a;
  Eigen::Vector3d bloch_b;
};

struct StabilizerComponent {
  double weight = 0;
  int state_id = 0;
};

struct BondDecomposition {
  DecompositionKind kind = DecompositionKind::kEntangled;
  std::vector<ProductComponent> product;
  std::vector<StabilizerComponent> stabilizer;
  double reconstruction_error = 0;  // max-entry norm

  Eigen::Matrix4cd reconstruct() const;
  double total_weight() const;
};

enum class StabilizerSet : std::uint8_t {
  kAll,               // the 60 pure states
  kProductDiagonal,   // the 52 whose Z-basis diagonal factorizes
};

// Convex decomposition over pure stabilizer states; nullopt when rho is outside the polytope.
std::optional<BondDecomposition> stabilizer_decompose(const Eigen::Matrix4cd& rho,
                                                      StabilizerSet set = StabilizerSet::kAll);

// The 26 unit Bloch vectors along the faces, edges and corners of a cube.
const std::vector<Eigen::Vector3d>& bloch_frame();

// Convex decomposition over products of frame states; nullopt when infeasible at frame resolution.
std::optional<BondDecomposition> separable_decompose(const Eigen::Matrix4cd& rho);

Eigen::Matrix2cd bloch_to_density(const Eigen::Vector3d& r);

}  // namespace cqc
