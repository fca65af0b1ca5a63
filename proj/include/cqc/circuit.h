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
#include <random>
#include <string_view>
#include <vector>

namespace cqc {

enum class GateKind : std::uint8_t {
  kI,
  kX,
  kY,
  kZ,
  kH,
  kS,
  kSdg,
  kCz,
  kCx,
  kZzQuarter,  // exp(i pi/4 Z_a Z_b)
  kT,          // diag(1, e^{i pi/4}); not Clifford
  kRz,         // exp(i theta Z_a); Clifford only at multiples of pi/4
  kZzPhase,    // exp(i theta Z_a Z_b)
};

struct Gate {
  GateKind kind = GateKind::kI;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double theta = 0;
};

bool is_two_qubit(GateKind k);
std::string_view to_string(GateKind k);

// Product-state input of one circuit qubit.
struct InputState {
  enum class Kind : std::uint8_t { kZero, kPlus, kRotated };

  Kind kind = Kind::kPlus;
  double theta = 0;  // kRotated: exp(i theta Z)|+>

  static InputState zero() { return {Kind::kZero, 0}; }
  static InputState plus() { return {Kind::kPlus, 0}; }
  static InputState rotated(double theta) { return {Kind::kRotated, theta}; }
};

struct RandomCircuit {
  std::size_t n = 0;
  std::vector<Gate> gates;
};

// Layers of random single-qubit Cliffords (with a 10% chance of a Pauli error per qubit)
// and random CZ / CX / ZzQuarter pairs, on 1..max_n qubits starting from |0...0>.
RandomCircuit random_clifford_circuit(std::mt19937_64& rng, std::size_t max_n, std::size_t max_depth);

}  // namespace cqc
