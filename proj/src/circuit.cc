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


#include "cqc/circuit.h"

namespace cqc {

bool is_two_qubit(GateKind k) {
  return k == GateKind::kCz || k == GateKind::kCx || k == GateKind::kZzQuarter || k == GateKind::kZzPhase;
}

std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::kI: return "I";
    case GateKind::kX: return "X";
    case GateKind::kY: return "Y";
    case GateKind::kZ: return "Z";
    case GateKind::kH: return "H";
    case GateKind::kS: return "S";
    case GateKind::kSdg: return "S_DAG";
    case GateKind::kCz: return "CZ";
    case GateKind::kCx: return "CX";
    case GateKind::kZzQuarter: return "ZZ_QUARTER";
    case GateKind::kT: return "T";
    case GateKind::kRz: return "RZ";
    case GateKind::kZzPhase: return "ZZ_PHASE";
  }
  return "?";
}

RandomCircuit random_clifford_circuit(std::mt19937_64& rng, std::size_t max_n, std::size_t max_depth) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_n);
  std::uniform_int_distribution<std::size_t> depth_dist(1, max_depth);
  RandomCircuit c;
  c.n = n_dist(rng);
  std::size_t depth = depth_dist(rng);
  std::uniform_int_distribution<std::uint32_t> qubit(0, static_cast<std::uint32_t>(c.n - 1));
  const GateKind single[] = {GateKind::kH, GateKind::kS, GateKind::kSdg, GateKind::kX, GateKind::kY, GateKind::kZ};
  const GateKind pair[] = {GateKind::kCz, GateKind::kCx, GateKind::kZzQuarter};
  std::bernoulli_distribution noisy(0.1);
  std::uniform_int_distribution<int> pick6(0, 5), pick3(0, 2), pauli(1, 3);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    for (std::uint32_t q = 0; q < c.n; ++q) {
      c.gates.push_back({single[pick6(rng)], q, 0, 0});
      if (noisy(rng)) c.gates.push_back({GateKind(static_cast<int>(GateKind::kI) + pauli(rng)), q, 0, 0});
    }
    if (c.n >= 2) {
      for (std::size_t k = 0; k < c.n / 2; ++k) {
        std::uint32_t a = qubit(rng), b = qubit(rng);
        if (a != b) c.gates.push_back({pair[pick3(rng)], a, b, 0});
      }
    }
  }
  return c;
}

}  // namespace cqc
