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


// Trajectory sampling of the noisy depth-four cluster-state circuit measured in X.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqc/circuit.h"
#include "cqc/noise_thresholds.h"
#include "cqc/rhg_lattice.h"
#include "cqc/rng.h"

namespace cqc {

// Pauli eigenstates in the order +X, -X, +Y, -Y, +Z, -Z.
enum class PauliEigenstate : std::uint8_t { kPlusX, kMinusX, kPlusY, kMinusY, kPlusZ, kMinusZ };

struct OctahedronMixture {
  std::array<double, 6> weights{};

  std::array<double, 3> bloch() const;
  PauliEigenstate sample(double u) const;
};

// Mixture reproducing a single-qubit Bloch vector; ConfigError "outside octahedron" when |x|+|y|+|z| > 1.
OctahedronMixture octahedron_mixture_from_bloch(double x, double y, double z);
// The dephased rotated input P(q)(exp(i theta Z)|+>).
OctahedronMixture octahedron_mixture(double theta, double q);

struct CompiledInput {
  InputState base;
  bool xi = false;      // X prefix
  bool nu_bar = false;  // Z prefix
};

struct CompiledInputs {
  std::vector<CompiledInput> inputs;
  std::vector<std::uint8_t> nu;  // outcome reinterpretation mask
};

// nu_bar_j = nu_j xor (xor of xi_k over neighbors k of j).
CompiledInputs compile_randomized_inputs(std::span<const InputState> inputs,
                                         std::span<const std::vector<std::uint32_t>> adjacency,
                                         std::span<const std::uint8_t> xi, std::span<const std::uint8_t> nu);
// Draws xi and nu uniformly from the counter RNG keyed by (seed, shot).
CompiledInputs compile_randomized_inputs(std::span<const InputState> inputs,
                                         std::span<const std::vector<std::uint32_t>> adjacency, std::uint64_t seed,
                                         std::uint64_t shot);

std::vector<std::vector<std::uint32_t>> adjacency_lists(const RhgLattice& lattice);

struct CircuitRun {
  std::shared_ptr<const RhgLattice> lattice;
  // One entry per qubit. Empty means plus states on vacuum qubits and zero states on defect qubits.
  std::vector<InputState> inputs;
  // One entry per qubit, acting just before the X measurement. Empty means noiseless.
  std::vector<PauliChannel> noise;
  std::uint64_t seed = 0;
  std::uint64_t shot = 0;
  bool randomize_inputs = false;
};

struct ShotResult {
  std::vector<std::uint8_t> outcomes;       // raw m_j, 1 for -1
  std::vector<std::uint8_t> nu;             // reinterpretation mask
  std::vector<std::uint8_t> reinterpreted;  // m_j xor nu_j
  std::vector<std::int8_t> syndromes;       // S_u = +-1 per cell

  double mean_syndrome() const;
};

// Uniform sampler over the X-outcome coset of a graph state built from a fixed set of Pauli-axis inputs.
class AffineOutcomeSampler {
 public:
  AffineOutcomeSampler(std::size_t n, std::span<const Gate> entanglers, std::span<const char> axes);

  std::size_t num_constraints() const { return signs_.size(); }
  // Writes a sample into `bits` (one word per 64 qubits).
  void sample(CounterRng& rng, std::span<std::uint64_t> bits) const;

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;  // constraint masks with the pivot bit cleared
  std::vector<std::uint32_t> pivots_;
  std::vector<std::uint8_t> signs_;
};

class CircuitSampler {
 public:
  explicit CircuitSampler(const CircuitRun& run);

  const RhgLattice& lattice() const { return *lattice_; }
  ShotResult sample(std::uint64_t shot) const;

 private:
  std::shared_ptr<const AffineOutcomeSampler> sampler_for(const std::string& axes) const;

  std::shared_ptr<const RhgLattice> lattice_;
  std::size_t n_;
  std::uint64_t seed_;
  bool randomize_;
  std::vector<InputState> inputs_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<Gate> entanglers_;
  std::vector<double> flip_;  // outcome flip probability from noise
  std::vector<std::optional<OctahedronMixture>> mixtures_;
  std::vector<char> fixed_axes_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const AffineOutcomeSampler>> cache_;
};

// CZ gates of the depth-four schedule, color by color.
std::vector<Gate> schedule_gates(const RhgLattice& lattice);

ShotResult run_noisy_circuit(const CircuitRun& run);

struct ShotSummary {
  std::uint64_t shots = 0;
  double mean_syndrome = 0;
  double stderr_syndrome = 0;  // from per-shot cell averages
  std::uint64_t seed = 0;
};

// Runs shots [0, shots) of `run` on `threads` workers (0 picks the hardware count).
ShotSummary run_shots(const CircuitRun& run, std::uint64_t shots, unsigned threads = 0,
                      std::vector<ShotResult>* keep = nullptr);

}  // namespace cqc
