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


#include "cqc/stabilizer_engine.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

#include "cqc/errors.h"
#include "cqc/stabilizer_tableau.h"

namespace cqc {

namespace {

constexpr double kOctahedronTolerance = 1e-12;

constexpr std::uint64_t kFrameStream = 1;
constexpr std::uint64_t kMixtureStream = 2;
constexpr std::uint64_t kOutcomeStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

char axis_of(PauliEigenstate s) { return "XXYYZZ"[static_cast<int>(s)]; }
bool negative(PauliEigenstate s) { return static_cast<int>(s) & 1; }

}  // namespace

std::array<double, 3> OctahedronMixture::bloch() const {
  return {weights[0] - weights[1], weights[2] - weights[3], weights[4] - weights[5]};
}

PauliEigenstate OctahedronMixture::sample(double u) const {
  double acc = 0;
  for (int k = 0; k < 5; ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<PauliEigenstate>(k);
  }
  return PauliEigenstate::kMinusZ;
}

OctahedronMixture octahedron_mixture_from_bloch(double x, double y, double z) {
  double l1 = std::abs(x) + std::abs(y) + std::abs(z);
  if (!std::isfinite(l1) || l1 > 1 + kOctahedronTolerance) {
    throw ConfigError("state is outside octahedron (|x|+|y|+|z| = " + std::to_string(l1) + ")");
  }
  double rest = std::max(0.0, 1 - l1) / 6;
  OctahedronMixture m;
  const double comp[3] = {x, y, z};
  for (int a = 0; a < 3; ++a) {
    m.weights[2 * a] = rest + std::max(comp[a], 0.0);
    m.weights[2 * a + 1] = rest + std::max(-comp[a], 0.0);
  }
  if (l1 > 1) {
    for (double& w : m.weights) w /= l1;
  }
  return m;
}

OctahedronMixture octahedron_mixture(double theta, double q) {
  if (!(q >= 0 && q <= 1)) throw ConfigError("dephasing rate must lie in [0, 1]");
  double r = 1 - 2 * q;
  return octahedron_mixture_from_bloch(r * std::cos(2 * theta), -r * std::sin(2 * theta), 0);
}

CompiledInputs compile_randomized_inputs(std::span<const InputState> inputs,
                                         std::span<const std::vector<std::uint32_t>> adjacency,
                                         std::span<const std::uint8_t> xi, std::span<const std::uint8_t> nu) {
  std::size_t n = inputs.size();
  if (adjacency.size() != n) throw ConfigError("missing adjacency for randomized compilation");
  if (xi.size() != n || nu.size() != n) throw ConfigError("frame masks do not match the input count");
  CompiledInputs out;
  out.inputs.resize(n);
  out.nu.assign(nu.begin(), nu.end());
  for (std::size_t j = 0; j < n; ++j) {
    bool bar = nu[j] != 0;
    for (std::uint32_t k : adjacency[j]) {
      if (k >= n) throw ConfigError("adjacency refers to an unknown qubit");
      bar ^= xi[k] != 0;
    }
    out.inputs[j] = {inputs[j], xi[j] != 0, bar};
  }
  return out;
}

CompiledInputs compile_randomized_inputs(std::span<const InputState> inputs,
                                         std::span<const std::vector<std::uint32_t>> adjacency, std::uint64_t seed,
                                         std::uint64_t shot) {
  CounterRng rng(seed, shot, kFrameStream);
  std::vector<std::uint8_t> xi(inputs.size()), nu(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    std::uint64_t r = rng();
    xi[j] = r & 1;
    nu[j] = (r >> 1) & 1;
  }
  return compile_randomized_inputs(inputs, adjacency, xi, nu);
}

std::vector<std::vector<std::uint32_t>> adjacency_lists(const RhgLattice& lattice) {
  std::vector<std::vector<std::uint32_t>> adj(lattice.num_qubits());
  for (std::size_t q = 0; q < adj.size(); ++q) {
    for (QubitId k : lattice.neighbors(QubitId{static_cast<std::uint32_t>(q)})) {
      if (index_of(k) != q) adj[q].push_back(index_of(k));
    }
  }
  return adj;
}

double ShotResult::mean_syndrome() const {
  if (syndromes.empty()) return 0;
  double s = 0;
  for (auto v : syndromes) s += v;
  return s / static_cast<double>(syndromes.size());
}

AffineOutcomeSampler::AffineOutcomeSampler(std::size_t n, std::span<const Gate> entanglers, std::span<const char> axes)
    : n_(n), words_((n + 63) / 64) {
  if (axes.size() != n) throw ConfigError("axis list does not match qubit count");
  StabilizerTableau t(n, Basis::kAllPlus);
  for (std::size_t j = 0; j < n; ++j) {
    if (axes[j] == 'Y') {
      t.s(j);
    } else if (axes[j] == 'Z') {
      t.h(j);
    } else if (axes[j] != 'X') {
      throw ConfigError("unknown input axis");
    }
  }
  for (const Gate& g : entanglers) apply_gate(t, g);

  // Reduced row echelon form of the X-type subgroup over GF(2).
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::uint8_t> signs;
  for (const PauliString& p : t.x_type_stabilizers()) {
    auto xw = p.x_words();
    rows.emplace_back(xw.begin(), xw.end());
    signs.push_back(p.negative());
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t w = col >> 6;
    std::uint64_t m = std::uint64_t{1} << (col & 63);
    std::size_t found = rank;
    while (found < rows.size() && !(rows[found][w] & m)) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[rank], rows[found]);
    std::swap(signs[rank], signs[found]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || !(rows[r][w] & m)) continue;
      for (std::size_t k = 0; k < words_; ++k) rows[r][k] ^= rows[rank][k];
      signs[r] ^= signs[rank];
    }
    pivots_.push_back(static_cast<std::uint32_t>(col));
    ++rank;
  }
  if (rank != rows.size()) throw std::logic_error("x-type stabilizers are dependent");
  for (std::size_t r = 0; r < rank; ++r) {
    rows[r][pivots_[r] >> 6] &= ~(std::uint64_t{1} << (pivots_[r] & 63));
    rows_.insert(rows_.end(), rows[r].begin(), rows[r].end());
  }
  signs_ = std::move(signs);
}

void AffineOutcomeSampler::sample(CounterRng& rng, std::span<std::uint64_t> bits) const {
  if (bits.size() != words_) throw std::invalid_argument("outcome buffer has the wrong size");
  for (auto& w : bits) w = rng();
  if (n_ & 63) bits[words_ - 1] &= (std::uint64_t{1} << (n_ & 63)) - 1;
  // Pivots never appear in other rows, so the free bits fix each pivot independently.
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const std::uint64_t* row = &rows_[r * words_];
    int parity = signs_[r];
    for (std::size_t k = 0; k < words_; ++k) parity ^= std::popcount(row[k] & bits[k]) & 1;
    std::uint32_t p = pivots_[r];
    std::uint64_t m = std::uint64_t{1} << (p & 63);
    bits[p >> 6] = parity ? (bits[p >> 6] | m) : (bits[p >> 6] & ~m);
  }
}

std::vector<Gate> schedule_gates(const RhgLattice& lattice) {
  std::vector<Gate> gates;
  for (const auto& color : cz_schedule(lattice)) {
    for (const Coupling& c : color) {
      if (c.face == c.edge) continue;
      gates.push_back({GateKind::kCz, index_of(c.face), index_of(c.edge), 0});
    }
  }
  return gates;
}

CircuitSampler::CircuitSampler(const CircuitRun& run)
    : lattice_(run.lattice), seed_(run.seed), randomize_(run.randomize_inputs) {
  if (!lattice_) throw ConfigError("circuit run has no lattice");
  n_ = lattice_->num_qubits();
  inputs_ = run.inputs;
  if (inputs_.empty()) {
    inputs_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      bool defect = lattice_->region(QubitId{static_cast<std::uint32_t>(j)}) == Region::kDefect;
      inputs_[j] = defect ? InputState::zero() : InputState::plus();
    }
  }
  if (inputs_.size() != n_) throw ConfigError("input assignment does not cover every qubit");
  if (!run.noise.empty() && run.noise.size() != n_) throw ConfigError("noise assignment does not cover every qubit");
  adjacency_ = adjacency_lists(*lattice_);
  entanglers_ = schedule_gates(*lattice_);
  flip_.assign(n_, 0.0);
  mixtures_.resize(n_);
  fixed_axes_.assign(n_, 'X');
  for (std::size_t j = 0; j < n_; ++j) {
    double f = 0;
    if (!run.noise.empty()) {
      run.noise[j].validate();
      f = run.noise[j].x_flip();
    }
    switch (inputs_[j].kind) {
      case InputState::Kind::kPlus:
        flip_[j] = f;
        break;
      case InputState::Kind::kZero:
        fixed_axes_[j] = 'Z';
        flip_[j] = f;
        break;
      case InputState::Kind::kRotated:
        if (lattice_->region(QubitId{static_cast<std::uint32_t>(j)}) == Region::kDefect) {
          throw ConfigError("rotated input on a defect qubit");
        }
        // Z-type noise commutes with the CZs, so it is folded into the input.
        mixtures_[j] = octahedron_mixture(inputs_[j].theta, f);
        fixed_axes_[j] = '?';
        break;
    }
  }
}

std::shared_ptr<const AffineOutcomeSampler> CircuitSampler::sampler_for(const std::string& axes) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(axes);
  if (it != cache_.end()) return it->second;
  auto s = std::make_shared<const AffineOutcomeSampler>(n_, entanglers_, std::span<const char>(axes.data(), axes.size()));
  cache_.emplace(axes, s);
  return s;
}

ShotResult CircuitSampler::sample(std::uint64_t shot) const {
  std::vector<std::uint8_t> x_frame(n_, 0), z_frame(n_, 0);
  ShotResult res;
  res.nu.assign(n_, 0);
  if (randomize_) {
    auto compiled = compile_randomized_inputs(inputs_, adjacency_, seed_, shot);
    for (std::size_t j = 0; j < n_; ++j) {
      x_frame[j] = compiled.inputs[j].xi;
      z_frame[j] = compiled.inputs[j].nu_bar;
    }
    res.nu = std::move(compiled.nu);
  }

  std::string axes(fixed_axes_.begin(), fixed_axes_.end());
  CounterRng mix_rng(seed_, shot, kMixtureStream);
  for (std::size_t j = 0; j < n_; ++j) {
    if (!mixtures_[j]) continue;
    PauliEigenstate e = mixtures_[j]->sample(mix_rng.uniform());
    axes[j] = axis_of(e);
    if (negative(e)) {
      // -X and -Y are Z applied to +X and +Y; -Z is X applied to +Z.
      (axes[j] == 'Z' ? x_frame : z_frame)[j] ^= 1;
    }
  }

  auto sampler = sampler_for(axes);
  std::vector<std::uint64_t> bits((n_ + 63) / 64);
  CounterRng out_rng(seed_, shot, kOutcomeStream);
  sampler->sample(out_rng, bits);

  res.outcomes.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) res.outcomes[j] = (bits[j >> 6] >> (j & 63)) & 1;
  // An input X frame becomes X_j Z_neighbors after the CZs; Z frames flip their own outcome.
  for (std::size_t j = 0; j < n_; ++j) {
    res.outcomes[j] ^= z_frame[j];
    if (x_frame[j]) {
      for (std::uint32_t k : adjacency_[j]) res.outcomes[k] ^= 1;
    }
  }
  CounterRng noise_rng(seed_, shot, kNoiseStream);
  for (std::size_t j = 0; j < n_; ++j) {
    if (flip_[j] > 0 && noise_rng.uniform() < flip_[j]) res.outcomes[j] ^= 1;
  }

  res.reinterpreted.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) res.reinterpreted[j] = res.outcomes[j] ^ res.nu[j];
  auto cells = lattice_->cells();
  res.syndromes.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    int parity = 0;
    for (QubitId f : cells[c].faces) parity ^= res.reinterpreted[index_of(f)];
    res.syndromes[c] = parity ? -1 : 1;
  }
  return res;
}

ShotResult run_noisy_circuit(const CircuitRun& run) { return CircuitSampler(run).sample(run.shot); }

ShotSummary run_shots(const CircuitRun& run, std::uint64_t shots, unsigned threads, std::vector<ShotResult>* keep) {
  CircuitSampler sampler(run);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(shots, 1)));
  std::vector<double> means(shots);
  if (keep) keep->assign(shots, {});
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::uint64_t s = w; s < shots; s += threads) {
            ShotResult r = sampler.sample(s);
            means[s] = r.mean_syndrome();
            if (keep) (*keep)[s] = std::move(r);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ShotSummary out;
  out.shots = shots;
  out.seed = run.seed;
  if (shots == 0) return out;
  double sum = 0, sq = 0;
  for (double m : means) sum += m;
  out.mean_syndrome = sum / static_cast<double>(shots);
  for (double m : means) sq += (m - out.mean_syndrome) * (m - out.mean_syndrome);
  if (shots > 1) out.stderr_syndrome = std::sqrt(sq / static_cast<double>(shots - 1) / static_cast<double>(shots));
  return out;
}

}  // namespace cqc
