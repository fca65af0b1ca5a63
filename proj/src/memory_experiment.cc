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


#include "cqc/memory_experiment.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <limits>
#include <string>
#include <vector>

#include "cqc/errors.h"
#include "cqc/rng.h"

namespace cqc {

namespace {

constexpr std::uint64_t kRejectionStream = 11;
constexpr std::uint64_t kChainStream = 12;

struct FaceComplex {
  std::vector<std::uint32_t> face_of_qubit;  // dense face index, or UINT32_MAX
  std::vector<std::uint8_t> on_cut;          // x-normal face at doubled x = 0
  std::vector<std::array<std::uint32_t, 6>> cells;
  std::vector<std::array<std::uint32_t, 4>> plaquettes;  // faces around each edge
  std::vector<std::vector<std::uint32_t>> windings;      // straight lines of faces along an axis
  std::size_t faces = 0;
};

FaceComplex build_complex(const RhgLattice& lat) {
  if (lat.boundary() != Boundary::kPeriodic) throw ConfigError("memory experiment needs a periodic lattice");
  FaceComplex fc;
  fc.face_of_qubit.assign(lat.num_qubits(), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t q = 0; q < lat.num_qubits(); ++q) {
    QubitId id{static_cast<std::uint32_t>(q)};
    if (lat.region(id) != Region::kVacuum) throw ConfigError("memory experiment needs a lattice without defects");
    if (lat.kind(id) != QubitKind::kFace) continue;
    fc.face_of_qubit[q] = static_cast<std::uint32_t>(fc.faces++);
    Coord c = lat.coord(id);
    fc.on_cut.push_back(c.x == 0);
  }
  for (const Cell& cell : lat.cells()) {
    std::array<std::uint32_t, 6> f{};
    for (int k = 0; k < 6; ++k) f[k] = fc.face_of_qubit[index_of(cell.faces[k])];
    fc.cells.push_back(f);
  }
  for (std::size_t q = 0; q < lat.num_qubits(); ++q) {
    QubitId id{static_cast<std::uint32_t>(q)};
    if (lat.kind(id) != QubitKind::kEdge) continue;
    auto nb = lat.neighbors(id);
    // Small periodic boxes can alias neighbors; such edges give no valid move.
    if (nb.size() != 4) continue;
    std::array<std::uint32_t, 4> p{};
    for (int k = 0; k < 4; ++k) p[k] = fc.face_of_qubit[index_of(nb[k])];
    fc.plaquettes.push_back(p);
  }
  Dims d = lat.dims();
  for (int axis = 0; axis < 3; ++axis) {
    int u = (axis + 1) % 3, v = (axis + 2) % 3;
    for (int a = 0; a < d[u]; ++a) {
      for (int b = 0; b < d[v]; ++b) {
        std::vector<std::uint32_t> line;
        for (int i = 0; i < d[axis]; ++i) {
          Coord c;
          c[axis] = 2 * i;
          c[u] = 2 * a + 1;
          c[v] = 2 * b + 1;
          line.push_back(fc.face_of_qubit[index_of(*lat.find(c))]);
        }
        fc.windings.push_back(std::move(line));
      }
    }
  }
  return fc;
}

// Batch-means standard error of a 0/1 series.
double batch_stderr(const std::vector<std::uint8_t>& series, int batches) {
  std::size_t per = series.size() / static_cast<std::size_t>(batches);
  if (per == 0 || batches < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> means(batches, 0.0);
  double total = 0;
  for (int b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < per; ++i) means[b] += series[b * per + i];
    means[b] /= static_cast<double>(per);
    total += means[b];
  }
  double mean = total / batches, var = 0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= batches - 1;
  return std::sqrt(var / batches);
}

}  // namespace

std::string_view to_string(MemoryMethod m) { return m == MemoryMethod::kRejection ? "rejection" : "markov-chain"; }

MemoryMethod memory_method_from_string(std::string_view s) {
  if (s == "rejection") return MemoryMethod::kRejection;
  if (s == "markov-chain" || s == "mcmc") return MemoryMethod::kMarkovChain;
  throw ConfigError("unknown memory method '" + std::string(s) + "'");
}

MemoryResult postselected_memory_experiment(const RhgLattice& lattice, double q, std::uint64_t trials,
                                            std::uint64_t seed, const MemoryOptions& options) {
  if (!(q >= 0 && q <= 1)) throw ConfigError("dephasing rate must lie in [0, 1]");
  if (trials == 0) throw ConfigError("memory experiment needs at least one trial");
  FaceComplex fc = build_complex(lattice);
  MemoryResult res;
  res.method = options.method;
  res.trials = trials;

  std::vector<std::uint8_t> err(fc.faces);
  std::vector<std::uint8_t> kept_parity;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t, kRejectionStream);
    for (auto& e : err) e = rng.uniform() < q;
    bool ok = true;
    for (const auto& cell : fc.cells) {
      int parity = 0;
      for (auto f : cell) parity ^= err[f];
      if (parity) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++res.accepted;
    int cut = 0;
    for (std::size_t f = 0; f < fc.faces; ++f) cut ^= err[f] & fc.on_cut[f];
    kept_parity.push_back(static_cast<std::uint8_t>(cut));
  }
  res.postselect_rate = static_cast<double>(res.accepted) / static_cast<double>(trials);
  res.zero_accepted = res.accepted == 0;

  if (options.method == MemoryMethod::kRejection) {
    if (res.zero_accepted) {
      res.logical_error_rate = std::numeric_limits<double>::quiet_NaN();
      res.logical_stderr = std::numeric_limits<double>::quiet_NaN();
      return res;
    }
    double odd = 0;
    for (auto p : kept_parity) odd += p;
    double n = static_cast<double>(kept_parity.size());
    res.logical_error_rate = odd / n;
    res.logical_stderr = std::sqrt(res.logical_error_rate * (1 - res.logical_error_rate) / n);
    return res;
  }

  // Metropolis walk over cycles with weight (q/(1-q))^|E|, started from the empty cycle.
  if (q == 0 || q == 1) {
    res.logical_error_rate = 0;
    res.logical_stderr = 0;
    if (q == 1) {
      // Every face flipped: a cycle iff each cell has even face count, which holds (6 faces).
      int cut = 0;
      for (auto c : fc.on_cut) cut ^= c;
      res.logical_error_rate = cut;
    }
    return res;
  }
  std::fill(err.begin(), err.end(), 0);
  const double log_w = std::log(q / (1 - q));
  CounterRng rng(seed, 0, kChainStream);
  int cut = 0;
  auto attempt = [&](std::span<const std::uint32_t> faces) {
    int delta = 0, cut_flip = 0;
    for (auto f : faces) {
      delta += err[f] ? -1 : 1;
      cut_flip ^= fc.on_cut[f];
    }
    double log_accept = delta * log_w;
    if (log_accept < 0 && std::log(rng.uniform()) >= log_accept) return;
    for (auto f : faces) err[f] ^= 1;
    cut ^= cut_flip;
  };
  auto sweep = [&] {
    std::size_t moves = fc.plaquettes.size() + fc.windings.size();
    for (std::size_t m = 0; m < moves; ++m) {
      std::size_t k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(moves));
      if (k < fc.plaquettes.size()) {
        attempt(fc.plaquettes[k]);
      } else {
        attempt(fc.windings[k - fc.plaquettes.size()]);
      }
    }
  };
  for (std::uint64_t s = 0; s < options.burn_in_sweeps; ++s) sweep();
  std::vector<std::uint8_t> series(trials);
  double odd = 0;
  for (std::uint64_t s = 0; s < trials; ++s) {
    sweep();
    series[s] = static_cast<std::uint8_t>(cut);
    odd += cut;
  }
  res.logical_error_rate = odd / static_cast<double>(trials);
  res.logical_stderr = batch_stderr(series, options.batches);
  return res;
}

}  // namespace cqc
