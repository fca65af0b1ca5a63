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


// Classical sampling of depth-four commuting circuits on a grid of sites, through the
// projected-entangled-pair picture: posterior sampling of bond components, then either
// Gottesman-Knill conditioning or matrix-product contraction of the remaining chains.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cqc/bond_states.h"
#include "cqc/rng.h"
#include "cqc/stabilizer_engine.h"

namespace cqc {

struct SiteBond {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double theta = 0;
  bool chain = false;  // kept entangled in the matrix-product mode
};

struct SiteInput {
  double alpha = 0;  // input exp(i alpha Z)|+>
  double q = 0;      // total dephasing of the physical qubit
};

class SiteLattice {
 public:
  SiteLattice(int rows, int cols, std::vector<SiteInput> sites, std::vector<SiteBond> bonds);

  // rows x cols grid; horizontal bonds are chain bonds.
  static SiteLattice grid(int rows, int cols, double theta, double q, double alpha);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t num_sites() const { return sites_.size(); }
  const std::vector<SiteInput>& sites() const { return sites_; }
  const std::vector<SiteBond>& bonds() const { return bonds_; }
  std::vector<std::uint32_t> bonds_at(std::uint32_t site) const;

 private:
  int rows_;
  int cols_;
  std::vector<SiteInput> sites_;
  std::vector<SiteBond> bonds_;
};

enum class SamplerMode : std::uint8_t { kSeparableMps, kStabilizerMixture };

std::string_view to_string(SamplerMode m);
SamplerMode sampler_mode_from_string(std::string_view s);

// Per-site input dephasing q_k and per-bond dephasing q^(i,j) (both halves).
struct NoiseAllocation {
  std::vector<double> q_input;
  std::vector<double> q_bond;
};

// Splits each site's dephasing between its input and its bonds for the given mode.
// Throws ConfigError when the point lies outside the mode's validity region.
NoiseAllocation allocate_noise(const SiteLattice& lattice, SamplerMode mode);

// Max deviation of 1-2q = (1-2q_k) prod (1-2q_bond) over sites.
double allocation_residual(const SiteLattice& lattice, const NoiseAllocation& noise);

// A convex mixture attached to one site (site_b < 0) or to the two ends of a bond.
// Only the computational-basis diagonal of each component enters the posterior.
struct MixtureItem {
  int site_a = 0;
  int site_b = -1;
  std::vector<double> weights;
  std::vector<std::array<double, 2>> diag_a;
  std::vector<std::array<double, 2>> diag_b;
};

// Samples one component per item, item by item, from the posterior conditioned on every
// site projection succeeding. Unresolved items enter through their averaged diagonal, which
// must factorize across the two ends; at most one item may violate this (it is drawn first).
// Throws ConfigError otherwise, or when the projections cannot all succeed.
std::vector<int> posterior_bond_sampling(std::span<const MixtureItem> items, std::size_t num_sites, CounterRng& rng);

// Brute-force joint posterior over all component assignments (small inputs only).
std::map<std::vector<int>, double> posterior_exact(std::span<const MixtureItem> items, std::size_t num_sites);

// A chain of sites for matrix-product contraction. local[i](x', x) is the entrywise product
// of the single-qubit factors at site i; bonds[i] couples sites i and i+1 (site i first).
struct Chain {
  std::vector<std::uint32_t> sites;
  std::vector<Eigen::Matrix2cd> local;
  std::vector<Eigen::Matrix4cd> bonds;
};

// Exact distribution of the chain's X outcomes (bit i for site i), normalized.
std::vector<double> chain_distribution(const Chain& chain);
// P(outcome -1) per site.
std::vector<double> chain_marginals(const Chain& chain);
// Sequential conditional sampling; `conditionals` receives P(m_i = 1 | m_<i).
std::vector<std::uint8_t> sample_chain(const Chain& chain, CounterRng& rng, std::vector<double>* conditionals = nullptr);

// Residual entangled bonds with their states, after the others are resolved to product states.
struct ResidualBond {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  Eigen::Matrix4cd rho;
};

// Groups sites into chains along the residual bonds. Throws ConfigError "residual graph not 1D"
// when a site has three or more residual bonds or the residual bonds close a cycle.
std::vector<Chain> build_chains(std::size_t num_sites, const std::vector<Eigen::Matrix2cd>& local,
                                const std::vector<ResidualBond>& residual);

class GeneralCircuitSampler {
 public:
  GeneralCircuitSampler(SiteLattice lattice, SamplerMode mode);

  const SiteLattice& lattice() const { return lattice_; }
  SamplerMode mode() const { return mode_; }
  const NoiseAllocation& noise() const { return noise_; }
  const std::vector<BondDecomposition>& decompositions() const { return decompositions_; }
  const std::vector<MixtureItem>& items() const { return items_; }

  std::vector<std::uint8_t> sample(std::uint64_t seed, std::uint64_t shot) const;

 private:
  std::vector<std::uint8_t> sample_stabilizer(const std::vector<int>& components, CounterRng& rng) const;
  std::vector<std::uint8_t> sample_mps(const std::vector<int>& components, CounterRng& rng) const;

  SiteLattice lattice_;
  SamplerMode mode_;
  NoiseAllocation noise_;
  std::vector<BondDecomposition> decompositions_;  // per bond; empty kind for chain bonds in mps mode
  std::vector<OctahedronMixture> input_mixtures_;  // stabilizer mode
  std::vector<Eigen::Matrix2cd> input_states_;      // mps mode
  std::vector<MixtureItem> items_;
  std::vector<int> item_bond_;  // bond index per item, or -1 - site for input items
};

std::vector<std::uint8_t> simulate_general_circuit(const SiteLattice& lattice, SamplerMode mode, std::uint64_t seed,
                                                   std::uint64_t shot = 0);

// Dense reference: inputs, exp(i theta ZZ) per bond, site dephasing, X measurement.
std::vector<double> exact_distribution(const SiteLattice& lattice);

double total_variation(std::span<const double> p, std::span<const double> q);

// Outcome counts over shots [0, shots), indexed with bit i for site i. Deterministic for any thread count.
std::vector<std::uint64_t> sample_histogram(const GeneralCircuitSampler& sampler, std::uint64_t shots, std::uint64_t seed,
                                            unsigned threads = 0);

struct DenseComparison {
  std::uint64_t shots = 0;
  double tv = 0;
  // Expected TV of a correct sampler, sum_k sqrt(p_k (1 - p_k)) / sqrt(2 pi shots).
  double sampling_floor = 0;
  std::vector<double> exact;
  std::vector<double> empirical;
};

DenseComparison compare_with_dense(const SiteLattice& lattice, SamplerMode mode, std::uint64_t shots, std::uint64_t seed,
                                   unsigned threads = 0);

}  // namespace cqc
