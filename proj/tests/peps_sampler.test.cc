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


#include "cqc/peps_sampler.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <bit>
#include <cmath>
#include <numbers>

#include "cqc/dense_oracle.h"
#include "cqc/errors.h"

namespace cqc {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr std::uint64_t kShots = 100000;

std::size_t pack(const std::vector<std::uint8_t>& bits) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) k |= static_cast<std::size_t>(bits[j]) << j;
  return k;
}

double sampled_tv(const SiteLattice& lattice, SamplerMode mode, std::uint64_t seed) {
  GeneralCircuitSampler sampler(lattice, mode);
  auto exact = exact_distribution(lattice);
  std::vector<double> hist(exact.size(), 0.0);
  for (std::uint64_t s = 0; s < kShots; ++s) hist[pack(sampler.sample(seed, s))] += 1.0 / kShots;
  return total_variation(hist, exact);
}

Eigen::Matrix2cd input_rho(double alpha, double q) {
  double r = 1 - 2 * q;
  return bloch_to_density(Eigen::Vector3d(r * std::cos(2 * alpha), -r * std::sin(2 * alpha), 0));
}

MixtureItem fixed_site(int site, std::array<double, 2> diag) {
  MixtureItem it;
  it.site_a = site;
  it.weights = {1.0};
  it.diag_a = {diag};
  return it;
}

TEST(NoiseAllocation, ReproducesSiteDephasing) {
  for (auto mode : {SamplerMode::kStabilizerMixture, SamplerMode::kSeparableMps}) {
    auto lat = SiteLattice::grid(2, 3, kQuarterPi, 0.35, 0);
    auto noise = allocate_noise(lat, mode);
    EXPECT_LT(allocation_residual(lat, noise), 1e-12);
    for (double q : noise.q_bond) EXPECT_GE(q, 0);
    for (double q : noise.q_input) EXPECT_GE(q, 0);
  }
  auto lat = SiteLattice::grid(2, 3, 0.3, 0.4, 0.1);
  auto sep = allocate_noise(lat, SamplerMode::kSeparableMps);
  for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
    if (lat.bonds()[b].chain) EXPECT_EQ(sep.q_bond[b], 0.0);
  }
}

TEST(NoiseAllocation, RegionChecks) {
  EXPECT_NO_THROW(allocate_noise(SiteLattice::grid(2, 3, kQuarterPi, 0.2, 0), SamplerMode::kStabilizerMixture));
  EXPECT_THROW(allocate_noise(SiteLattice::grid(2, 2, std::numbers::pi / 8, 0, 0), SamplerMode::kStabilizerMixture),
               ConfigError);
  EXPECT_NO_THROW(allocate_noise(SiteLattice::grid(2, 2, std::numbers::pi / 8, 0.45, 0), SamplerMode::kSeparableMps));
  EXPECT_THROW(allocate_noise(SiteLattice::grid(2, 2, kQuarterPi, 0.1, 0), SamplerMode::kSeparableMps), ConfigError);
  // A non-stabilizer input needs enough dephasing to enter the octahedron.
  EXPECT_THROW(allocate_noise(SiteLattice::grid(1, 1, 0, 0.1, std::numbers::pi / 8), SamplerMode::kStabilizerMixture),
               ConfigError);
  EXPECT_NO_THROW(allocate_noise(SiteLattice::grid(1, 1, 0, 0.15, std::numbers::pi / 8), SamplerMode::kStabilizerMixture));
  for (double q : {0.0, 0.2, 0.5}) {
    for (auto mode : {SamplerMode::kStabilizerMixture, SamplerMode::kSeparableMps}) {
      EXPECT_NO_THROW(allocate_noise(SiteLattice::grid(2, 2, 0, q, 0), mode));
    }
  }
}

TEST(SiteLattice, Validation) {
  EXPECT_THROW(SiteLattice::grid(0, 2, 0.1, 0.1, 0), ConfigError);
  EXPECT_THROW(SiteLattice::grid(2, 2, 1.0, 0.1, 0), ConfigError);
  EXPECT_THROW(SiteLattice::grid(2, 2, 0.1, 0.7, 0), ConfigError);
  EXPECT_THROW(SiteLattice(1, 2, {{}, {}}, {{0, 5, 0.1, false}}), ConfigError);
  auto g = SiteLattice::grid(2, 3, 0.1, 0.1, 0);
  EXPECT_EQ(g.bonds().size(), 7u);
  EXPECT_EQ(g.bonds_at(1).size(), 3u);
  EXPECT_EQ(sampler_mode_from_string(to_string(SamplerMode::kSeparableMps)), SamplerMode::kSeparableMps);
  EXPECT_THROW(sampler_mode_from_string("tensor"), ConfigError);
}

// Fixed |0> on site 0 plus a bond drawing |00> or |++> with equal prior.
TEST(Posterior, HandComputedSingleBond) {
  MixtureItem bond;
  bond.site_a = 0;
  bond.site_b = 1;
  bond.weights = {0.5, 0.5};
  bond.diag_a = {{1, 0}, {0.5, 0.5}};
  bond.diag_b = {{1, 0}, {0.5, 0.5}};
  std::vector<MixtureItem> items = {fixed_site(0, {1, 0}), bond};
  auto exact = posterior_exact(items, 2);
  EXPECT_NEAR((exact[{0, 0}]), 2.0 / 3, 1e-12);
  EXPECT_NEAR((exact[{0, 1}]), 1.0 / 3, 1e-12);

  std::uint64_t ones = 0;
  for (std::uint64_t s = 0; s < kShots; ++s) {
    CounterRng rng(9, s, 0);
    ones += posterior_bond_sampling(items, 2, rng)[1];
  }
  boost::math::binomial_distribution<double> dist(kShots, 1.0 / 3);
  double lo = boost::math::cdf(dist, static_cast<double>(ones));
  double hi = boost::math::cdf(boost::math::complement(dist, static_cast<double>(ones - 1)));
  EXPECT_GT(2 * std::min(lo, hi), 1e-3) << ones;
}

TEST(Posterior, UniformDiagonalsLeavePriorUnchanged) {
  MixtureItem a;
  a.site_a = 0;
  a.site_b = 1;
  a.weights = {0.2, 0.3, 0.5};
  a.diag_a = a.diag_b = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  MixtureItem b = a;
  b.site_a = 1;
  b.site_b = 2;
  b.weights = {0.6, 0.4, 0.0};
  std::vector<MixtureItem> items = {a, b};
  auto exact = posterior_exact(items, 3);
  for (const auto& [cfg, p] : exact) EXPECT_NEAR(p, a.weights[cfg[0]] * b.weights[cfg[1]], 1e-12);
  EXPECT_EQ(exact.size(), 6u);
}

TEST(Posterior, Errors) {
  std::vector<MixtureItem> clash = {fixed_site(0, {1, 0}), fixed_site(0, {0, 1})};
  CounterRng rng(1, 0, 0);
  EXPECT_THROW(posterior_bond_sampling(clash, 1, rng), ConfigError);
  EXPECT_THROW(posterior_exact(clash, 1), ConfigError);

  MixtureItem corr;
  corr.site_a = 0;
  corr.site_b = 1;
  corr.weights = {0.5, 0.5};
  corr.diag_a = corr.diag_b = {{1, 0}, {0, 1}};
  std::vector<MixtureItem> one = {corr};
  EXPECT_NO_THROW(posterior_bond_sampling(one, 2, rng));
  std::vector<MixtureItem> two = {corr, corr};
  EXPECT_THROW(posterior_bond_sampling(two, 2, rng), ConfigError);

  std::vector<MixtureItem> bad = {fixed_site(3, {1, 0})};
  EXPECT_THROW(posterior_bond_sampling(bad, 2, rng), ConfigError);
}

double posterior_tv(double q, std::uint64_t shots) {
  auto lat = SiteLattice::grid(2, 2, kQuarterPi, q, 0);
  GeneralCircuitSampler sampler(lat, SamplerMode::kStabilizerMixture);
  auto exact = posterior_exact(sampler.items(), lat.num_sites());
  std::map<std::vector<int>, double> hist;
  for (std::uint64_t s = 0; s < shots; ++s) {
    CounterRng rng(4, s, 0);
    hist[posterior_bond_sampling(sampler.items(), lat.num_sites(), rng)] += 1.0 / static_cast<double>(shots);
  }
  double tv = 0;
  for (const auto& [cfg, p] : exact) tv += std::abs(p - (hist.count(cfg) ? hist[cfg] : 0.0));
  for (const auto& [cfg, p] : hist) {
    if (!exact.count(cfg)) tv += p;
  }
  return tv / 2;
}

// About 250 assignments carry weight at q = 0.1, for a sampling floor near 0.005 at 1e5 draws.
TEST(Posterior, MatchesBruteForceOnTwoByTwo) { EXPECT_LT(posterior_tv(0.1, kShots), 0.01); }

// At q = 0.2 the floor at 1e5 draws is itself close to 0.01, so this point gets 1e6 draws.
TEST(Posterior, MatchesBruteForceAtHigherNoise) { EXPECT_LT(posterior_tv(0.2, 10 * kShots), 0.01); }

TEST(Chain, ProductBondsMatchDenseExactly) {
  auto lat = SiteLattice::grid(1, 2, 0, 0.1, 0.3);
  Chain c;
  c.sites = {0, 1};
  c.local = {input_rho(0.3, 0.1), input_rho(0.3, 0.1)};
  c.bonds = {bond_density_matrix(0, 0).rho};
  auto got = chain_distribution(c);
  auto want = exact_distribution(lat);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-14);
}

TEST(Chain, FourSitesMatchDenseMarginals) {
  const double theta = std::numbers::pi / 8, alpha = 0.2, q = 0.1;
  auto lat = SiteLattice::grid(1, 4, theta, q, alpha);
  std::vector<Eigen::Matrix2cd> local(4, input_rho(alpha, q));
  std::vector<ResidualBond> residual;
  for (const auto& b : lat.bonds()) residual.push_back({b.a, b.b, bond_density_matrix(theta, 0).rho});
  auto chains = build_chains(4, local, residual);
  ASSERT_EQ(chains.size(), 1u);
  auto got = chain_marginals(chains[0]);
  auto exact = exact_distribution(lat);
  auto want = x_marginals(exact, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[chains[0].sites[i]], want[chains[0].sites[i]], 1e-9);
  auto dist = chain_distribution(chains[0]);
  double sum = 0;
  for (double p : dist) sum += p;
  EXPECT_NEAR(sum, 1, 1e-10);
}

TEST(Chain, SequentialConditionalsAreExact) {
  Chain c;
  c.sites = {0, 1, 2, 3, 4};
  for (int i = 0; i < 5; ++i) c.local.push_back(input_rho(0.1 * i, 0.05 * i));
  for (int i = 0; i < 4; ++i) c.bonds.push_back(bond_density_matrix(0.15 * (i + 1), 0.02 * i).rho);
  auto dist = chain_distribution(c);
  for (std::uint64_t s = 0; s < 50; ++s) {
    CounterRng rng(2, s, 0);
    std::vector<double> cond;
    auto bits = sample_chain(c, rng, &cond);
    std::size_t prefix = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      double p_prefix = 0, p_one = 0;
      for (std::size_t m = 0; m < dist.size(); ++m) {
        if ((m & ((std::size_t{1} << i) - 1)) != prefix) continue;
        p_prefix += dist[m];
        if ((m >> i) & 1) p_one += dist[m];
      }
      EXPECT_GE(cond[i], 0);
      EXPECT_LE(cond[i], 1);
      EXPECT_NEAR(cond[i], p_one / p_prefix, 1e-10);
      prefix |= static_cast<std::size_t>(bits[i]) << i;
    }
  }
}

TEST(Chain, ReversedBondOrientation) {
  std::vector<Eigen::Matrix2cd> local = {input_rho(0.1, 0.0), input_rho(0.4, 0.1)};
  Eigen::Matrix4cd rho = bond_density_matrix(0.3, 0.05).rho;
  // An asymmetric bond, so orientation matters.
  Eigen::Matrix4cd skew = 0.5 * rho + 0.5 * Eigen::kroneckerProduct(input_rho(0.2, 0), input_rho(0.0, 0.3)).eval();
  Eigen::Matrix4cd skew_swapped = skew;
  skew_swapped.row(1).swap(skew_swapped.row(2));
  skew_swapped.col(1).swap(skew_swapped.col(2));
  auto fwd = build_chains(2, local, {{0, 1, skew}});
  auto rev = build_chains(2, local, {{1, 0, skew_swapped}});
  auto a = chain_distribution(fwd[0]);
  auto b = chain_distribution(rev[0]);
  std::vector<double> b_by_site(4);
  for (std::size_t m = 0; m < 4; ++m) {
    std::size_t site_bits = 0;
    for (std::size_t i = 0; i < 2; ++i) site_bits |= ((m >> i) & 1) << rev[0].sites[i];
    b_by_site[site_bits] = b[m];
  }
  for (std::size_t m = 0; m < 4; ++m) EXPECT_NEAR(a[m], b_by_site[m], 1e-14);
}

TEST(Chain, NonLinearResidualGraphRejected) {
  std::vector<Eigen::Matrix2cd> local(4, input_rho(0, 0));
  Eigen::Matrix4cd rho = bond_density_matrix(0.2, 0).rho;
  EXPECT_THROW(build_chains(4, local, {{0, 1, rho}, {0, 2, rho}, {0, 3, rho}}), ConfigError);
  EXPECT_THROW(build_chains(3, {local[0], local[1], local[2]}, {{0, 1, rho}, {1, 2, rho}, {2, 0, rho}}), ConfigError);
  SiteLattice ring(1, 3, {{}, {}, {}}, {{0, 1, 0.1, true}, {1, 2, 0.1, true}, {2, 0, 0.1, true}});
  EXPECT_THROW(GeneralCircuitSampler(ring, SamplerMode::kSeparableMps), ConfigError);
}

// Noiseless bonds joined by |0><00..0| + |1><11..1| give the circuit state on 2x2 sites.
TEST(Isometry, ReproducesCircuitStateOnTwoByTwo) {
  const double theta = 0.37, alpha = 0.21;
  auto lat = SiteLattice::grid(2, 2, theta, 0, alpha);
  const auto& bonds = lat.bonds();
  const std::size_t n = lat.num_sites(), v = n + 2 * bonds.size();
  // Virtual register: site centers first, then the two halves of each bond.
  std::vector<Complex> psi(std::size_t{1} << v, 1.0);
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    Complex amp = 1;
    for (std::size_t s = 0; s < n; ++s) {
      int z = (idx >> s) & 1 ? -1 : 1;
      amp *= std::exp(Complex(0, alpha * z)) / std::sqrt(2.0);
    }
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      int za = (idx >> (n + 2 * b)) & 1 ? -1 : 1;
      int zb = (idx >> (n + 2 * b + 1)) & 1 ? -1 : 1;
      amp *= std::exp(Complex(0, theta * za * zb)) / 2.0;
    }
    psi[idx] = amp;
  }
  std::vector<Complex> projected(std::size_t{1} << n, 0.0);
  for (std::size_t x = 0; x < projected.size(); ++x) {
    std::size_t idx = x;
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      idx |= ((x >> bonds[b].a) & 1) << (n + 2 * b);
      idx |= ((x >> bonds[b].b) & 1) << (n + 2 * b + 1);
    }
    projected[x] = psi[idx];
  }
  DenseState dense(std::vector<InputState>(n, InputState::rotated(alpha)));
  for (const auto& b : bonds) dense.apply({GateKind::kZzPhase, b.a, b.b, theta});
  auto want = dense.amplitudes();
  Complex overlap = 0;
  double norm = 0;
  for (std::size_t x = 0; x < projected.size(); ++x) {
    overlap += std::conj(want[x]) * projected[x];
    norm += std::norm(projected[x]);
  }
  EXPECT_NEAR(std::abs(overlap) / std::sqrt(norm), 1.0, 1e-12);
}

TEST(GeneralCircuit, StabilizerModeTwoByThreeAtQuarterPi) {
  EXPECT_LT(sampled_tv(SiteLattice::grid(2, 3, kQuarterPi, 0.2, 0), SamplerMode::kStabilizerMixture, 1), 0.01);
}

TEST(GeneralCircuit, SeparableModeTwoByTwo) {
  EXPECT_LT(sampled_tv(SiteLattice::grid(2, 2, std::numbers::pi / 8, 0.45, 0), SamplerMode::kSeparableMps, 1), 0.01);
}

TEST(GeneralCircuit, ProductBondsGiveIndependentCoins) {
  const double q = 0.3;
  for (auto mode : {SamplerMode::kStabilizerMixture, SamplerMode::kSeparableMps}) {
    auto lat = SiteLattice::grid(2, 2, 0, q, 0);
    auto exact = exact_distribution(lat);
    for (std::size_t m = 0; m < exact.size(); ++m) {
      int ones = std::popcount(m);
      EXPECT_NEAR(exact[m], std::pow(q, ones) * std::pow(1 - q, 4 - ones), 1e-12);
    }
    EXPECT_LT(sampled_tv(lat, mode, 3), 0.01) << to_string(mode);
  }
}

TEST(GeneralCircuit, OutsideRegionRejected) {
  EXPECT_THROW(simulate_general_circuit(SiteLattice::grid(2, 2, std::numbers::pi / 8, 0.05, 0),
                                        SamplerMode::kStabilizerMixture, 1),
               ConfigError);
  EXPECT_THROW(simulate_general_circuit(SiteLattice::grid(2, 2, std::numbers::pi / 8, 0.05, 0),
                                        SamplerMode::kSeparableMps, 1),
               ConfigError);
}

TEST(GeneralCircuit, Reproducible) {
  auto lat = SiteLattice::grid(2, 3, kQuarterPi, 0.45, 0);
  for (auto mode : {SamplerMode::kStabilizerMixture, SamplerMode::kSeparableMps}) {
    GeneralCircuitSampler s(lat, mode);
    for (std::uint64_t shot = 0; shot < 20; ++shot) EXPECT_EQ(s.sample(5, shot), s.sample(5, shot));
    EXPECT_EQ(s.sample(5, 3), simulate_general_circuit(lat, mode, 5, 3));
  }
}

}  // namespace
}  // namespace cqc
