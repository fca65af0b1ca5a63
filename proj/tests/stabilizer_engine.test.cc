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

#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "cqc/dense_oracle.h"
#include "cqc/errors.h"
#include "cqc/memory_experiment.h"

namespace cqc {
namespace {

std::shared_ptr<const RhgLattice> periodic(int l) {
  return std::make_shared<RhgLattice>(build_lattice({l, l, l}, Boundary::kPeriodic));
}

double binomial_two_sided_p(std::uint64_t k, std::uint64_t n, double p) {
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  double lo = boost::math::cdf(dist, static_cast<double>(k));
  double hi = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
  return std::min(1.0, 2 * std::min(lo, hi));
}

TEST(Octahedron, Examples) {
  auto plus = octahedron_mixture(0, 0);
  EXPECT_NEAR(plus.weights[0], 1.0, 1e-15);
  for (int k = 1; k < 6; ++k) EXPECT_NEAR(plus.weights[k], 0.0, 1e-15);

  auto edge = octahedron_mixture(std::numbers::pi / 8, 0.146447);
  double sum = 0;
  for (double w : edge.weights) {
    EXPECT_GE(w, 0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1, 1e-12);
  auto b = edge.bloch();
  double r = 1 - 2 * 0.146447;
  EXPECT_NEAR(b[0], r * std::cos(std::numbers::pi / 4), 1e-12);
  EXPECT_NEAR(b[1], -r * std::sin(std::numbers::pi / 4), 1e-12);

  EXPECT_THROW(octahedron_mixture(std::numbers::pi / 8, 0.10), ConfigError);
}

TEST(Octahedron, ReproducesBlochVectorsInside) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    double x = u(rng), y = u(rng), z = u(rng);
    double l1 = std::abs(x) + std::abs(y) + std::abs(z);
    if (l1 > 1) {
      EXPECT_THROW(octahedron_mixture_from_bloch(x, y, z), ConfigError);
      continue;
    }
    auto m = octahedron_mixture_from_bloch(x, y, z);
    auto b = m.bloch();
    EXPECT_NEAR(b[0], x, 1e-14);
    EXPECT_NEAR(b[1], y, 1e-14);
    EXPECT_NEAR(b[2], z, 1e-14);
  }
}

TEST(Compile, Examples) {
  std::vector<InputState> in = {InputState::rotated(0.3), InputState::plus()};
  std::vector<std::vector<std::uint32_t>> adj = {{1}, {0}};
  std::vector<std::uint8_t> zero = {0, 0};
  auto same = compile_randomized_inputs(in, adj, zero, zero);
  for (const auto& c : same.inputs) {
    EXPECT_FALSE(c.xi);
    EXPECT_FALSE(c.nu_bar);
  }
  EXPECT_EQ(same.nu, zero);

  std::vector<InputState> one = {InputState::rotated(0.3)};
  std::vector<std::vector<std::uint32_t>> none = {{}};
  std::vector<std::uint8_t> xi = {1}, nu = {0};
  auto c = compile_randomized_inputs(one, none, xi, nu);
  EXPECT_TRUE(c.inputs[0].xi);
  EXPECT_FALSE(c.inputs[0].nu_bar);
  EXPECT_EQ(c.nu[0], 0);

  std::vector<std::uint8_t> xi2 = {1, 0}, nu2 = {0, 1};
  auto d = compile_randomized_inputs(in, adj, xi2, nu2);
  EXPECT_FALSE(d.inputs[0].nu_bar);
  EXPECT_FALSE(d.inputs[1].nu_bar);  // nu = 1 cancelled by the neighbor's xi

  std::vector<std::vector<std::uint32_t>> short_adj = {{1}};
  EXPECT_THROW(compile_randomized_inputs(in, short_adj, zero, zero), ConfigError);
}

// One qubit exp(i theta Z)|+>, compiled frame, arbitrary CPTP noise, X measurement, reinterpretation.
TEST(Compile, TwirlReproducesDephasingStatistics) {
  std::mt19937_64 chan_rng(17);
  const std::uint64_t shots = 100000;
  const double theta = 0.37;
  std::vector<CptpSpec> channels = {CptpSpec::amplitude_damping(0.35), CptpSpec::depolarizing(0.2)};
  for (int k = 0; k < 4; ++k) channels.push_back(CptpSpec::random(chan_rng, 1 + k));
  std::vector<InputState> in = {InputState::rotated(theta)};
  std::vector<std::vector<std::uint32_t>> adj = {{}};
  for (std::size_t c = 0; c < channels.size(); ++c) {
    std::array<double, 4> p_minus{};
    for (int frame = 0; frame < 4; ++frame) {
      DenseCircuit dc;
      dc.n = 1;
      dc.inputs = in;
      if (frame & 2) dc.gates.push_back({GateKind::kZ, 0, 0, 0});
      if (frame & 1) dc.gates.push_back({GateKind::kX, 0, 0, 0});
      dc.kraus_noise = {{0, channels[c]}};
      p_minus[frame] = dense_oracle(dc)[1];
    }
    std::uint64_t ones = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
      auto compiled = compile_randomized_inputs(in, adj, 1234 + c, s);
      int frame = (compiled.inputs[0].xi ? 1 : 0) | (compiled.inputs[0].nu_bar ? 2 : 0);
      CounterRng r(99 + c, s);
      bool m = r.uniform() < p_minus[frame];
      ones += m ^ compiled.nu[0];
    }
    double q = twirl_to_dephasing(channels[c]);
    double expected = (1 - (1 - 2 * q) * std::cos(2 * theta)) / 2;
    EXPECT_GT(binomial_two_sided_p(ones, shots, expected), 0.001) << "channel " << c;
  }
}

TEST(Circuit, NoiselessSyndromesAreTrivial) {
  for (bool randomize : {false, true}) {
    CircuitRun run;
    run.lattice = periodic(2);
    run.seed = 5;
    run.randomize_inputs = randomize;
    for (std::uint64_t s = 0; s < 20; ++s) {
      run.shot = s;
      auto r = run_noisy_circuit(run);
      for (auto v : r.syndromes) EXPECT_EQ(v, 1);
      ASSERT_EQ(r.syndromes.size(), 8u);
    }
  }
}

TEST(Circuit, DeliberateZFlipsTwoCells) {
  CircuitRun run;
  run.lattice = periodic(3);
  run.seed = 8;
  run.noise.assign(run.lattice->num_qubits(), PauliChannel::identity());
  QubitId face = *run.lattice->find({1, 1, 2});
  run.noise[index_of(face)] = {0, 0, 0, 1};
  auto r = run_noisy_circuit(run);
  std::vector<std::size_t> flipped;
  for (std::size_t c = 0; c < r.syndromes.size(); ++c) {
    if (r.syndromes[c] == -1) flipped.push_back(c);
  }
  ASSERT_EQ(flipped.size(), 2u);
  for (auto c : flipped) {
    const auto& faces = run.lattice->cells()[c].faces;
    EXPECT_NE(std::find(faces.begin(), faces.end(), face), faces.end());
  }
}

TEST(Circuit, MeanSyndromeMatchesAnalytic) {
  for (double q : {0.0, 0.05, 0.134, 0.25, 0.4}) {
    CircuitRun run;
    run.lattice = periodic(4);
    run.seed = 42;
    run.noise.assign(run.lattice->num_qubits(), PauliChannel::dephasing(q));
    auto s = run_shots(run, 100000);
    double expected = std::pow(1 - 2 * q, 6);
    if (q == 0) {
      EXPECT_EQ(s.mean_syndrome, 1.0);
    } else {
      EXPECT_LE(std::abs(s.mean_syndrome - expected), 3 * s.stderr_syndrome) << "q=" << q;
    }
  }
}

TEST(Circuit, ReproducibleAcrossThreadCounts) {
  CircuitRun run;
  run.lattice = periodic(2);
  run.seed = 77;
  run.randomize_inputs = true;
  run.noise.assign(run.lattice->num_qubits(), PauliChannel::depolarizing(0.1));
  std::vector<ShotResult> a, b, c;
  run_shots(run, 200, 1, &a);
  run_shots(run, 200, 5, &b);
  for (std::size_t s = 0; s < a.size(); ++s) EXPECT_EQ(a[s].outcomes, b[s].outcomes);
  run.seed = 78;
  run_shots(run, 200, 1, &c);
  std::size_t differ = 0;
  for (std::size_t s = 0; s < a.size(); ++s) differ += a[s].outcomes != c[s].outcomes;
  EXPECT_GT(differ, 150u);
}

// Six-qubit periodic box: sampled distribution of raw outcomes against the dense oracle.
TEST(Circuit, MatchesDenseOracleOnSmallBox) {
  auto lat = periodic(1);
  ASSERT_EQ(lat->num_qubits(), 6u);
  const double theta = std::numbers::pi / 8;
  for (bool randomize : {false, true}) {
    CircuitRun run;
    run.lattice = lat;
    run.seed = 3;
    run.randomize_inputs = randomize;
    run.inputs.assign(6, InputState::plus());
    run.inputs[1] = InputState::rotated(theta);
    run.inputs[4] = InputState::zero();
    run.noise.assign(6, PauliChannel::dephasing(0.05));
    run.noise[1] = PauliChannel::dephasing(0.2);
    run.noise[2] = {0.7, 0.1, 0.1, 0.1};

    DenseCircuit dc;
    dc.n = 6;
    dc.inputs = run.inputs;
    dc.gates = schedule_gates(*lat);
    dc.pauli_noise = run.noise;
    auto exact = dense_oracle(dc);

    const std::uint64_t shots = 100000;
    std::vector<ShotResult> kept;
    run_shots(run, shots, 0, &kept);
    std::vector<double> counts(64, 0);
    for (const auto& r : kept) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < 6; ++j) idx |= std::size_t{r.reinterpreted[j]} << j;
      counts[idx] += 1;
    }
    for (std::size_t i = 0; i < 64; ++i) {
      double p = exact[i];
      double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / shots);
      EXPECT_LE(std::abs(counts[i] / shots - p), 4.5 * sigma + 1e-12) << "outcome " << i;
    }
  }
}

TEST(Circuit, RejectsNonSimulableInput) {
  CircuitRun run;
  run.lattice = periodic(1);
  run.inputs.assign(6, InputState::plus());
  run.inputs[0] = InputState::rotated(std::numbers::pi / 8);
  run.noise.assign(6, PauliChannel::dephasing(0.1));
  EXPECT_THROW(run_noisy_circuit(run), ConfigError);
  run.noise.clear();
  EXPECT_THROW(run_noisy_circuit(run), ConfigError);
}

TEST(Memory, NoiselessIsPerfect) {
  auto lat = build_lattice({2, 2, 2}, Boundary::kPeriodic);
  for (auto method : {MemoryMethod::kRejection, MemoryMethod::kMarkovChain}) {
    MemoryOptions o;
    o.method = method;
    auto r = postselected_memory_experiment(lat, 0, 1000, 1, o);
    EXPECT_EQ(r.postselect_rate, 1.0);
    EXPECT_EQ(r.logical_error_rate, 0.0);
  }
  EXPECT_THROW(postselected_memory_experiment(build_lattice({2, 2, 2}, Boundary::kOpen), 0.1, 10, 1), ConfigError);
}

TEST(Memory, ZeroAcceptedIsReported) {
  MemoryOptions o;
  o.method = MemoryMethod::kRejection;
  auto r = postselected_memory_experiment(build_lattice({4, 4, 4}, Boundary::kPeriodic), 0.3, 1000, 1, o);
  EXPECT_TRUE(r.zero_accepted);
  EXPECT_TRUE(std::isnan(r.logical_error_rate));
}

TEST(Memory, MarkovChainAgreesWithRejection) {
  auto lat = build_lattice({2, 2, 2}, Boundary::kPeriodic);
  for (double q : {0.1, 0.25}) {
    auto chain = postselected_memory_experiment(lat, q, 100000, 3);
    MemoryOptions o;
    o.method = MemoryMethod::kRejection;
    auto rej = postselected_memory_experiment(lat, q, 1000000, 4, o);
    double sigma = std::hypot(chain.logical_stderr, rej.logical_stderr);
    EXPECT_LE(std::abs(chain.logical_error_rate - rej.logical_error_rate), 3 * sigma) << "q=" << q;
  }
}

TEST(Memory, SizeTrends) {
  std::vector<MemoryResult> low, high;
  for (int l : {2, 3, 4}) {
    auto lat = build_lattice({l, l, l}, Boundary::kPeriodic);
    low.push_back(postselected_memory_experiment(lat, 0.10, 100000, 10 + l));
    high.push_back(postselected_memory_experiment(lat, 0.30, 100000, 20 + l));
  }
  for (int k = 0; k + 1 < 3; ++k) {
    double s_low = std::hypot(low[k].logical_stderr, low[k + 1].logical_stderr);
    EXPECT_GT(low[k].logical_error_rate - low[k + 1].logical_error_rate, 3 * s_low);
    double s_high = std::hypot(high[k].logical_stderr, high[k + 1].logical_stderr);
    EXPECT_GT(high[k + 1].logical_error_rate - high[k].logical_error_rate, -3 * s_high);
  }
}

}  // namespace
}  // namespace cqc
