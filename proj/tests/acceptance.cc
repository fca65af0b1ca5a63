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


// Acceptance runner: one PASS/FAIL line per criterion. Set CQC_EXTENDED=1 to
// run the census to length 14 instead of 12.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cqc/dense_oracle.h"
#include "cqc/injection_site.h"
#include "cqc/landscape.h"
#include "cqc/memory_experiment.h"
#include "cqc/noise_thresholds.h"
#include "cqc/peps_sampler.h"
#include "cqc/rhg_lattice.h"
#include "cqc/saw_census.h"
#include "cqc/stabilizer_engine.h"
#include "oracles.h"

namespace {

using namespace cqc;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::array<std::uint64_t, 15> kPrimal = {0, 1, 0, 0, 7, 0, 106, 0, 1520, 0, 24220, 0, 409208, 0, 7165474};
constexpr std::array<std::uint64_t, 15> kDual = {0,    0,     0,     4,      8,      52,      200,     1060,
                                                 4084, 23128, 90636, 507936, 2039320, 11220284, 45854572};

int census_len() {
  const char* e = std::getenv("CQC_EXTENDED");
  return e != nullptr && std::string(e) == "1" ? 14 : 12;
}

struct Censuses {
  WalkCensus primal;
  WalkCensus dual;
};

const Censuses& censuses() {
  static const Censuses c = [] {
    int len = census_len();
    auto site = injection_site(build_lattice(census_lattice_dims(len), Boundary::kOpen));
    return Censuses{enumerate_chains(site, ChainKind::kPrimal, len), enumerate_chains(site, ChainKind::kDual, len)};
  }();
  return c;
}

Outcome table_regression() {
  auto start = Clock::now();
  const auto& c = censuses();
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream d;
  bool ok = true;
  for (int l = 1; l <= census_len(); ++l) {
    if (c.primal.count(l) != kPrimal[l]) {
      ok = false;
      d << "primal L" << l << " " << c.primal.count(l) << "!=" << kPrimal[l] << "; ";
    }
    if (c.dual.count(l) != kDual[l]) {
      ok = false;
      d << "dual L" << l << " " << c.dual.count(l) << "!=" << kDual[l] << "; ";
    }
  }
  d << "L<=" << census_len() << " in " << secs << " s";
  return {ok && (census_len() > 12 || secs < 60), d.str()};
}

Outcome polynomial_identity() {
  auto p = census_to_polynomials(censuses().primal, censuses().dual, 6);
  auto nonzero = [](const std::map<int, std::int64_t>& m) {
    std::map<int, std::int64_t> r;
    for (auto [k, v] : m) {
      if (v != 0) r[k] = v;
    }
    return r;
  };
  std::map<int, std::int64_t> want_x = {{3, 4}, {4, 8}, {5, 52}, {6, 200}};
  std::map<int, std::int64_t> want_z = {{1, 1}, {4, 7}, {6, 106}};
  bool ok = nonzero(p.x_coeffs) == want_x && nonzero(p.z_coeffs) == want_z;
  return {ok, ok ? "qX and qZ coefficient maps exact" : "coefficient maps differ"};
}

Outcome threshold_constants() {
  double qd = distillation_threshold();
  double q6 = dephasing_topological_threshold().solved_value;
  auto polys = census_to_polynomials(censuses().primal, censuses().dual, census_len());
  double root = solve_depth4_boundary(polys).solved_value;
  auto tx = truncation_tail(censuses().dual, root, census_len() + 1);
  auto tz = truncation_tail(censuses().primal, root, census_len() + 1);
  bool ok = std::abs(qd - (1 - std::numbers::sqrt2 / 2) / 2) < 1e-12 && std::abs(q6 - 1.0 / 6) < 1e-9 &&
            root >= 0.131 && root <= 0.137 && !tx.diverges && !tz.diverges && tx.value < 1e-3 && tz.value < 1e-3;
  std::ostringstream d;
  d << "distillation " << qd << ", topological " << q6 << ", depth-four root " << root << ", tails " << tx.value
    << "/" << tz.value;
  return {ok, d.str()};
}

Outcome verification_anchors() {
  double a = expected_parity(0.134);
  double b = expected_parity(DepolModel{0.0270, 0.0270});
  std::ostringstream d;
  d << "dephasing " << a << ", depolarizing " << b;
  return {std::abs(a - 0.154) <= 1e-3 && std::abs(b - 0.225) <= 1e-3, d.str()};
}

Outcome monte_carlo_parity() {
  auto start = Clock::now();
  auto lattice = std::make_shared<RhgLattice>(build_lattice({4, 4, 4}, Boundary::kPeriodic));
  bool ok = true;
  std::ostringstream d;
  for (double q : {0.05, 0.134, 0.25}) {
    CircuitRun run;
    run.lattice = lattice;
    run.noise.assign(lattice->num_qubits(), PauliChannel::dephasing(q));
    run.seed = 2024;
    auto s = run_shots(run, 100000);
    double want = std::pow(1 - 2 * q, 6);
    double z = (s.mean_syndrome - want) / s.stderr_syndrome;
    ok = ok && std::abs(z) <= 3;
    d << "q=" << q << " z=" << z << "; ";
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  d << secs << " s";
  return {ok && secs < 120, d.str()};
}

Outcome stabilizer_oracle() {
  auto r = stabilizer_oracle_check(200, 10, 12, 7);
  std::ostringstream d;
  d << r.circuits << " circuits, max deviation " << r.max_deviation;
  return {r.circuits == 200 && r.max_deviation <= 1e-9, d.str()};
}

Outcome peps_oracle() {
  struct Point {
    SamplerMode mode;
    double theta;
    double q;
  };
  const double pi4 = std::numbers::pi / 4;
  const std::array<Point, 6> points = {{{SamplerMode::kStabilizerMixture, pi4, 0.0},
                                        {SamplerMode::kStabilizerMixture, pi4, 0.02},
                                        {SamplerMode::kStabilizerMixture, 0.02, 0.30},
                                        {SamplerMode::kSeparableMps, 0.02, 0.10},
                                        {SamplerMode::kSeparableMps, 0.10, 0.15},
                                        {SamplerMode::kSeparableMps, 0.20, 0.20}}};
  bool ok = true;
  std::ostringstream d;
  d << "max TV ";
  double worst = 0;
  std::uint64_t seed = 100;
  for (auto [rows, cols] : {std::pair{2, 2}, std::pair{2, 3}}) {
    for (const auto& p : points) {
      auto cmp = compare_with_dense(SiteLattice::grid(rows, cols, p.theta, p.q, 0.0), p.mode, 100000, seed++);
      worst = std::max(worst, cmp.tv);
      if (cmp.tv >= 0.01) {
        ok = false;
        d.str("");
        d << rows << "x" << cols << " " << to_string(p.mode) << " theta=" << p.theta << " q=" << p.q
          << " TV=" << cmp.tv << " (floor " << cmp.sampling_floor << "); max TV ";
      }
    }
  }
  d << worst << " over 12 comparisons";
  return {ok, d.str()};
}

Outcome boundary_anchors() {
  double q0 = stabilizer_curve(0);
  auto x = classical_crossing();
  auto grid = check_concurrence_boundary(50, 50);
  bool ok = std::abs(q0 - 0.146447) <= 1e-4 && std::abs(x.phi - 0.0144) <= 0.002 && grid.mismatches == 0 &&
            grid.max_boundary_deviation < 1e-6;
  std::ostringstream d;
  d << "q(phi=0) " << q0 << ", crossing phi " << x.phi << ", concurrence grid mismatches " << grid.mismatches
    << " max deviation " << grid.max_boundary_deviation;
  return {ok, d.str()};
}

Outcome postbqp_bound() {
  auto start = Clock::now();
  std::int64_t cases = 0, violations = 0;
  for (int n = 1; n <= 10; ++n) {
    auto c = check_postbqp_bound(n);
    cases += c.cases;
    violations += c.violations;
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream d;
  d << cases << " cases, " << violations << " violations, " << secs << " s";
  return {violations == 0 && secs < 10, d.str()};
}

Outcome memory_and_formulas() {
  std::vector<MemoryResult> low, high;
  for (int l : {2, 3, 4}) {
    auto lat = build_lattice({l, l, l}, Boundary::kPeriodic);
    low.push_back(postselected_memory_experiment(lat, 0.10, 100000, 310 + l));
    high.push_back(postselected_memory_experiment(lat, 0.30, 100000, 320 + l));
  }
  bool trend = true;
  for (int k = 0; k + 1 < 3; ++k) {
    double s_low = std::hypot(low[k].logical_stderr, low[k + 1].logical_stderr);
    trend = trend && low[k].logical_error_rate - low[k + 1].logical_error_rate > 3 * s_low;
    double s_high = std::hypot(high[k].logical_stderr, high[k + 1].logical_stderr);
    trend = trend && high[k + 1].logical_error_rate - high[k].logical_error_rate > -3 * s_high;
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u1(0, 0.75), u2(0, 15.0 / 16);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    double p1 = u1(rng), p2 = u2(rng);
    auto r = depolarizing_rates({p1, p2});
    auto o = oracle::depolarizing_oracle(p1, p2);
    worst = std::max({worst, std::abs(r.q_ind - static_cast<double>(o.q_ind)),
                      std::abs(r.q_cor - static_cast<double>(o.q_cor)), std::abs(r.p_s - static_cast<double>(o.p_s))});
  }
  std::ostringstream d;
  d << "q=0.10 rates";
  for (const auto& r : low) d << " " << r.logical_error_rate;
  d << "; q=0.30 rates";
  for (const auto& r : high) d << " " << r.logical_error_rate;
  d << "; formula max deviation " << worst;
  return {trend && worst <= 1e-12, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"chain census regression", table_regression},
      {"error polynomial identity", polynomial_identity},
      {"threshold constants", threshold_constants},
      {"verification anchors", verification_anchors},
      {"Monte Carlo parity", monte_carlo_parity},
      {"stabilizer oracle equivalence", stabilizer_oracle},
      {"PEPS oracle equivalence", peps_oracle},
      {"boundary curve anchors", boundary_anchors},
      {"postselection probability bound", postbqp_bound},
      {"memory trends and depolarizing formulas", memory_and_formulas},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
