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

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "cqc/dense_oracle.h"
#include "cqc/errors.h"
#include "cqc/stabilizer_tableau.h"

namespace cqc {

namespace {

constexpr double kRegionSlack = 1e-9;
constexpr std::uint64_t kPosteriorStream = 21;

std::array<double, 2> diag_of_bloch(const Eigen::Vector3d& r) { return {(1 + r(2)) / 2, (1 - r(2)) / 2}; }

std::array<double, 2> diag_of_eigenstate(PauliEigenstate e) {
  switch (e) {
    case PauliEigenstate::kPlusZ: return {1, 0};
    case PauliEigenstate::kMinusZ: return {0, 1};
    default: return {0.5, 0.5};
  }
}

Eigen::Matrix2cd input_density(double alpha, double q) {
  double r = 1 - 2 * q;
  return bloch_to_density(Eigen::Vector3d(r * std::cos(2 * alpha), -r * std::sin(2 * alpha), 0));
}

Eigen::Matrix4cd swap_halves(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = p(3, 3) = 1;
  p(1, 2) = p(2, 1) = 1;
  return p * rho * p;
}

// c_m(x', x) from the site projection and the X-parity measurement.
double parity_kernel(int m, int xp, int x) {
  if (xp == x) return 0.5;
  return m ? -0.5 : 0.5;
}

struct Ends {
  std::vector<std::vector<std::pair<std::size_t, int>>> at;  // per site: (item, end 0/1)
};

Ends item_ends(std::span<const MixtureItem> items, std::size_t num_sites) {
  Ends e;
  e.at.resize(num_sites);
  for (std::size_t t = 0; t < items.size(); ++t) {
    const auto& it = items[t];
    if (it.site_a < 0 || static_cast<std::size_t>(it.site_a) >= num_sites ||
        it.site_b >= static_cast<int>(num_sites) || it.site_a == it.site_b) {
      throw ConfigError("mixture item refers to an unknown site");
    }
    std::size_t k = it.weights.size();
    if (k == 0 || it.diag_a.size() != k || (it.site_b >= 0 && it.diag_b.size() != k)) {
      throw ConfigError("mixture item is malformed");
    }
    e.at[it.site_a].push_back({t, 0});
    if (it.site_b >= 0) e.at[it.site_b].push_back({t, 1});
  }
  return e;
}

double site_factor(const std::vector<std::pair<std::size_t, int>>& ends,
                   const std::vector<std::array<std::array<double, 2>, 2>>& current) {
  double total = 0;
  for (int x = 0; x < 2; ++x) {
    double prod = 1;
    for (auto [t, end] : ends) prod *= current[t][end][x];
    total += prod;
  }
  return total;
}

}  // namespace

SiteLattice::SiteLattice(int rows, int cols, std::vector<SiteInput> sites, std::vector<SiteBond> bonds)
    : rows_(rows), cols_(cols), sites_(std::move(sites)), bonds_(std::move(bonds)) {
  if (rows <= 0 || cols <= 0) throw ConfigError("site lattice must be non-empty");
  if (sites_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ConfigError("site count does not match rows x cols");
  }
  for (const auto& s : sites_) {
    if (!(s.q >= 0 && s.q <= 0.5)) throw ConfigError("site dephasing outside [0, 1/2]");
  }
  std::vector<int> degree(sites_.size(), 0);
  for (const auto& b : bonds_) {
    if (b.a >= sites_.size() || b.b >= sites_.size() || b.a == b.b) throw ConfigError("bond refers to an unknown site");
    if (!(b.theta >= 0 && b.theta <= std::numbers::pi / 4 + 1e-15)) throw ConfigError("bond angle outside [0, pi/4]");
    if (++degree[b.a] > 4 || ++degree[b.b] > 4) throw ConfigError("site degree exceeds 4");
  }
}

SiteLattice SiteLattice::grid(int rows, int cols, double theta, double q, double alpha) {
  if (rows <= 0 || cols <= 0) throw ConfigError("site lattice must be non-empty");
  std::vector<SiteInput> sites(static_cast<std::size_t>(rows * cols), SiteInput{alpha, q});
  std::vector<SiteBond> bonds;
  auto id = [cols](int r, int c) { return static_cast<std::uint32_t>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) bonds.push_back({id(r, c), id(r, c + 1), theta, true});
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) bonds.push_back({id(r, c), id(r + 1, c), theta, false});
  }
  return SiteLattice(rows, cols, std::move(sites), std::move(bonds));
}

std::vector<std::uint32_t> SiteLattice::bonds_at(std::uint32_t site) const {
  std::vector<std::uint32_t> out;
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (bonds_[b].a == site || bonds_[b].b == site) out.push_back(static_cast<std::uint32_t>(b));
  }
  return out;
}

std::string_view to_string(SamplerMode m) {
  return m == SamplerMode::kSeparableMps ? "separable-mps" : "stabilizer-mixture";
}

SamplerMode sampler_mode_from_string(std::string_view s) {
  if (s == "separable-mps" || s == "separable") return SamplerMode::kSeparableMps;
  if (s == "stabilizer-mixture" || s == "stabilizer") return SamplerMode::kStabilizerMixture;
  throw ConfigError("unknown sampler mode '" + std::string(s) + "'");
}

NoiseAllocation allocate_noise(const SiteLattice& lattice, SamplerMode mode) {
  const auto& sites = lattice.sites();
  const auto& bonds = lattice.bonds();
  const std::size_t n = sites.size();
  std::vector<double> amp(n), input_cap(n, 1.0), share(n);
  for (std::size_t s = 0; s < n; ++s) {
    amp[s] = 1 - 2 * sites[s].q;
    auto at = lattice.bonds_at(static_cast<std::uint32_t>(s));
    int noisy = 0;
    for (auto b : at) noisy += mode == SamplerMode::kStabilizerMixture || !bonds[b].chain;
    double base = amp[s];
    if (mode == SamplerMode::kStabilizerMixture) {
      double a = sites[s].alpha;
      input_cap[s] = 1 / (std::abs(std::cos(2 * a)) + std::abs(std::sin(2 * a)));
      base = amp[s] / input_cap[s];
    }
    share[s] = noisy == 0 ? 1.0 : std::min(1.0, std::pow(std::max(base, 0.0), 1.0 / noisy));
  }

  NoiseAllocation out;
  out.q_bond.assign(bonds.size(), 0.0);
  std::vector<double> bond_amp(bonds.size(), 1.0);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const auto& bond = bonds[b];
    if (mode == SamplerMode::kSeparableMps && bond.chain) continue;
    bond_amp[b] = std::max(share[bond.a], share[bond.b]);
    double limit = mode == SamplerMode::kSeparableMps ? separable_amplitude(bond.theta) : stabilizer_amplitude(bond.theta);
    if (bond_amp[b] > limit + kRegionSlack) {
      throw ConfigError("bond " + std::to_string(b) + " (theta " + std::to_string(bond.theta) + ") is outside the " +
                        std::string(to_string(mode)) + " region: 1-2q = " + std::to_string(bond_amp[b]) + " > " +
                        std::to_string(limit));
    }
    out.q_bond[b] = (1 - bond_amp[b]) / 2;
  }
  out.q_input.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    double prod = 1;
    for (auto b : lattice.bonds_at(static_cast<std::uint32_t>(s))) prod *= bond_amp[b];
    double input_amp = prod > 0 ? amp[s] / prod : input_cap[s];
    if (input_amp > input_cap[s] + kRegionSlack) {
      throw ConfigError("site " + std::to_string(s) + " input is outside the octahedron for the stabilizer-mixture mode");
    }
    out.q_input[s] = (1 - std::min(1.0, input_amp)) / 2;
  }
  return out;
}

double allocation_residual(const SiteLattice& lattice, const NoiseAllocation& noise) {
  double worst = 0;
  for (std::size_t s = 0; s < lattice.num_sites(); ++s) {
    double prod = 1 - 2 * noise.q_input[s];
    for (auto b : lattice.bonds_at(static_cast<std::uint32_t>(s))) prod *= 1 - 2 * noise.q_bond[b];
    worst = std::max(worst, std::abs(prod - (1 - 2 * lattice.sites()[s].q)));
  }
  return worst;
}

std::vector<int> posterior_bond_sampling(std::span<const MixtureItem> items, std::size_t num_sites, CounterRng& rng) {
  Ends ends = item_ends(items, num_sites);
  std::vector<std::array<std::array<double, 2>, 2>> current(items.size());
  std::size_t first = items.size();
  for (std::size_t t = 0; t < items.size(); ++t) {
    const auto& it = items[t];
    std::array<std::array<double, 2>, 2> avg{};
    double joint[2][2] = {{0, 0}, {0, 0}};
    double wsum = 0;
    for (std::size_t k = 0; k < it.weights.size(); ++k) {
      double w = it.weights[k];
      if (w < 0) throw ConfigError("negative mixture weight");
      wsum += w;
      for (int x = 0; x < 2; ++x) {
        avg[0][x] += w * it.diag_a[k][x];
        if (it.site_b >= 0) {
          avg[1][x] += w * it.diag_b[k][x];
          for (int y = 0; y < 2; ++y) joint[x][y] += w * it.diag_a[k][x] * it.diag_b[k][y];
        }
      }
    }
    if (std::abs(wsum - 1) > 1e-9) throw ConfigError("mixture weights do not sum to 1");
    bool factorizes = true;
    if (it.site_b >= 0) {
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) factorizes &= std::abs(joint[x][y] - avg[0][x] * avg[1][y]) <= 1e-9;
      }
    }
    // An unresolved item enters only through its averaged diagonal, which must factorize.
    // The first item drawn is never unresolved, so one exception can go there.
    if (!factorizes) {
      if (first != items.size()) throw ConfigError("averaged bond diagonals do not factorize");
      first = t;
    }
    current[t] = avg;
  }
  if (first == items.size()) first = 0;
  std::vector<std::size_t> order(items.size());
  for (std::size_t t = 0; t < items.size(); ++t) order[t] = t;
  if (!order.empty()) std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first), order.begin() + static_cast<std::ptrdiff_t>(first) + 1);

  std::vector<int> chosen(items.size(), 0);
  std::vector<double> score;
  for (std::size_t t : order) {
    const auto& it = items[t];
    score.assign(it.weights.size(), 0.0);
    double total = 0;
    for (std::size_t k = 0; k < it.weights.size(); ++k) {
      if (it.weights[k] == 0) continue;
      current[t][0] = it.diag_a[k];
      if (it.site_b >= 0) current[t][1] = it.diag_b[k];
      double s = it.weights[k] * site_factor(ends.at[it.site_a], current);
      if (it.site_b >= 0) s *= site_factor(ends.at[it.site_b], current);
      score[k] = s;
      total += s;
    }
    if (!(total > 0)) throw ConfigError("site projection has zero success probability");
    double u = rng.uniform() * total, acc = 0;
    int pick = -1;
    for (std::size_t k = 0; k < score.size(); ++k) {
      if (score[k] <= 0) continue;
      pick = static_cast<int>(k);
      acc += score[k];
      if (u < acc) break;
    }
    chosen[t] = pick;
    current[t][0] = it.diag_a[pick];
    if (it.site_b >= 0) current[t][1] = it.diag_b[pick];
  }
  return chosen;
}

std::map<std::vector<int>, double> posterior_exact(std::span<const MixtureItem> items, std::size_t num_sites) {
  Ends ends = item_ends(items, num_sites);
  std::vector<std::vector<int>> support(items.size());
  double configs = 1;
  for (std::size_t t = 0; t < items.size(); ++t) {
    for (std::size_t k = 0; k < items[t].weights.size(); ++k) {
      if (items[t].weights[k] > 0) support[t].push_back(static_cast<int>(k));
    }
    if (support[t].empty()) throw ConfigError("mixture item has no positive weight");
    configs *= static_cast<double>(support[t].size());
  }
  if (configs > 4e6) throw ResourceGuardError("too many component assignments for exact enumeration");
  std::map<std::vector<int>, double> out;
  std::vector<std::size_t> pos(items.size(), 0);
  std::vector<int> k(items.size());
  std::vector<std::array<std::array<double, 2>, 2>> current(items.size());
  double z = 0;
  for (;;) {
    double w = 1;
    for (std::size_t t = 0; t < items.size(); ++t) {
      k[t] = support[t][pos[t]];
      w *= items[t].weights[k[t]];
      current[t][0] = items[t].diag_a[k[t]];
      if (items[t].site_b >= 0) current[t][1] = items[t].diag_b[k[t]];
    }
    for (std::size_t s = 0; s < num_sites; ++s) w *= site_factor(ends.at[s], current);
    if (w > 0) {
      out[k] = w;
      z += w;
    }
    std::size_t t = 0;
    while (t < items.size() && ++pos[t] == support[t].size()) pos[t++] = 0;
    if (t == items.size()) break;
  }
  if (!(z > 0)) throw ConfigError("site projection has zero success probability");
  for (auto& [cfg, p] : out) p /= z;
  return out;
}

namespace {

using Vec4 = Eigen::Matrix<Complex, 4, 1>;

// Site state index s = 2 x' + x.
Complex local_weight(const Eigen::Matrix2cd& l, int s) { return l(s >> 1, s & 1); }

Complex bond_weight(const Eigen::Matrix4cd& b, int s, int t) {
  int row = 2 * (s >> 1) + (t >> 1);
  int col = 2 * (s & 1) + (t & 1);
  return b(row, col);
}

std::vector<Vec4> right_environments(const Chain& c) {
  const std::size_t n = c.sites.size();
  std::vector<Vec4> right(n, Vec4::Ones());
  for (std::size_t i = n - 1; i-- > 0;) {
    Vec4 r = Vec4::Zero();
    for (int s = 0; s < 4; ++s) {
      for (int t = 0; t < 4; ++t) {
        if ((t >> 1) != (t & 1)) continue;  // summing both outcomes leaves x' = x
        r(s) += bond_weight(c.bonds[i], s, t) * local_weight(c.local[i + 1], t) * right[i + 1](t);
      }
    }
    double norm = r.cwiseAbs().maxCoeff();
    right[i] = norm > 0 ? Vec4(r / norm) : r;
  }
  return right;
}

void check_chain(const Chain& c) {
  if (c.sites.empty() || c.local.size() != c.sites.size() || c.bonds.size() + 1 != c.sites.size()) {
    throw ConfigError("chain is malformed");
  }
}

}  // namespace

std::vector<std::uint8_t> sample_chain(const Chain& c, CounterRng& rng, std::vector<double>* conditionals) {
  check_chain(c);
  const std::size_t n = c.sites.size();
  auto right = right_environments(c);
  Vec4 left = Vec4::Ones();
  std::vector<std::uint8_t> out(n);
  if (conditionals) conditionals->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double p[2];
    for (int m = 0; m < 2; ++m) {
      Complex acc = 0;
      for (int s = 0; s < 4; ++s) acc += left(s) * local_weight(c.local[i], s) * parity_kernel(m, s >> 1, s & 1) * right[i](s);
      p[m] = std::max(0.0, acc.real());
    }
    double z = p[0] + p[1];
    if (!(z > 0)) throw ConfigError("chain has zero projection probability");
    double p1 = p[1] / z;
    if (conditionals) (*conditionals)[i] = p1;
    int m = rng.uniform() < p1 ? 1 : 0;
    out[i] = static_cast<std::uint8_t>(m);
    if (i + 1 == n) break;
    Vec4 next = Vec4::Zero();
    for (int s = 0; s < 4; ++s) {
      Complex w = left(s) * local_weight(c.local[i], s) * parity_kernel(m, s >> 1, s & 1);
      if (w == Complex(0)) continue;
      for (int t = 0; t < 4; ++t) next(t) += w * bond_weight(c.bonds[i], s, t);
    }
    double norm = next.cwiseAbs().maxCoeff();
    left = norm > 0 ? Vec4(next / norm) : next;
  }
  return out;
}

std::vector<double> chain_distribution(const Chain& c) {
  check_chain(c);
  const std::size_t n = c.sites.size();
  if (n > 20) throw ResourceGuardError("chain too long for the full distribution");
  std::vector<double> dist(std::size_t{1} << n);
  double z = 0;
  for (std::size_t m = 0; m < dist.size(); ++m) {
    Vec4 v;
    for (int s = 0; s < 4; ++s) v(s) = local_weight(c.local[0], s) * parity_kernel(m & 1, s >> 1, s & 1);
    for (std::size_t i = 1; i < n; ++i) {
      Vec4 next = Vec4::Zero();
      int mi = (m >> i) & 1;
      for (int t = 0; t < 4; ++t) {
        Complex acc = 0;
        for (int s = 0; s < 4; ++s) acc += v(s) * bond_weight(c.bonds[i - 1], s, t);
        next(t) = acc * local_weight(c.local[i], t) * parity_kernel(mi, t >> 1, t & 1);
      }
      v = next;
    }
    dist[m] = std::max(0.0, v.sum().real());
    z += dist[m];
  }
  if (!(z > 0)) throw ConfigError("chain has zero projection probability");
  for (double& p : dist) p /= z;
  return dist;
}

std::vector<double> chain_marginals(const Chain& c) {
  auto dist = chain_distribution(c);
  return x_marginals(dist, c.sites.size());
}

std::vector<Chain> build_chains(std::size_t num_sites, const std::vector<Eigen::Matrix2cd>& local,
                                const std::vector<ResidualBond>& residual) {
  if (local.size() != num_sites) throw ConfigError("local factor count does not match site count");
  std::vector<std::vector<std::size_t>> adj(num_sites);
  for (std::size_t b = 0; b < residual.size(); ++b) {
    const auto& r = residual[b];
    if (r.a >= num_sites || r.b >= num_sites || r.a == r.b) throw ConfigError("residual bond refers to an unknown site");
    adj[r.a].push_back(b);
    adj[r.b].push_back(b);
  }
  for (const auto& a : adj) {
    if (a.size() > 2) throw ConfigError("residual graph not 1D: a site keeps three or more entangled bonds");
  }
  std::vector<bool> seen(num_sites, false);
  std::vector<Chain> chains;
  auto walk = [&](std::uint32_t start) {
    Chain c;
    std::uint32_t cur = start;
    std::size_t via = SIZE_MAX;
    for (;;) {
      seen[cur] = true;
      c.sites.push_back(cur);
      c.local.push_back(local[cur]);
      std::size_t next_bond = SIZE_MAX;
      for (auto b : adj[cur]) {
        if (b != via) next_bond = b;
      }
      if (next_bond == SIZE_MAX) break;
      const auto& r = residual[next_bond];
      std::uint32_t nxt = r.a == cur ? r.b : r.a;
      if (seen[nxt]) throw ConfigError("residual graph not 1D: entangled bonds close a cycle");
      c.bonds.push_back(r.a == cur ? r.rho : swap_halves(r.rho));
      via = next_bond;
      cur = nxt;
    }
    chains.push_back(std::move(c));
  };
  for (std::uint32_t s = 0; s < num_sites; ++s) {
    if (!seen[s] && adj[s].size() <= 1) walk(s);
  }
  for (std::uint32_t s = 0; s < num_sites; ++s) {
    if (!seen[s]) throw ConfigError("residual graph not 1D: entangled bonds close a cycle");
  }
  return chains;
}

GeneralCircuitSampler::GeneralCircuitSampler(SiteLattice lattice, SamplerMode mode)
    : lattice_(std::move(lattice)), mode_(mode), noise_(allocate_noise(lattice_, mode)) {
  const auto& sites = lattice_.sites();
  const auto& bonds = lattice_.bonds();
  decompositions_.resize(bonds.size());
  if (mode_ == SamplerMode::kStabilizerMixture) {
    const auto& states = two_qubit_stabilizer_states();
    for (std::size_t s = 0; s < sites.size(); ++s) {
      OctahedronMixture mix = octahedron_mixture(sites[s].alpha, noise_.q_input[s]);
      input_mixtures_.push_back(mix);
      MixtureItem item;
      item.site_a = static_cast<int>(s);
      for (int e = 0; e < 6; ++e) {
        item.weights.push_back(mix.weights[e]);
        item.diag_a.push_back(diag_of_eigenstate(static_cast<PauliEigenstate>(e)));
      }
      items_.push_back(std::move(item));
      item_bond_.push_back(-1 - static_cast<int>(s));
    }
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      auto rho = bond_density_matrix(bonds[b].theta, noise_.q_bond[b]).rho;
      auto d = stabilizer_decompose(rho, StabilizerSet::kProductDiagonal);
      if (!d) throw ConfigError("bond " + std::to_string(b) + " is not a stabilizer mixture");
      MixtureItem item;
      item.site_a = static_cast<int>(bonds[b].a);
      item.site_b = static_cast<int>(bonds[b].b);
      double total = d->total_weight();
      for (const auto& c : d->stabilizer) {
        item.weights.push_back(c.weight / total);
        item.diag_a.push_back(states[c.state_id].diag_a);
        item.diag_b.push_back(states[c.state_id].diag_b);
      }
      decompositions_[b] = std::move(*d);
      items_.push_back(std::move(item));
      item_bond_.push_back(static_cast<int>(b));
    }
  } else {
    for (std::size_t s = 0; s < sites.size(); ++s) input_states_.push_back(input_density(sites[s].alpha, noise_.q_input[s]));
    std::vector<ResidualBond> chain_bonds;
    for (const auto& b : bonds) {
      if (b.chain) chain_bonds.push_back({b.a, b.b, Eigen::Matrix4cd::Identity()});
    }
    build_chains(sites.size(), input_states_, chain_bonds);  // fails early on a non-1D residual graph
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      if (bonds[b].chain) continue;
      auto rho = bond_density_matrix(bonds[b].theta, noise_.q_bond[b]).rho;
      auto d = separable_decompose(rho);
      if (!d) throw ConfigError("bond " + std::to_string(b) + " is not separable at the resolution of the product frame");
      MixtureItem item;
      item.site_a = static_cast<int>(bonds[b].a);
      item.site_b = static_cast<int>(bonds[b].b);
      double total = d->total_weight();
      for (const auto& c : d->product) {
        item.weights.push_back(c.weight / total);
        item.diag_a.push_back(diag_of_bloch(c.bloch_a));
        item.diag_b.push_back(diag_of_bloch(c.bloch_b));
      }
      decompositions_[b] = std::move(*d);
      items_.push_back(std::move(item));
      item_bond_.push_back(static_cast<int>(b));
    }
  }
}

std::vector<std::uint8_t> GeneralCircuitSampler::sample(std::uint64_t seed, std::uint64_t shot) const {
  CounterRng rng(seed, shot, kPosteriorStream);
  auto components = posterior_bond_sampling(items_, lattice_.num_sites(), rng);
  return mode_ == SamplerMode::kStabilizerMixture ? sample_stabilizer(components, rng) : sample_mps(components, rng);
}

std::vector<std::uint8_t> GeneralCircuitSampler::sample_stabilizer(const std::vector<int>& components,
                                                                   CounterRng& rng) const {
  const std::size_t n = lattice_.num_sites();
  const auto& bonds = lattice_.bonds();
  const std::size_t v = n + 2 * bonds.size();
  const auto& states = two_qubit_stabilizer_states();
  StabilizerTableau t(v, Basis::kAllZero);
  std::vector<std::vector<std::size_t>> virtual_at(n);
  for (std::size_t s = 0; s < n; ++s) virtual_at[s].push_back(s);
  for (std::size_t k = 0; k < items_.size(); ++k) {
    int tag = item_bond_[k];
    int comp = components[k];
    if (tag < 0) {
      std::size_t s = static_cast<std::size_t>(-1 - tag);
      auto e = static_cast<PauliEigenstate>(comp);
      char axis = "XXYYZZ"[comp];
      if (axis != 'Z') t.h(s);
      if (axis == 'Y') t.s(s);
      if (static_cast<int>(e) & 1) (axis == 'Z' ? t.x(s) : t.z(s));
      continue;
    }
    std::size_t b = static_cast<std::size_t>(tag);
    std::size_t va = n + 2 * b, vb = va + 1;
    virtual_at[bonds[b].a].push_back(va);
    virtual_at[bonds[b].b].push_back(vb);
    const auto& st = states[decompositions_[b].stabilizer[comp].state_id];
    std::size_t qubits[] = {va, vb};
    prepare_stabilizer_state(t, qubits, st.generators);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 1; i < virtual_at[s].size(); ++i) {
      PauliString zz(v);
      zz.set(virtual_at[s][0], 'Z');
      zz.set(virtual_at[s][i], 'Z');
      if (t.postselect(zz, false) == 0) throw std::logic_error("sampled components violate a site projection");
    }
  }
  std::vector<std::uint8_t> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    PauliString xs(v);
    for (auto q : virtual_at[s]) xs.set(q, 'X');
    out[s] = t.measure(xs, rng.bit());
  }
  return out;
}

std::vector<std::uint8_t> GeneralCircuitSampler::sample_mps(const std::vector<int>& components, CounterRng& rng) const {
  const std::size_t n = lattice_.num_sites();
  const auto& bonds = lattice_.bonds();
  std::vector<Eigen::Matrix2cd> local = input_states_;
  for (std::size_t k = 0; k < items_.size(); ++k) {
    std::size_t b = static_cast<std::size_t>(item_bond_[k]);
    const auto& c = decompositions_[b].product[components[k]];
    local[bonds[b].a] = local[bonds[b].a].cwiseProduct(bloch_to_density(c.bloch_a));
    local[bonds[b].b] = local[bonds[b].b].cwiseProduct(bloch_to_density(c.bloch_b));
  }
  std::vector<ResidualBond> residual;
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (!bonds[b].chain) continue;
    residual.push_back({bonds[b].a, bonds[b].b, bond_density_matrix(bonds[b].theta, noise_.q_bond[b]).rho});
  }
  std::vector<std::uint8_t> out(n);
  for (const Chain& c : build_chains(n, local, residual)) {
    auto bits = sample_chain(c, rng);
    for (std::size_t i = 0; i < c.sites.size(); ++i) out[c.sites[i]] = bits[i];
  }
  return out;
}

std::vector<std::uint8_t> simulate_general_circuit(const SiteLattice& lattice, SamplerMode mode, std::uint64_t seed,
                                                   std::uint64_t shot) {
  return GeneralCircuitSampler(lattice, mode).sample(seed, shot);
}

std::vector<double> exact_distribution(const SiteLattice& lattice) {
  DenseCircuit dc;
  dc.n = lattice.num_sites();
  for (const auto& s : lattice.sites()) {
    dc.inputs.push_back(InputState::rotated(s.alpha));
    dc.pauli_noise.push_back(PauliChannel::dephasing(s.q));
  }
  for (const auto& b : lattice.bonds()) dc.gates.push_back({GateKind::kZzPhase, b.a, b.b, b.theta});
  return dense_oracle(dc);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution size mismatch");
  double tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return tv / 2;
}

std::vector<std::uint64_t> sample_histogram(const GeneralCircuitSampler& sampler, std::uint64_t shots, std::uint64_t seed,
                                            unsigned threads) {
  const std::size_t n = sampler.lattice().num_sites();
  if (n > 24) throw ResourceGuardError("too many sites for an outcome histogram");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, shots)));
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(std::size_t{1} << n, 0));
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t s = w; s < shots; s += threads) {
            auto bits = sampler.sample(seed, s);
            std::size_t k = 0;
            for (std::size_t j = 0; j < n; ++j) k |= static_cast<std::size_t>(bits[j]) << j;
            ++partial[w][k];
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
  std::vector<std::uint64_t> hist(std::size_t{1} << n, 0);
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += p[k];
  }
  return hist;
}

DenseComparison compare_with_dense(const SiteLattice& lattice, SamplerMode mode, std::uint64_t shots, std::uint64_t seed,
                                   unsigned threads) {
  if (shots == 0) throw ConfigError("shots must be positive");
  GeneralCircuitSampler sampler(lattice, mode);
  DenseComparison out;
  out.shots = shots;
  out.exact = exact_distribution(lattice);
  auto hist = sample_histogram(sampler, shots, seed, threads);
  out.empirical.resize(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) out.empirical[k] = static_cast<double>(hist[k]) / static_cast<double>(shots);
  out.tv = total_variation(out.empirical, out.exact);
  for (double p : out.exact) out.sampling_floor += std::sqrt(p * (1 - p));
  out.sampling_floor /= std::sqrt(2 * std::numbers::pi * static_cast<double>(shots));
  return out;
}

}  // namespace cqc
