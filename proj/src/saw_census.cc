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

#include "cqc/saw_census.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cqc/errors.h"
#include "json.hpp"

namespace cqc {

namespace {

constexpr int kDir[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

// Flat, non-wrapping view of the site used by the fast enumerators.
struct Grid {
  std::array<int, 3> n{};  // points per axis
  std::array<std::int64_t, 3> stride{};

  std::int64_t index(int x, int y, int z) const { return x * stride[0] + y * stride[1] + z * stride[2]; }
  bool inside(int x, int y, int z) const { return x >= 0 && y >= 0 && z >= 0 && x < n[0] && y < n[1] && z < n[2]; }
  bool on_surface(int x, int y, int z) const {
    return x == 0 || y == 0 || z == 0 || x == n[0] - 1 || y == n[1] - 1 || z == n[2] - 1;
  }
  std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
};

Grid make_grid(int nx, int ny, int nz) {
  Grid g;
  g.n = {nx, ny, nz};
  g.stride = {static_cast<std::int64_t>(ny) * nz, nz, 1};
  return g;
}

std::vector<std::uint64_t> merge(const std::vector<std::vector<std::uint64_t>>& parts, int max_len) {
  std::vector<std::uint64_t> total(max_len + 1, 0);
  for (const auto& p : parts) {
    for (int l = 0; l <= max_len; ++l) {
      if (__builtin_add_overflow(total[l], p[l], &total[l])) throw std::overflow_error("census count overflow");
    }
  }
  return total;
}

// Runs fn(root, counts) for every root on a pool of workers; counts are kept
// per root so the merged result never depends on scheduling.
template <typename Fn>
std::vector<std::uint64_t> run_pool(std::size_t roots, int max_len, const EnumerationOptions& opt, Fn&& fn) {
  std::vector<std::vector<std::uint64_t>> per_root(roots, std::vector<std::uint64_t>(max_len + 2, 0));
  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(roots, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&](unsigned worker) {
    try {
      std::size_t k;
      while ((k = next.fetch_add(1)) < roots) {
        fn(worker, k, per_root[k]);
        std::size_t d = done.fetch_add(1) + 1;
        if (opt.progress) {
          std::lock_guard lock(progress_mu);
          opt.progress(d, roots);
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(roots);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  for (auto& p : per_root) p.resize(max_len + 1);
  return merge(per_root, max_len);
}

[[noreturn]] void too_small(int max_len) {
  throw ConfigError("lattice too small: a chain of length <= " + std::to_string(max_len) + " reaches the boundary");
}

class DualEnumerator {
 public:
  DualEnumerator(const InjectionSite& site, int max_len) : max_len_(max_len) {
    Dims d = site.lattice.dims();
    grid_ = make_grid(d.x, d.y, d.z);
    side_.assign(grid_.size(), 0);
    moves_.assign(grid_.size(), 0);
    for (int x = 0; x < d.x; ++x) {
      for (int y = 0; y < d.y; ++y) {
        for (int z = 0; z < d.z; ++z) {
          auto i = grid_.index(x, y, z);
          side_[i] = static_cast<std::int8_t>(site.defect_side({x, y, z}));
          for (int k = 0; k < 6; ++k) {
            int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
            if (!grid_.inside(a, b, c)) continue;
            Coord face{2 * x + 1 + kDir[k][0], 2 * y + 1 + kDir[k][1], 2 * z + 1 + kDir[k][2]};
            auto q = site.lattice.find(face);
            if (q && site.lattice.region(*q) == Region::kVacuum) moves_[i] |= static_cast<std::uint8_t>(1u << k);
          }
        }
      }
    }
    // Steps needed to reach a lower defect cell through non-defect cells.
    dist_.assign(grid_.size(), std::numeric_limits<int>::max() / 2);
    std::deque<std::array<int, 3>> queue;
    for (int x = 0; x < d.x; ++x) {
      for (int y = 0; y < d.y; ++y) {
        for (int z = 0; z < d.z; ++z) {
          if (side_[grid_.index(x, y, z)] < 0) {
            dist_[grid_.index(x, y, z)] = 0;
            queue.push_back({x, y, z});
          }
        }
      }
    }
    while (!queue.empty()) {
      auto [x, y, z] = queue.front();
      queue.pop_front();
      int here = dist_[grid_.index(x, y, z)];
      for (int k = 0; k < 6; ++k) {
        if (!(moves_[grid_.index(x, y, z)] >> k & 1)) continue;
        int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
        auto j = grid_.index(a, b, c);
        if (side_[j] != 0 || dist_[j] <= here + 1) continue;
        dist_[j] = here + 1;
        queue.push_back({a, b, c});
      }
    }
    for (int x = 0; x < d.x; ++x) {
      for (int y = 0; y < d.y; ++y) {
        for (int z = 0; z < d.z; ++z) {
          auto i = grid_.index(x, y, z);
          if (side_[i] <= 0) continue;
          for (int k = 0; k < 6; ++k) {
            if (!(moves_[i] >> k & 1)) continue;
            auto j = grid_.index(x + kDir[k][0], y + kDir[k][1], z + kDir[k][2]);
            if (side_[j] < 0) ++direct_;
            if (side_[j] == 0 && dist_[j] <= max_len - 1) roots_.push_back({x, y, z, k});
          }
        }
      }
    }
  }

  std::size_t num_roots() const { return roots_.size(); }
  // Length-1 chains: an upper cell facing a lower cell across a vacuum face.
  std::uint64_t direct() const { return direct_; }

  void run(std::size_t root, std::vector<std::uint8_t>& visited, std::vector<std::uint64_t>& counts) const {
    auto [x, y, z, k] = roots_[root];
    int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
    if (grid_.on_surface(a, b, c)) too_small(max_len_);
    auto i = grid_.index(a, b, c);
    visited[i] = 1;
    dfs(a, b, c, 1, visited, counts);
    visited[i] = 0;
  }

  std::size_t grid_size() const { return grid_.size(); }

 private:
  void dfs(int x, int y, int z, int len, std::vector<std::uint8_t>& visited, std::vector<std::uint64_t>& counts) const {
    std::uint8_t m = moves_[grid_.index(x, y, z)];
    for (int k = 0; k < 6; ++k) {
      if (!(m >> k & 1)) continue;
      int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
      auto j = grid_.index(a, b, c);
      if (side_[j] < 0) {
        ++counts[len + 1];
        continue;
      }
      if (side_[j] > 0 || visited[j] || len + 1 >= max_len_ || dist_[j] > max_len_ - (len + 1)) continue;
      if (grid_.on_surface(a, b, c)) too_small(max_len_);
      visited[j] = 1;
      dfs(a, b, c, len + 1, visited, counts);
      visited[j] = 0;
    }
  }

  int max_len_;
  Grid grid_;
  std::vector<std::int8_t> side_;
  std::vector<std::uint8_t> moves_;
  std::vector<int> dist_;
  std::vector<std::array<int, 4>> roots_;
  std::uint64_t direct_ = 0;
};

class PrimalEnumerator {
 public:
  PrimalEnumerator(const InjectionSite& site, int max_len) : max_len_(max_len) {
    const RhgLattice& lat = site.lattice;
    Dims d = lat.dims();
    int extra = lat.boundary() == Boundary::kOpen ? 1 : 0;
    grid_ = make_grid(d.x + extra, d.y + extra, d.z + extra);
    axis_x_ = site.anchor[0];
    axis_y_ = site.anchor[1];
    moves_.assign(grid_.size(), 0);
    for (int x = 0; x < grid_.n[0]; ++x) {
      for (int y = 0; y < grid_.n[1]; ++y) {
        for (int z = 0; z < grid_.n[2]; ++z) {
          for (int k = 0; k < 6; ++k) {
            int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
            if (!grid_.inside(a, b, c)) continue;
            Coord edge{x + a, y + b, z + c};  // doubled midpoint
            auto q = lat.find(edge);
            if (q && lat.region(*q) != Region::kDefect) moves_[grid_.index(x, y, z)] |= static_cast<std::uint8_t>(1u << k);
          }
        }
      }
    }
    // Roots: every admissible crossing edge, i.e. a +y step from (x, axis_y, z)
    // with x > axis_x. A loop is rooted at its smallest crossing edge in
    // (x, z) order, traversed in the +y direction. Far above or below the
    // tube a winding loop must wrap a wide cone section, which takes more
    // than max_len steps, so the z range is bounded.
    int z_lo = site.anchor[2] - site.geometry.tube_length - max_len;
    int z_hi = site.anchor[2] + site.geometry.tube_length + max_len;
    for (int x = axis_x_ + 1; x < grid_.n[0]; ++x) {
      for (int z = std::max(0, z_lo); z <= std::min(grid_.n[2] - 1, z_hi); ++z) {
        if (moves_[grid_.index(x, axis_y_, z)] >> 2 & 1) roots_.push_back({x, z});
      }
    }
  }

  std::size_t num_roots() const { return roots_.size(); }
  std::size_t grid_size() const { return grid_.size(); }

  void run(std::size_t root, std::vector<std::uint8_t>& visited, std::vector<std::uint64_t>& counts) const {
    Walk w{roots_[root][0], axis_y_, roots_[root][1], roots_[root][0], roots_[root][1], visited, counts};
    // The shortest loop through this edge needs 2 (x - axis) + 2 steps.
    if (2 * (w.root_x - axis_x_) + 2 > max_len_) return;
    if (grid_.on_surface(w.sx, w.sy, w.sz) || grid_.on_surface(w.sx, w.sy + 1, w.sz)) too_small(max_len_);
    auto s = grid_.index(w.sx, w.sy, w.sz);
    auto t = grid_.index(w.sx, w.sy + 1, w.sz);
    visited[s] = visited[t] = 1;
    dfs(w, w.sx, w.sy + 1, w.sz, 1, 1);
    visited[s] = visited[t] = 0;
  }

 private:
  struct Walk {
    int sx, sy, sz;
    int root_x, root_z;
    std::vector<std::uint8_t>& visited;
    std::vector<std::uint64_t>& counts;
  };

  void dfs(Walk& w, int x, int y, int z, int len, int winding) const {
    std::uint8_t m = moves_[grid_.index(x, y, z)];
    int rem = max_len_ - (len + 1);
    for (int k = 0; k < 6; ++k) {
      if (!(m >> k & 1)) continue;
      int a = x + kDir[k][0], b = y + kDir[k][1], c = z + kDir[k][2];
      int crossing = 0;
      if (k / 2 == 1 && std::min(y, b) == axis_y_ && x > axis_x_) {
        if (x < w.root_x || (x == w.root_x && z < w.root_z)) continue;
        crossing = 1;
      }
      if (a == w.sx && b == w.sy && c == w.sz) {
        if (len + 1 >= 4 && ((winding + crossing) & 1)) ++w.counts[len + 1];
        continue;
      }
      auto j = grid_.index(a, b, c);
      if (w.visited[j]) continue;
      if (std::abs(a - w.sx) + std::abs(b - w.sy) + std::abs(c - w.sz) > rem) continue;
      if (grid_.on_surface(a, b, c)) too_small(max_len_);
      w.visited[j] = 1;
      dfs(w, a, b, c, len + 1, winding + crossing);
      w.visited[j] = 0;
    }
  }

  int max_len_;
  Grid grid_;
  int axis_x_ = 0;
  int axis_y_ = 0;
  std::vector<std::uint8_t> moves_;
  std::vector<std::array<int, 2>> roots_;
};

void check_length(int max_len, const EnumerationOptions& opt) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  if (max_len > opt.hard_cap && !opt.allow_above_cap) {
    throw ResourceGuardError("max_len " + std::to_string(max_len) + " exceeds the hard cap " +
                             std::to_string(opt.hard_cap) + " (override required)");
  }
}

}  // namespace

std::string_view to_string(ChainKind k) { return k == ChainKind::kPrimal ? "primal" : "dual"; }

ChainKind chain_kind_from_string(std::string_view s) {
  if (s == "primal") return ChainKind::kPrimal;
  if (s == "dual") return ChainKind::kDual;
  throw ConfigError("unknown chain kind: " + std::string(s));
}

std::uint64_t WalkCensus::count(int length) const {
  if (length < 0 || length >= static_cast<int>(counts.size())) return 0;
  return counts[length];
}

WalkCensus enumerate_chains(const InjectionSite& site, ChainKind kind, int max_len, const EnumerationOptions& options) {
  check_length(max_len, options);
  WalkCensus census;
  census.kind = kind;
  census.max_len = max_len;
  census.geometry_version = site.geometry_version;
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  if (kind == ChainKind::kDual) {
    DualEnumerator e(site, max_len);
    std::vector<std::vector<std::uint8_t>> visited(workers, std::vector<std::uint8_t>(e.grid_size(), 0));
    EnumerationOptions opt = options;
    opt.workers = workers;
    census.counts = run_pool(e.num_roots(), max_len, opt, [&](unsigned w, std::size_t root, auto& counts) {
      e.run(root, visited[w], counts);
    });
    census.counts[1] += e.direct();
  } else {
    PrimalEnumerator e(site, max_len);
    std::vector<std::vector<std::uint8_t>> visited(workers, std::vector<std::uint8_t>(e.grid_size(), 0));
    EnumerationOptions opt = options;
    opt.workers = workers;
    census.counts = run_pool(e.num_roots(), max_len, opt, [&](unsigned w, std::size_t root, auto& counts) {
      e.run(root, visited[w], counts);
    });
    census.counts[1] = 1;  // the singular face qubit
  }
  return census;
}

ErrorPolynomials census_to_polynomials(const WalkCensus& primal, const WalkCensus& dual, int truncation) {
  if (primal.kind != ChainKind::kPrimal || dual.kind != ChainKind::kDual) {
    throw ConfigError("census_to_polynomials expects a primal and a dual census");
  }
  if (primal.geometry_version != dual.geometry_version) {
    throw ConfigError("mismatched geometry versions: " + primal.geometry_version + " vs " + dual.geometry_version);
  }
  if (truncation > std::min(primal.max_len, dual.max_len)) {
    throw ConfigError("truncation exceeds census length");
  }
  ErrorPolynomials p;
  p.truncation_degree = truncation;
  for (int d = 1; d <= truncation; ++d) {
    if (dual.count(d)) p.x_coeffs[d] = static_cast<std::int64_t>(dual.count(d));
    if (primal.count(d)) p.z_coeffs[d] = static_cast<std::int64_t>(primal.count(d));
  }
  return p;
}

LogicalRates logical_error_rates(const ErrorPolynomials& polys, double q) {
  if (!(q >= 0.0 && q <= 0.5)) throw ConfigError("q must lie in [0, 1/2]");
  LogicalRates r;
  for (const auto& [d, c] : polys.x_coeffs) r.qx += static_cast<double>(c) * std::pow(q, d);
  for (const auto& [d, c] : polys.z_coeffs) r.qz += static_cast<double>(c) * std::pow(q, d);
  return r;
}

double saw_upper_bound(double n, int length) { return n * 1.2 * std::pow(5.0, length); }

TailBound truncation_tail(const WalkCensus& census, double q, int from_len) {
  if (from_len > census.max_len + 1) throw ConfigError("from_len beyond census.max_len + 1");
  if (!(q >= 0.0 && q < 0.5)) throw ConfigError("q must lie in [0, 1/2)");
  TailBound t;
  if (q == 0.0) return t;
  int start = std::max(from_len, 1);
  for (int l = start; l <= census.max_len; ++l) t.value += static_cast<double>(census.count(l)) * std::pow(q, l);
  if (5.0 * q >= 1.0) {
    t.diverges = true;
    t.value = std::numeric_limits<double>::infinity();
    return t;
  }
  int m = census.max_len;
  while (m > 0 && census.count(m) == 0) --m;
  double base_count = m > 0 ? static_cast<double>(census.count(m)) : 1.2;
  int first = std::max(start, census.max_len + 1);
  // sum_{L >= first} c_m 5^(L-m) q^L = c_m q^m (5q)^(first-m) / (1 - 5q)
  t.value += base_count * std::pow(q, m) * std::pow(5.0 * q, first - m) / (1.0 - 5.0 * q);
  return t;
}

std::string census_to_csv(std::span<const WalkCensus> censuses) {
  std::ostringstream out;
  out << "kind,length,count,geometry_version\n";
  for (const auto& c : censuses) {
    for (int l = 1; l <= c.max_len; ++l) out << to_string(c.kind) << ',' << l << ',' << c.count(l) << ',' << c.geometry_version << '\n';
  }
  return out.str();
}

std::vector<WalkCensus> census_from_csv(std::string_view text) {
  std::vector<WalkCensus> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("kind,", 0) == 0) continue;
    }
    std::istringstream fields(line);
    std::string kind, length, count, version;
    if (!std::getline(fields, kind, ',') || !std::getline(fields, length, ',') || !std::getline(fields, count, ',') ||
        !std::getline(fields, version)) {
      throw ConfigError("malformed census csv line: " + line);
    }
    ChainKind k = chain_kind_from_string(kind);
    int l = std::stoi(length);
    if (l < 1) throw ConfigError("census csv: length must be >= 1");
    auto it = std::find_if(out.begin(), out.end(), [&](const WalkCensus& c) { return c.kind == k; });
    if (it == out.end()) {
      out.push_back(WalkCensus{k, {0}, 0, version});
      it = out.end() - 1;
    }
    if (it->geometry_version != version) throw ConfigError("census csv mixes geometry versions");
    if (static_cast<int>(it->counts.size()) <= l) it->counts.resize(l + 1, 0);
    it->counts[l] = std::stoull(count);
    it->max_len = std::max(it->max_len, l);
  }
  return out;
}

std::string census_to_json(std::span<const WalkCensus> censuses) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["censuses"] = nlohmann::json::array();
  for (const auto& c : censuses) {
    nlohmann::json counts = nlohmann::json::object();
    for (int l = 1; l <= c.max_len; ++l) counts[std::to_string(l)] = c.count(l);
    j["censuses"].push_back(
        {{"kind", to_string(c.kind)}, {"max_len", c.max_len}, {"geometry_version", c.geometry_version}, {"counts", counts}});
  }
  return j.dump(2);
}

std::vector<WalkCensus> census_from_json(std::string_view text) {
  std::vector<WalkCensus> out;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& c : j.at("censuses")) {
      WalkCensus w;
      w.kind = chain_kind_from_string(c.at("kind").get<std::string>());
      w.max_len = c.at("max_len").get<int>();
      w.geometry_version = c.at("geometry_version").get<std::string>();
      w.counts.assign(w.max_len + 1, 0);
      for (const auto& [k, v] : c.at("counts").items()) {
        int l = std::stoi(k);
        if (l < 1 || l > w.max_len) throw ConfigError("census json: length out of range");
        w.counts[l] = v.get<std::uint64_t>();
      }
      out.push_back(std::move(w));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("census json: ") + e.what());
  }
  return out;
}

}  // namespace cqc
