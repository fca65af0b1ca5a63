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

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cqc/errors.h"
#include "cqc/saw_census.h"

namespace cqc {

namespace {

class DualReference {
 public:
  DualReference(const InjectionSite& site, int max_len) : site_(site), max_len_(max_len) {
    const RhgLattice& lat = site.lattice;
    face_cells_.resize(lat.num_qubits());
    for (const Cell& c : lat.cells()) {
      for (QubitId f : c.faces) face_cells_[index_of(f)].push_back(c.id);
    }
    visited_.assign(lat.cells().size(), false);
  }

  std::vector<std::uint64_t> run() {
    counts_.assign(max_len_ + 1, 0);
    for (const Cell& c : site_.lattice.cells()) {
      if (side(c.id) > 0) walk(c.id, 0);
    }
    return counts_;
  }

 private:
  int side(CellId id) const {
    Coord n = site_.lattice.cells()[index_of(id)].center;
    return site_.defect_side({(n.x - 1) / 2, (n.y - 1) / 2, (n.z - 1) / 2});
  }

  void walk(CellId here, int len) {
    if (len == max_len_) return;
    for (QubitId f : site_.lattice.cells()[index_of(here)].faces) {
      if (site_.lattice.region(f) != Region::kVacuum) continue;
      for (CellId next : face_cells_[index_of(f)]) {
        if (next == here) continue;
        int s = side(next);
        if (s < 0) {
          ++counts_[len + 1];
        } else if (s == 0 && !visited_[index_of(next)]) {
          visited_[index_of(next)] = true;
          walk(next, len + 1);
          visited_[index_of(next)] = false;
        }
      }
    }
  }

  const InjectionSite& site_;
  int max_len_;
  std::vector<std::vector<CellId>> face_cells_;
  std::vector<bool> visited_;
  std::vector<std::uint64_t> counts_;
};

class PrimalReference {
 public:
  PrimalReference(const InjectionSite& site, int max_len) : site_(site), max_len_(max_len) {
    axis_x_ = 2 * site.anchor[0] + 1;
    axis_y_ = 2 * site.anchor[1] + 1;
    Dims d = site.lattice.dims();
    int extra = site.lattice.boundary() == Boundary::kOpen ? 1 : 0;
    n_ = {d.x + extra, d.y + extra, d.z + extra};
    std::size_t total = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    next_.assign(total, {});
    for (int x = 0; x < n_[0]; ++x) {
      for (int y = 0; y < n_[1]; ++y) {
        for (int z = 0; z < n_[2]; ++z) {
          Coord v{2 * x, 2 * y, 2 * z};
          for (int a = 0; a < 3; ++a) {
            for (int dlt : {-1, 1}) {
              Coord mid = v;
              mid[a] += dlt;
              Coord far = mid;
              far[a] += dlt;
              if (far[a] < 0 || far[a] / 2 >= n_[a]) continue;
              auto q = site.lattice.find(mid);
              if (!q || site.lattice.region(*q) == Region::kDefect) continue;
              next_[id(v)].push_back(id(far));
            }
          }
        }
      }
    }
    on_path_.assign(total, false);
  }

  std::vector<std::uint64_t> run() {
    counts_.assign(max_len_ + 1, 0);
    // A loop that winds around the axis cannot have a vertex farther than
    // max_len/2 steps from the axis in x or y. Loops beyond tube_length +
    // max_len layers from the singular face would have to wrap a cone
    // section wider than max_len/4.
    int zc = 2 * site_.anchor[2];
    int zr = 2 * (site_.geometry.tube_length + max_len_);
    for (int x = 0; x < n_[0]; ++x) {
      if (std::abs(2 * x - axis_x_) > max_len_) continue;
      for (int y = 0; y < n_[1]; ++y) {
        if (std::abs(2 * y - axis_y_) > max_len_) continue;
        for (int z = 0; z < n_[2]; ++z) {
          if (std::abs(2 * z - zc) > zr) continue;
          auto s = id(Coord{2 * x, 2 * y, 2 * z});
          path_.assign(1, s);
          on_path_[s] = true;
          walk(0);
          on_path_[s] = false;
        }
      }
    }
    for (int l = 1; l <= max_len_; ++l) {
      if (counts_[l] % (2 * l) != 0) throw std::logic_error("reference primal count not divisible by 2L");
      counts_[l] /= 2 * l;
    }
    if (max_len_ >= 1) counts_[1] = 1;  // the singular face qubit
    return counts_;
  }

 private:
  std::uint32_t id(Coord v) const {
    return static_cast<std::uint32_t>((static_cast<std::size_t>(v.x / 2) * n_[1] + v.y / 2) * n_[2] + v.z / 2);
  }

  std::pair<double, double> xy(std::uint32_t v) const {
    int x = static_cast<int>(v / (static_cast<std::uint32_t>(n_[1]) * n_[2]));
    int y = static_cast<int>(v / n_[2] % n_[1]);
    return {2.0 * x - axis_x_, 2.0 * y - axis_y_};
  }

  int winding() const {
    double total = 0;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      auto [ux, uy] = xy(path_[i]);
      auto [wx, wy] = xy(path_[(i + 1) % path_.size()]);
      total += std::atan2(ux * wy - uy * wx, ux * wx + uy * wy);
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
  }

  void walk(int len) {
    if (len == max_len_) return;
    for (std::uint32_t next : next_[path_.back()]) {
      if (next == path_.front()) {
        if (len + 1 >= 3 && (winding() & 1)) ++counts_[len + 1];
        continue;
      }
      if (on_path_[next]) continue;
      on_path_[next] = true;
      path_.push_back(next);
      walk(len + 1);
      path_.pop_back();
      on_path_[next] = false;
    }
  }

  const InjectionSite& site_;
  int max_len_;
  int axis_x_ = 0;
  int axis_y_ = 0;
  std::array<int, 3> n_{};
  std::vector<std::vector<std::uint32_t>> next_;
  std::vector<bool> on_path_;
  std::vector<std::uint32_t> path_;
  std::vector<std::uint64_t> counts_;
};

void saw_walk(std::vector<std::uint8_t>& seen, int n, int x, int y, int z, int left, std::uint64_t& total) {
  if (left == 0) {
    ++total;
    return;
  }
  static constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const auto& s : kSteps) {
    int a = x + s[0], b = y + s[1], c = z + s[2];
    auto i = (static_cast<std::size_t>(a) * n + b) * n + c;
    if (seen[i]) continue;
    seen[i] = 1;
    saw_walk(seen, n, a, b, c, left - 1, total);
    seen[i] = 0;
  }
}

}  // namespace

WalkCensus enumerate_chains_reference(const InjectionSite& site, ChainKind kind, int max_len) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  WalkCensus census;
  census.kind = kind;
  census.max_len = max_len;
  census.geometry_version = site.geometry_version;
  if (kind == ChainKind::kDual) {
    census.counts = DualReference(site, max_len).run();
  } else {
    census.counts = PrimalReference(site, max_len).run();
  }
  return census;
}

std::uint64_t count_cubic_saws(int length) {
  if (length < 0) throw ConfigError("length must be >= 0");
  int n = 2 * length + 3;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n * n, 0);
  int o = length + 1;
  seen[(static_cast<std::size_t>(o) * n + o) * n + o] = 1;
  std::uint64_t total = 0;
  saw_walk(seen, n, o, o, o, length, total);
  return total;
}

}  // namespace cqc
