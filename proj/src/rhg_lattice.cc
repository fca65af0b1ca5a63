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

#include "cqc/rhg_lattice.h"
#include "cqc/errors.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace cqc {

namespace {

int wrap(int v, int period) {
  int r = v % period;
  return r < 0 ? r + period : r;
}

Coord step(Coord c, int axis, int delta) {
  c[axis] += delta;
  return c;
}

}  // namespace

int num_odd(Coord c) { return (c.x & 1) + (c.y & 1) + (c.z & 1); }

std::string_view to_string(Boundary b) { return b == Boundary::kPeriodic ? "periodic" : "open"; }

std::string_view to_string(Region r) {
  switch (r) {
    case Region::kVacuum:
      return "vacuum";
    case Region::kDefect:
      return "defect";
    case Region::kSingular:
      return "singular";
  }
  return "vacuum";
}

Boundary boundary_from_string(std::string_view s) {
  if (s == "periodic") return Boundary::kPeriodic;
  if (s == "open") return Boundary::kOpen;
  throw ConfigError("unknown boundary: " + std::string(s));
}

Region region_from_string(std::string_view s) {
  if (s == "vacuum") return Region::kVacuum;
  if (s == "defect") return Region::kDefect;
  if (s == "singular") return Region::kSingular;
  throw ConfigError("unknown region label: " + std::string(s));
}

std::optional<Coord> RhgLattice::normalize(Coord c) const {
  for (int a = 0; a < 3; ++a) {
    if (boundary_ == Boundary::kPeriodic) {
      c[a] = wrap(c[a], extent_[a]);
    } else if (c[a] < 0 || c[a] >= extent_[a]) {
      return std::nullopt;
    }
  }
  return c;
}

std::int64_t RhgLattice::slot(Coord n) const {
  return (static_cast<std::int64_t>(n.x) * extent_[1] + n.y) * extent_[2] + n.z;
}

std::optional<QubitId> RhgLattice::find(Coord c) const {
  auto n = normalize(c);
  if (!n) return std::nullopt;
  std::int32_t q = slot_to_qubit_[slot(*n)];
  if (q < 0) return std::nullopt;
  return QubitId{static_cast<std::uint32_t>(q)};
}

std::optional<CellId> RhgLattice::find_cell(Coord center) const {
  auto n = normalize(center);
  if (!n) return std::nullopt;
  std::int32_t c = slot_to_cell_[slot(*n)];
  if (c < 0) return std::nullopt;
  return CellId{static_cast<std::uint32_t>(c)};
}

void RhgLattice::check(QubitId q) const {
  if (index_of(q) >= coords_.size()) {
    throw std::out_of_range("unknown qubit id " + std::to_string(index_of(q)));
  }
}

Coord RhgLattice::coord(QubitId q) const {
  check(q);
  return coords_[index_of(q)];
}

QubitKind RhgLattice::kind(QubitId q) const {
  check(q);
  return kinds_[index_of(q)];
}

Region RhgLattice::region(QubitId q) const {
  check(q);
  return regions_[index_of(q)];
}

std::span<const QubitId> RhgLattice::neighbors(QubitId q) const {
  check(q);
  std::uint32_t i = index_of(q);
  return {neighbor_ids_.data() + neighbor_offsets_[i], neighbor_offsets_[i + 1] - neighbor_offsets_[i]};
}

RhgLattice RhgLattice::with_regions(const RegionSpec& spec) const {
  RhgLattice copy = *this;
  std::fill(copy.regions_.begin(), copy.regions_.end(), Region::kVacuum);
  std::vector<bool> labeled(copy.coords_.size(), false);
  for (const auto& [c, label] : spec.labels) {
    auto q = copy.find(c);
    if (!q) {
      throw ConfigError("region spec references nonexistent coordinate (" + std::to_string(c.x) + "," +
                                  std::to_string(c.y) + "," + std::to_string(c.z) + ")");
    }
    std::uint32_t i = index_of(*q);
    if (labeled[i] && copy.regions_[i] != label) {
      throw ConfigError("region spec assigns two labels to one qubit");
    }
    labeled[i] = true;
    copy.regions_[i] = label;
  }
  return copy;
}

RegionSpec RhgLattice::region_spec() const {
  RegionSpec spec;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (regions_[i] != Region::kVacuum) spec.labels.emplace_back(coords_[i], regions_[i]);
  }
  return spec;
}

RhgLattice build_lattice(Dims dims, Boundary boundary, const RegionSpec& regions) {
  if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) {
    throw ConfigError("empty lattice");
  }
  RhgLattice lat;
  lat.dims_ = dims;
  lat.boundary_ = boundary;
  for (int a = 0; a < 3; ++a) {
    lat.extent_[a] = 2 * dims[a] + (boundary == Boundary::kOpen ? 1 : 0);
  }
  std::size_t slots = static_cast<std::size_t>(lat.extent_[0]) * lat.extent_[1] * lat.extent_[2];
  lat.slot_to_qubit_.assign(slots, -1);
  lat.slot_to_cell_.assign(slots, -1);

  // Lexicographic order of coordinates gives the qubit and cell indexing.
  for (int x = 0; x < lat.extent_[0]; ++x) {
    for (int y = 0; y < lat.extent_[1]; ++y) {
      for (int z = 0; z < lat.extent_[2]; ++z) {
        Coord c{x, y, z};
        int odd = num_odd(c);
        if (odd == 1 || odd == 2) {
          lat.slot_to_qubit_[lat.slot(c)] = static_cast<std::int32_t>(lat.coords_.size());
          lat.coords_.push_back(c);
          lat.kinds_.push_back(odd == 2 ? QubitKind::kFace : QubitKind::kEdge);
        } else if (odd == 3) {
          lat.slot_to_cell_[lat.slot(c)] = static_cast<std::int32_t>(lat.cells_.size());
          lat.cells_.push_back(Cell{CellId{static_cast<std::uint32_t>(lat.cells_.size())}, c, {}});
        }
      }
    }
  }
  lat.regions_.assign(lat.coords_.size(), Region::kVacuum);

  lat.neighbor_offsets_.reserve(lat.coords_.size() + 1);
  lat.neighbor_offsets_.push_back(0);
  for (std::size_t i = 0; i < lat.coords_.size(); ++i) {
    Coord c = lat.coords_[i];
    QubitId self{static_cast<std::uint32_t>(i)};
    // A face couples along its two odd axes, an edge along its two even axes.
    int want_parity = lat.kinds_[i] == QubitKind::kFace ? 1 : 0;
    std::vector<QubitId> nb;
    auto first_coupling = static_cast<std::ptrdiff_t>(lat.couplings_.size());
    for (int a = 0; a < 3; ++a) {
      if ((c[a] & 1) != want_parity) continue;
      for (int d : {-1, +1}) {
        auto q = lat.find(step(c, a, d));
        if (!q) continue;
        if (std::find(nb.begin(), nb.end(), *q) == nb.end()) nb.push_back(*q);
        if (lat.kinds_[i] == QubitKind::kFace && index_of(*q) != i) {
          bool seen = std::any_of(lat.couplings_.begin() + first_coupling, lat.couplings_.end(),
                                  [&](const Coupling& k) { return k.edge == *q; });
          if (!seen) {
            int normal = (c.x & 1) == 0 ? 0 : ((c.y & 1) == 0 ? 1 : 2);
            int r = ((a - normal) % 3 + 3) % 3;  // 1 or 2
            auto color = static_cast<std::uint8_t>(2 * (r - 1) + (d > 0 ? 1 : 0));
            lat.couplings_.push_back(Coupling{self, *q, color});
          }
        }
      }
    }
    std::sort(nb.begin(), nb.end());
    lat.neighbor_ids_.insert(lat.neighbor_ids_.end(), nb.begin(), nb.end());
    lat.neighbor_offsets_.push_back(static_cast<std::uint32_t>(lat.neighbor_ids_.size()));
  }

  for (Cell& cell : lat.cells_) {
    int k = 0;
    for (int a = 0; a < 3; ++a) {
      for (int d : {-1, +1}) {
        auto q = lat.find(step(cell.center, a, d));
        if (!q) throw std::logic_error("cell face missing");
        cell.faces[k++] = *q;
      }
    }
  }

  if (!regions.labels.empty()) return lat.with_regions(regions);
  return lat;
}

std::vector<QubitId> adjacency(const RhgLattice& lattice, QubitId q) {
  auto nb = lattice.neighbors(q);
  return {nb.begin(), nb.end()};
}

std::span<const Cell> unit_cells(const RhgLattice& lattice) { return lattice.cells(); }

std::array<std::vector<Coupling>, 4> cz_schedule(const RhgLattice& lattice) {
  std::array<std::vector<Coupling>, 4> layers;
  for (const Coupling& c : lattice.couplings()) layers[c.color].push_back(c);
  for (auto& layer : layers) {
    std::sort(layer.begin(), layer.end(), [](const Coupling& a, const Coupling& b) {
      return std::pair(a.face, a.edge) < std::pair(b.face, b.edge);
    });
  }
  return layers;
}

bool is_proper_edge_coloring(const RhgLattice& lattice) {
  std::vector<std::uint8_t> used(lattice.num_qubits(), 0);
  for (const Coupling& c : lattice.couplings()) {
    if (c.color >= 4) return false;
    auto bit = static_cast<std::uint8_t>(1u << c.color);
    for (QubitId q : {c.face, c.edge}) {
      if (used[index_of(q)] & bit) return false;
      used[index_of(q)] |= bit;
    }
  }
  return true;
}

std::string lattice_to_json(const RhgLattice& lattice) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["dims"] = {lattice.dims().x, lattice.dims().y, lattice.dims().z};
  j["boundary"] = to_string(lattice.boundary());
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& [c, label] : lattice.region_spec().labels) {
    regions.push_back({{"coord", {c.x, c.y, c.z}}, {"label", to_string(label)}});
  }
  j["regions"] = regions;
  return j.dump();
}

RhgLattice lattice_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("lattice json: ") + e.what());
  }
  auto d = j.at("dims");
  if (!d.is_array() || d.size() != 3) throw ConfigError("lattice json: dims must have 3 entries");
  Dims dims{d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
  Boundary b = boundary_from_string(j.value("boundary", std::string("periodic")));
  RegionSpec spec;
  if (j.contains("regions")) {
    for (const auto& r : j["regions"]) {
      const auto& c = r.at("coord");
      spec.labels.emplace_back(Coord{c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()},
                               region_from_string(r.at("label").get<std::string>()));
    }
  }
  return build_lattice(dims, b, spec);
}

}  // namespace cqc
