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

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqc {

// Doubled integer coordinates on the primal cubic lattice. Exactly one odd
// component: midpoint of a primal edge (edge qubit). Exactly two odd
// components: center of a primal face (face qubit). Three odd components: a
// primal cube center (unit cell). All even: a primal vertex.
struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  int& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

int num_odd(Coord c);

struct Dims {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Boundary : std::uint8_t { kPeriodic, kOpen };
enum class QubitKind : std::uint8_t { kFace, kEdge };
enum class Region : std::uint8_t { kVacuum, kDefect, kSingular };

enum class QubitId : std::uint32_t {};
enum class CellId : std::uint32_t {};

constexpr std::uint32_t index_of(QubitId q) { return static_cast<std::uint32_t>(q); }
constexpr std::uint32_t index_of(CellId c) { return static_cast<std::uint32_t>(c); }

std::string_view to_string(Boundary b);
std::string_view to_string(Region r);
Boundary boundary_from_string(std::string_view s);
Region region_from_string(std::string_view s);

struct RegionSpec {
  std::vector<std::pair<Coord, Region>> labels;
};

struct Cell {
  CellId id;
  Coord center;
  std::array<QubitId, 6> faces;  // center -x, +x, -y, +y, -z, +z
};

// One CZ between a face qubit and a boundary edge of that face. Colors are a
// proper 4-edge-coloring; each color class is one layer of the depth-4 circuit.
struct Coupling {
  QubitId face;
  QubitId edge;
  std::uint8_t color;
};

class RhgLattice {
 public:
  Dims dims() const { return dims_; }
  Boundary boundary() const { return boundary_; }
  std::size_t num_qubits() const { return coords_.size(); }

  Coord coord(QubitId q) const;
  QubitKind kind(QubitId q) const;
  Region region(QubitId q) const;

  // Resolves a doubled coordinate (wrapped under periodic boundary).
  std::optional<QubitId> find(Coord c) const;
  std::optional<CellId> find_cell(Coord center) const;
  // Wraps a coordinate into the fundamental box; nullopt when outside an open box.
  std::optional<Coord> normalize(Coord c) const;

  std::span<const QubitId> neighbors(QubitId q) const;
  std::span<const Cell> cells() const { return cells_; }
  std::span<const Coupling> couplings() const { return couplings_; }

  // Copy of this lattice with region labels replaced.
  RhgLattice with_regions(const RegionSpec& spec) const;
  RegionSpec region_spec() const;

 private:
  friend RhgLattice build_lattice(Dims dims, Boundary boundary, const RegionSpec& regions);

  void check(QubitId q) const;
  std::int64_t slot(Coord normalized) const;

  Dims dims_;
  Boundary boundary_ = Boundary::kPeriodic;
  std::array<int, 3> extent_{};  // number of distinct doubled coordinates per axis
  std::vector<Coord> coords_;
  std::vector<QubitKind> kinds_;
  std::vector<Region> regions_;
  std::vector<std::uint32_t> neighbor_offsets_;
  std::vector<QubitId> neighbor_ids_;
  std::vector<std::int32_t> slot_to_qubit_;
  std::vector<std::int32_t> slot_to_cell_;
  std::vector<Cell> cells_;
  std::vector<Coupling> couplings_;
};

RhgLattice build_lattice(Dims dims, Boundary boundary, const RegionSpec& regions = {});

// Sorted neighbor ids; throws std::out_of_range for an unknown id.
std::vector<QubitId> adjacency(const RhgLattice& lattice, QubitId q);

std::span<const Cell> unit_cells(const RhgLattice& lattice);

// The couplings grouped by color: layer c holds every CZ applied at time step c.
std::array<std::vector<Coupling>, 4> cz_schedule(const RhgLattice& lattice);

bool is_proper_edge_coloring(const RhgLattice& lattice);

std::string lattice_to_json(const RhgLattice& lattice);
RhgLattice lattice_from_json(std::string_view text);

}  // namespace cqc
