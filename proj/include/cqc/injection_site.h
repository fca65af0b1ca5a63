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
#include <optional>
#include <string>
#include <vector>

#include "cqc/rhg_lattice.h"

namespace cqc {

// Version tag of the frozen default injection geometry. Any change to the
// defaults below must bump it, since censuses are keyed by it.
inline constexpr const char* kInjectionGeometryVersion = "rhg-injection-v1";

// Cell indices (i, j, k) address the primal cube with doubled center
// (2i+1, 2j+1, 2k+1).
using CellIndex = std::array<int, 3>;

// Shape of the shrunk defect around the singular face.
//
// The singular face separates the upper tube cell U = anchor from the lower
// tube cell D = anchor - z. The upper defect is a 1x1 column of tube_length
// cells starting at U, then square layers whose side grows by cone_growth per
// layer, spreading toward -x,-y. The lower defect is the point reflection of
// the upper one through the singular face, spreading toward +x,+y.
struct InjectionGeometry {
  int tube_length = 3;
  int cone_growth = 1;
  int max_cone_side = 0;  // 0 means unbounded (clipped by the lattice only)
  std::optional<CellIndex> anchor;  // defaults to the lattice center
  std::string version = kInjectionGeometryVersion;
};

struct InjectionSite {
  RhgLattice lattice;  // carries the region labels of the site
  InjectionGeometry geometry;
  QubitId singular_qubit{};
  CellIndex anchor{};
  std::vector<CellIndex> tube_cells;   // thin part of both defects
  std::vector<CellIndex> upper_cells;  // full upper defect (tube part included)
  std::vector<CellIndex> lower_cells;
  std::vector<QubitId> exclusion;  // qubits labeled defect
  std::string geometry_version;

  // 0 for no defect, +1 upper, -1 lower.
  int defect_side(CellIndex c) const;

 private:
  friend InjectionSite injection_site(const RhgLattice&, const InjectionGeometry&);
  std::vector<std::int8_t> side_;
};

InjectionSite injection_site(const RhgLattice& lattice, const InjectionGeometry& params = {});

// Lattice dims (open boundary) with the injection site centered and enough
// margin that no chain of length <= max_len can reach the boundary. Loops
// above or below the thin tube must wrap a cone cross-section, so primal roots
// are confined to tube_length + max_len layers on each side of the singular
// face; the z extent leaves another max_len of margin beyond that.
Dims census_lattice_dims(int max_len);

}  // namespace cqc
