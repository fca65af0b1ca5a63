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

#include "cqc/injection_site.h"
#include "cqc/errors.h"

#include <algorithm>
#include <stdexcept>

namespace cqc {

int InjectionSite::defect_side(CellIndex c) const {
  Dims d = lattice.dims();
  for (int a = 0; a < 3; ++a) {
    if (c[a] < 0 || c[a] >= d[a]) return 0;
  }
  return side_[(static_cast<std::size_t>(c[0]) * d.y + c[1]) * d.z + c[2]];
}

InjectionSite injection_site(const RhgLattice& lattice, const InjectionGeometry& params) {
  if (params.tube_length < 1 || params.cone_growth < 0 || params.max_cone_side < 0) {
    throw ConfigError("invalid injection geometry parameters");
  }
  Dims d = lattice.dims();
  CellIndex anchor = params.anchor.value_or(CellIndex{d.x / 2, d.y / 2, d.z / 2});
  if (anchor[0] < 0 || anchor[0] >= d.x || anchor[1] < 0 || anchor[1] >= d.y ||
      anchor[2] - params.tube_length < 0 || anchor[2] + params.tube_length > d.z) {
    throw ConfigError("geometry does not fit");
  }

  InjectionSite site;
  site.lattice = lattice;
  site.geometry = params;
  site.geometry.anchor = anchor;
  site.anchor = anchor;
  site.geometry_version = params.version;
  site.side_.assign(static_cast<std::size_t>(d.x) * d.y * d.z, 0);
  auto mark = [&](CellIndex c, int side, int layer) {
    site.side_[(static_cast<std::size_t>(c[0]) * d.y + c[1]) * d.z + c[2]] = static_cast<std::int8_t>(side);
    (side > 0 ? site.upper_cells : site.lower_cells).push_back(c);
    if (layer < params.tube_length) site.tube_cells.push_back(c);
  };
  auto layer_side = [&](int layer) {
    int s = layer < params.tube_length ? 1 : 1 + params.cone_growth * (layer - params.tube_length + 1);
    return params.max_cone_side > 0 ? std::min(s, params.max_cone_side) : s;
  };
  for (int k = anchor[2]; k < d.z; ++k) {
    int layer = k - anchor[2];
    int s = layer_side(layer);
    for (int i = std::max(0, anchor[0] - s + 1); i <= anchor[0]; ++i) {
      for (int j = std::max(0, anchor[1] - s + 1); j <= anchor[1]; ++j) mark({i, j, k}, +1, layer);
    }
  }
  for (int k = anchor[2] - 1; k >= 0; --k) {
    int layer = anchor[2] - 1 - k;
    int s = layer_side(layer);
    for (int i = anchor[0]; i <= std::min(d.x - 1, anchor[0] + s - 1); ++i) {
      for (int j = anchor[1]; j <= std::min(d.y - 1, anchor[1] + s - 1); ++j) mark({i, j, k}, -1, layer);
    }
  }

  Coord singular{2 * anchor[0] + 1, 2 * anchor[1] + 1, 2 * anchor[2]};
  RegionSpec spec;
  for (std::uint32_t i = 0; i < lattice.num_qubits(); ++i) {
    Coord c = lattice.coord(QubitId{i});
    if (c == singular) {
      spec.labels.emplace_back(c, Region::kSingular);
      continue;
    }
    // A qubit lies in the defect interior when every cell around it is defect.
    // The neighboring cells sit at +-1 along each even axis.
    std::array<int, 2> axes{};
    int n_axes = 0;
    for (int a = 0; a < 3; ++a) {
      if ((c[a] & 1) == 0) axes[n_axes++] = a;
    }
    int present = 0;
    bool all_defect = true;
    int combos = 1 << n_axes;
    for (int m = 0; m < combos && all_defect; ++m) {
      Coord cc = c;
      for (int t = 0; t < n_axes; ++t) cc[axes[t]] += (m >> t & 1) ? 1 : -1;
      auto cell = lattice.find_cell(cc);
      if (!cell) continue;
      Coord n = lattice.cells()[index_of(*cell)].center;
      ++present;
      if (site.defect_side({(n.x - 1) / 2, (n.y - 1) / 2, (n.z - 1) / 2}) == 0) all_defect = false;
    }
    if (present > 0 && all_defect) spec.labels.emplace_back(c, Region::kDefect);
  }
  site.lattice = lattice.with_regions(spec);
  site.singular_qubit = *site.lattice.find(singular);
  for (const auto& [c, label] : spec.labels) {
    if (label == Region::kDefect) site.exclusion.push_back(*site.lattice.find(c));
  }
  return site;
}

Dims census_lattice_dims(int max_len) {
  int len = std::max(max_len, 4);
  int tube = InjectionGeometry{}.tube_length;
  return Dims{2 * len + 6, 2 * len + 6, 2 * (tube + 2 * len) + 6};
}

}  // namespace cqc
