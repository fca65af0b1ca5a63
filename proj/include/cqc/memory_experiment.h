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


// Postselected memory experiment on a periodic lattice under pure dephasing of the face qubits.

#pragma once

#include <cstdint>
#include <string_view>

#include "cqc/rhg_lattice.h"

namespace cqc {

enum class MemoryMethod : std::uint8_t {
  kRejection,    // i.i.d. errors, keep trials with trivial syndrome
  kMarkovChain,  // Metropolis walk over closed error cycles
};

std::string_view to_string(MemoryMethod m);
MemoryMethod memory_method_from_string(std::string_view s);

struct MemoryOptions {
  MemoryMethod method = MemoryMethod::kMarkovChain;
  std::uint64_t burn_in_sweeps = 2000;
  int batches = 50;
};

struct MemoryResult {
  MemoryMethod method = MemoryMethod::kMarkovChain;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;  // rejection pass
  double postselect_rate = 0;
  // Fraction of kept error configurations with odd crossing of the x = 0 cut plane.
  // NaN when the rejection method kept nothing.
  double logical_error_rate = 0;
  double logical_stderr = 0;
  bool zero_accepted = false;
};

// `trials` counts rejection trials, and also chain sweeps for the Markov chain method.
MemoryResult postselected_memory_experiment(const RhgLattice& lattice, double q, std::uint64_t trials,
                                            std::uint64_t seed, const MemoryOptions& options = {});

}  // namespace cqc
