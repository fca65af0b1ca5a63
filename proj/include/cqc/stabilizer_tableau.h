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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqc/circuit.h"
#include "cqc/noise_thresholds.h"
#include "cqc/rng.h"

namespace cqc {

// Hermitian Pauli product (-1)^sign P_0 ... P_{n-1}. Per qubit (x, z) = 00 I,
// 10 X, 11 Y, 01 Z.
class PauliString {
 public:
  explicit PauliString(std::size_t n = 0);
  // "+XIZ", "-YY", "ZZ" (sign optional); '_' is accepted for I.
  static PauliString parse(std::string_view text);
  static PauliString single(std::size_t n, std::size_t q, char p);

  std::size_t size() const { return n_; }
  bool x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
  bool z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
  char at(std::size_t q) const;
  void set(std::size_t q, char p);
  bool negative() const { return neg_; }
  void set_negative(bool neg) { neg_ = neg; }

  bool commutes(const PauliString& other) const;
  std::string to_string() const;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  bool neg_ = false;
};

enum class Basis : std::uint8_t { kAllZero, kAllPlus };

// Aaronson-Gottesman tableau: rows [0, n) destabilizers, [n, 2n) stabilizers,
// row 2n scratch. Bit-packed, 64 qubits per word.
class StabilizerTableau {
 public:
  StabilizerTableau(std::size_t n, Basis basis);

  std::size_t num_qubits() const { return n_; }

  void h(std::size_t q);
  void s(std::size_t q);
  void sdg(std::size_t q);
  void x(std::size_t q);
  void y(std::size_t q);
  void z(std::size_t q);
  void cx(std::size_t control, std::size_t target);
  void cz(std::size_t a, std::size_t b);
  void zz_quarter(std::size_t a, std::size_t b);  // exp(i pi/4 Z_a Z_b) = CZ (S^dag x S^dag) up to phase
  void apply_pauli(const PauliString& p);

  PauliString stabilizer(std::size_t i) const;
  PauliString destabilizer(std::size_t i) const;

  // +1 or -1 when p (or -p) is in the stabilizer group, 0 when the outcome is random.
  int expectation(const PauliString& p) const;

  // Measures observable p. Returns the outcome bit (false for +1). `coin` is
  // used as the outcome when it is random.
  bool measure(const PauliString& p, bool coin);
  bool measure_x(std::size_t q, bool coin);
  bool measure_z(std::size_t q, bool coin);

  // Projects onto the `outcome` eigenspace of p and returns its probability
  // (1, 1/2 or 0). The state is unchanged when the probability is 0.
  double postselect(const PauliString& p, bool outcome);

  // Generators of the subgroup of stabilizers with no Z or Y factor, with signs.
  std::vector<PauliString> x_type_stabilizers() const;

 private:
  std::size_t words() const { return words_; }
  std::uint64_t* xr(std::size_t row) { return &xs_[row * words_]; }
  std::uint64_t* zr(std::size_t row) { return &zs_[row * words_]; }
  const std::uint64_t* xr(std::size_t row) const { return &xs_[row * words_]; }
  const std::uint64_t* zr(std::size_t row) const { return &zs_[row * words_]; }
  bool anticommutes_with(std::size_t row, const PauliString& p) const;
  void rowsum(std::size_t h, std::size_t i);
  void set_row(std::size_t row, const PauliString& p);
  PauliString row(std::size_t r) const;
  void check(std::size_t q) const;
  std::pair<bool, bool> deterministic_sign(const PauliString& p) const;  // (deterministic, negative)

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> xs_;
  std::vector<std::uint64_t> zs_;
  std::vector<std::uint8_t> signs_;
};

StabilizerTableau init_tableau(std::size_t n, Basis basis);

// Throws ConfigError for gates outside the Clifford group.
void apply_gate(StabilizerTableau& t, const Gate& gate);

// Samples one Pauli from the channel and applies it to `site`. Returns the
// sampled Pauli as 'I', 'X', 'Y' or 'Z'.
char apply_pauli_noise(StabilizerTableau& t, const PauliChannel& channel, std::size_t site, CounterRng& rng);

// Fixes the state on `qubits` to the +1 eigenstate of each generator (given on
// those qubits only, so generators[i].size() == qubits.size() <= 4), by
// measurement plus Pauli correction.
void prepare_stabilizer_state(StabilizerTableau& t, std::span<const std::size_t> qubits,
                              std::span<const PauliString> generators);

}  // namespace cqc
