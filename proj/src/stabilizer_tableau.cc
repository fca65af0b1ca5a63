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


#include "cqc/stabilizer_tableau.h"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "cqc/errors.h"

namespace cqc {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

// Exponent of i (mod 4) picked up by the product P1 P2, from per-word masks.
int product_phase(const std::uint64_t* x1, const std::uint64_t* z1, const std::uint64_t* x2, const std::uint64_t* z2,
                  std::size_t words) {
  int total = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t y1 = x1[w] & z1[w], xo1 = x1[w] & ~z1[w], zo1 = ~x1[w] & z1[w];
    std::uint64_t y2 = x2[w] & z2[w], xo2 = x2[w] & ~z2[w], zo2 = ~x2[w] & z2[w];
    total += std::popcount((y1 & zo2) | (xo1 & y2) | (zo1 & xo2));
    total -= std::popcount((y1 & xo2) | (xo1 & zo2) | (zo1 & y2));
  }
  return ((total % 4) + 4) % 4;
}

}  // namespace

PauliString::PauliString(std::size_t n) : n_(n), x_(word_count(n), 0), z_(word_count(n), 0) {}

PauliString PauliString::parse(std::string_view text) {
  bool neg = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    neg = text[0] == '-';
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set(q, text[q]);
  p.neg_ = neg;
  return p;
}

PauliString PauliString::single(std::size_t n, std::size_t q, char p) {
  PauliString s(n);
  s.set(q, p);
  return s;
}

char PauliString::at(std::size_t q) const {
  static constexpr char kNames[] = {'I', 'Z', 'X', 'Y'};
  return kNames[(x(q) << 1) | z(q)];
}

void PauliString::set(std::size_t q, char p) {
  if (q >= n_) throw std::out_of_range("pauli index out of range");
  bool bx = p == 'X' || p == 'Y';
  bool bz = p == 'Z' || p == 'Y';
  if (!bx && !bz && p != 'I' && p != '_') throw ConfigError(std::string("unknown pauli '") + p + "'");
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  x_[q >> 6] = bx ? (x_[q >> 6] | m) : (x_[q >> 6] & ~m);
  z_[q >> 6] = bz ? (z_[q >> 6] | m) : (z_[q >> 6] & ~m);
}

bool PauliString::commutes(const PauliString& other) const {
  if (other.n_ != n_) throw std::invalid_argument("pauli size mismatch");
  int parity = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) parity ^= std::popcount((x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w])) & 1;
  return parity == 0;
}

std::string PauliString::to_string() const {
  std::string s(1, neg_ ? '-' : '+');
  for (std::size_t q = 0; q < n_; ++q) s += at(q);
  return s;
}

StabilizerTableau::StabilizerTableau(std::size_t n, Basis basis)
    : n_(n), words_(word_count(n)), xs_((2 * n + 1) * words_, 0), zs_((2 * n + 1) * words_, 0), signs_(2 * n + 1, 0) {
  if (n == 0) throw ConfigError("tableau needs at least one qubit");
  for (std::size_t q = 0; q < n; ++q) {
    std::uint64_t m = std::uint64_t{1} << (q & 63);
    bool plus = basis == Basis::kAllPlus;
    (plus ? zr(q) : xr(q))[q >> 6] |= m;          // destabilizer
    (plus ? xr(n + q) : zr(n + q))[q >> 6] |= m;  // stabilizer
  }
}

void StabilizerTableau::check(std::size_t q) const {
  if (q >= n_) throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
}

void StabilizerTableau::h(std::size_t q) {
  check(q);
  std::size_t w = q >> 6;
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    std::uint64_t& xw = xr(r)[w];
    std::uint64_t& zw = zr(r)[w];
    if ((xw & m) && (zw & m)) signs_[r] ^= 1;
    std::uint64_t xb = xw & m, zb = zw & m;
    xw = (xw & ~m) | zb;
    zw = (zw & ~m) | xb;
  }
}

void StabilizerTableau::s(std::size_t q) {
  check(q);
  std::size_t w = q >> 6;
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    std::uint64_t xw = xr(r)[w];
    std::uint64_t& zw = zr(r)[w];
    if ((xw & m) && (zw & m)) signs_[r] ^= 1;
    zw ^= xw & m;
  }
}

void StabilizerTableau::sdg(std::size_t q) {
  check(q);
  std::size_t w = q >> 6;
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    std::uint64_t xw = xr(r)[w];
    std::uint64_t& zw = zr(r)[w];
    zw ^= xw & m;
    if ((xw & m) && (zw & m)) signs_[r] ^= 1;
  }
}

void StabilizerTableau::x(std::size_t q) {
  check(q);
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= (zr(r)[q >> 6] & m) != 0;
}

void StabilizerTableau::z(std::size_t q) {
  check(q);
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= (xr(r)[q >> 6] & m) != 0;
}

void StabilizerTableau::y(std::size_t q) {
  check(q);
  std::uint64_t m = std::uint64_t{1} << (q & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= ((xr(r)[q >> 6] ^ zr(r)[q >> 6]) & m) != 0;
}

void StabilizerTableau::cx(std::size_t c, std::size_t t) {
  check(c);
  check(t);
  if (c == t) throw ConfigError("two-qubit gate on a single qubit");
  std::size_t wc = c >> 6, wt = t >> 6;
  int bc = static_cast<int>(c & 63), bt = static_cast<int>(t & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    bool xc = (xr(r)[wc] >> bc) & 1, zc = (zr(r)[wc] >> bc) & 1;
    bool xt = (xr(r)[wt] >> bt) & 1, zt = (zr(r)[wt] >> bt) & 1;
    if (xc && zt && (xt == zc)) signs_[r] ^= 1;
    if (xc) xr(r)[wt] ^= std::uint64_t{1} << bt;
    if (zt) zr(r)[wc] ^= std::uint64_t{1} << bc;
  }
}

void StabilizerTableau::cz(std::size_t a, std::size_t b) {
  check(a);
  check(b);
  if (a == b) throw ConfigError("two-qubit gate on a single qubit");
  std::size_t wa = a >> 6, wb = b >> 6;
  int ba = static_cast<int>(a & 63), bb = static_cast<int>(b & 63);
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    bool xa = (xr(r)[wa] >> ba) & 1, za = (zr(r)[wa] >> ba) & 1;
    bool xb = (xr(r)[wb] >> bb) & 1, zb = (zr(r)[wb] >> bb) & 1;
    if (xa && xb && (za != zb)) signs_[r] ^= 1;
    if (xb) zr(r)[wa] ^= std::uint64_t{1} << ba;
    if (xa) zr(r)[wb] ^= std::uint64_t{1} << bb;
  }
}

void StabilizerTableau::zz_quarter(std::size_t a, std::size_t b) {
  sdg(a);
  sdg(b);
  cz(a, b);
}

void StabilizerTableau::apply_pauli(const PauliString& p) {
  if (p.size() != n_) throw std::invalid_argument("pauli size mismatch");
  // Conjugating row R by P flips its sign iff R and P anticommute.
  for (std::size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= anticommutes_with(r, p);
}

bool StabilizerTableau::anticommutes_with(std::size_t row, const PauliString& p) const {
  auto px = p.x_words();
  auto pz = p.z_words();
  int parity = 0;
  for (std::size_t w = 0; w < words_; ++w) parity ^= std::popcount((xr(row)[w] & pz[w]) ^ (zr(row)[w] & px[w])) & 1;
  return parity != 0;
}

void StabilizerTableau::rowsum(std::size_t h, std::size_t i) {
  int phase = 2 * signs_[h] + 2 * signs_[i] + product_phase(xr(i), zr(i), xr(h), zr(h), words_);
  signs_[h] = (phase % 4) == 2;
  for (std::size_t w = 0; w < words_; ++w) {
    xr(h)[w] ^= xr(i)[w];
    zr(h)[w] ^= zr(i)[w];
  }
}

void StabilizerTableau::set_row(std::size_t r, const PauliString& p) {
  auto px = p.x_words();
  auto pz = p.z_words();
  for (std::size_t w = 0; w < words_; ++w) {
    xr(r)[w] = px[w];
    zr(r)[w] = pz[w];
  }
  signs_[r] = p.negative();
}

PauliString StabilizerTableau::row(std::size_t r) const {
  PauliString p(n_);
  for (std::size_t q = 0; q < n_; ++q) {
    bool bx = (xr(r)[q >> 6] >> (q & 63)) & 1;
    bool bz = (zr(r)[q >> 6] >> (q & 63)) & 1;
    p.set(q, bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I'));
  }
  p.set_negative(signs_[r]);
  return p;
}

PauliString StabilizerTableau::stabilizer(std::size_t i) const {
  check(i);
  return row(n_ + i);
}

PauliString StabilizerTableau::destabilizer(std::size_t i) const {
  check(i);
  return row(i);
}

std::pair<bool, bool> StabilizerTableau::deterministic_sign(const PauliString& p) const {
  if (p.size() != n_) throw std::invalid_argument("pauli size mismatch");
  for (std::size_t r = n_; r < 2 * n_; ++r) {
    if (anticommutes_with(r, p)) return {false, false};
  }
  // Product of the stabilizers whose destabilizer anticommutes with p.
  std::vector<std::uint64_t> sx(words_, 0), sz(words_, 0);
  int sign = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!anticommutes_with(i, p)) continue;
    std::size_t r = n_ + i;
    int phase = 2 * sign + 2 * signs_[r] + product_phase(xr(r), zr(r), sx.data(), sz.data(), words_);
    sign = (phase % 4) == 2;
    for (std::size_t w = 0; w < words_; ++w) {
      sx[w] ^= xr(r)[w];
      sz[w] ^= zr(r)[w];
    }
  }
  return {true, (sign != 0) != p.negative()};
}

int StabilizerTableau::expectation(const PauliString& p) const {
  auto [det, neg] = deterministic_sign(p);
  if (!det) return 0;
  return neg ? -1 : 1;
}

bool StabilizerTableau::measure(const PauliString& p, bool coin) {
  if (p.size() != n_) throw std::invalid_argument("pauli size mismatch");
  std::size_t pivot = 2 * n_;
  for (std::size_t r = n_; r < 2 * n_; ++r) {
    if (anticommutes_with(r, p)) {
      pivot = r;
      break;
    }
  }
  if (pivot == 2 * n_) return deterministic_sign(p).second;
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    if (r != pivot && anticommutes_with(r, p)) rowsum(r, pivot);
  }
  std::copy_n(xr(pivot), words_, xr(pivot - n_));
  std::copy_n(zr(pivot), words_, zr(pivot - n_));
  signs_[pivot - n_] = signs_[pivot];
  set_row(pivot, p);
  signs_[pivot] = p.negative() != coin;
  return coin;
}

bool StabilizerTableau::measure_x(std::size_t q, bool coin) { return measure(PauliString::single(n_, q, 'X'), coin); }

bool StabilizerTableau::measure_z(std::size_t q, bool coin) { return measure(PauliString::single(n_, q, 'Z'), coin); }

double StabilizerTableau::postselect(const PauliString& p, bool outcome) {
  auto [det, neg] = deterministic_sign(p);
  if (det) return neg == outcome ? 1.0 : 0.0;
  measure(p, outcome);
  return 0.5;
}

std::vector<PauliString> StabilizerTableau::x_type_stabilizers() const {
  // Gaussian elimination on the Z parts of a copy of the stabilizer rows,
  // multiplying rows with their phases. Rows left without a Z part generate
  // the X-type subgroup.
  StabilizerTableau work = *this;
  std::vector<std::size_t> rows;
  for (std::size_t r = n_; r < 2 * n_; ++r) rows.push_back(r);
  std::size_t next = 0;
  for (std::size_t q = 0; q < n_ && next < rows.size(); ++q) {
    std::uint64_t m = std::uint64_t{1} << (q & 63);
    std::size_t found = rows.size();
    for (std::size_t k = next; k < rows.size(); ++k) {
      if (work.zr(rows[k])[q >> 6] & m) {
        found = k;
        break;
      }
    }
    if (found == rows.size()) continue;
    std::swap(rows[next], rows[found]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k != next && (work.zr(rows[k])[q >> 6] & m)) work.rowsum(rows[k], rows[next]);
    }
    ++next;
  }
  std::vector<PauliString> out;
  for (std::size_t k = next; k < rows.size(); ++k) out.push_back(work.row(rows[k]));
  return out;
}

StabilizerTableau init_tableau(std::size_t n, Basis basis) { return StabilizerTableau(n, basis); }

void apply_gate(StabilizerTableau& t, const Gate& g) {
  switch (g.kind) {
    case GateKind::kI:
      if (g.a >= t.num_qubits()) throw std::out_of_range("qubit out of range");
      return;
    case GateKind::kX: t.x(g.a); return;
    case GateKind::kY: t.y(g.a); return;
    case GateKind::kZ: t.z(g.a); return;
    case GateKind::kH: t.h(g.a); return;
    case GateKind::kS: t.s(g.a); return;
    case GateKind::kSdg: t.sdg(g.a); return;
    case GateKind::kCz: t.cz(g.a, g.b); return;
    case GateKind::kCx: t.cx(g.a, g.b); return;
    case GateKind::kZzQuarter: t.zz_quarter(g.a, g.b); return;
    case GateKind::kT:
    case GateKind::kRz:
    case GateKind::kZzPhase: break;
  }
  throw ConfigError("non-Clifford gate " + std::string(to_string(g.kind)) + " requested on a stabilizer tableau");
}

char apply_pauli_noise(StabilizerTableau& t, const PauliChannel& channel, std::size_t site, CounterRng& rng) {
  double u = rng.uniform();
  char p = 'I';
  if (u < channel.p_x) {
    p = 'X';
    t.x(site);
  } else if (u < channel.p_x + channel.p_y) {
    p = 'Y';
    t.y(site);
  } else if (u < channel.p_x + channel.p_y + channel.p_z) {
    p = 'Z';
    t.z(site);
  }
  return p;
}

void prepare_stabilizer_state(StabilizerTableau& t, std::span<const std::size_t> qubits,
                              std::span<const PauliString> generators) {
  std::size_t k = qubits.size();
  if (k == 0 || k > 4) throw ConfigError("prepare_stabilizer_state supports 1 to 4 qubits");
  auto embed = [&](const PauliString& local) {
    if (local.size() != k) throw ConfigError("generator size does not match qubit count");
    PauliString full(t.num_qubits());
    for (std::size_t i = 0; i < k; ++i) full.set(qubits[i], local.at(i));
    full.set_negative(local.negative());
    return full;
  };
  for (std::size_t g = 0; g < generators.size(); ++g) {
    PauliString full = embed(generators[g]);
    if (!t.measure(full, false)) continue;
    // Flip the sign with a local Pauli anticommuting with this generator only.
    bool fixed = false;
    for (std::uint32_t code = 1; code < (1u << (2 * k)) && !fixed; ++code) {
      PauliString c(k);
      for (std::size_t i = 0; i < k; ++i) c.set(i, "IXYZ"[(code >> (2 * i)) & 3]);
      if (c.commutes(generators[g])) continue;
      bool ok = true;
      for (std::size_t e = 0; e < g && ok; ++e) ok = c.commutes(generators[e]);
      if (!ok) continue;
      t.apply_pauli(embed(c));
      fixed = true;
    }
    if (!fixed) throw ConfigError("generators are not independent");
  }
}

}  // namespace cqc
