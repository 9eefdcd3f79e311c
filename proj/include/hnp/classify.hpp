#pragma once

// Hasse norm principle for biquadratic K/Q. The principle fails exactly when
// every decomposition group is cyclic, i.e. when every ramified prime splits in
// at least one of the three quadratic subfields. Two deciders are provided: a
// splitting oracle that works prime by prime on Delta_K, and the congruence and
// residue-symbol criteria on (m, a1, b1) used by the enumerator.

#include <array>
#include <optional>
#include <string_view>

#include "hnp/arith.hpp"
#include "hnp/fields.hpp"

namespace hnp {

enum class Verdict { Fails, Holds };

constexpr std::string_view to_string(Verdict v) { return v == Verdict::Fails ? "fails" : "holds"; }

struct HnpStatus {
  Verdict verdict = Verdict::Fails;
  std::optional<i64> witness;  // smallest prime with non-cyclic decomposition group

  static HnpStatus fails() { return {Verdict::Fails, std::nullopt}; }
  static HnpStatus holds(i64 p) { return {Verdict::Holds, p}; }
  bool fails_hnp() const { return verdict == Verdict::Fails; }
  friend bool operator==(const HnpStatus&, const HnpStatus&) = default;
};

/// Small fixed-capacity list of distinct primes. Fifteen odd primes already
/// multiply past 2^63.
struct PrimeList {
  std::array<i64, 16> p{};
  int size = 0;

  void push(i64 q) { p[size++] = q; }
  const i64* begin() const { return p.data(); }
  const i64* end() const { return p.data() + size; }
};

inline PrimeList prime_list_of(i64 n) {
  PrimeList out;
  for (const i64 q : distinct_prime_factors(n)) out.push(q);
  return out;
}

// ---------------------------------------------------------------------------
// Splitting oracle
// ---------------------------------------------------------------------------

inline HnpStatus classify_oracle(const FieldTriple& t) {
  const SubfieldData s = subfield_data(t);
  // Primes dividing Delta_K are the primes dividing some fundamental discriminant.
  std::optional<i64> witness;
  const auto check_prime = [&](i64 p) {
    for (const i64 d : s.fundamental_discs)
      if (kronecker(d, p) == 1) return;
    if (!witness || p < *witness) witness = p;
  };
  for (const i64 d : s.fundamental_discs)
    for (const i64 p : distinct_prime_factors(d)) check_prime(p);
  return witness ? HnpStatus::holds(*witness) : HnpStatus::fails();
}

// ---------------------------------------------------------------------------
// Congruence / symbol criteria
// ---------------------------------------------------------------------------

/// Decide from residues of (m, a1, b1) mod 4 and 8 and Legendre conditions at
/// the primes of each component. `primes[i]` must list the distinct primes of
/// component i (including 2 for an even component).
inline HnpStatus classify_lemma(const FieldTriple& t, const std::array<PrimeList, 3>& primes) {
  const std::array<i64, 3> comp = t.components();
  const std::array<i64, 3> r{mod(comp[0], 4), mod(comp[1], 4), mod(comp[2], 4)};

  std::optional<i64> witness;
  const auto fail_at = [&](i64 p) {
    if (!witness || p < *witness) witness = p;
  };

  if (r[0] != r[1] && r[1] != r[2] && r[0] != r[2]) return HnpStatus::holds(2);

  if (r[0] == r[1] && r[1] == r[2]) {
    // Pairwise coprime squarefree components cannot share residue 0 or 2.
    if (r[0] % 2 == 0) throw std::logic_error("classify_lemma: even components share a residue");
  } else {
    const int odd_one = r[0] == r[1] ? 2 : r[1] == r[2] ? 0 : 1;
    const int i = (odd_one + 1) % 3;
    const int j = (odd_one + 2) % 3;
    if (comp[i] % 2 == 0 || comp[j] % 2 == 0)
      throw std::logic_error("classify_lemma: matching pair must be odd");
    if (mod(comp[i], 8) != mod(comp[j], 8)) fail_at(2);
  }

  // p | comp[i]  =>  (comp[j]*comp[k] | p) = +1, with the Kronecker symbol at p = 2.
  for (int i = 0; i < 3; ++i) {
    const i64 other = comp[(i + 1) % 3] * comp[(i + 2) % 3];
    for (const i64 p : primes[i])
      if (kronecker(other, p) != 1) fail_at(p);
  }
  return witness ? HnpStatus::holds(*witness) : HnpStatus::fails();
}

inline HnpStatus classify_lemma(const FieldTriple& t) {
  return classify_lemma(t, {prime_list_of(t.m), prime_list_of(t.a1), prime_list_of(t.b1)});
}

}  // namespace hnp
