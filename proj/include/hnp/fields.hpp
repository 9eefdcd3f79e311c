#pragma once

// Biquadratic fields Q(sqrt(a), sqrt(b)) as canonical triples (m, a1, b1) with
// a = m*a1, b = m*b1, m = gcd(|a|,|b|) > 0 and |m|, |a1|, |b1| pairwise coprime.

#include <algorithm>
#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

#include "hnp/arith.hpp"

namespace hnp {

class invalid_field : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fundamental discriminant of Q(sqrt(d)): d if d = 1 mod 4, else 4d.
inline i64 quad_disc(i64 d) {
  if (d == 0 || d == 1) throw std::domain_error("quad_disc: d must be != 0, 1");
  if (!is_squarefree(d)) throw std::domain_error("quad_disc: d must be squarefree");
  return mod(d, 4) == 1 ? d : 4 * d;
}

namespace detail {
// quad_disc without the squarefree test; d is known squarefree, d != 0, 1.
constexpr i64 quad_disc_unchecked(i64 d) { return mod(d, 4) == 1 ? d : 4 * d; }
}  // namespace detail

struct FieldTriple {
  i64 m = 1;
  i64 a1 = 1;
  i64 b1 = 1;

  std::array<i64, 3> components() const { return {m, a1, b1}; }
  std::array<i64, 3> kernels() const { return {m * a1, m * b1, a1 * b1}; }

  friend bool operator==(const FieldTriple&, const FieldTriple&) = default;
  friend auto operator<=>(const FieldTriple&, const FieldTriple&) = default;

  /// Validates every invariant of a canonical triple; nullopt if any fails.
  static std::optional<FieldTriple> try_make(i64 m, i64 a1, i64 b1) {
    if (m <= 0 || a1 == 0 || b1 == 0) return std::nullopt;
    if (!is_squarefree(m) || !is_squarefree(a1) || !is_squarefree(b1)) return std::nullopt;
    if (std::gcd(m, a1) != 1 || std::gcd(m, b1) != 1 || std::gcd(a1, b1) != 1) return std::nullopt;
    FieldTriple t{m, a1, b1};
    if (!t.nondegenerate()) return std::nullopt;
    return t;
  }

  static FieldTriple make(i64 m, i64 a1, i64 b1) {
    if (auto t = try_make(m, a1, b1)) return *t;
    throw invalid_field("invalid field triple (" + std::to_string(m) + ", " + std::to_string(a1) +
                        ", " + std::to_string(b1) + ")");
  }

  /// Three pairwise distinct kernels, none equal to 1.
  bool nondegenerate() const {
    const auto k = kernels();
    return k[0] != 1 && k[1] != 1 && k[2] != 1 && k[0] != k[1] && k[1] != k[2] && k[0] != k[2];
  }
};

struct SubfieldData {
  std::array<i64, 3> kernels{};
  std::array<i64, 3> fundamental_discs{};
  int c = 1;          // 1, 4 or 8
  i64 field_disc = 0;  // Delta_K = (c*m*|a1|*|b1|)^2
};

constexpr int c_from_kernel_residues(const std::array<i64, 3>& kernels) {
  int ones = 0;
  for (const i64 k : kernels) ones += mod(k, 4) == 1;
  // ones == 2 cannot occur: the product of the kernels is a square.
  return ones == 3 ? 1 : ones == 1 ? 4 : 8;
}

inline SubfieldData subfield_data(const FieldTriple& t) {
  SubfieldData s;
  s.kernels = t.kernels();
  for (std::size_t i = 0; i < 3; ++i) s.fundamental_discs[i] = detail::quad_disc_unchecked(s.kernels[i]);
  s.c = c_from_kernel_residues(s.kernels);
  const i64 root = s.c * t.m * abs64(t.a1) * abs64(t.b1);
  s.field_disc = root * root;
  return s;
}

/// Sorted fundamental discriminants; equal exactly when two triples define one field.
using FieldKey = std::array<i64, 3>;

inline FieldKey canonical_key(const FieldTriple& t) {
  FieldKey k = subfield_data(t).fundamental_discs;
  std::sort(k.begin(), k.end());
  return k;
}

inline FieldTriple from_generators(i64 a, i64 b) {
  if (!is_squarefree(a) || !is_squarefree(b))
    throw invalid_field("generators must be squarefree and nonzero: " + std::to_string(a) + ", " +
                        std::to_string(b));
  if (a == 1 || b == 1 || a == b || is_perfect_square(a * b))
    throw invalid_field("degenerate generators (not a biquadratic field): " + std::to_string(a) +
                        ", " + std::to_string(b));
  const i64 m = std::gcd(abs64(a), abs64(b));
  return FieldTriple::make(m, a / m, b / m);
}

// ---------------------------------------------------------------------------
// Class labels
// ---------------------------------------------------------------------------

/// Placement of the (at most one) factor 2 among the three components.
struct Placement {
  int mu = 0;
  int alpha = 0;
  int beta = 0;

  int weight() const { return mu + alpha + beta; }
  friend bool operator==(const Placement&, const Placement&) = default;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

inline constexpr std::array<Placement, 4> kPlacements{
    Placement{0, 0, 0}, Placement{1, 0, 0}, Placement{0, 1, 0}, Placement{0, 0, 1}};

/// Decomposition m = 2^mu m1', a1 = delta2 2^alpha m2', b1 = delta3 2^beta m3'
/// with eps the residues of the positive odd parts m_i' mod 8.
struct ClassLabel {
  int delta2 = 1;
  int delta3 = 1;
  Placement placement;
  std::array<int, 3> eps{1, 1, 1};

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;

  /// (eps1, delta2*eps2, delta3*eps3) mod 8: the residues of the signed odd parts.
  std::array<int, 3> signed_eps() const {
    return {eps[0], static_cast<int>(mod(delta2 * eps[1], 8)), static_cast<int>(mod(delta3 * eps[2], 8))};
  }

  // Dense index in [0, 1024) for flat tallies.
  static constexpr std::size_t kCount = 4 * 4 * 64;
  std::size_t index() const {
    const std::size_t d = (delta2 < 0 ? 2u : 0u) + (delta3 < 0 ? 1u : 0u);
    const std::size_t p = placement.mu ? 1 : placement.alpha ? 2 : placement.beta ? 3 : 0;
    const std::size_t e = (eps[0] / 2) * 16 + (eps[1] / 2) * 4 + (eps[2] / 2);
    return (d * 4 + p) * 64 + e;
  }
  static ClassLabel from_index(std::size_t i) {
    ClassLabel l;
    const std::size_t e = i % 64;
    const std::size_t p = (i / 64) % 4;
    const std::size_t d = i / 256;
    l.delta2 = (d & 2) ? -1 : 1;
    l.delta3 = (d & 1) ? -1 : 1;
    l.placement = kPlacements[p];
    l.eps = {static_cast<int>(2 * (e / 16) + 1), static_cast<int>(2 * ((e / 4) % 4) + 1),
             static_cast<int>(2 * (e % 4) + 1)};
    return l;
  }
};

inline ClassLabel class_label(const FieldTriple& t) {
  ClassLabel l;
  l.delta2 = sign(t.a1);
  l.delta3 = sign(t.b1);
  const auto odd_part = [](i64 x, int& two) {
    x = abs64(x);
    two = x % 2 == 0;
    return two ? x / 2 : x;
  };
  const i64 o1 = odd_part(t.m, l.placement.mu);
  const i64 o2 = odd_part(t.a1, l.placement.alpha);
  const i64 o3 = odd_part(t.b1, l.placement.beta);
  l.eps = {static_cast<int>(o1 % 8), static_cast<int>(o2 % 8), static_cast<int>(o3 % 8)};
  return l;
}

}  // namespace hnp
