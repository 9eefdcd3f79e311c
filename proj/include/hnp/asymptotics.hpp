#pragma once

// Main terms of the two counting laws, their Euler-product constants with
// rigorous truncation bounds, and exact rational evaluation of the class sums
// that produce the leading coefficients.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/rational.hpp>

#include "hnp/arith.hpp"
#include "hnp/fields.hpp"

namespace hnp {

using Rational = boost::rational<i64>;
using real = long double;

// ---------------------------------------------------------------------------
// Euler products
// ---------------------------------------------------------------------------

struct EulerProductValue {
  real value = 1;
  real tail_bound = 0;            // |value - infinite product| <= tail_bound
  std::uint32_t prime_limit = 0;  // largest prime included
};

/// Every product here has |log factor(p)| <= kLogFactorConstant / p^2 for p >= 3.
inline constexpr real kLogFactorConstant = 8;

/// prod_{p <= limit} factor(p), given log factor(p). The tail beyond `limit`
/// satisfies |sum log| <= C * sum_{p > limit} p^-2 <= C / (limit - 1).
template <class LogFactor>
EulerProductValue euler_product(std::uint32_t limit, LogFactor log_factor) {
  if (limit < 2) throw std::invalid_argument("euler_product: prime_limit must be >= 2");
  real log_sum = 0;
  real compensation = 0;
  std::uint32_t largest = 2;
  for (const std::uint32_t p : primes_up_to(limit)) {
    const real y = log_factor(static_cast<real>(p)) - compensation;
    const real t = log_sum + y;
    compensation = (t - log_sum) - y;
    log_sum = t;
    largest = p;
  }
  EulerProductValue out;
  out.value = std::exp(log_sum);
  out.tail_bound = out.value * std::expm1(kLogFactorConstant / (static_cast<real>(limit) - 1));
  out.prime_limit = largest;
  return out;
}

namespace factors {
// (1 - 1/p)^3 (1 + 3/p)
inline real log_c1(real p) { return 3 * std::log1p(-1 / p) + std::log1p(3 / p); }
// (1 - 1/p)^(3/2) (1 + 3/(2p))
inline real log_c2(real p) { return real(1.5) * std::log1p(-1 / p) + std::log1p(real(1.5) / p); }
// (1 - 1/p)^(1/2) (1 + 1/(2p + 2))
inline real log_c3(real p) { return real(0.5) * std::log1p(-1 / p) + std::log1p(1 / (2 * p + 2)); }
// (1 - 1/p)(1 + 1/p)
inline real log_zeta2_inv(real p) { return std::log1p(-1 / (p * p)); }
}  // namespace factors

inline EulerProductValue euler_c1(std::uint32_t prime_limit) { return euler_product(prime_limit, factors::log_c1); }
inline EulerProductValue euler_c2(std::uint32_t prime_limit) { return euler_product(prime_limit, factors::log_c2); }
inline EulerProductValue euler_c3(std::uint32_t prime_limit) { return euler_product(prime_limit, factors::log_c3); }
/// Truncation of prod_p (1 - 1/p^2) = 6/pi^2.
inline EulerProductValue euler_zeta2_inv(std::uint32_t prime_limit) {
  return euler_product(prime_limit, factors::log_zeta2_inv);
}

inline constexpr std::uint32_t kDefaultPrimeLimit = 10'000'000;

// ---------------------------------------------------------------------------
// Main terms
// ---------------------------------------------------------------------------

/// (23/960) sqrt(X) log^2 X * C1
inline real main_term_S(real X, real c1) {
  if (X <= 1) return 0;
  const real l = std::log(X);
  return real(23) / 960 * std::sqrt(X) * l * l * c1;
}

/// 1/(3 sqrt(2 pi)) sqrt(X log X) * C2
inline real main_term_S_tilde(real X, real c2) {
  if (X <= 1) return 0;
  return 1 / (3 * std::sqrt(2 * std::numbers::pi_v<real>)) * std::sqrt(X * std::log(X)) * c2;
}

inline const EulerProductValue& default_c1() {
  static const EulerProductValue v = euler_c1(kDefaultPrimeLimit);
  return v;
}
inline const EulerProductValue& default_c2() {
  static const EulerProductValue v = euler_c2(kDefaultPrimeLimit);
  return v;
}

inline real main_term_S(real X) { return main_term_S(X, default_c1().value); }
inline real main_term_S_tilde(real X) { return main_term_S_tilde(X, default_c2().value); }

// ---------------------------------------------------------------------------
// Class tables
// ---------------------------------------------------------------------------

/// The reciprocity sign
///   u(k) = (-1)^(nu(k1)nu(k2) + nu(k2)nu(k3) + nu(k3)nu(k1))
///          (2^mu | k2k3) (2^alpha delta2 | k3k1) (2^beta delta3 | k1k2).
inline int u_factor(i64 k1, i64 k2, i64 k3, Placement pl, int delta2, int delta3) {
  if (k1 <= 0 || k2 <= 0 || k3 <= 0 || k1 % 2 == 0 || k2 % 2 == 0 || k3 % 2 == 0)
    throw std::domain_error("u_factor: arguments must be odd and positive");
  const int e = nu(k1) * nu(k2) + nu(k2) * nu(k3) + nu(k3) * nu(k1);
  return (e % 2 ? -1 : 1) * kronecker(i64{1} << pl.mu, k2 * k3) *
         kronecker((i64{1} << pl.alpha) * delta2, k3 * k1) * kronecker((i64{1} << pl.beta) * delta3, k1 * k2);
}

using Residues = std::array<int, 3>;  // odd residues mod 8

/// eps1 = eps2 = eps3 mod 4
inline bool in_E1(const Residues& e) { return e[0] % 4 == e[1] % 4 && e[1] % 4 == e[2] % 4; }

/// eps_i = eps_j (mod 8) and eps_i = -eps_k (mod 4), {i,j,k} = {1,2,3}
inline bool in_E2(const Residues& e) {
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    if (e[i] == e[j] && mod(e[i] + e[k], 4) == 0) return true;
  }
  return false;
}

/// Residue classes of signed odd parts that can carry an HNP failure.
inline bool in_E(Placement pl, const Residues& e) {
  if (pl.mu) return e[1] == e[2];
  if (pl.alpha) return e[0] == e[2];
  if (pl.beta) return e[0] == e[1];
  return in_E1(e) || in_E2(e);
}

using SignTriple = std::array<int, 3>;  // residues mod 4 written as +-1

/// c_{delta, eps, mu, alpha, beta} with eps in {+-1}^3 (residues mod 4). Equals
/// the discriminant constant c of every triple in the class.
inline int c_constant_mod4(int delta2, int delta3, const SignTriple& eps, Placement pl) {
  const int s1 = eps[0];
  const int s2 = delta2 * eps[1];
  const int s3 = delta3 * eps[2];
  if (pl.mu) return s2 == s3 ? 4 : 8;
  if (pl.alpha) return s1 == s3 ? 4 : 8;
  if (pl.beta) return s1 == s2 ? 4 : 8;
  return (s1 == s2 && s2 == s3) ? 1 : 4;
}

/// Same constant restricted to the failure classes, eps in odd residues mod 8:
/// 1 when (eps1, delta2 eps2, delta3 eps3) lies in E1 with no factor 2, else 4.
inline int c_constant_failure(int delta2, int delta3, const Residues& eps, Placement pl) {
  const Residues signed_eps{eps[0], static_cast<int>(mod(delta2 * eps[1], 8)),
                            static_cast<int>(mod(delta3 * eps[2], 8))};
  return (pl.weight() == 0 && in_E1(signed_eps)) ? 1 : 4;
}

enum class CContext { AllClasses, FailureClasses };

/// eps holds +-1 values for AllClasses and odd residues mod 8 for FailureClasses.
inline int c_constant(int delta2, int delta3, const Residues& eps, Placement pl, CContext ctx) {
  return ctx == CContext::AllClasses ? c_constant_mod4(delta2, delta3, eps, pl)
                                   : c_constant_failure(delta2, delta3, eps, pl);
}

// ---------------------------------------------------------------------------
// Exact class sums
// ---------------------------------------------------------------------------

using CTable3 = std::function<int(int, int, const SignTriple&, Placement)>;
using CTable4 = std::function<int(int, int, const Residues&, Placement)>;
/// Selects which (delta2, delta3, placement) blocks enter a sum.
using BlockFilter = std::function<bool(int, int, Placement)>;

inline constexpr std::array<int, 2> kSigns{1, -1};
inline constexpr std::array<int, 4> kOddResidues{1, 3, 5, 7};

/// sum over delta, placements, eps in {+-1}^3 of 1 / (c * 2^(mu+alpha+beta)).
inline Rational verify_23(const CTable3& c = c_constant_mod4, const BlockFilter& keep = {}) {
  Rational total = 0;
  for (const int d2 : kSigns)
    for (const int d3 : kSigns)
      for (const Placement& pl : kPlacements) {
        if (keep && !keep(d2, d3, pl)) continue;
        for (const int e1 : kSigns)
          for (const int e2 : kSigns)
            for (const int e3 : kSigns)
              total += Rational(1, i64{c(d2, d3, {e1, e2, e3}, pl)} << pl.weight());
      }
  return total;
}

namespace detail {
template <class Term>
Rational failure_class_sum(const BlockFilter& keep, Term term) {
  Rational total = 0;
  for (const int d2 : kSigns)
    for (const int d3 : kSigns)
      for (const Placement& pl : kPlacements) {
        if (keep && !keep(d2, d3, pl)) continue;
        for (const int e1 : kOddResidues)
          for (const int e2 : kOddResidues)
            for (const int e3 : kOddResidues) {
              const Residues eps{e1, e2, e3};
              const Residues signed_eps{e1, static_cast<int>(mod(d2 * e2, 8)), static_cast<int>(mod(d3 * e3, 8))};
              if (in_E(pl, signed_eps)) total += term(d2, d3, eps, pl);
            }
      }
  return total;
}
}  // namespace detail

/// sum over delta, placements, eps with (eps1, delta2 eps2, delta3 eps3) in E of
/// 1 / (c * 2^(mu+alpha+beta)).
inline Rational verify_112(const CTable4& c = c_constant_failure, const BlockFilter& keep = {}) {
  return detail::failure_class_sum(keep, [&](int d2, int d3, const Residues& eps, Placement pl) {
    return Rational(1, i64{c(d2, d3, eps, pl)} << pl.weight());
  });
}

/// Same classes weighted by u(eps) / (c * 2^(mu+alpha+beta)).
inline Rational verify_u_cancellation(const BlockFilter& keep = {}) {
  return detail::failure_class_sum(keep, [](int d2, int d3, const Residues& eps, Placement pl) {
    const int u = u_factor(eps[0], eps[1], eps[2], pl, d2, d3);
    return Rational(u, i64{c_constant_failure(d2, d3, eps, pl)} << pl.weight());
  });
}

// ---------------------------------------------------------------------------
// Coefficient identity for the failure count
// ---------------------------------------------------------------------------

struct IdentityCheck {
  std::uint32_t prime_limit = 0;
  real direct_form = 0;       // C2 / (3 sqrt(2 pi))
  real assembled_form = 0;       // (1/6)(112)(6/pi^2) / (56 sqrt(2 pi)) * C3
  real matched_form = 0;       // assembled form with 6/pi^2 truncated like the products
  real tail_bound = 0;         // combined bound for direct_form vs assembled_form
  real closed_form_residual = 0;
  real matched_residual = 0;
  real zeta2_residual = 0;     // |prod (1 - p^-2) - 6/pi^2|
  real zeta2_tail_bound = 0;
  bool passed = false;

  /// Decimal digits to which the direct and assembled forms agree.
  real agreement_digits() const { return digits(closed_form_residual); }
  /// Same, with 6/pi^2 truncated at the same prime limit as the other products.
  real matched_digits() const { return digits(matched_residual); }

 private:
  real digits(real residual) const {
    const real rel = residual / direct_form;
    return rel == 0 ? real(19) : -std::log10(rel);
  }
};

inline IdentityCheck constant_identity_check(std::uint32_t prime_limit) {
  const real pi = std::numbers::pi_v<real>;
  const real root2pi = std::sqrt(2 * pi);
  const EulerProductValue c2 = euler_c2(prime_limit);
  const EulerProductValue c3 = euler_c3(prime_limit);
  const EulerProductValue z = euler_zeta2_inv(prime_limit);
  const real assembled_coeff = real(1) / 6 * 112 / (56 * root2pi);

  IdentityCheck out;
  out.prime_limit = c2.prime_limit;
  out.direct_form = c2.value / (3 * root2pi);
  out.assembled_form = assembled_coeff * 6 / (pi * pi) * c3.value;
  out.matched_form = assembled_coeff * z.value * c3.value;
  out.tail_bound = c2.tail_bound / (3 * root2pi) + assembled_coeff * 6 / (pi * pi) * c3.tail_bound;
  out.closed_form_residual = std::fabs(out.direct_form - out.assembled_form);
  out.matched_residual = std::fabs(out.direct_form - out.matched_form);
  out.zeta2_residual = std::fabs(z.value - 6 / (pi * pi));
  out.zeta2_tail_bound = z.tail_bound;
  // Matched truncations are the same finite product; allow rounding only.
  const real rounding = 1e-12L * out.direct_form;
  out.passed = out.closed_form_residual <= out.tail_bound && out.matched_residual <= rounding &&
               out.zeta2_residual <= out.zeta2_tail_bound;
  return out;
}

/// (1 + 1/p)(1 + 1/(2p + 2)) = 1 + 3/(2p), exactly.
inline bool factor_identity_holds(i64 p) {
  return Rational(p + 1, p) * Rational(2 * p + 3, 2 * p + 2) == Rational(2 * p + 3, 2 * p);
}

}  // namespace hnp
