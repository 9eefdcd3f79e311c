#pragma once

// Exact integer primitives: linear factor sieve, Mobius function, Jacobi and
// Kronecker symbols, small-integer factorization.

#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace hnp {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Mathematical residue in [0, n).
constexpr i64 mod(i64 a, i64 n) {
  const i64 r = a % n;
  return r < 0 ? r + n : r;
}

constexpr i64 abs64(i64 a) { return a < 0 ? -a : a; }

constexpr int sign(i64 a) { return (a > 0) - (a < 0); }

// floor(sqrt(x)) for x >= 0, exact over the whole u64 range.
constexpr u64 isqrt(u64 x) {
  if (x < 2) return x;
  u64 r = 0;
  u64 bit = u64{1} << 62;
  while (bit > x) bit >>= 2;
  while (bit != 0) {
    if (x >= r + bit) {
      x -= r + bit;
      r = (r >> 1) + bit;
    } else {
      r >>= 1;
    }
    bit >>= 2;
  }
  return r;
}

constexpr bool is_perfect_square(i64 x) {
  if (x < 0) return false;
  const u64 r = isqrt(static_cast<u64>(x));
  return r * r == static_cast<u64>(x);
}

// ---------------------------------------------------------------------------
// Factor sieve
// ---------------------------------------------------------------------------

/// Smallest-prime-factor and Mobius tables for 1..limit, built by a linear
/// sieve. Immutable after construction, so one instance can be shared by any
/// number of reader threads.
class FactorSieve {
 public:
  explicit FactorSieve(std::uint32_t limit) : limit_(limit) {
    if (limit == 0) throw std::invalid_argument("FactorSieve: limit must be >= 1");
    if (limit > std::numeric_limits<std::uint32_t>::max() - 1)
      throw std::length_error("FactorSieve: limit too large");
    spf_.assign(std::size_t{limit} + 1, 0);
    mobius_.assign(std::size_t{limit} + 1, 0);
    mobius_[1] = 1;
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = i;
        mobius_[i] = -1;
        primes.push_back(i);
      }
      for (const std::uint32_t p : primes) {
        const u64 ip = u64{i} * p;
        if (p > spf_[i] || ip > limit) break;
        spf_[ip] = p;
        mobius_[ip] = p == spf_[i] ? 0 : static_cast<std::int8_t>(-mobius_[i]);
      }
    }
  }

  std::uint32_t limit() const { return limit_; }

  std::uint32_t smallest_prime_factor(std::uint32_t n) const { return spf_.at(n); }
  int mobius(std::uint32_t n) const { return mobius_.at(n); }

  // Unchecked accessors for hot loops; callers guarantee 1 <= n <= limit.
  std::uint32_t spf_unchecked(std::uint32_t n) const { return spf_[n]; }
  int mobius_unchecked(std::uint32_t n) const { return mobius_[n]; }

  /// Distinct prime factors of n in increasing order.
  std::vector<std::uint32_t> distinct_primes(std::uint32_t n) const {
    std::vector<std::uint32_t> out;
    if (n == 0 || n > limit_) throw std::out_of_range("FactorSieve: argument out of range");
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
    return out;
  }

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mobius_;
};

inline FactorSieve build_sieve(std::uint32_t limit) { return FactorSieve(limit); }

/// All primes p <= limit (plain Eratosthenes on odd numbers).
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  const std::size_t half = (std::size_t{limit} - 1) / 2;  // index i <-> 2i+1
  std::vector<bool> composite(half + 1, false);
  for (std::size_t i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (u64 j = p * p; j <= limit; j += 2 * p) composite[(j - 1) / 2] = true;
  }
  return primes;
}

// ---------------------------------------------------------------------------
// Trial-division helpers (for inputs outside any sieve)
// ---------------------------------------------------------------------------

/// Distinct primes dividing |n|, increasing. n != 0.
inline std::vector<i64> distinct_prime_factors(i64 n) {
  if (n == 0) throw std::domain_error("distinct_prime_factors: n = 0");
  u64 x = n < 0 ? u64(0) - static_cast<u64>(n) : static_cast<u64>(n);
  std::vector<i64> out;
  if (x % 2 == 0) {
    out.push_back(2);
    while (x % 2 == 0) x /= 2;
  }
  for (u64 d = 3; d <= x / d; d += 2) {
    if (x % d == 0) {
      out.push_back(static_cast<i64>(d));
      while (x % d == 0) x /= d;
    }
  }
  if (x > 1) out.push_back(static_cast<i64>(x));
  return out;
}

/// True iff no square of a prime divides n. 0 is not squarefree.
inline bool is_squarefree(i64 n) {
  if (n == 0) return false;
  u64 x = n < 0 ? u64(0) - static_cast<u64>(n) : static_cast<u64>(n);
  if (x % 4 == 0) return false;
  if (x % 2 == 0) x /= 2;
  for (u64 d = 3; d <= x / d; d += 2) {
    if (x % d == 0) {
      x /= d;
      if (x % d == 0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Residue symbols
// ---------------------------------------------------------------------------

/// 0 if b = 1 mod 4, 1 if b = 3 mod 4. b odd (either sign).
constexpr int nu(i64 b) {
  if (b % 2 == 0) throw std::domain_error("nu: argument must be odd");
  return mod(b, 4) == 1 ? 0 : 1;
}

/// Jacobi symbol (a|n) for odd n >= 1, by binary reduction. A negative a is
/// handled through (-1|n) = (-1)^nu(n).
constexpr int jacobi(i64 a, i64 n) {
  if (n <= 0 || n % 2 == 0) throw std::domain_error("jacobi: modulus must be odd and positive");
  u64 m = static_cast<u64>(n);
  u64 x = static_cast<u64>(mod(a, n));
  int result = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const u64 r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    const u64 t = x;
    x = m;
    m = t;
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

/// Kronecker symbol (a|2): 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
constexpr int kronecker_two(i64 a) {
  if (a % 2 == 0) return 0;
  const i64 r = mod(a, 8);
  return (r == 1 || r == 7) ? 1 : -1;
}

/// Kronecker symbol (a|n) for any n != 0.
constexpr int kronecker(i64 a, i64 n) {
  if (n == 0) throw std::domain_error("kronecker: modulus must be nonzero");
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    result *= kronecker_two(a);
    if (result == 0) return 0;
  }
  return result * jacobi(a, n);
}

}  // namespace hnp
