#pragma once

// Exhaustive consistency sweeps and the verification suite behind `verify`.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hnp/asymptotics.hpp"
#include "hnp/classify.hpp"
#include "hnp/fields.hpp"

namespace hnp {

/// Calls f(t) for every valid triple with |m*a1*b1| <= bound, all sign patterns.
template <class F>
void for_each_triple(i64 bound, F&& f) {
  for (i64 m = 1; m <= bound; ++m) {
    if (!is_squarefree(m)) continue;
    for (i64 a = 1; m * a <= bound; ++a) {
      if (std::gcd(m, a) != 1 || !is_squarefree(a)) continue;
      for (i64 b = 1; m * a * b <= bound; ++b) {
        if (std::gcd(m * a, b) != 1 || !is_squarefree(b)) continue;
        for (const i64 sa : {1, -1})
          for (const i64 sb : {1, -1}) {
            const FieldTriple t{m, sa * a, sb * b};
            if (t.nondegenerate()) f(t);
          }
      }
    }
  }
}

struct SweepResult {
  i64 cases = 0;
  i64 failures = 0;
  std::optional<FieldTriple> first_failure;

  void record(const FieldTriple& t, bool ok) {
    ++cases;
    if (ok) return;
    ++failures;
    if (!first_failure) first_failure = t;
  }
};

/// classify_lemma against classify_oracle (verdict and witness).
inline SweepResult classifier_equivalence_sweep(i64 bound) {
  SweepResult r;
  for_each_triple(bound, [&](const FieldTriple& t) { r.record(t, classify_lemma(t) == classify_oracle(t)); });
  return r;
}

/// For every valid triple with Delta_K <= max_disc: |d1 d2 d3| = (c m |a1| |b1|)^2,
/// the kernels multiply to (m a1 b1)^2, and the number of kernels = 1 mod 4 is 0, 1 or 3.
inline SweepResult discriminant_identity_sweep(u64 max_disc) {
  SweepResult r;
  const auto bound = static_cast<i64>(isqrt(max_disc));
  for_each_triple(bound, [&](const FieldTriple& t) {
    const SubfieldData s = subfield_data(t);
    if (static_cast<u64>(s.field_disc) > max_disc) return;
    const auto& d = s.fundamental_discs;
    const i64 root = s.c * t.m * abs64(t.a1) * abs64(t.b1);
    const i64 prod = abs64(d[0] * d[1] * d[2]);
    const i64 mab = t.m * t.a1 * t.b1;
    int ones = 0;
    bool discs_ok = true;
    for (int i = 0; i < 3; ++i) {
      ones += mod(s.kernels[i], 4) == 1;
      discs_ok = discs_ok && (mod(d[i], 4) == 0 || mod(d[i], 4) == 1);
    }
    const bool ok = prod == root * root && prod == s.field_disc && s.field_disc > 0 && discs_ok &&
                    s.kernels[0] * s.kernels[1] * s.kernels[2] == mab * mab && ones != 2;
    r.record(t, ok);
  });
  return r;
}

struct CheckResult {
  std::string name;
  std::string expected;
  std::string actual;
  bool passed = false;
};

struct VerifyConfig {
  i64 classifier_bound = 2000;
  u64 disc_bound = 100'000'000;
  bool perturb_c_table = false;  // fault injection: corrupts one entry of the mod-4 c table
};

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q.numerator();
  if (q.denominator() != 1) os << '/' << q.denominator();
  return os.str();
}

inline std::vector<CheckResult> run_verification(const VerifyConfig& cfg = {}) {
  std::vector<CheckResult> out;
  const auto exact = [&](std::string name, const Rational& got, i64 want) {
    out.push_back({std::move(name), std::to_string(want), to_string(got), got == Rational(want)});
  };

  CTable3 table = c_constant_mod4;
  if (cfg.perturb_c_table)
    table = [](int d2, int d3, const SignTriple& e, Placement pl) {
      const int c = c_constant_mod4(d2, d3, e, pl);
      return (pl.weight() == 0 && c == 1) ? 4 : c;
    };
  exact("verify_23: class sum 1/(c 2^(mu+alpha+beta))", verify_23(table), 23);
  exact("verify_112: failure class sum 1/(c 2^(mu+alpha+beta))", verify_112(), 112);
  exact("verify_u_cancellation: u-weighted failure class sum", verify_u_cancellation(), 0);
  for (const int d2 : kSigns)
    for (const int d3 : kSigns) {
      const auto block = verify_u_cancellation([=](int x, int y, Placement) { return x == d2 && y == d3; });
      exact("u-weighted sum, delta = (" + std::to_string(d2) + "," + std::to_string(d3) + ")", block, 0);
    }

  const auto sweep = [&](std::string name, const SweepResult& r) {
    std::string actual = std::to_string(r.failures) + " of " + std::to_string(r.cases);
    if (r.first_failure)
      actual += ", first (" + std::to_string(r.first_failure->m) + "," + std::to_string(r.first_failure->a1) +
                "," + std::to_string(r.first_failure->b1) + ")";
    out.push_back({std::move(name), "0 failures", actual, r.failures == 0 && r.cases > 0});
  };
  sweep("discriminant identity, Delta_K <= " + std::to_string(cfg.disc_bound),
        discriminant_identity_sweep(cfg.disc_bound));
  sweep("classifier equivalence, |m a1 b1| <= " + std::to_string(cfg.classifier_bound),
        classifier_equivalence_sweep(cfg.classifier_bound));
  return out;
}

}  // namespace hnp
