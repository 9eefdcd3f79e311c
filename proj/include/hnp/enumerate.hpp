#pragma once

// Streaming enumeration of all biquadratic fields with Delta_K <= X.
//
// Every field has exactly six canonical triples (one per ordered pair of its
// subfield kernels). The enumerator walks odd squarefree n <= isqrt(X), splits n
// into ordered coprime factors (m1', m2', m3') through the factor sieve, then
// applies every 2-placement and sign choice and keeps the triples whose own
// bound c * 2^(mu+alpha+beta) * n <= isqrt(X) holds. A field is reported once,
// through the triple whose kernels satisfy m*a1 < m*b1 < a1*b1.

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>
#include <vector>

#include "hnp/arith.hpp"
#include "hnp/classify.hpp"
#include "hnp/fields.hpp"

namespace hnp {

struct ClassTally {
  i64 ordered = 0;
  i64 failing = 0;
  friend bool operator==(const ClassTally&, const ClassTally&) = default;
};

struct CountReport {
  u64 X = 0;
  i64 S = 0;
  i64 S_tilde = 0;
  i64 ordered_total = 0;
  i64 ordered_failing = 0;
  std::map<ClassLabel, ClassTally> per_class;
  std::optional<i64> key_dedup_count;  // distinct canonical keys, when requested
  i64 audited = 0;                     // fields re-checked by the splitting oracle
  i64 audit_mismatches = 0;

  friend bool operator==(const CountReport&, const CountReport&) = default;
};

struct FieldRecord {
  FieldTriple triple;
  SubfieldData data;
  HnpStatus status;
};

enum class Delivery {
  Concurrent,  // sink is called from worker threads and must be thread-safe
  Ordered,     // sink is called under a lock, in the same order as a serial run
};

struct EnumerateOptions {
  unsigned threads = 1;
  u64 audit_bound = 0;        // Delta_K <= audit_bound: rerun classify_oracle
  bool dedup_by_key = false;  // also count distinct canonical keys over all triples
  Delivery delivery = Delivery::Ordered;
  std::uint32_t block_size = 1u << 12;
};

using FieldSink = std::function<void(const FieldRecord&)>;

struct FieldKeyHash {
  std::size_t operator()(const FieldKey& k) const noexcept {
    u64 h = 0x9E3779B97F4A7C15ull;
    for (const i64 x : k) h = (h ^ static_cast<u64>(x)) * 0x100000001B3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

struct Accumulator {
  std::array<ClassTally, ClassLabel::kCount> classes{};
  i64 S = 0;
  i64 S_tilde = 0;
  i64 ordered_total = 0;
  i64 ordered_failing = 0;
  i64 audited = 0;
  i64 audit_mismatches = 0;

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
      classes[i].ordered += o.classes[i].ordered;
      classes[i].failing += o.classes[i].failing;
    }
    S += o.S;
    S_tilde += o.S_tilde;
    ordered_total += o.ordered_total;
    ordered_failing += o.ordered_failing;
    audited += o.audited;
    audit_mismatches += o.audit_mismatches;
  }
};

struct BlockOutput {
  std::vector<FieldRecord> records;
  std::vector<FieldKey> keys;
};

class BlockEnumerator {
 public:
  BlockEnumerator(const FactorSieve& sieve, u64 root, const EnumerateOptions& opts, const FieldSink* sink)
      : sieve_(sieve), root_(static_cast<i64>(root)), opts_(opts), sink_(sink) {}

  // Processes n in [lo, hi).
  void run(u64 lo, u64 hi, Accumulator& acc, BlockOutput& out) const {
    if (lo % 2 == 0) ++lo;
    for (u64 n = lo; n < hi; n += 2) {
      const auto nn = static_cast<std::uint32_t>(n);
      if (sieve_.mobius_unchecked(nn) == 0) continue;
      std::array<i64, 16> ps{};
      int w = 0;
      for (std::uint32_t x = nn; x > 1;) {
        const std::uint32_t p = sieve_.spf_unchecked(x);
        ps[w++] = p;
        x /= p;
      }
      std::array<int, 16> slot{};  // base-3 digits: which component gets each prime
      while (true) {
        split(static_cast<i64>(n), ps, w, slot, acc, out);
        int k = 0;
        while (k < w && slot[k] == 2) slot[k++] = 0;
        if (k == w) break;
        ++slot[k];
      }
    }
  }

 private:
  void split(i64 n, const std::array<i64, 16>& ps, int w, const std::array<int, 16>& slot,
             Accumulator& acc, BlockOutput& out) const {
    std::array<i64, 3> odd{1, 1, 1};
    std::array<PrimeList, 3> odd_primes{};
    for (int k = 0; k < w; ++k) {
      odd[slot[k]] *= ps[k];
      odd_primes[slot[k]].push(ps[k]);
    }
    const std::array<int, 3> eps{static_cast<int>(odd[0] % 8), static_cast<int>(odd[1] % 8),
                                 static_cast<int>(odd[2] % 8)};
    for (const Placement& pl : kPlacements) {
      // c >= 1 without a factor 2, c >= 4 with one.
      const i64 scaled = n << pl.weight();
      if (scaled * (pl.weight() ? 4 : 1) > root_) continue;
      const std::array<int, 3> two{pl.mu, pl.alpha, pl.beta};
      std::array<PrimeList, 3> primes = odd_primes;
      for (int i = 0; i < 3; ++i)
        if (two[i]) primes[i].push(2);  // 2 is the smallest prime; order is irrelevant
      const i64 m = odd[0] << pl.mu;
      const i64 a = odd[1] << pl.alpha;
      const i64 b = odd[2] << pl.beta;
      for (const int d2 : {1, -1}) {
        for (const int d3 : {1, -1}) {
          const FieldTriple t{m, d2 * a, d3 * b};
          if (!t.nondegenerate()) continue;
          const auto kernels = t.kernels();
          const int c = c_from_kernel_residues(kernels);
          if (c * scaled > root_) continue;
          emit(t, kernels, c, c * scaled, ClassLabel{d2, d3, pl, eps}, primes, acc, out);
        }
      }
    }
  }

  void emit(const FieldTriple& t, const std::array<i64, 3>& kernels, int c, i64 disc_root,
            const ClassLabel& label, const std::array<PrimeList, 3>& primes, Accumulator& acc,
            BlockOutput& out) const {
    const HnpStatus status = classify_lemma(t, primes);
    const bool fails = status.fails_hnp();
    ClassTally& tally = acc.classes[label.index()];
    ++tally.ordered;
    tally.failing += fails;
    ++acc.ordered_total;
    acc.ordered_failing += fails;

    SubfieldData data;
    data.kernels = kernels;
    for (int i = 0; i < 3; ++i) data.fundamental_discs[i] = quad_disc_unchecked(kernels[i]);
    data.c = c;
    data.field_disc = disc_root * disc_root;

    if (opts_.dedup_by_key) {
      FieldKey key = data.fundamental_discs;
      std::sort(key.begin(), key.end());
      out.keys.push_back(key);
    }

    if (!(kernels[0] < kernels[1] && kernels[1] < kernels[2])) return;
    ++acc.S;
    acc.S_tilde += fails;
    if (static_cast<u64>(data.field_disc) <= opts_.audit_bound) {
      ++acc.audited;
      acc.audit_mismatches += !(classify_oracle(t) == status);
    }
    if (sink_ && *sink_) {
      if (opts_.delivery == Delivery::Concurrent)
        (*sink_)(FieldRecord{t, data, status});
      else
        out.records.push_back(FieldRecord{t, data, status});
    }
  }

  const FactorSieve& sieve_;
  i64 root_;
  const EnumerateOptions& opts_;
  const FieldSink* sink_;
};

}  // namespace detail

/// Largest supported bound: isqrt(X) must index a 32-bit sieve.
inline constexpr u64 kMaxDisc = u64{4'000'000'000'000'000'000};

inline CountReport enumerate_fields(u64 X, const FieldSink& sink = {}, const EnumerateOptions& opts = {}) {
  if (X == 0) throw std::invalid_argument("enumerate_fields: X must be >= 1");
  if (X > kMaxDisc) throw std::length_error("enumerate_fields: X too large");
  if (opts.threads == 0) throw std::invalid_argument("enumerate_fields: threads must be >= 1");
  if (opts.block_size == 0) throw std::invalid_argument("enumerate_fields: block_size must be >= 1");

  const u64 root = isqrt(X);
  const FactorSieve sieve(static_cast<std::uint32_t>(std::max<u64>(root, 1)));
  const detail::BlockEnumerator enumerator(sieve, root, opts, &sink);

  const u64 blocks = root / opts.block_size + 1;
  std::atomic<u64> next_block{0};
  std::mutex emit_mutex;
  std::map<u64, std::vector<FieldRecord>> pending;
  u64 next_emit = 0;
  std::unordered_set<FieldKey, FieldKeyHash> keys;
  std::vector<detail::Accumulator> partials(opts.threads);

  const auto worker = [&](unsigned id) {
    for (u64 b = next_block++; b < blocks; b = next_block++) {
      const u64 lo = std::max<u64>(b * opts.block_size, 1);
      const u64 hi = std::min<u64>((b + 1) * opts.block_size, root + 1);
      detail::BlockOutput out;
      enumerator.run(lo, hi, partials[id], out);
      if (out.keys.empty() && (opts.delivery == Delivery::Concurrent || !sink)) continue;
      std::lock_guard lock(emit_mutex);
      keys.insert(out.keys.begin(), out.keys.end());
      if (opts.delivery == Delivery::Ordered && sink) {
        pending.emplace(b, std::move(out.records));
        for (auto it = pending.begin(); it != pending.end() && it->first == next_emit;
             it = pending.erase(it), ++next_emit)
          for (const FieldRecord& r : it->second) sink(r);
      }
    }
  };

  if (opts.threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(opts.threads);
    for (unsigned id = 0; id < opts.threads; ++id) pool.emplace_back(worker, id);
  }

  detail::Accumulator total;
  for (const auto& p : partials) total.merge(p);

  CountReport report;
  report.X = X;
  report.S = total.S;
  report.S_tilde = total.S_tilde;
  report.ordered_total = total.ordered_total;
  report.ordered_failing = total.ordered_failing;
  report.audited = total.audited;
  report.audit_mismatches = total.audit_mismatches;
  for (std::size_t i = 0; i < total.classes.size(); ++i)
    if (total.classes[i].ordered != 0) report.per_class.emplace(ClassLabel::from_index(i), total.classes[i]);
  if (opts.dedup_by_key) report.key_dedup_count = static_cast<i64>(keys.size());
  return report;
}

/// Ordered-tuple tallies per class label.
inline std::map<ClassLabel, i64> count_by_class(u64 X, unsigned threads = 1) {
  EnumerateOptions opts;
  opts.threads = threads;
  std::map<ClassLabel, i64> out;
  for (const auto& [label, tally] : enumerate_fields(X, {}, opts).per_class) out.emplace(label, tally.ordered);
  return out;
}

}  // namespace hnp
