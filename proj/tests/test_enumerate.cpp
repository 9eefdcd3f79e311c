#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "hnp/asymptotics.hpp"
#include "hnp/enumerate.hpp"
#include "oracles.hpp"

using namespace hnp;

namespace {

std::vector<FieldRecord> collect(u64 X, EnumerateOptions opts = {}) {
  std::vector<FieldRecord> out;
  enumerate_fields(X, [&](const FieldRecord& r) { out.push_back(r); }, opts);
  return out;
}

}  // namespace

TEST(Enumerate, SmallestField) {
  EXPECT_EQ(enumerate_fields(143).S, 0);
  const CountReport r = enumerate_fields(144);
  EXPECT_EQ(r.S, 1);
  EXPECT_EQ(r.ordered_total, 6);
  EXPECT_EQ(r.S_tilde, 0);
  const auto recs = collect(144);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(canonical_key(recs[0].triple), (FieldKey{-4, -3, 12}));
  EXPECT_EQ(recs[0].data.field_disc, 144);
}

TEST(Enumerate, ContainsFailingExample) {
  const auto recs = collect(48841);
  const FieldKey key = canonical_key({1, 13, 17});
  int hits = 0;
  for (const auto& r : recs)
    if (canonical_key(r.triple) == key) {
      ++hits;
      EXPECT_TRUE(r.status.fails_hnp());
      EXPECT_EQ(r.triple, (FieldTriple{1, 13, 17}));
    }
  EXPECT_EQ(hits, 1);
  EXPECT_EQ(enumerate_fields(48840).S + 1, enumerate_fields(48841).S);
}

TEST(Enumerate, MatchesGeneratorBruteForce) {
  for (const u64 X : {u64{1000}, u64{30000}, u64{250000}, u64{1000000}}) {
    const auto brute = oracle::fields_up_to(static_cast<i64>(X));
    std::set<FieldKey> got;
    for (const auto& r : collect(X)) {
      ASSERT_LE(static_cast<u64>(r.data.field_disc), X);
      ASSERT_TRUE(got.insert(canonical_key(r.triple)).second);
    }
    std::set<FieldKey> want;
    for (const auto& f : brute) want.insert(f.discs);
    EXPECT_EQ(got, want) << X;
  }
  EXPECT_EQ(enumerate_fields(1'000'000).S, 1014);
}

TEST(Enumerate, DiscriminantsAreExactSquares) {
  for (const auto& r : collect(2'000'000)) {
    const auto root = static_cast<i64>(isqrt(static_cast<u64>(r.data.field_disc)));
    ASSERT_EQ(root * root, r.data.field_disc);
    ASSERT_EQ(r.data.field_disc, subfield_data(r.triple).field_disc);
    ASSERT_EQ(r.data.c, subfield_data(r.triple).c);
  }
}

TEST(Enumerate, Monotone) {
  i64 prev_S = 0, prev_T = 0;
  for (u64 X = 100; X <= 10'000'000; X = X * 3 + 7) {
    const CountReport r = enumerate_fields(X);
    EXPECT_GE(r.S, prev_S);
    EXPECT_GE(r.S_tilde, prev_T);
    EXPECT_LE(r.S_tilde, r.S);
    prev_S = r.S;
    prev_T = r.S_tilde;
  }
}

TEST(Enumerate, SixTriplesPerField) {
  for (const u64 X : {u64{1'000'000}, u64{100'000'000}}) {
    EnumerateOptions opts;
    opts.dedup_by_key = true;
    const CountReport r = enumerate_fields(X, {}, opts);
    EXPECT_EQ(r.ordered_total, 6 * r.S);
    EXPECT_EQ(r.ordered_failing, 6 * r.S_tilde);
    ASSERT_TRUE(r.key_dedup_count.has_value());
    EXPECT_EQ(*r.key_dedup_count, r.S);
  }
}

TEST(Enumerate, ThreadAndBlockIndependence) {
  const u64 X = 300'000'000;
  const CountReport serial = enumerate_fields(X);
  for (const unsigned threads : {2u, 3u, 8u})
    for (const std::uint32_t block : {1u, 97u, 4096u}) {
      EnumerateOptions opts;
      opts.threads = threads;
      opts.block_size = block;
      EXPECT_EQ(enumerate_fields(X, {}, opts), serial) << threads << " " << block;
    }
}

TEST(Enumerate, OrderedDeliveryIsDeterministic) {
  const u64 X = 50'000'000;
  const auto serial = collect(X);
  EnumerateOptions opts;
  opts.threads = 4;
  opts.block_size = 64;
  const auto parallel = collect(X, opts);
  ASSERT_EQ(parallel.size(), serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) ASSERT_EQ(parallel[i].triple, serial[i].triple) << i;
}

TEST(Enumerate, ConcurrentDeliveryCoversSameFields) {
  const u64 X = 50'000'000;
  std::set<FieldTriple> serial;
  for (const auto& r : collect(X)) serial.insert(r.triple);
  EnumerateOptions opts;
  opts.threads = 4;
  opts.delivery = Delivery::Concurrent;
  std::mutex mu;
  std::set<FieldTriple> concurrent;
  enumerate_fields(X, [&](const FieldRecord& r) {
    std::lock_guard lock(mu);
    concurrent.insert(r.triple);
  }, opts);
  EXPECT_EQ(concurrent, serial);
}

TEST(Enumerate, AuditFindsNoMismatch) {
  EnumerateOptions opts;
  opts.audit_bound = 100'000'000;
  opts.threads = 2;
  const CountReport r = enumerate_fields(400'000'000, {}, opts);
  EXPECT_EQ(r.audited, enumerate_fields(100'000'000).S);
  EXPECT_EQ(r.audit_mismatches, 0);
}

TEST(Enumerate, TripleStructure) {
  for (const auto& r : collect(20'000'000)) {
    const FieldTriple& t = r.triple;
    ASSERT_TRUE(FieldTriple::try_make(t.m, t.a1, t.b1));
    const ClassLabel l = class_label(t);
    ASSERT_LE(l.placement.weight(), 1);
    const auto k = t.kernels();
    ASSERT_LT(k[0], k[1]);
    ASSERT_LT(k[1], k[2]);
  }
}

TEST(Enumerate, FailingClassesLieInE) {
  const CountReport r = enumerate_fields(1'000'000'000);
  i64 ordered = 0;
  for (const auto& [label, tally] : r.per_class) {
    ordered += tally.ordered;
    const auto& e = label.eps;
    const SignTriple s{e[0] % 4 == 1 ? 1 : -1, e[1] % 4 == 1 ? 1 : -1, e[2] % 4 == 1 ? 1 : -1};
    const int c_all = c_constant_mod4(label.delta2, label.delta3, s, label.placement);
    if (tally.failing == 0) continue;
    ASSERT_TRUE(in_E(label.placement, label.signed_eps())) << label.index();
    ASSERT_EQ(c_constant_failure(label.delta2, label.delta3, e, label.placement), c_all);
  }
  EXPECT_EQ(ordered, r.ordered_total);
}

TEST(Enumerate, CountByClassSumsToOrderedTotal) {
  const auto by_class = count_by_class(10'000'000, 2);
  i64 total = 0;
  for (const auto& [label, n] : by_class) total += n;
  EXPECT_EQ(total, 6 * enumerate_fields(10'000'000).S);
}

TEST(Enumerate, RejectsBadArguments) {
  EXPECT_THROW(enumerate_fields(0), std::invalid_argument);
  EnumerateOptions opts;
  opts.threads = 0;
  EXPECT_THROW(enumerate_fields(10, {}, opts), std::invalid_argument);
  EXPECT_THROW(enumerate_fields(kMaxDisc + 1), std::length_error);
}
