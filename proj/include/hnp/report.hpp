#pragma once

// Serialization of reports and records (JSON, CSV, text), exact parsing of
// decimal and scientific bounds, and the count-versus-main-term table.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hnp/asymptotics.hpp"
#include "hnp/classify.hpp"
#include "hnp/enumerate.hpp"

namespace hnp {

inline constexpr int kSchemaVersion = 1;

enum class Format { Json, Csv, Text };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw std::invalid_argument("unknown format: " + std::string(s));
}

/// Parses "144", "1e10", "2.5e3", "1E6" exactly. Rejects negatives, fractions,
/// and values above 2^64 - 1.
inline u64 parse_bound(std::string_view s) {
  const auto bad = [&] { return std::invalid_argument("not a nonnegative integer bound: '" + std::string(s) + "'"); };
  std::size_t i = 0;
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.' && !seen_point) {
      seen_point = true;
    } else if (s[i] >= '0' && s[i] <= '9') {
      digits += s[i];
      frac_digits += seen_point;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  long exponent = 0;
  if (i < s.size()) {
    ++i;
    if (i == s.size()) throw bad();
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9' || exponent > 100) throw bad();
      exponent = exponent * 10 + (s[i] - '0');
    }
  }
  exponent -= frac_digits;
  while (exponent < 0) {
    if (digits.back() != '0') throw bad();
    digits.pop_back();
    ++exponent;
    if (digits.empty()) digits = "0";
  }
  u64 v = 0;
  const auto push = [&](int d) {
    if (v > (~u64{0} - static_cast<u64>(d)) / 10) throw std::out_of_range("bound too large: '" + std::string(s) + "'");
    v = v * 10 + static_cast<u64>(d);
  };
  for (const char c : digits) push(c - '0');
  for (long k = 0; k < exponent; ++k) {
    if (v == 0) break;
    push(0);
  }
  return v;
}

inline std::vector<u64> parse_checkpoints(std::string_view s) {
  std::vector<u64> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    if (!item.empty()) out.push_back(parse_bound(item));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

/// %.15Lg
inline std::string format_real(real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Field records and classification
// ---------------------------------------------------------------------------

/// One NDJSON line: {"m","a1","b1","disc","c","verdict"}.
inline nlohmann::ordered_json record_json(const FieldRecord& r) {
  return {{"m", r.triple.m},     {"a1", r.triple.a1},  {"b1", r.triple.b1},
          {"disc", r.data.field_disc}, {"c", r.data.c}, {"verdict", to_string(r.status.verdict)}};
}

struct Classification {
  FieldTriple triple;
  SubfieldData data;
  HnpStatus oracle;
  HnpStatus lemma;
  bool agree() const { return oracle == lemma; }
};

inline Classification classify(const FieldTriple& t) {
  return {t, subfield_data(t), classify_oracle(t), classify_lemma(t)};
}

inline nlohmann::ordered_json classification_json(const Classification& c) {
  const auto status = [](const HnpStatus& s) {
    nlohmann::ordered_json j{{"verdict", to_string(s.verdict)}};
    j["witness"] = s.witness ? nlohmann::ordered_json(*s.witness) : nlohmann::ordered_json(nullptr);
    return j;
  };
  return {{"schema_version", kSchemaVersion},
          {"m", c.triple.m},
          {"a1", c.triple.a1},
          {"b1", c.triple.b1},
          {"kernels", c.data.kernels},
          {"fundamental_discs", c.data.fundamental_discs},
          {"disc", c.data.field_disc},
          {"c", c.data.c},
          {"oracle", status(c.oracle)},
          {"lemma", status(c.lemma)},
          {"agree", c.agree()}};
}

inline void write_classification_text(std::ostream& os, const Classification& c) {
  const auto list = [](const std::array<i64, 3>& v) {
    return std::to_string(v[0]) + ", " + std::to_string(v[1]) + ", " + std::to_string(v[2]);
  };
  const auto status = [](const HnpStatus& s) {
    std::string out(to_string(s.verdict));
    if (s.witness) out += " (witness p = " + std::to_string(*s.witness) + ")";
    return out;
  };
  os << "triple (m, a1, b1): " << list(c.triple.components()) << '\n'
     << "kernels:            " << list(c.data.kernels) << '\n'
     << "discriminants:      " << list(c.data.fundamental_discs) << '\n'
     << "Delta_K:            " << c.data.field_disc << '\n'
     << "c:                  " << c.data.c << '\n'
     << "oracle:             " << status(c.oracle) << '\n'
     << "criteria:           " << status(c.lemma) << '\n'
     << "HNP " << (c.lemma.fails_hnp() ? "fails" : "holds") << (c.agree() ? "" : "  [CLASSIFIERS DISAGREE]") << '\n';
}

// ---------------------------------------------------------------------------
// Count reports
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json count_json(const CountReport& r) {
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& [label, tally] : r.per_class)
    classes.push_back({{"delta2", label.delta2},
                       {"delta3", label.delta3},
                       {"mu", label.placement.mu},
                       {"alpha", label.placement.alpha},
                       {"beta", label.placement.beta},
                       {"eps", label.eps},
                       {"ordered_count", tally.ordered},
                       {"ordered_failing", tally.failing}});
  nlohmann::ordered_json j{{"schema_version", kSchemaVersion},
                           {"X", r.X},
                           {"S", r.S},
                           {"S_tilde", r.S_tilde},
                           {"ordered_total", r.ordered_total},
                           {"ordered_failing", r.ordered_failing}};
  if (r.key_dedup_count) j["key_dedup_count"] = *r.key_dedup_count;
  j["audited"] = r.audited;
  j["audit_mismatches"] = r.audit_mismatches;
  j["per_class"] = std::move(classes);
  return j;
}

inline constexpr std::string_view kCountCsvHeader =
    "X,S,Stilde,delta2,delta3,mu,alpha,beta,eps1,eps2,eps3,ordered_count,ordered_failing";

/// One row per class; the summary columns repeat on each row.
inline void write_count_csv(std::ostream& os, const CountReport& r) {
  os << kCountCsvHeader << "\r\n";
  for (const auto& [l, t] : r.per_class)
    os << r.X << ',' << r.S << ',' << r.S_tilde << ',' << l.delta2 << ',' << l.delta3 << ',' << l.placement.mu << ','
       << l.placement.alpha << ',' << l.placement.beta << ',' << l.eps[0] << ',' << l.eps[1] << ',' << l.eps[2] << ','
       << t.ordered << ',' << t.failing << "\r\n";
}

inline void write_count_text(std::ostream& os, const CountReport& r) {
  os << "X = " << r.X << '\n'
     << "S(X)       = " << r.S << '\n'
     << "S~(X)      = " << r.S_tilde << '\n'
     << "ordered    = " << r.ordered_total << " (6 * S = " << 6 * r.S << ")\n"
     << "ordered HNP failures = " << r.ordered_failing << '\n';
  if (r.key_dedup_count) os << "distinct canonical keys = " << *r.key_dedup_count << '\n';
  if (r.audited) os << "oracle audit: " << r.audited << " fields, " << r.audit_mismatches << " mismatches\n";
  os << "classes (delta2 delta3 mu alpha beta | eps mod 8 | ordered failing):\n";
  for (const auto& [l, t] : r.per_class)
    os << "  " << l.delta2 << ' ' << l.delta3 << ' ' << l.placement.mu << ' ' << l.placement.alpha << ' '
       << l.placement.beta << " | " << l.eps[0] << ' ' << l.eps[1] << ' ' << l.eps[2] << " | " << t.ordered << ' '
       << t.failing << '\n';
}

// ---------------------------------------------------------------------------
// Counts versus main terms
// ---------------------------------------------------------------------------

struct CompareRow {
  u64 X = 0;
  i64 S = 0;
  real S_main = 0;
  i64 S_tilde = 0;
  real S_tilde_main = 0;

  real S_ratio() const { return S_main > 0 ? S / S_main : 0; }
  real S_tilde_ratio() const { return S_tilde_main > 0 ? S_tilde / S_tilde_main : 0; }
  real fail_fraction() const { return S > 0 ? static_cast<real>(S_tilde) / static_cast<real>(S) : 0; }
};

/// One enumeration up to the largest checkpoint; fields are bucketed by the
/// first checkpoint that admits them. Checkpoints must be ascending.
inline std::vector<CompareRow> compare_table(const std::vector<u64>& checkpoints, unsigned threads, real c1, real c2) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("checkpoints must be ascending");
  std::vector<CompareRow> rows;
  if (checkpoints.empty()) return rows;
  if (checkpoints.front() == 0) throw std::invalid_argument("checkpoints must be >= 1");

  std::vector<i64> fields(checkpoints.size(), 0);
  std::vector<i64> failing(checkpoints.size(), 0);
  EnumerateOptions opts;
  opts.threads = threads;
  opts.delivery = Delivery::Ordered;  // sink runs under the enumerator's lock
  enumerate_fields(
      checkpoints.back(),
      [&](const FieldRecord& r) {
        const auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), static_cast<u64>(r.data.field_disc));
        const auto k = static_cast<std::size_t>(it - checkpoints.begin());
        ++fields[k];
        failing[k] += r.status.fails_hnp();
      },
      opts);

  i64 s = 0;
  i64 st = 0;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    s += fields[k];
    st += failing[k];
    const auto x = static_cast<real>(checkpoints[k]);
    rows.push_back({checkpoints[k], s, main_term_S(x, c1), st, main_term_S_tilde(x, c2)});
  }
  return rows;
}

inline constexpr std::string_view kCompareCsvHeader =
    "X,S,S_main,S_ratio,Stilde,Stilde_main,Stilde_ratio,fail_fraction";

inline void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << kCompareCsvHeader << "\r\n";
  for (const auto& r : rows)
    os << r.X << ',' << r.S << ',' << format_real(r.S_main) << ',' << format_real(r.S_ratio()) << ',' << r.S_tilde
       << ',' << format_real(r.S_tilde_main) << ',' << format_real(r.S_tilde_ratio()) << ','
       << format_real(r.fail_fraction()) << "\r\n";
}

inline nlohmann::ordered_json compare_json(const std::vector<CompareRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"X", r.X},
                   {"S", r.S},
                   {"S_main", static_cast<double>(r.S_main)},
                   {"S_ratio", static_cast<double>(r.S_ratio())},
                   {"Stilde", r.S_tilde},
                   {"Stilde_main", static_cast<double>(r.S_tilde_main)},
                   {"Stilde_ratio", static_cast<double>(r.S_tilde_ratio())},
                   {"fail_fraction", static_cast<double>(r.fail_fraction())}});
  return {{"schema_version", kSchemaVersion}, {"rows", std::move(arr)}};
}

inline void write_compare_text(std::ostream& os, const std::vector<CompareRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%14s %12s %14s %9s %10s %14s %9s %10s\n", "X", "S", "S_main", "S_ratio", "Stilde",
                "Stilde_main", "St_ratio", "fail_frac");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%14llu %12lld %14.6Lg %9.5Lf %10lld %14.6Lg %9.5Lf %10.6Lf\n",
                  static_cast<unsigned long long>(r.X), static_cast<long long>(r.S), r.S_main, r.S_ratio(),
                  static_cast<long long>(r.S_tilde), r.S_tilde_main, r.S_tilde_ratio(), r.fail_fraction());
    os << line;
  }
}

}  // namespace hnp
