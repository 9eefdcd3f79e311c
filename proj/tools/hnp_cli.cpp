// hnp-biquad: enumerate biquadratic fields by discriminant, decide Hasse norm
// principle failure, and check the counting constants.
//
// Exit status: 0 success, 1 verification failure, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hnp/hnp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string max_disc = "";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "text";
  std::string out_path;
  std::string audit_bound = "0";
  std::uint32_t prime_limit = hnp::kDefaultPrimeLimit;
  std::string checkpoints = "1e6,1e8,1e10";
  std::string records_path;
  bool dedup_keys = false;
};

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw usage_error("cannot open output file: " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

hnp::u64 positive_bound(const std::string& flag, const std::string& text) {
  hnp::u64 v = 0;
  try {
    v = hnp::parse_bound(text);
  } catch (const std::exception& e) {
    throw usage_error(flag + ": " + e.what());
  }
  if (v == 0) throw usage_error(flag + " must be positive");
  return v;
}

class Timer {
 public:
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << "wall time: " << s << " s\n";
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_count(const RunConfig& cfg) {
  const hnp::u64 X = positive_bound("--max-disc", cfg.max_disc);
  hnp::u64 audit = 0;
  try {
    audit = hnp::parse_bound(cfg.audit_bound);
  } catch (const std::exception& e) {
    throw usage_error(std::string("--audit-bound: ") + e.what());
  }
  if (audit > X) throw usage_error("--audit-bound must not exceed --max-disc");
  const hnp::Format format = hnp::parse_format(cfg.format);

  hnp::EnumerateOptions opts;
  opts.threads = cfg.threads;
  opts.audit_bound = audit;
  opts.dedup_by_key = cfg.dedup_keys;

  std::unique_ptr<std::ofstream> records;
  hnp::FieldSink sink;
  if (!cfg.records_path.empty()) {
    records = std::make_unique<std::ofstream>(cfg.records_path, std::ios::binary);
    if (!*records) throw usage_error("cannot open records file: " + cfg.records_path);
    sink = [&](const hnp::FieldRecord& r) { *records << hnp::record_json(r).dump() << '\n'; };
  }

  hnp::CountReport report;
  {
    Timer timer;
    report = hnp::enumerate_fields(X, sink, opts);
  }
  Output out(cfg.out_path);
  switch (format) {
    case hnp::Format::Json: out.stream() << hnp::count_json(report).dump(2) << '\n'; break;
    case hnp::Format::Csv: hnp::write_count_csv(out.stream(), report); break;
    case hnp::Format::Text: hnp::write_count_text(out.stream(), report); break;
  }
  return report.audit_mismatches == 0 ? kExitOk : kExitVerifyFailed;
}

int cmd_classify(const std::vector<hnp::i64>& gens, const std::vector<hnp::i64>& triple, const RunConfig& cfg) {
  const hnp::Format format = hnp::parse_format(cfg.format);
  if (gens.empty() == triple.empty()) throw usage_error("classify needs exactly one of --gens a b or --triple m a1 b1");
  const hnp::FieldTriple t =
      gens.empty() ? hnp::FieldTriple::make(triple[0], triple[1], triple[2]) : hnp::from_generators(gens[0], gens[1]);
  const hnp::Classification c = hnp::classify(t);
  Output out(cfg.out_path);
  if (format == hnp::Format::Json)
    out.stream() << hnp::classification_json(c).dump(2) << '\n';
  else
    hnp::write_classification_text(out.stream(), c);
  return c.agree() ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const RunConfig& cfg, hnp::i64 classifier_bound, bool inject_fault) {
  const hnp::Format format = hnp::parse_format(cfg.format);
  if (format == hnp::Format::Csv) throw usage_error("verify supports --format text or json");
  hnp::VerifyConfig vc;
  vc.classifier_bound = classifier_bound;
  if (!cfg.max_disc.empty()) vc.disc_bound = positive_bound("--max-disc", cfg.max_disc);
  vc.perturb_c_table = inject_fault;
  const auto results = hnp::run_verification(vc);

  bool ok = true;
  Output out(cfg.out_path);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (format == hnp::Format::Text)
      out.stream() << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": expected " << r.expected << ", got "
                   << r.actual << '\n';
    else
      checks.push_back({{"name", r.name}, {"expected", r.expected}, {"actual", r.actual}, {"passed", r.passed}});
  }
  if (format == hnp::Format::Json)
    out.stream() << nlohmann::ordered_json{{"schema_version", hnp::kSchemaVersion}, {"passed", ok}, {"checks", checks}}
                        .dump(2)
                 << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_constants(const RunConfig& cfg) {
  const hnp::Format format = hnp::parse_format(cfg.format);
  if (cfg.prime_limit < 2) throw usage_error("--prime-limit must be >= 2");
  const auto c1 = hnp::euler_c1(cfg.prime_limit);
  const auto c2 = hnp::euler_c2(cfg.prime_limit);
  const auto c3 = hnp::euler_c3(cfg.prime_limit);
  const auto id = hnp::constant_identity_check(cfg.prime_limit);
  const std::string s23 = hnp::to_string(hnp::verify_23());
  const std::string s112 = hnp::to_string(hnp::verify_112());
  const std::string su = hnp::to_string(hnp::verify_u_cancellation());

  Output out(cfg.out_path);
  std::ostream& os = out.stream();
  using hnp::format_real;
  if (format == hnp::Format::Json) {
    const auto product = [](const hnp::EulerProductValue& v) {
      return nlohmann::ordered_json{{"value", static_cast<double>(v.value)},
                                    {"tail_bound", static_cast<double>(v.tail_bound)},
                                    {"prime_limit", v.prime_limit}};
    };
    os << nlohmann::ordered_json{{"schema_version", hnp::kSchemaVersion},
                                 {"C1", product(c1)},
                                 {"C2", product(c2)},
                                 {"C3", product(c3)},
                                 {"class_sum", s23},
                                 {"failure_class_sum", s112},
                                 {"u_weighted_sum", su},
                                 {"identity",
                                  {{"direct_form", static_cast<double>(id.direct_form)},
                                   {"assembled_form", static_cast<double>(id.assembled_form)},
                                   {"residual", static_cast<double>(id.closed_form_residual)},
                                   {"tail_bound", static_cast<double>(id.tail_bound)},
                                   {"agreement_digits", static_cast<double>(id.agreement_digits())},
                                   {"passed", id.passed}}}}
              .dump(2)
       << '\n';
  } else if (format == hnp::Format::Csv) {
    os << "name,value,tail_bound\r\n"
       << "C1," << format_real(c1.value) << ',' << format_real(c1.tail_bound) << "\r\n"
       << "C2," << format_real(c2.value) << ',' << format_real(c2.tail_bound) << "\r\n"
       << "C3," << format_real(c3.value) << ',' << format_real(c3.tail_bound) << "\r\n"
       << "S_coefficient," << format_real(hnp::real(23) / 960 * c1.value) << ',' << format_real(23 * c1.tail_bound / 960)
       << "\r\n"
       << "Stilde_coefficient," << format_real(id.direct_form) << ',' << format_real(id.tail_bound) << "\r\n";
  } else {
    os << "primes up to " << c1.prime_limit << '\n'
       << "C1 = prod (1-1/p)^3 (1+3/p)          = " << format_real(c1.value) << "  +- " << format_real(c1.tail_bound) << '\n'
       << "C2 = prod (1-1/p)^(3/2) (1+3/(2p))   = " << format_real(c2.value) << "  +- " << format_real(c2.tail_bound) << '\n'
       << "C3 = prod (1-1/p)^(1/2) (1+1/(2p+2)) = " << format_real(c3.value) << "  +- " << format_real(c3.tail_bound) << '\n'
       << "S(X)  ~ " << format_real(hnp::real(23) / 960 * c1.value) << " sqrt(X) log^2 X\n"
       << "S~(X) ~ " << format_real(id.direct_form) << " sqrt(X log X)\n"
       << "class sum = " << s23 << ", failure class sum = " << s112 << ", u-weighted sum = " << su << '\n'
       << "C2/(3 sqrt(2pi)) vs (1/6)(112)(6/pi^2) C3/(56 sqrt(2pi)): residual " << format_real(id.closed_form_residual)
       << " <= " << format_real(id.tail_bound) << ", " << format_real(id.agreement_digits()) << " digits"
       << (id.passed ? "" : "  [FAILED]") << '\n';
  }
  return id.passed ? kExitOk : kExitVerifyFailed;
}

int cmd_compare(const RunConfig& cfg) {
  const hnp::Format format = hnp::parse_format(cfg.format);
  std::vector<hnp::u64> checkpoints;
  try {
    checkpoints = hnp::parse_checkpoints(cfg.checkpoints);
  } catch (const std::exception& e) {
    throw usage_error(std::string("--checkpoints: ") + e.what());
  }
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) throw usage_error("--checkpoints must be ascending");
  for (const auto x : checkpoints)
    if (x == 0) throw usage_error("--checkpoints must be positive");
  if (cfg.prime_limit < 2) throw usage_error("--prime-limit must be >= 2");

  std::vector<hnp::CompareRow> rows;
  {
    Timer timer;
    const auto c1 = checkpoints.empty() ? hnp::EulerProductValue{} : hnp::euler_c1(cfg.prime_limit);
    const auto c2 = checkpoints.empty() ? hnp::EulerProductValue{} : hnp::euler_c2(cfg.prime_limit);
    rows = hnp::compare_table(checkpoints, cfg.threads, c1.value, c2.value);
  }
  Output out(cfg.out_path);
  switch (format) {
    case hnp::Format::Json: out.stream() << hnp::compare_json(rows).dump(2) << '\n'; break;
    case hnp::Format::Csv: hnp::write_compare_csv(out.stream(), rows); break;
    case hnp::Format::Text: hnp::write_compare_text(out.stream(), rows); break;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biquadratic fields, the Hasse norm principle, and their counting laws"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out_path, "write output to this file instead of stdout");
  };
  const auto threads = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* count = app.add_subcommand("count", "count fields with Delta_K <= max-disc");
  count->add_option("--max-disc", cfg.max_disc, "bound X on Delta_K (e.g. 1e10)")->required();
  count->add_option("--audit-bound", cfg.audit_bound, "re-check fields with Delta_K below this by the splitting oracle");
  count->add_option("--records", cfg.records_path, "stream one NDJSON record per field to this file");
  count->add_flag("--dedup-keys", cfg.dedup_keys, "also count distinct canonical keys over all ordered triples");
  threads(count);
  common(count);

  std::vector<hnp::i64> gens;
  std::vector<hnp::i64> triple;
  auto* classify = app.add_subcommand("classify", "decide the Hasse norm principle for one field");
  classify->add_option("--gens", gens, "generators a b of Q(sqrt a, sqrt b)")->expected(2);
  classify->add_option("--triple", triple, "canonical triple m a1 b1")->expected(3);
  common(classify);

  hnp::i64 classifier_bound = 2000;
  bool inject_fault = false;
  auto* verify = app.add_subcommand("verify", "exact constants and exhaustive consistency sweeps");
  verify->add_option("--max-disc", cfg.max_disc, "bound for the discriminant identity sweep (default 1e8)");
  verify->add_option("--classifier-bound", classifier_bound, "bound on |m a1 b1| for the classifier sweep")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--inject-fault", inject_fault, "corrupt the class table (tests the failure path)");
  common(verify);

  auto* constants = app.add_subcommand("constants", "Euler products, main-term coefficients, constant identity");
  constants->add_option("--prime-limit", cfg.prime_limit, "largest prime in the truncated products");
  common(constants);

  auto* compare = app.add_subcommand("compare", "counts against the main terms at checkpoints");
  compare->add_option("--checkpoints", cfg.checkpoints, "ascending comma-separated bounds (default 1e6,1e8,1e10)");
  compare->add_option("--prime-limit", cfg.prime_limit, "largest prime in the truncated products");
  threads(compare);
  common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (count->parsed()) return cmd_count(cfg);
    if (classify->parsed()) return cmd_classify(gens, triple, cfg);
    if (verify->parsed()) return cmd_verify(cfg, classifier_bound, inject_fault);
    if (constants->parsed()) return cmd_constants(cfg);
    if (compare->parsed()) return cmd_compare(cfg);
  } catch (const hnp::invalid_field& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
  return kExitUsage;
}
