#include <gtest/gtest.h>

#include <sstream>

#include "hnp/report.hpp"

using namespace hnp;

TEST(ParseBound, Accepts) {
  EXPECT_EQ(parse_bound("144"), 144u);
  EXPECT_EQ(parse_bound("1e10"), 10'000'000'000u);
  EXPECT_EQ(parse_bound("1E6"), 1'000'000u);
  EXPECT_EQ(parse_bound("2.5e3"), 2500u);
  EXPECT_EQ(parse_bound("0"), 0u);
  EXPECT_EQ(parse_bound("0e400"), 0u);
  EXPECT_EQ(parse_bound("18446744073709551615"), ~u64{0});
}

TEST(ParseBound, Rejects) {
  EXPECT_THROW(parse_bound(""), std::invalid_argument);
  EXPECT_THROW(parse_bound("-5"), std::invalid_argument);
  EXPECT_THROW(parse_bound("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_bound("1e"), std::invalid_argument);
  EXPECT_THROW(parse_bound("1e-3"), std::invalid_argument);
  EXPECT_THROW(parse_bound("abc"), std::invalid_argument);
  EXPECT_THROW(parse_bound("1e20"), std::out_of_range);
  EXPECT_THROW(parse_bound("18446744073709551616"), std::out_of_range);
}

TEST(ParseCheckpoints, Lists) {
  EXPECT_EQ(parse_checkpoints("1e6,1e8,1e10"), (std::vector<u64>{1'000'000, 100'000'000, 10'000'000'000}));
  EXPECT_TRUE(parse_checkpoints("").empty());
  EXPECT_EQ(parse_checkpoints("144,"), (std::vector<u64>{144}));
}

TEST(ParseFormat, Names) {
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(parse_format("text"), Format::Text);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(CountReport, JsonFields) {
  const auto j = count_json(enumerate_fields(1'000'000));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["X"], 1'000'000u);
  EXPECT_EQ(j["S"], 1014);
  EXPECT_EQ(j["S_tilde"], 119);
  i64 ordered = 0;
  for (const auto& c : j["per_class"]) ordered += c["ordered_count"].get<i64>();
  EXPECT_EQ(ordered, 6 * 1014);
  EXPECT_FALSE(j.contains("key_dedup_count"));
}

TEST(CountReport, CsvLayout) {
  std::ostringstream os;
  write_count_csv(os, enumerate_fields(144));
  EXPECT_EQ(os.str().substr(0, kCountCsvHeader.size() + 2), std::string(kCountCsvHeader) + "\r\n");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ASSERT_EQ(line.back(), '\r');
    ASSERT_EQ(line.rfind("144,1,0,", 0), 0u) << line;
    ++rows;
  }
  EXPECT_GE(rows, 1);
}

TEST(CountReport, DeterministicAcrossThreads) {
  EnumerateOptions opts;
  opts.threads = 4;
  const std::string a = count_json(enumerate_fields(10'000'000)).dump();
  const std::string b = count_json(enumerate_fields(10'000'000, {}, opts)).dump();
  EXPECT_EQ(a, b);
}

TEST(Records, NdjsonKeys) {
  std::vector<std::string> lines;
  enumerate_fields(48841, [&](const FieldRecord& r) { lines.push_back(record_json(r).dump()); });
  ASSERT_FALSE(lines.empty());
  const auto has = [&](const std::string& want) { return std::find(lines.begin(), lines.end(), want) != lines.end(); };
  EXPECT_TRUE(has(R"({"m":1,"a1":-3,"b1":-1,"disc":144,"c":4,"verdict":"holds"})"));
  EXPECT_TRUE(has(R"({"m":1,"a1":13,"b1":17,"disc":48841,"c":1,"verdict":"fails"})"));
}

TEST(Classification, JsonAndText) {
  const Classification c = classify(from_generators(13, 17));
  EXPECT_TRUE(c.agree());
  const auto j = classification_json(c);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["disc"], 48841);
  std::ostringstream os;
  write_classification_text(os, c);
  EXPECT_NE(os.str().find("48841"), std::string::npos);
}

TEST(Compare, TableMatchesDirectCounts) {
  const auto rows = compare_table({10'000, 1'000'000, 100'000'000}, 2, 0.1148840481195905L, 0.4278654407834151L);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    const CountReport direct = enumerate_fields(r.X);
    EXPECT_EQ(r.S, direct.S);
    EXPECT_EQ(r.S_tilde, direct.S_tilde);
  }
  EXPECT_NEAR(static_cast<double>(rows[1].S_ratio()), 1.930, 0.001);
  EXPECT_TRUE(compare_table({}, 1, 1, 1).empty());
  EXPECT_THROW(compare_table({100, 10}, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(compare_table({0, 10}, 1, 1, 1), std::invalid_argument);
}

TEST(Compare, CsvHeader) {
  std::ostringstream os;
  write_compare_csv(os, compare_table({1000}, 1, 1, 1));
  EXPECT_EQ(os.str().rfind(std::string(kCompareCsvHeader) + "\r\n1000,", 0), 0u);
  EXPECT_EQ(compare_json({})["schema_version"], kSchemaVersion);
}
