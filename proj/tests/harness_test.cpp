#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "walk2sat/harness.hpp"

using namespace walk2sat;

namespace {

std::string row_without_time(RunRecord r) {
  r.wall_ns = 0;
  return to_csv_row(r);
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t k = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++k;
  return k;
}

SweepConfig small_alpha_sweep(std::size_t workers) {
  SweepConfig c;
  c.n_values = {300};
  c.alpha_values = linear_grid(0.2, 0.9, 8);
  c.replicates = 4;
  c.base_seed = 11;
  c.workers = workers;
  c.instance.track_vars = 8;
  return c;
}

}  // namespace

TEST(CsvTest, RoundTrip) {
  RunRecord a;
  a.n = 1000;
  a.m = 900;
  a.alpha = 0.9;
  a.seed = 123456789012345ull;
  a.sat = Verdict::Sat;
  a.status = RecordStatus::Satisfied;
  a.flips = 4321;
  a.flips_per_n = 4.321;
  a.wall_ns = 99;
  a.x_stat = 123456;
  a.y_stat = 1.5;
  a.max_subformula = 12;
  a.max_component = 80;
  a.persistence_violations = 0;
  a.drift_mean = -0.25;
  a.drift_stderr = 0.125;
  a.cases = std::array<std::uint64_t, 4>{1, 2, 3, 4};
  RunRecord b;
  b.n = 2;
  b.alpha = 2;
  b.m = 4;

  std::stringstream ss;
  ss << kCsvHeader << '\n' << to_csv_row(a) << '\n' << to_csv_row(b) << '\n';
  const auto rows = parse_records_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(to_csv_row(rows[0]), to_csv_row(a));
  EXPECT_EQ(to_csv_row(rows[1]), to_csv_row(b));
  EXPECT_EQ(rows[0].cases, a.cases);
  EXPECT_FALSE(rows[1].x_stat.has_value());
  EXPECT_EQ(rows[1].status, RecordStatus::Skipped);
}

TEST(CsvTest, SchemaErrors) {
  std::stringstream bad_header("n,m\n1,2\n");
  EXPECT_THROW(parse_records_csv(bad_header), CsvSchemaError);
  std::stringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  EXPECT_THROW(parse_records_csv(short_row), CsvSchemaError);
  std::stringstream bad_field(std::string(kCsvHeader) + "\nx,1,0.5,1,SAT,Satisfied,0,0,0,,,,,,,,,,,\n");
  EXPECT_THROW(parse_records_csv(bad_field), CsvSchemaError);
  std::stringstream empty("");
  EXPECT_TRUE(parse_records_csv(empty).empty());
}

TEST(InstanceTest, RecordsAgreeWithOracle) {
  const Formula f = generate_random_2cnf(500, 400, 3);
  const InstanceResult res = run_instance(f, 0.8, 3, {});
  ASSERT_TRUE(res.oracle.has_value());
  EXPECT_EQ(res.record.sat, res.oracle->verdict);
  EXPECT_EQ(res.record.m, 400u);
  ASSERT_TRUE(res.record.x_stat.has_value());
  EXPECT_EQ(*res.record.x_stat, x_statistic(f));
  if (res.record.sat == Verdict::Sat) {
    EXPECT_EQ(res.record.status, RecordStatus::Satisfied);
    EXPECT_DOUBLE_EQ(res.record.flips_per_n, res.record.flips / 500.0);
  }
}

TEST(InstanceTest, UnsatIsSkippedUnlessRequested) {
  using L = Literal;
  const Formula gadget(2, {{L::positive(1), L::positive(2)},
                           {L::positive(1), L::negative(2)},
                           {L::negative(1), L::positive(2)},
                           {L::negative(1), L::negative(2)}});
  const auto skipped = run_instance(gadget, 2.0, 1, {});
  EXPECT_EQ(skipped.record.status, RecordStatus::Skipped);
  EXPECT_EQ(skipped.record.flips, 0u);
  InstanceOptions opt;
  opt.run_unsat = true;
  const auto walked = run_instance(gadget, 2.0, 1, opt);
  EXPECT_EQ(walked.record.status, RecordStatus::CapReached);
  EXPECT_EQ(walked.record.flips, 400u);
}

TEST(SweepTest, RowCountsAndOrder) {
  SweepConfig one;
  one.n_values = {100};
  one.alpha_values = {0.5};
  EXPECT_EQ(run_sweep(one).size(), 1u);

  const auto rows = run_sweep(small_alpha_sweep(1));
  ASSERT_EQ(rows.size(), 32u);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_DOUBLE_EQ(rows[i].alpha, small_alpha_sweep(1).alpha_values[i / 4]);
}

TEST(SweepTest, DeterministicAcrossWorkerCounts) {
  std::vector<std::string> streamed;
  const auto a = run_sweep(small_alpha_sweep(1));
  const auto b = run_sweep(small_alpha_sweep(3), [&](const RunRecord& r) { streamed.push_back(row_without_time(r)); });
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(streamed.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(row_without_time(a[i]), row_without_time(b[i]));
    EXPECT_EQ(streamed[i], row_without_time(b[i]));
  }
}

TEST(SweepTest, RejectsBadConfig) {
  SweepConfig c;
  EXPECT_THROW(run_sweep(c), std::invalid_argument);
  c.n_values = {1};
  c.alpha_values = {0.5};
  EXPECT_THROW(run_sweep(c), std::invalid_argument);
}

TEST(GridTest, Shapes) {
  const auto g = geometric_grid(1024, 262144, 16);
  ASSERT_EQ(g.size(), 16u);
  EXPECT_EQ(g.front(), 1024u);
  EXPECT_EQ(g.back(), 262144u);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  const auto l = linear_grid(0.5, 1.0 - 1.0 / 1024, 32);
  ASSERT_EQ(l.size(), 32u);
  EXPECT_DOUBLE_EQ(l.front(), 0.5);
  EXPECT_DOUBLE_EQ(l.back(), 1.0 - 1.0 / 1024);
}

TEST(SummaryTest, Percentiles) {
  std::vector<RunRecord> rows;
  for (int i = 1; i <= 5; ++i) {
    RunRecord r;
    r.n = 10;
    r.alpha = 0.5;
    r.sat = Verdict::Sat;
    r.status = RecordStatus::Satisfied;
    r.flips_per_n = i;
    rows.push_back(r);
  }
  RunRecord u;
  u.n = 10;
  u.alpha = 0.5;
  rows.push_back(u);  // UNSAT rows do not enter T/n

  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].rows, 6u);
  EXPECT_EQ(s[0].sat_rows, 5u);
  EXPECT_DOUBLE_EQ(s[0].mean, 3.0);
  EXPECT_DOUBLE_EQ(s[0].median, 3.0);
  EXPECT_NEAR(s[0].p10, 1.4, 1e-12);
  EXPECT_NEAR(s[0].p90, 4.6, 1e-12);
  EXPECT_NEAR(s[0].unsat_fraction, 1.0 / 6, 1e-12);
  EXPECT_DOUBLE_EQ(s[0].success_rate, 1.0);

  std::ostringstream os;
  write_summary(os, s);
  EXPECT_EQ(count_of(os.str(), "\n"), 2u);
}

TEST(SummaryTest, OlsSlope) {
  EXPECT_NEAR(ols_slope({1, 2, 3, 4}, {3, 5, 7, 9}), 2.0, 1e-12);
}

TEST(PlotTest, DeterministicWithOneMarkerPerRow) {
  const auto rows = run_sweep(small_alpha_sweep(1));
  const std::string a = plot_svg(rows), b = plot_svg(rows);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  std::size_t plotted = 0;
  for (const auto& r : rows) plotted += r.status != RecordStatus::Skipped;
  EXPECT_EQ(count_of(a, "<circle"), plotted);

  const std::string empty = plot_svg({});
  EXPECT_EQ(count_of(empty, "<circle"), 0u);
  EXPECT_NE(empty.find("<line"), std::string::npos);
}
