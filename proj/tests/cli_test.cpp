#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "walk2sat/dimacs.hpp"
#include "walk2sat/harness.hpp"

namespace fs = std::filesystem;
using namespace walk2sat;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result sh(const std::string& args) {
  const std::string cmd = std::string(WALK2SAT_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("walk2sat_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  RunRecord run_record(const std::string& args) const {
    const Result r = sh("run " + args);
    EXPECT_EQ(r.code, 0) << r.out;
    std::istringstream in(r.out);
    const auto rows = parse_records_csv(in);
    EXPECT_EQ(rows.size(), 1u);
    return rows.empty() ? RunRecord{} : rows[0];
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenEmptyFormula) {
  const Result r = sh("gen --n 2 --m 0 --seed 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "p cnf 2 0\n");
}

TEST_F(CliTest, GenDensityAndDeterminism) {
  ASSERT_EQ(sh("gen --n 1000 --alpha 0.9 --seed 42 --out " + path("a.cnf")).code, 0);
  ASSERT_EQ(sh("gen --n 1000 --alpha 0.9 --seed 42 --out " + path("b.cnf")).code, 0);
  const std::string a = slurp(path("a.cnf"));
  EXPECT_EQ(a, slurp(path("b.cnf")));
  const Formula f = parse_dimacs(a);
  EXPECT_EQ(f.num_variables(), 1000u);
  EXPECT_EQ(f.num_clauses(), 900u);
  EXPECT_EQ(f, generate_random_2cnf(1000, 900, 42));
}

TEST_F(CliTest, RunUnsatGadgetHitsCap) {
  write("gadget.cnf", "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n");
  const RunRecord r = run_record("--input " + path("gadget.cnf") + " --seed 1");
  EXPECT_EQ(r.sat, Verdict::Unsat);
  EXPECT_EQ(r.status, RecordStatus::CapReached);
  EXPECT_EQ(r.flips, 400u);
}

TEST_F(CliTest, RunPositiveFormulaNeedsNoFlips) {
  write("pos.cnf", "p cnf 3 2\n1 2 0\n2 3 0\n");
  const RunRecord r = run_record("--input " + path("pos.cnf"));
  EXPECT_EQ(r.sat, Verdict::Sat);
  EXPECT_EQ(r.status, RecordStatus::Satisfied);
  EXPECT_EQ(r.flips, 0u);
}

TEST_F(CliTest, RunWritesTrace) {
  write("chain.cnf", "p cnf 3 3\n-1 2 0\n-2 3 0\n-3 -1 0\n");
  const RunRecord r = run_record("--input " + path("chain.cnf") + " --seed 3 --trace " + path("t.csv"));
  EXPECT_EQ(r.status, RecordStatus::Satisfied);
  EXPECT_GE(r.flips, 1u);
  std::istringstream trace(slurp(path("t.csv")));
  std::string line;
  std::size_t lines = 0;
  std::getline(trace, line);
  EXPECT_EQ(line, "t,clause,first,second,h,variable,unsat_after");
  while (std::getline(trace, line)) ++lines;
  EXPECT_EQ(lines, r.flips);
}

TEST_F(CliTest, SweepThenPlot) {
  const std::string csv = path("s.csv");
  const Result s = sh("sweep-n --n 200 400 --alpha 0.5 --replicates 2 --seed 3 --out " + csv);
  ASSERT_EQ(s.code, 0);
  std::ifstream in(csv);
  EXPECT_EQ(parse_records_csv(in).size(), 4u);
  EXPECT_TRUE(fs::exists(csv + ".summary.csv"));
  ASSERT_EQ(sh("plot " + csv + " --out " + path("p.svg")).code, 0);
  const std::string svg = slurp(path("p.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  ASSERT_EQ(sh("plot " + csv + " --out " + path("q.svg")).code, 0);
  EXPECT_EQ(svg, slurp(path("q.svg")));
}

TEST_F(CliTest, UcpStats) {
  write("one.cnf", "p cnf 2 1\n-1 2 0\n");
  const Result r = sh("ucp-stats --input " + path("one.cnf"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("x_stat=10\n"), std::string::npos);
}

TEST_F(CliTest, BadInputFails) {
  write("bad.cnf", "p cnf 2 1\n1 1 0\n");
  EXPECT_EQ(sh("run --input " + path("bad.cnf")).code, 1);
  EXPECT_NE(sh("nosuchcommand").code, 0);
}

TEST_F(CliTest, VerifyQuick) {
  // Exit 2 flags a statistical miss only; reduced sizes make that possible.
  const Result r = sh("verify --quick");
  EXPECT_TRUE(r.code == 0 || r.code == 2) << r.out;
  EXPECT_NE(r.out.find("all exact checks passed"), std::string::npos);
}
