#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "walk2sat/walksat.hpp"

using namespace walk2sat;

namespace {

Literal P(Variable v) { return Literal::positive(v); }
Literal N(Variable v) { return Literal::negative(v); }

std::vector<std::uint32_t> sorted_members(const IndexSet& s) {
  std::vector<std::uint32_t> v(s.members().begin(), s.members().end());
  std::sort(v.begin(), v.end());
  return v;
}

bool consistent(const Engine& e) {
  const auto expected = evaluate(e.formula(), e.assignment()).unsat_indices;
  return sorted_members(e.unsat()) == std::vector<std::uint32_t>(expected.begin(), expected.end());
}

const Formula& unsat_gadget() {
  static const Formula f(2, {{P(1), P(2)}, {P(1), N(2)}, {N(1), P(2)}, {N(1), N(2)}});
  return f;
}

}  // namespace

TEST(IndexSetTest, InsertEraseContains) {
  IndexSet s(10);
  EXPECT_TRUE(s.insert(3));
  EXPECT_FALSE(s.insert(3));
  EXPECT_TRUE(s.insert(7));
  EXPECT_TRUE(s.contains(3));
  EXPECT_TRUE(s.erase(3));
  EXPECT_FALSE(s.erase(3));
  EXPECT_FALSE(s.contains(3));
  EXPECT_EQ(s.size(), 1u);
  Stream rng(1);
  EXPECT_EQ(s.sample(rng), 7u);  // singleton
  s.erase(7);
  EXPECT_THROW(s.sample(rng), std::logic_error);
}

TEST(IndexSetTest, SampleIsUniform) {
  IndexSet s(12);
  for (std::uint32_t i : {2u, 4u, 5u, 9u, 11u}) s.insert(i);
  s.erase(4);
  s.erase(11);
  Stream rng(77);
  std::map<std::uint32_t, int> counts;
  constexpr int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[s.sample(rng)];
  ASSERT_EQ(counts.size(), 3u);
  for (std::uint32_t i : {2u, 5u, 9u}) EXPECT_NEAR(counts[i] / double(draws), 1.0 / 3, 0.01);
}

TEST(EngineTest, InitAllTrue) {
  const Formula a(2, {{P(1), P(2)}});
  EXPECT_TRUE(Engine(a).unsat().empty());

  const Formula b(2, {{N(1), N(2)}});
  EXPECT_EQ(sorted_members(Engine(b).unsat()), std::vector<std::uint32_t>({0}));

  const Formula c(2, {{N(1), P(2)}, {N(1), N(2)}});
  Engine e(c);
  EXPECT_EQ(sorted_members(e.unsat()), std::vector<std::uint32_t>({1}));
  EXPECT_EQ(e.flips(), 0u);
  EXPECT_EQ(e.cap(), 400u);
  EXPECT_EQ(e.assignment(), Assignment::all_true(2));
}

TEST(EngineTest, DefaultCapIsHundredNSquared) {
  EXPECT_EQ(default_flip_cap(10), 10000u);
  EXPECT_EQ(default_flip_cap(1000000), 100000000000000ull);
}

TEST(EngineTest, SingleStepSatisfiesLoneNegativeClause) {
  const Formula f(2, {{N(1), N(2)}});
  Engine e(f);
  Stream rng(3);
  const FlipRecord r = e.step(rng);
  EXPECT_TRUE(e.unsat().empty());
  EXPECT_EQ((e.assignment()[1] == -1) + (e.assignment()[2] == -1), 1);
  EXPECT_EQ(r.flipped_variable, f.clause(0).at(r.h).variable());
  EXPECT_EQ(r.unsat_count_after, 0u);
  EXPECT_EQ(e.flips(), 1u);
  EXPECT_THROW(e.step(rng), std::logic_error);
}

TEST(EngineTest, ForcedStepBothBranches) {
  // {(~x1 v ~x2), (~x1 v x2)} from all-true, clause 0 chosen.
  const Formula f(2, {{N(1), N(2)}, {N(1), P(2)}});
  {
    Engine e(f);
    e.step_with(0, 2);  // x2 -> false breaks clause 1
    EXPECT_EQ(sorted_members(e.unsat()), std::vector<std::uint32_t>({1}));
  }
  {
    Engine e(f);
    e.step_with(0, 1);  // x1 -> false satisfies both
    EXPECT_TRUE(e.unsat().empty());
  }
}

TEST(EngineTest, FlipTwiceRestoresUnsatSet) {
  const Formula f = generate_random_2cnf(40, 60, 11);
  Engine e(f);
  const auto before = sorted_members(e.unsat());
  for (Variable v = 1; v <= 40; ++v) {
    e.apply_flip(v);
    e.apply_flip(v);
    EXPECT_EQ(sorted_members(e.unsat()), before);
  }
}

TEST(EngineTest, StepAtCapIsRejected) {
  Engine e(unsat_gadget(), 0);
  Stream rng(1);
  EXPECT_THROW(e.step(rng), std::logic_error);
}

TEST(EngineTest, IncrementalMatchesReevaluationEveryStep) {
  Stream meta(5);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 2 + meta.below(60);
    const Formula f = generate_random_2cnf(n, meta.below(2 * n), meta());
    Engine e(f, 5000);
    Stream rng(meta());
    ASSERT_TRUE(consistent(e));
    while (!e.done()) {
      const Assignment before = e.assignment();
      e.step(rng);
      ASSERT_TRUE(consistent(e));
      int diff = 0;
      for (Variable v = 1; v <= n; ++v) diff += before[v] != e.assignment()[v];
      ASSERT_EQ(diff, 1);
    }
  }
}

TEST(RunTest, SatisfiedUnderAllTrueTakesNoFlips) {
  const Formula f(3, {{P(1), N(2)}, {P(3), P(2)}});
  const RunOutcome out = run(f, 1);
  EXPECT_EQ(out.status, RunStatus::Satisfied);
  EXPECT_EQ(out.flips, 0u);
}

TEST(RunTest, UnsatisfiableHitsCap) {
  const RunOutcome out = run(unsat_gadget(), 9);
  EXPECT_EQ(out.status, RunStatus::CapReached);
  EXPECT_EQ(out.flips, 400u);
  EXPECT_EQ(out.final_assignment.size(), 2u);
  std::uint64_t total = 0;
  for (auto c : out.per_variable_flip_counts) total += c;
  EXPECT_EQ(total, out.flips);
}

TEST(RunTest, LoneNegativeClauseTakesExactlyOneFlip) {
  const Formula f(2, {{N(1), N(2)}});
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const RunOutcome out = run(f, seed);
    ASSERT_EQ(out.flips, 1u);
    sum += static_cast<double>(out.flips);
  }
  EXPECT_DOUBLE_EQ(sum / 10000, 1.0);
}

TEST(RunTest, TraceSinkSeesEveryRecordInOrder) {
  const Formula f = generate_random_2cnf(200, 150, 3);
  std::vector<FlipRecord> seen;
  const RunOutcome out = run(f, 17, {.cap = std::nullopt, .keep_trace = true},
                             [&](const FlipRecord& r) { seen.push_back(r); });
  EXPECT_EQ(out.status, RunStatus::Satisfied);
  EXPECT_TRUE(satisfies(f, out.final_assignment));
  ASSERT_EQ(seen.size(), out.flips);
  ASSERT_TRUE(out.trace.has_value());
  ASSERT_EQ(out.trace->size(), seen.size());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    EXPECT_EQ(seen[i].t, i);
    EXPECT_EQ(seen[i].flipped_variable, f.clause(seen[i].clause_index).at(seen[i].h).variable());
    EXPECT_EQ((*out.trace)[i].clause_index, seen[i].clause_index);
  }
  EXPECT_EQ(seen.back().unsat_count_after, 0u);
}

TEST(RunTest, SameSeedSameRun) {
  const Formula f = generate_random_2cnf(500, 450, 8);
  const RunOutcome a = run(f, 4), b = run(f, 4);
  EXPECT_EQ(a.flips, b.flips);
  EXPECT_EQ(a.final_assignment, b.final_assignment);
  EXPECT_EQ(a.per_variable_flip_counts, b.per_variable_flip_counts);
}

TEST(RunTest, StatusSoundOnRandomInstances) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Formula f = generate_random_2cnf(100, 80, s);
    const RunOutcome out = run(f, s, {.cap = 100000});
    if (out.status == RunStatus::Satisfied) {
      EXPECT_TRUE(satisfies(f, out.final_assignment));
    }
    EXPECT_LE(out.flips, 100000u);
  }
}
