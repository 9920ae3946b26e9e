#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "walk2sat/formula.hpp"

using namespace walk2sat;

namespace {

Literal P(Variable v) { return Literal::positive(v); }
Literal N(Variable v) { return Literal::negative(v); }

}  // namespace

TEST(LiteralTest, EncodingAndNegation) {
  const Literal a = Literal::make(3, -1);
  EXPECT_EQ(a.code(), 2u * 2 + 1);
  EXPECT_EQ(a.variable(), 3u);
  EXPECT_EQ(a.sign(), -1);
  EXPECT_EQ(~~a, a);
  EXPECT_EQ((~a).sign(), +1);
  EXPECT_EQ(negate(negate(P(7))), P(7));
  EXPECT_EQ(Literal::from_dimacs(-4), N(4));
  EXPECT_EQ(N(4).to_dimacs(), -4);
  EXPECT_THROW(Literal::make(0, 1), std::invalid_argument);
  EXPECT_THROW(Literal::make(1, 0), std::invalid_argument);
}

TEST(FormulaTest, RejectsRepeatedOrOutOfRangeVariables) {
  EXPECT_THROW(Formula(2, {{P(1), N(1)}}), std::invalid_argument);
  EXPECT_THROW(Formula(2, {{P(1), P(3)}}), std::invalid_argument);
}

TEST(FormulaTest, OccurrencesAreInverseIndex) {
  const Formula f = generate_random_2cnf(30, 200, 7);
  std::size_t total = 0;
  std::set<std::pair<ClauseIndex, int>> seen;
  for (std::uint32_t code = 0; code < f.num_literals(); ++code) {
    const Literal l = Literal::from_code(code);
    for (const Occurrence& occ : f.occurrences(l)) {
      ASSERT_LT(occ.clause, f.num_clauses());
      EXPECT_EQ(f.clause(occ.clause).at(occ.position), l);
      EXPECT_TRUE(seen.insert({occ.clause, occ.position}).second);
      ++total;
    }
  }
  EXPECT_EQ(total, 2 * f.num_clauses());
}

TEST(GeneratorTest, EdgeCases) {
  const Formula empty = generate_random_2cnf(2, 0, 123);
  EXPECT_EQ(empty.num_variables(), 2u);
  EXPECT_EQ(empty.num_clauses(), 0u);

  const Formula one = generate_random_2cnf(2, 1, 99);
  ASSERT_EQ(one.num_clauses(), 1u);
  const auto& c = one.clause(0);
  EXPECT_EQ(std::set<Variable>({c.first.variable(), c.second.variable()}), std::set<Variable>({1, 2}));

  EXPECT_THROW(generate_random_2cnf(1, 3, 1), std::invalid_argument);
  EXPECT_THROW(generate_random_2cnf(0, 0, 1), std::invalid_argument);
}

TEST(GeneratorTest, Deterministic) {
  EXPECT_EQ(generate_random_2cnf(1000, 900, 42), generate_random_2cnf(1000, 900, 42));
  EXPECT_FALSE(generate_random_2cnf(1000, 900, 42) == generate_random_2cnf(1000, 900, 43));
}

TEST(GeneratorTest, AllOrderedSignedClausesEquallyLikely) {
  // Oracle: direct counting of the 4 n (n-1) = 80 clause types for n = 5.
  constexpr std::size_t n = 5, m = 1000000;
  const Formula f = generate_random_2cnf(n, m, 2024);
  std::map<std::tuple<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
  for (const Clause& c : f.clauses()) ++counts[{c.first.code(), c.second.code()}];
  ASSERT_EQ(counts.size(), 80u);

  const double p = 1.0 / 80.0;
  const double expected = p * m;
  const double sd = std::sqrt(m * p * (1 - p));
  double chi2 = 0;
  for (const auto& [key, count] : counts) {
    const double c = static_cast<double>(count);
    chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LE(std::fabs(c - expected), 5 * sd) << "cell " << std::get<0>(key) << "," << std::get<1>(key);
  }
  // Wilson-Hilferty z for 79 degrees of freedom.
  const double df = 79, a = 2 / (9 * df);
  const double z = (std::cbrt(chi2 / df) - (1 - a)) / std::sqrt(a);
  EXPECT_LT(z, 3.72);
}

TEST(GeneratorTest, VariableAndSignMarginals) {
  constexpr std::size_t n = 50, m = 200000;
  const Formula f = generate_random_2cnf(n, m, 5);
  std::vector<std::uint64_t> slot(n + 1, 0);
  std::uint64_t negatives = 0;
  for (const Clause& c : f.clauses()) {
    for (Literal l : {c.first, c.second}) {
      ++slot[l.variable()];
      negatives += l.is_negative();
    }
  }
  const double slots = 2.0 * m, p = 1.0 / n;
  for (Variable v = 1; v <= n; ++v)
    EXPECT_NEAR(slot[v] / slots, p, 5 * std::sqrt(p * (1 - p) / slots));
  EXPECT_NEAR(negatives / slots, 0.5, 5 * std::sqrt(0.25 / slots));
}

TEST(EvaluateTest, Examples) {
  const Formula pos(2, {{P(1), P(2)}});
  auto e = evaluate(pos, Assignment::all_true(2));
  EXPECT_TRUE(e.satisfied);
  EXPECT_TRUE(e.unsat_indices.empty());

  const Formula neg(2, {{N(1), N(2)}});
  e = evaluate(neg, Assignment::all_true(2));
  EXPECT_FALSE(e.satisfied);
  EXPECT_EQ(e.unsat_indices, std::vector<ClauseIndex>({0}));

  const Formula mixed(2, {{N(1), P(2)}, {N(2), N(1)}});
  e = evaluate(mixed, Assignment(std::vector<std::int8_t>{-1, +1}));
  EXPECT_TRUE(e.satisfied);
  EXPECT_TRUE(e.unsat_indices.empty());

  EXPECT_THROW(evaluate(mixed, Assignment::all_true(3)), std::invalid_argument);
}

TEST(AssignmentTest, LiteralValue) {
  Assignment s(std::vector<std::int8_t>{+1, -1});
  EXPECT_EQ(s.value(P(1)), 1);
  EXPECT_EQ(s.value(N(1)), -1);
  EXPECT_EQ(s.value(P(2)), -1);
  EXPECT_EQ(s.value(N(2)), 1);
  EXPECT_THROW(Assignment(std::vector<std::int8_t>{0}), std::invalid_argument);
}

TEST(DensityTest, RoundsToNearest) {
  EXPECT_EQ(clauses_for_density(1000, 0.9), 900u);
  EXPECT_EQ(clauses_for_density(3, 0.5), 2u);
  EXPECT_THROW(clauses_for_density(10, -1.0), std::invalid_argument);
}
