#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "walk2sat/rng.hpp"

namespace walk2sat {

using Variable = std::uint32_t;  // 1-based
using ClauseIndex = std::uint32_t;

/// A literal over a 1-based variable. Stored as the dense code
/// 2*(v-1) + (negative ? 1 : 0), which indexes the 2n occurrence lists.
class Literal {
 public:
  constexpr Literal() noexcept = default;

  static constexpr Literal from_code(std::uint32_t code) noexcept { return Literal(code); }

  static Literal make(Variable variable, int sign) {
    if (variable < 1) throw std::invalid_argument("literal variable must be >= 1");
    if (sign != 1 && sign != -1) throw std::invalid_argument("literal sign must be +1 or -1");
    return Literal(2 * (variable - 1) + (sign < 0 ? 1u : 0u));
  }
  static Literal positive(Variable variable) { return make(variable, +1); }
  static Literal negative(Variable variable) { return make(variable, -1); }

  /// DIMACS-style signed integer: +v or -v.
  static Literal from_dimacs(std::int64_t value) {
    if (value == 0) throw std::invalid_argument("literal 0 is the clause terminator");
    return value > 0 ? positive(static_cast<Variable>(value))
                     : negative(static_cast<Variable>(-value));
  }

  constexpr std::uint32_t code() const noexcept { return code_; }
  constexpr Variable variable() const noexcept { return (code_ >> 1) + 1; }
  constexpr std::uint32_t var_index() const noexcept { return code_ >> 1; }
  constexpr int sign() const noexcept { return (code_ & 1u) ? -1 : +1; }
  constexpr bool is_negative() const noexcept { return (code_ & 1u) != 0; }
  constexpr Literal operator~() const noexcept { return Literal(code_ ^ 1u); }
  constexpr std::int64_t to_dimacs() const noexcept {
    return sign() * static_cast<std::int64_t>(variable());
  }

  friend constexpr bool operator==(Literal, Literal) noexcept = default;
  friend constexpr auto operator<=>(Literal, Literal) noexcept = default;

 private:
  constexpr explicit Literal(std::uint32_t code) noexcept : code_(code) {}
  std::uint32_t code_ = 0;
};

inline Literal negate(Literal l) noexcept { return ~l; }

/// Ordered two-literal clause; position matters for the walk's h in {1,2}.
struct Clause {
  Literal first;
  Literal second;

  constexpr Literal at(int position) const noexcept { return position == 1 ? first : second; }
  friend constexpr bool operator==(const Clause&, const Clause&) noexcept = default;
};

struct Occurrence {
  ClauseIndex clause;
  std::uint8_t position;  // 1 or 2
};

/// Dense truth assignment, values[v-1] in {-1, +1}.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, std::int8_t fill = +1) : values_(n, fill) {}
  explicit Assignment(std::vector<std::int8_t> values) : values_(std::move(values)) {
    for (auto v : values_)
      if (v != 1 && v != -1) throw std::invalid_argument("assignment entries must be +1 or -1");
  }

  static Assignment all_true(std::size_t n) { return Assignment(n, +1); }

  std::size_t size() const noexcept { return values_.size(); }
  std::int8_t operator[](Variable v) const noexcept { return values_[v - 1]; }
  std::int8_t value(Literal l) const noexcept {
    return static_cast<std::int8_t>(l.sign() * values_[l.var_index()]);
  }
  bool is_true(Literal l) const noexcept { return value(l) > 0; }
  void set(Variable v, std::int8_t value) noexcept { values_[v - 1] = value; }
  void flip(Variable v) noexcept { values_[v - 1] = static_cast<std::int8_t>(-values_[v - 1]); }
  std::span<const std::int8_t> values() const noexcept { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

/// Immutable indexed 2-CNF: clause list plus the inverse index from each
/// of the 2n literals to its (clause, position) occurrences, in CSR form.
class Formula {
 public:
  Formula() = default;

  Formula(std::size_t num_variables, std::vector<Clause> clauses)
      : num_variables_(num_variables), clauses_(std::move(clauses)) {
    if (num_variables_ > (std::size_t{1} << 31))
      throw std::invalid_argument("too many variables");
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const Clause& c = clauses_[i];
      if (c.first.variable() > num_variables_ || c.second.variable() > num_variables_)
        throw std::invalid_argument("clause " + std::to_string(i) + " references a variable > n");
      if (c.first.variable() == c.second.variable())
        throw std::invalid_argument("clause " + std::to_string(i) + " repeats a variable");
    }
    build_occurrences();
  }

  std::size_t num_variables() const noexcept { return num_variables_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  std::size_t num_literals() const noexcept { return 2 * num_variables_; }
  double density() const noexcept {
    return num_variables_ ? static_cast<double>(clauses_.size()) / num_variables_ : 0.0;
  }

  const Clause& clause(ClauseIndex i) const noexcept { return clauses_[i]; }
  std::span<const Clause> clauses() const noexcept { return clauses_; }

  std::span<const Occurrence> occurrences(Literal l) const noexcept {
    const auto begin = offsets_[l.code()];
    const auto end = offsets_[l.code() + 1];
    return {occurrences_.data() + begin, end - begin};
  }

  bool operator==(const Formula& other) const noexcept {
    return num_variables_ == other.num_variables_ && clauses_ == other.clauses_;
  }

 private:
  void build_occurrences() {
    offsets_.assign(2 * num_variables_ + 1, 0);
    for (const Clause& c : clauses_) {
      ++offsets_[c.first.code() + 1];
      ++offsets_[c.second.code() + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    occurrences_.resize(2 * clauses_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const auto ci = static_cast<ClauseIndex>(i);
      occurrences_[fill[clauses_[i].first.code()]++] = {ci, 1};
      occurrences_[fill[clauses_[i].second.code()]++] = {ci, 2};
    }
  }

  std::size_t num_variables_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::size_t> offsets_;
  std::vector<Occurrence> occurrences_;
};

inline bool clause_satisfied(const Clause& c, const Assignment& sigma) noexcept {
  return sigma.is_true(c.first) || sigma.is_true(c.second);
}

struct Evaluation {
  bool satisfied = true;
  std::vector<ClauseIndex> unsat_indices;
};

inline Evaluation evaluate(const Formula& formula, const Assignment& sigma) {
  if (sigma.size() != formula.num_variables())
    throw std::invalid_argument("assignment length does not match variable count");
  Evaluation result;
  for (std::size_t i = 0; i < formula.num_clauses(); ++i)
    if (!clause_satisfied(formula.clause(static_cast<ClauseIndex>(i)), sigma))
      result.unsat_indices.push_back(static_cast<ClauseIndex>(i));
  result.satisfied = result.unsat_indices.empty();
  return result;
}

inline bool satisfies(const Formula& formula, const Assignment& sigma) {
  return evaluate(formula, sigma).satisfied;
}

/// One uniform draw from the 4n(n-1) ordered, signed two-variable clauses.
inline Clause draw_clause(std::size_t n, Stream& rng) {
  const auto a = static_cast<Variable>(rng.below(n));
  auto b = static_cast<Variable>(rng.below(n - 1));
  if (b >= a) ++b;
  const int s1 = rng.coin() ? -1 : +1;
  const int s2 = rng.coin() ? -1 : +1;
  return {Literal::make(a + 1, s1), Literal::make(b + 1, s2)};
}

/// Random 2-CNF with m i.i.d. clauses. Deterministic in (n, m, seed).
inline Formula generate_random_2cnf(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random 2-CNF needs at least 2 variables");
  Stream rng = Stream::derive(seed, 0, StreamRole::Generator);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (std::size_t i = 0; i < m; ++i) clauses.push_back(draw_clause(n, rng));
  return Formula(n, std::move(clauses));
}

/// m = round(alpha * n).
inline std::size_t clauses_for_density(std::size_t n, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("density must be non-negative");
  return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
}

}  // namespace walk2sat
