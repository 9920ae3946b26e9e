#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "walk2sat/formula.hpp"

namespace walk2sat {

/// Reusable visited marks for repeated propagation over one formula size.
/// Bumping the epoch clears all marks in O(1). Not thread-safe; keep one
/// per thread.
class UcpScratch {
 public:
  void prepare(std::size_t num_variables) {
    if (literal_stamp_.size() != 2 * num_variables) {
      literal_stamp_.assign(2 * num_variables, 0);
      variable_stamp_.assign(num_variables, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {  // wrapped
      std::fill(literal_stamp_.begin(), literal_stamp_.end(), 0);
      std::fill(variable_stamp_.begin(), variable_stamp_.end(), 0);
      epoch_ = 1;
    }
    queue_.clear();
  }

  bool mark_literal(Literal l) noexcept {
    auto& s = literal_stamp_[l.code()];
    if (s == epoch_) return false;
    s = epoch_;
    return true;
  }
  bool has_literal(Literal l) const noexcept { return literal_stamp_[l.code()] == epoch_; }

  bool mark_variable(std::uint32_t var_index) noexcept {
    auto& s = variable_stamp_[var_index];
    if (s == epoch_) return false;
    s = epoch_;
    return true;
  }

  std::vector<Literal>& queue() noexcept { return queue_; }

 private:
  std::vector<std::uint32_t> literal_stamp_;
  std::vector<std::uint32_t> variable_stamp_;
  std::vector<Literal> queue_;
  std::uint32_t epoch_ = 0;
};

/// Core propagation loop. Calls on_add(literal, clause_or_npos) for each
/// literal entering L; seeds report ClauseIndex(-1). The queue in scratch
/// holds L in insertion order afterwards.
template <typename OnAdd>
void propagate(const Formula& formula, std::span<const Literal> seeds, UcpScratch& scratch,
               OnAdd&& on_add) {
  constexpr auto no_clause = static_cast<ClauseIndex>(-1);
  scratch.prepare(formula.num_variables());
  auto& queue = scratch.queue();
  for (Literal s : seeds) {
    if (s.variable() > formula.num_variables()) throw std::invalid_argument("seed literal out of range");
    if (scratch.mark_literal(s)) {
      queue.push_back(s);
      on_add(s, no_clause);
    }
  }
  // FIFO over the growing queue: clauses (~l v l') with l in L pull in l'.
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Literal l = queue[head];
    for (const Occurrence& occ : formula.occurrences(~l)) {
      const Clause& c = formula.clause(occ.clause);
      const Literal implied = occ.position == 1 ? c.second : c.first;
      if (scratch.mark_literal(implied)) {
        queue.push_back(implied);
        on_add(implied, occ.clause);
      }
    }
  }
}

struct UcpResult {
  std::vector<Literal> literals;       // sorted
  std::vector<ClauseIndex> clauses;    // sorted; one triggering clause per non-seed literal
  std::vector<Variable> variables;     // sorted, distinct

  bool contains(Literal l) const { return std::binary_search(literals.begin(), literals.end(), l); }
  bool contains_variable(Variable v) const {
    return std::binary_search(variables.begin(), variables.end(), v);
  }
};

inline UcpResult ucp(const Formula& formula, std::span<const Literal> seeds, UcpScratch& scratch) {
  UcpResult result;
  propagate(formula, seeds, scratch, [&](Literal l, ClauseIndex trigger) {
    result.literals.push_back(l);
    if (trigger != static_cast<ClauseIndex>(-1)) result.clauses.push_back(trigger);
    if (scratch.mark_variable(l.var_index())) result.variables.push_back(l.variable());
  });
  std::sort(result.literals.begin(), result.literals.end());
  std::sort(result.clauses.begin(), result.clauses.end());
  std::sort(result.variables.begin(), result.variables.end());
  return result;
}

inline UcpResult ucp(const Formula& formula, std::span<const Literal> seeds) {
  UcpScratch scratch;
  return ucp(formula, seeds, scratch);
}

inline UcpResult ucp(const Formula& formula, std::initializer_list<Literal> seeds) {
  return ucp(formula, std::span<const Literal>(seeds.begin(), seeds.size()));
}

/// The implication sub-formula rooted at a single literal.
struct ImplicationSubformula {
  Literal root;
  std::vector<Variable> variables;
  std::vector<ClauseIndex> clause_indices;
};

inline ImplicationSubformula implication_subformula(const Formula& formula, Literal l,
                                                    UcpScratch& scratch) {
  const Literal seeds[] = {l};
  UcpResult r = ucp(formula, seeds, scratch);
  return {l, std::move(r.variables), std::move(r.clauses)};
}

inline ImplicationSubformula implication_subformula(const Formula& formula, Literal l) {
  UcpScratch scratch;
  return implication_subformula(formula, l, scratch);
}

/// |V(formula, {l})| without materializing the sets.
inline std::size_t subformula_size(const Formula& formula, Literal l, UcpScratch& scratch) {
  std::size_t count = 0;
  const Literal seeds[] = {l};
  propagate(formula, seeds, scratch, [&](Literal added, ClauseIndex) {
    if (scratch.mark_variable(added.var_index())) ++count;
  });
  return count;
}

/// |V(formula, {l})| for every literal, indexed by literal code.
inline std::vector<std::uint32_t> all_subformula_sizes(const Formula& formula, UcpScratch& scratch) {
  std::vector<std::uint32_t> sizes(formula.num_literals());
  for (std::uint32_t code = 0; code < sizes.size(); ++code)
    sizes[code] = static_cast<std::uint32_t>(subformula_size(formula, Literal::from_code(code), scratch));
  return sizes;
}

inline std::vector<std::uint32_t> all_subformula_sizes(const Formula& formula) {
  UcpScratch scratch;
  return all_subformula_sizes(formula, scratch);
}

/// Sum of squared sub-formula sizes over both literals of every variable.
inline std::uint64_t x_statistic(std::span<const std::uint32_t> sizes) {
  std::uint64_t x = 0;
  for (std::uint32_t s : sizes) x += static_cast<std::uint64_t>(s) * s;
  return x;
}

inline std::uint64_t x_statistic(const Formula& formula) {
  return x_statistic(all_subformula_sizes(formula));
}

/// Per-variable truncation at (ln n)^4.
inline double y_statistic(const Formula& formula, std::span<const std::uint32_t> sizes) {
  const std::size_t n = formula.num_variables();
  if (n < 2) throw std::invalid_argument("y statistic needs n >= 2");
  if (sizes.size() != 2 * n) throw std::invalid_argument("size table does not match formula");
  const double cap = std::pow(std::log(static_cast<double>(n)), 4);
  double y = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double a = sizes[2 * v], b = sizes[2 * v + 1];
    y += std::min(a * a + b * b, cap);
  }
  return y;
}

inline double y_statistic(const Formula& formula) {
  if (formula.num_variables() < 2) throw std::invalid_argument("y statistic needs n >= 2");
  return y_statistic(formula, all_subformula_sizes(formula));
}

/// True iff every literal of L(formula, {l}) is true under sigma.
inline bool predicate_E(const Formula& formula, Literal l, const Assignment& sigma,
                        UcpScratch& scratch) {
  bool all_true = true;
  const Literal seeds[] = {l};
  propagate(formula, seeds, scratch, [&](Literal added, ClauseIndex) {
    if (!sigma.is_true(added)) all_true = false;
  });
  return all_true;
}

inline bool predicate_E(const Formula& formula, Literal l, const Assignment& sigma) {
  UcpScratch scratch;
  return predicate_E(formula, l, sigma, scratch);
}

}  // namespace walk2sat
