#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "walk2sat/formula.hpp"
#include "walk2sat/index_set.hpp"
#include "walk2sat/rng.hpp"

namespace walk2sat {

/// 100 n^2, saturating.
constexpr std::uint64_t default_flip_cap(std::size_t n) noexcept {
  const auto nn = static_cast<unsigned __int128>(n) * n * 100;
  constexpr auto limit = std::numeric_limits<std::uint64_t>::max();
  return nn > limit ? limit : static_cast<std::uint64_t>(nn);
}

struct FlipRecord {
  std::uint64_t t = 0;  // index of the step; the assignment after it is sigma^(t+1)
  ClauseIndex clause_index = 0;
  Literal first;
  Literal second;
  int h = 1;
  Variable flipped_variable = 0;
  std::size_t unsat_count_after = 0;
};

enum class RunStatus { Satisfied, CapReached };

inline const char* to_string(RunStatus status) noexcept {
  return status == RunStatus::Satisfied ? "Satisfied" : "CapReached";
}

struct RunOutcome {
  RunStatus status = RunStatus::Satisfied;
  std::uint64_t flips = 0;
  Assignment final_assignment;
  std::vector<std::uint64_t> per_variable_flip_counts;  // index v-1
  std::optional<std::vector<FlipRecord>> trace;
};

/// WalkSAT state over a borrowed formula: the current assignment, the set
/// of unsatisfied clause instances, and the flip counter. Starts all-true.
class Engine {
 public:
  explicit Engine(const Formula& formula, std::optional<std::uint64_t> cap = std::nullopt)
      : formula_(&formula),
        sigma_(Assignment::all_true(formula.num_variables())),
        unsat_(formula.num_clauses()),
        flip_counts_(formula.num_variables(), 0),
        cap_(cap.value_or(default_flip_cap(formula.num_variables()))) {
    for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
      const auto ci = static_cast<ClauseIndex>(i);
      if (!clause_satisfied(formula.clause(ci), sigma_)) unsat_.insert(ci);
    }
  }

  const Formula& formula() const noexcept { return *formula_; }
  const Assignment& assignment() const noexcept { return sigma_; }
  const IndexSet& unsat() const noexcept { return unsat_; }
  std::uint64_t flips() const noexcept { return t_; }
  std::uint64_t cap() const noexcept { return cap_; }
  bool satisfied() const noexcept { return unsat_.empty(); }
  bool at_cap() const noexcept { return t_ >= cap_; }
  bool done() const noexcept { return satisfied() || at_cap(); }
  const std::vector<std::uint64_t>& per_variable_flip_counts() const noexcept { return flip_counts_; }

  ClauseIndex sample_unsat_clause(Stream& rng) const { return unsat_.sample(rng); }

  /// Negates one variable and repairs unsat membership of every clause in
  /// the occurrence lists of its two literals. Does not advance t.
  void apply_flip(Variable v) {
    sigma_.flip(v);
    const Literal pos = Literal::positive(v);
    repair(formula_->occurrences(pos));
    repair(formula_->occurrences(~pos));
  }

  /// Fault injection for negative controls: flips without repairing the
  /// unsat set, leaving the engine inconsistent.
  void apply_flip_without_repair(Variable v) { sigma_.flip(v); }

  /// One iteration of the walk: uniform unsatisfied clause, then uniform h.
  FlipRecord step(Stream& rng) {
    require_steppable();
    const ClauseIndex ci = sample_unsat_clause(rng);
    const int h = rng.coin() ? 2 : 1;
    return step_with(ci, h);
  }

  /// Step with a forced clause and position. The clause must be unsatisfied.
  FlipRecord step_with(ClauseIndex ci, int h) {
    require_steppable();
    if (!unsat_.contains(ci)) throw std::logic_error("forced clause is not unsatisfied");
    if (h != 1 && h != 2) throw std::invalid_argument("h must be 1 or 2");
    const Clause& c = formula_->clause(ci);
    const Variable v = c.at(h).variable();
    apply_flip(v);
    ++flip_counts_[v - 1];
    FlipRecord record{t_, ci, c.first, c.second, h, v, unsat_.size()};
    ++t_;
    return record;
  }

  RunOutcome outcome() const {
    RunOutcome out;
    out.status = satisfied() ? RunStatus::Satisfied : RunStatus::CapReached;
    out.flips = t_;
    out.final_assignment = sigma_;
    out.per_variable_flip_counts = flip_counts_;
    return out;
  }

 private:
  void require_steppable() const {
    if (satisfied()) throw std::logic_error("step on a satisfied state");
    if (at_cap()) throw std::logic_error("step at flip cap");
  }

  void repair(std::span<const Occurrence> occs) {
    for (const Occurrence& occ : occs) {
      if (clause_satisfied(formula_->clause(occ.clause), sigma_))
        unsat_.erase(occ.clause);
      else
        unsat_.insert(occ.clause);
    }
  }

  const Formula* formula_;
  Assignment sigma_;
  IndexSet unsat_;
  std::vector<std::uint64_t> flip_counts_;
  std::uint64_t cap_;
  std::uint64_t t_ = 0;
};

struct RunOptions {
  std::optional<std::uint64_t> cap;
  bool keep_trace = false;  // buffer every FlipRecord in the outcome; small inputs only
};

struct NoSink {
  void operator()(const FlipRecord&) const noexcept {}
};

/// Runs the walk to satisfaction or the cap. The sink sees each record in
/// step order, either as sink(record) or sink(record, assignment_after).
template <typename Sink = NoSink>
RunOutcome run_walk(Engine& engine, Stream& rng, Sink&& sink = {}, bool keep_trace = false) {
  std::vector<FlipRecord> trace;
  while (!engine.done()) {
    const FlipRecord record = engine.step(rng);
    if constexpr (std::invocable<Sink&, const FlipRecord&, const Assignment&>)
      sink(record, engine.assignment());
    else
      sink(record);
    if (keep_trace) trace.push_back(record);
  }
  RunOutcome out = engine.outcome();
  if (keep_trace) out.trace = std::move(trace);
  return out;
}

template <typename Sink = NoSink>
RunOutcome run(const Formula& formula, std::uint64_t seed, const RunOptions& options = {},
               Sink&& sink = {}) {
  Engine engine(formula, options.cap);
  Stream rng = Stream::derive(seed, 0, StreamRole::Walk);
  return run_walk(engine, rng, std::forward<Sink>(sink), options.keep_trace);
}

}  // namespace walk2sat
