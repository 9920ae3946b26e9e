#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "walk2sat/formula.hpp"
#include "walk2sat/rng.hpp"
#include "walk2sat/ucp.hpp"
#include "walk2sat/walksat.hpp"

namespace walk2sat {

/// Root literal of a variable under a reference assignment: the literal of
/// x that sigma_star makes true.
inline Literal root_literal(Variable x, const Assignment& sigma_star) {
  return Literal::make(x, sigma_star[x]);
}

/// Mismatch count between sigma and sigma_star over L(formula, {root(x)}),
/// forced to zero when sigma satisfies the formula.
inline std::size_t delta_star(const Formula& formula, Variable x, const Assignment& sigma_star,
                              const Assignment& sigma, UcpScratch& scratch) {
  if (!satisfies(formula, sigma_star)) throw std::invalid_argument("reference assignment does not satisfy formula");
  if (satisfies(formula, sigma)) return 0;
  std::size_t mismatches = 0;
  const Literal seeds[] = {root_literal(x, sigma_star)};
  propagate(formula, seeds, scratch, [&](Literal l, ClauseIndex) {
    if (sigma.value(l) != sigma_star.value(l)) ++mismatches;
  });
  return mismatches;
}

inline std::size_t delta_star(const Formula& formula, Variable x, const Assignment& sigma_star,
                              const Assignment& sigma) {
  UcpScratch scratch;
  return delta_star(formula, x, sigma_star, sigma, scratch);
}

enum class FlipCase : std::uint8_t { Case1 = 0, Case2 = 1, Case3 = 2, Case4 = 3 };

inline int case_number(FlipCase c) noexcept { return static_cast<int>(c) + 1; }

/// Case by membership of the chosen clause's two variables in a V-set:
/// (out,out)=1, (in,out)=2, (out,in)=3, (in,in)=4.
constexpr FlipCase classify_membership(bool first_in, bool second_in) noexcept {
  return static_cast<FlipCase>((first_in ? 1 : 0) + (second_in ? 2 : 0));
}

/// vset must be sorted.
inline FlipCase classify_flip(const FlipRecord& record, std::span<const Variable> vset) {
  const bool a = std::binary_search(vset.begin(), vset.end(), record.first.variable());
  const bool b = std::binary_search(vset.begin(), vset.end(), record.second.variable());
  return classify_membership(a, b);
}

/// Whether a realized one-step change of the (unzeroed) mismatch count is
/// the one the case analysis allows.
constexpr bool transition_conforms(FlipCase c, int h, int change) noexcept {
  switch (c) {
    case FlipCase::Case1: return change == 0;
    case FlipCase::Case2: return change == (h == 1 ? -1 : 0);
    case FlipCase::Case3: return change == (h == 2 ? -1 : 0);
    case FlipCase::Case4: return change == -1 || change == 1;
  }
  return false;
}

/// Transition of one tracker across one step, for t < T*.
struct Transition {
  std::uint64_t t = 0;
  std::int64_t before = 0;  // Delta*(t)
  std::int64_t after = 0;   // Delta*(t+1)
  FlipCase flip_case = FlipCase::Case1;
  std::uint8_t h = 1;
  bool terminal = false;  // sigma^(t+1) satisfies the formula
};

// Running sums, mergeable across runs.
struct MomentAccumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x, std::uint64_t times = 1) noexcept {
    count += times;
    sum += x * static_cast<double>(times);
    sum_sq += x * x * static_cast<double>(times);
  }
  void merge(const MomentAccumulator& o) noexcept {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  std::optional<double> mean() const noexcept {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
  /// Standard error of the mean, sample variance with n-1.
  std::optional<double> stderr_of_mean() const noexcept {
    if (count < 2) return std::nullopt;
    const double n = static_cast<double>(count);
    const double m = sum / n;
    const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

struct DriftEstimate {
  std::uint64_t count = 0;
  std::optional<double> mean;    // nullopt: no data
  std::optional<double> stderr_;

  static DriftEstimate from(const MomentAccumulator& acc) {
    return {acc.count, acc.mean(), acc.stderr_of_mean()};
  }
};

/// Per-case tallies of realized Delta* changes plus h counts.
struct FlipCaseHistogram {
  std::array<std::uint64_t, 4> steps{};                     // per case
  std::array<std::array<std::uint64_t, 3>, 4> changes{};    // per case: -1, 0, +1
  std::array<std::array<std::uint64_t, 2>, 4> h_counts{};   // per case: h=1, h=2
  std::uint64_t terminal_steps = 0;

  void add(FlipCase c, int h, int change, std::uint64_t times = 1) noexcept {
    const auto i = static_cast<std::size_t>(c);
    steps[i] += times;
    if (change >= -1 && change <= 1) changes[i][static_cast<std::size_t>(change + 1)] += times;
    h_counts[i][static_cast<std::size_t>(h - 1)] += times;
  }
  void merge(const FlipCaseHistogram& o) noexcept {
    for (std::size_t i = 0; i < 4; ++i) {
      steps[i] += o.steps[i];
      for (std::size_t j = 0; j < 3; ++j) changes[i][j] += o.changes[i][j];
      for (std::size_t j = 0; j < 2; ++j) h_counts[i][j] += o.h_counts[i][j];
    }
    terminal_steps += o.terminal_steps;
  }
};

/// One-step drift of Delta* restricted to t < T*. Non-terminal steps are
/// bucketed by case; the step that satisfies the formula zeroes every
/// active tracker and goes to its own bucket. Overall pools everything.
struct DriftAccumulator {
  std::array<MomentAccumulator, 4> per_case{};
  MomentAccumulator terminal;

  void add(const Transition& tr, std::uint64_t times = 1) noexcept {
    const double d = static_cast<double>(tr.after - tr.before);
    if (tr.terminal)
      terminal.add(d, times);
    else
      per_case[static_cast<std::size_t>(tr.flip_case)].add(d, times);
  }
  void merge(const DriftAccumulator& o) noexcept {
    for (std::size_t i = 0; i < 4; ++i) per_case[i].merge(o.per_case[i]);
    terminal.merge(o.terminal);
  }
  MomentAccumulator overall() const noexcept {
    MomentAccumulator all = terminal;
    for (const auto& c : per_case) all.merge(c);
    return all;
  }
};

struct DriftReport {
  DriftEstimate overall;
  std::array<DriftEstimate, 4> per_case;
  DriftEstimate terminal;
};

inline DriftReport make_drift_report(const DriftAccumulator& acc) {
  DriftReport r;
  r.overall = DriftEstimate::from(acc.overall());
  for (std::size_t i = 0; i < 4; ++i) r.per_case[i] = DriftEstimate::from(acc.per_case[i]);
  r.terminal = DriftEstimate::from(acc.terminal);
  return r;
}

/// Offline estimate from stored tracker histories.
inline DriftReport drift_report(std::span<const std::vector<Transition>> histories) {
  if (histories.empty()) throw std::invalid_argument("drift report needs at least one history");
  DriftAccumulator acc;
  for (const auto& h : histories)
    for (const Transition& tr : h) acc.add(tr);
  return make_drift_report(acc);
}

/// Tracks Delta*(x, t) for one root variable.
struct DeltaTracker {
  Variable root_variable = 0;
  Literal root;
  std::vector<Literal> literal_set;     // L(root), sorted
  std::vector<Variable> variable_set;   // V(root), sorted
  std::int64_t raw_mismatch = 0;        // unzeroed count
  std::int64_t delta = 0;               // Delta* with the satisfied indicator
  std::optional<std::uint64_t> hit_time;
  std::uint64_t n_count = 0;            // N(root): flips of variables in V(root)
  std::uint64_t flips_after_hit = 0;
  std::optional<std::vector<Transition>> history;

  bool active() const noexcept { return !hit_time.has_value(); }
};

/// Watches E(l, sigma^(t)) for one literal and records any loss after it
/// was established.
struct PersistenceWatch {
  Literal literal;
  std::vector<Literal> literal_set;
  std::int64_t false_count = 0;
  std::optional<std::uint64_t> established_at;
};

struct PersistenceViolation {
  Literal literal;
  std::uint64_t t_established;
  std::uint64_t t_violated;
};

struct InstrumentationOptions {
  bool keep_history = false;
  bool watch_negated_roots = true;  // also watch E for ~root, which need not be consistent
};

struct InstrumentationSummary {
  std::size_t tracked_roots = 0;
  std::uint64_t steps = 0;
  std::uint64_t persistence_violations = 0;
  std::uint64_t case_table_violations = 0;
  std::uint64_t bound_violations = 0;       // Delta* > |L|
  std::uint64_t stopped_violations = 0;     // Delta* > 0 after T*
  std::uint64_t flips_after_hit = 0;        // flips inside V(root) after T*
  std::uint64_t hamming_violations = 0;
  FlipCaseHistogram histogram;
  DriftAccumulator drift;
};

/// Online consumer of a walk over a satisfiable formula with a known
/// satisfying assignment. Feed it every FlipRecord in step order.
class Instrumentation {
 public:
  Instrumentation(const Formula& formula, const Assignment& sigma_star, std::span<const Variable> roots,
                  const Assignment& initial, InstrumentationOptions options = {})
      : formula_(&formula), sigma_star_(sigma_star), shadow_(initial), options_(options) {
    if (!satisfies(formula, sigma_star)) throw std::invalid_argument("reference assignment does not satisfy formula");
    const std::size_t n = formula.num_variables();
    var_in_v_offsets_.assign(n + 1, 0);
    lit_entry_offsets_.assign(n + 1, 0);

    UcpScratch scratch;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> v_pairs;   // (var_index, tracker)
    std::vector<std::pair<std::uint32_t, LiteralEntry>> l_pairs;    // (var_index, entry)
    for (Variable x : roots) {
      if (x < 1 || x > n) throw std::invalid_argument("root variable out of range");
      DeltaTracker tr;
      tr.root_variable = x;
      tr.root = root_literal(x, sigma_star);
      const Literal seeds[] = {tr.root};
      UcpResult r = ucp(formula, seeds, scratch);
      tr.literal_set = std::move(r.literals);
      tr.variable_set = std::move(r.variables);
      if (options_.keep_history) tr.history.emplace();
      const auto id = static_cast<std::uint32_t>(trackers_.size());
      for (Variable v : tr.variable_set) v_pairs.push_back({v - 1, id});
      for (Literal l : tr.literal_set) {
        l_pairs.push_back({l.var_index(), {EntryKind::Tracker, id, l}});
        if (shadow_.value(l) != sigma_star_.value(l)) ++tr.raw_mismatch;
      }
      trackers_.push_back(std::move(tr));

      add_watch(tr_root(id), scratch, l_pairs);
      if (options_.watch_negated_roots) add_watch(~tr_root(id), scratch, l_pairs);
    }
    build_csr(v_pairs, var_in_v_offsets_, var_in_v_);
    build_csr(l_pairs, lit_entry_offsets_, lit_entries_);
    stamp_.assign(trackers_.size(), 0);

    const bool initially_satisfied = satisfies(formula, initial);
    for (auto& tr : trackers_) {
      tr.delta = initially_satisfied ? 0 : tr.raw_mismatch;
      if (tr.delta > static_cast<std::int64_t>(tr.literal_set.size())) ++summary_.bound_violations;
      if (tr.delta == 0) tr.hit_time = 0;
      else ++active_;
    }
    for (auto& w : watches_)
      if (w.false_count == 0) w.established_at = 0;
    summary_.tracked_roots = trackers_.size();
  }

  void operator()(const FlipRecord& record, const Assignment& after) { on_flip(record, &after); }
  void operator()(const FlipRecord& record) { on_flip(record, nullptr); }

  /// Consumes one step. If `after` is given, checks that it differs from
  /// the previous assignment in exactly the flipped variable.
  void on_flip(const FlipRecord& record, const Assignment* after) {
    if (record.t != next_t_) throw std::invalid_argument("flip records out of order");
    ++next_t_;
    ++summary_.steps;
    const Variable v = record.flipped_variable;
    const std::uint64_t t_after = record.t + 1;
    const bool terminal = record.unsat_count_after == 0;
    const int h = record.h;

    shadow_.flip(v);
    if (after) {
      if ((*after)[v] != shadow_[v]) ++summary_.hamming_violations;
      // A full comparison is O(n); only done on small inputs.
      if (formula_->num_variables() <= 4096 && !(*after == shadow_)) ++summary_.hamming_violations;
    }

    // Mark trackers whose V contains each clause variable: bit 1 first, bit 2 second.
    ++epoch_;
    touched_.clear();
    auto mark = [&](Variable var, std::uint8_t bit) {
      for (std::uint32_t id : v_list(var)) {
        if (stamp_[id] != epoch_) {
          stamp_[id] = epoch_;
          bits_[id] = 0;
          touched_.push_back(id);
        }
        bits_[id] |= bit;
      }
    };
    if (bits_.size() != trackers_.size()) bits_.assign(trackers_.size(), 0);
    mark(record.first.variable(), 1);
    mark(record.second.variable(), 2);

    // Previous raw values for touched trackers, then apply literal updates.
    before_raw_.resize(trackers_.size());
    for (std::uint32_t id : touched_) before_raw_[id] = trackers_[id].raw_mismatch;
    for (const LiteralEntry& e : l_list(v)) {
      const bool disagrees_now = shadow_.value(e.literal) != sigma_star_.value(e.literal);
      const std::int64_t change = disagrees_now ? +1 : -1;
      if (e.kind == EntryKind::Tracker)
        trackers_[e.id].raw_mismatch += change;
      else
        watches_[e.id].false_count += shadow_.is_true(e.literal) ? -1 : +1;
    }

    // N counts over the whole run.
    for (std::uint32_t id : v_list(v)) {
      ++trackers_[id].n_count;
      if (!trackers_[id].active()) ++trackers_[id].flips_after_hit;
    }

    // Touched trackers: case 2..4 (case 1 never touches V).
    std::uint64_t touched_active = 0;
    for (std::uint32_t id : touched_) {
      DeltaTracker& tr = trackers_[id];
      const FlipCase c = classify_membership(bits_[id] & 1, bits_[id] & 2);
      const std::int64_t raw_change = tr.raw_mismatch - before_raw_[id];
      if (tr.active()) {
        ++touched_active;
        if (!transition_conforms(c, h, static_cast<int>(raw_change))) ++summary_.case_table_violations;
        const std::int64_t before = tr.delta;
        tr.delta = terminal ? 0 : tr.raw_mismatch;
        record_transition(tr, {record.t, before, tr.delta, c, static_cast<std::uint8_t>(h), terminal});
      } else {
        tr.delta = terminal ? 0 : tr.raw_mismatch;
        if (tr.delta != 0) ++summary_.stopped_violations;
      }
    }

    // Untouched active trackers saw a Case 1 step.
    if (terminal) {
      for (std::uint32_t id = 0; id < trackers_.size(); ++id) {
        DeltaTracker& tr = trackers_[id];
        if (!tr.active() || stamp_[id] == epoch_) continue;
        const std::int64_t before = tr.delta;
        tr.delta = 0;
        record_transition(tr, {record.t, before, 0, FlipCase::Case1, static_cast<std::uint8_t>(h), true});
      }
    } else {
      const std::uint64_t untouched = active_ - touched_active;
      if (untouched > 0) {
        const Transition tr{record.t, 1, 1, FlipCase::Case1, static_cast<std::uint8_t>(h), false};
        summary_.histogram.add(FlipCase::Case1, h, 0, untouched);
        summary_.drift.add(tr, untouched);
        if (options_.keep_history) {
          for (std::uint32_t id = 0; id < trackers_.size(); ++id) {
            DeltaTracker& t = trackers_[id];
            if (t.active() && stamp_[id] != epoch_)
              t.history->push_back({record.t, t.delta, t.delta, FlipCase::Case1, static_cast<std::uint8_t>(h), false});
          }
        }
      }
    }

    // Hit times and boundedness after the step.
    for (std::uint32_t id : touched_) finish_tracker(trackers_[id], t_after);
    if (terminal)
      for (auto& tr : trackers_) finish_tracker(tr, t_after);

    for (const LiteralEntry& e : l_list(v)) {
      if (e.kind != EntryKind::Watch) continue;
      PersistenceWatch& w = watches_[e.id];
      if (w.established_at && w.false_count > 0) {
        violations_.push_back({w.literal, *w.established_at, t_after});
        ++summary_.persistence_violations;
        w.established_at.reset();
      }
      if (!w.established_at && w.false_count == 0) w.established_at = t_after;
    }
  }

  std::span<const DeltaTracker> trackers() const noexcept { return trackers_; }
  std::span<const PersistenceWatch> watches() const noexcept { return watches_; }
  std::span<const PersistenceViolation> violations() const noexcept { return violations_; }
  const InstrumentationSummary& summary() const noexcept { return summary_; }
  const Assignment& sigma_star() const noexcept { return sigma_star_; }

 private:
  enum class EntryKind : std::uint8_t { Tracker, Watch };
  struct LiteralEntry {
    EntryKind kind;
    std::uint32_t id;
    Literal literal;
  };

  Literal tr_root(std::uint32_t id) const { return trackers_[id].root; }

  void add_watch(Literal l, UcpScratch& scratch,
                 std::vector<std::pair<std::uint32_t, LiteralEntry>>& l_pairs) {
    PersistenceWatch w;
    w.literal = l;
    const Literal seeds[] = {l};
    w.literal_set = ucp(*formula_, seeds, scratch).literals;
    const auto id = static_cast<std::uint32_t>(watches_.size());
    for (Literal x : w.literal_set) {
      l_pairs.push_back({x.var_index(), {EntryKind::Watch, id, x}});
      if (!shadow_.is_true(x)) ++w.false_count;
    }
    watches_.push_back(std::move(w));
  }

  template <typename T>
  static void build_csr(std::vector<std::pair<std::uint32_t, T>>& pairs, std::vector<std::size_t>& offsets,
                        std::vector<T>& out) {
    for (const auto& p : pairs) ++offsets[p.first + 1];
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    out.resize(pairs.size());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& p : pairs) out[fill[p.first]++] = p.second;
  }

  std::span<const std::uint32_t> v_list(Variable v) const noexcept {
    return {var_in_v_.data() + var_in_v_offsets_[v - 1], var_in_v_offsets_[v] - var_in_v_offsets_[v - 1]};
  }
  std::span<const LiteralEntry> l_list(Variable v) const noexcept {
    return {lit_entries_.data() + lit_entry_offsets_[v - 1], lit_entry_offsets_[v] - lit_entry_offsets_[v - 1]};
  }

  void record_transition(DeltaTracker& tr, const Transition& transition) {
    if (transition.terminal)
      ++summary_.histogram.terminal_steps;
    else
      summary_.histogram.add(transition.flip_case, transition.h,
                             static_cast<int>(transition.after - transition.before));
    summary_.drift.add(transition);
    if (tr.history) tr.history->push_back(transition);
  }

  void finish_tracker(DeltaTracker& tr, std::uint64_t t_after) {
    if (tr.delta > static_cast<std::int64_t>(tr.literal_set.size()) || tr.delta < 0) ++summary_.bound_violations;
    if (tr.active() && tr.delta == 0) {
      tr.hit_time = t_after;
      --active_;
    }
  }

  const Formula* formula_;
  Assignment sigma_star_;
  Assignment shadow_;
  InstrumentationOptions options_;
  std::vector<DeltaTracker> trackers_;
  std::vector<PersistenceWatch> watches_;
  std::vector<PersistenceViolation> violations_;
  std::vector<std::size_t> var_in_v_offsets_;
  std::vector<std::uint32_t> var_in_v_;
  std::vector<std::size_t> lit_entry_offsets_;
  std::vector<LiteralEntry> lit_entries_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint32_t> touched_;
  std::vector<std::int64_t> before_raw_;
  std::uint32_t epoch_ = 0;
  std::uint64_t active_ = 0;
  std::uint64_t next_t_ = 0;
  InstrumentationSummary summary_;
};

/// Roots for instrumentation: `count` distinct uniform variables plus the
/// variables of the lowest-index clause unsatisfied under all-true.
inline std::vector<Variable> select_roots(const Formula& formula, std::size_t count, Stream& rng) {
  const std::size_t n = formula.num_variables();
  std::vector<Variable> roots;
  if (count >= n) {
    for (Variable v = 1; v <= n; ++v) roots.push_back(v);
    return roots;
  }
  std::unordered_set<Variable> chosen;
  while (chosen.size() < count) chosen.insert(static_cast<Variable>(rng.below(n) + 1));
  const Assignment all_true = Assignment::all_true(n);
  for (const Clause& c : formula.clauses()) {
    if (!clause_satisfied(c, all_true)) {
      chosen.insert(c.first.variable());
      chosen.insert(c.second.variable());
      break;
    }
  }
  roots.assign(chosen.begin(), chosen.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct FlipBoundCheck {
  bool holds = false;
  std::uint64_t flips = 0;
  std::uint64_t bound = 0;  // sum over x of N(root(x))
};

/// T <= sum_x N(formula, root(x)), with N recovered from per-variable flip
/// counts and the multiplicity of each variable across all V(root(x)).
inline FlipBoundCheck check_flip_bound(const RunOutcome& outcome, const Assignment& sigma_star,
                                  const Formula& formula) {
  if (!satisfies(formula, sigma_star)) throw std::invalid_argument("reference assignment does not satisfy formula");
  const std::size_t n = formula.num_variables();
  if (outcome.per_variable_flip_counts.size() != n) throw std::invalid_argument("outcome does not match formula");
  std::vector<std::uint64_t> multiplicity(n, 0);
  UcpScratch scratch;
  for (Variable x = 1; x <= n; ++x) {
    const Literal seeds[] = {root_literal(x, sigma_star)};
    propagate(formula, seeds, scratch, [&](Literal l, ClauseIndex) {
      if (scratch.mark_variable(l.var_index())) ++multiplicity[l.var_index()];
    });
  }
  FlipBoundCheck out;
  out.flips = outcome.flips;
  for (std::size_t v = 0; v < n; ++v) out.bound += outcome.per_variable_flip_counts[v] * multiplicity[v];
  out.holds = out.flips <= out.bound;
  return out;
}

}  // namespace walk2sat
