#pragma once

// Verification suites shared by the `verify` subcommand and the acceptance
// tests. Exact suites count violations and pass only at zero; statistical
// suites compare an estimate against a pinned threshold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "walk2sat/formula.hpp"
#include "walk2sat/harness.hpp"
#include "walk2sat/index_set.hpp"
#include "walk2sat/instrumentation.hpp"
#include "walk2sat/rng.hpp"
#include "walk2sat/two_sat.hpp"
#include "walk2sat/ucp.hpp"
#include "walk2sat/variable_graph.hpp"
#include "walk2sat/walksat.hpp"

namespace walk2sat::verify {

struct CheckResult {
  std::string name;
  bool exact = true;
  bool passed = false;
  std::uint64_t cases = 0;       // instances, steps or draws examined
  std::uint64_t violations = 0;
  std::string detail;
  std::map<std::string, double> metrics;
};

inline std::string format_line(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << ' ' << (r.exact ? "[exact]" : "[stat] ") << ' ' << r.name
     << " cases=" << r.cases << " violations=" << r.violations;
  if (!r.detail.empty()) os << " : " << r.detail;
  return os.str();
}

/// Literal-to-literal reachability in the implication digraph by dense
/// transitive closure (Floyd-Warshall). reach[a][b]: b reachable from a,
/// including a itself. For small n only.
inline std::vector<std::vector<bool>> reachability_closure(const Formula& f) {
  const std::size_t V = f.num_literals();
  std::vector<std::vector<bool>> reach(V, std::vector<bool>(V, false));
  for (std::size_t i = 0; i < V; ++i) reach[i][i] = true;
  for (const Clause& c : f.clauses()) {
    reach[(~c.first).code()][c.second.code()] = true;
    reach[(~c.second).code()][c.first.code()] = true;
  }
  for (std::size_t k = 0; k < V; ++k)
    for (std::size_t i = 0; i < V; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < V; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

/// Upper tail z-score of a chi-square statistic (Wilson-Hilferty).
inline double chi_square_z(double chi2, double df) {
  const double a = 2.0 / (9.0 * df);
  return (std::cbrt(chi2 / df) - (1.0 - a)) / std::sqrt(a);
}

/// Incremental unsat set equals a full re-evaluation.
inline bool unsat_consistent(const Engine& engine) {
  auto expected = evaluate(engine.formula(), engine.assignment()).unsat_indices;
  std::vector<std::uint32_t> actual(engine.unsat().members().begin(), engine.unsat().members().end());
  std::sort(actual.begin(), actual.end());
  return actual == std::vector<std::uint32_t>(expected.begin(), expected.end());
}

// ---------------------------------------------------------------------------

struct OracleEquivalenceConfig {
  std::size_t per_cell = 500;
  std::size_t n_min = 2, n_max = 8;
  std::size_t m_min = 0, m_max = 16;
  std::uint64_t seed = 101;
};

inline CheckResult oracle_equivalence(const OracleEquivalenceConfig& cfg = {}) {
  CheckResult r;
  r.name = "oracle equivalence (SCC vs brute force)";
  std::uint64_t sat_count = 0;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n)
    for (std::size_t m = cfg.m_min; m <= cfg.m_max; ++m)
      for (std::size_t i = 0; i < cfg.per_cell; ++i) {
        const Formula f = generate_random_2cnf(n, m, hash_words({cfg.seed, n, m, i}));
        const SatCertificate scc = solve_2sat(f);
        const SatCertificate brute = brute_force_sat(f);
        ++r.cases;
        bool ok = scc.verdict == brute.verdict;
        if (scc.sat()) ok = ok && scc.assignment && satisfies(f, *scc.assignment);
        if (brute.sat()) ok = ok && brute.assignment && satisfies(f, *brute.assignment);
        if (!scc.sat()) ok = ok && scc.witness_variable.has_value();
        if (!ok) ++r.violations;
        if (brute.sat()) ++sat_count;
      }
  r.passed = r.violations == 0;
  r.metrics["sat_fraction"] = static_cast<double>(sat_count) / static_cast<double>(r.cases);
  r.detail = "sat_fraction=" + std::to_string(r.metrics["sat_fraction"]);
  return r;
}

struct ClosureConfig {
  std::size_t formulas = 200;
  std::size_t n_max = 10;
  std::size_t m_max = 25;
  std::uint64_t seed = 202;
};

struct ClosureResults {
  CheckResult closure;
  CheckResult root_consistency;
};

/// UCP sets against brute-force reachability for all 2n seeds, the result
/// invariants, and the E predicate under oracle assignments.
inline ClosureResults ucp_closure(const ClosureConfig& cfg = {}) {
  ClosureResults out;
  out.closure.name = "UCP closure equals implication reachability";
  out.root_consistency.name = "E(root(x), sigma*) holds for all x on satisfiable inputs";
  Stream rng = Stream::derive(cfg.seed, 0, StreamRole::Test);
  UcpScratch scratch;
  for (std::size_t k = 0; k < cfg.formulas; ++k) {
    const std::size_t n = 2 + rng.below(cfg.n_max - 1);
    const std::size_t m = rng.below(cfg.m_max + 1);
    const Formula f = generate_random_2cnf(n, m, rng());
    const auto reach = reachability_closure(f);
    ++out.closure.cases;
    bool ok = true;
    for (std::uint32_t code = 0; code < f.num_literals(); ++code) {
      const Literal l = Literal::from_code(code);
      const Literal seeds[] = {l};
      const UcpResult res = ucp(f, seeds, scratch);
      std::vector<Literal> expected;
      for (std::uint32_t j = 0; j < f.num_literals(); ++j)
        if (reach[code][j]) expected.push_back(Literal::from_code(j));
      if (res.literals != expected) ok = false;
      if (!(res.variables.size() <= res.literals.size() && res.literals.size() <= 2 * res.variables.size()))
        ok = false;
      if (!res.contains(l)) ok = false;
      for (ClauseIndex ci : res.clauses) {
        const Clause& c = f.clause(ci);
        // c = ~a v b with a, b in L, in one orientation or the other
        const bool fwd = res.contains(~c.first) && res.contains(c.second);
        const bool bwd = res.contains(~c.second) && res.contains(c.first);
        if (!fwd && !bwd) ok = false;
      }
      for (const Clause& c : f.clauses()) {
        if (res.contains(~c.first) && !res.contains(c.second)) ok = false;
        if (res.contains(~c.second) && !res.contains(c.first)) ok = false;
      }
    }
    if (!ok) ++out.closure.violations;

    const SatCertificate brute = brute_force_sat(f);
    if (brute.sat()) {
      const SatCertificate scc = solve_2sat(f);
      for (const Assignment* sigma : {&*brute.assignment, &*scc.assignment}) {
        for (Variable x = 1; x <= n; ++x) {
          ++out.root_consistency.cases;
          if (!predicate_E(f, root_literal(x, *sigma), *sigma, scratch)) ++out.root_consistency.violations;
        }
      }
    }
  }
  out.closure.passed = out.closure.violations == 0;
  out.root_consistency.passed = out.root_consistency.violations == 0 && out.root_consistency.cases > 0;
  return out;
}

struct EngineConsistencyConfig {
  std::size_t instances = 100;
  std::size_t n_max = 100;
  std::uint64_t max_steps = 20000;
  std::uint64_t seed = 303;
};

/// Incremental unsat set against full re-evaluation after every step, and
/// exactly one changed variable per step.
inline CheckResult engine_consistency(const EngineConsistencyConfig& cfg = {}) {
  CheckResult r;
  r.name = "engine unsat set matches re-evaluation after every step";
  Stream rng = Stream::derive(cfg.seed, 0, StreamRole::Test);
  std::uint64_t steps = 0;
  for (std::size_t k = 0; k < cfg.instances; ++k) {
    const std::size_t n = 2 + rng.below(cfg.n_max - 1);
    const double alpha = 0.2 + 1.3 * rng.uniform01();
    const Formula f = generate_random_2cnf(n, clauses_for_density(n, alpha), rng());
    Engine engine(f, std::min(cfg.max_steps, default_flip_cap(n)));
    Stream walk = Stream::derive(rng(), 0, StreamRole::Walk);
    ++r.cases;
    bool ok = unsat_consistent(engine);
    while (ok && !engine.done()) {
      const Assignment before = engine.assignment();
      const FlipRecord rec = engine.step(walk);
      ++steps;
      std::size_t changed = 0;
      for (Variable v = 1; v <= n; ++v) changed += before[v] != engine.assignment()[v];
      ok = unsat_consistent(engine) && changed == 1 && before[rec.flipped_variable] != engine.assignment()[rec.flipped_variable] &&
           rec.unsat_count_after == engine.unsat().size();
    }
    if (engine.satisfied()) ok = ok && satisfies(f, engine.assignment());
    if (!ok) ++r.violations;
  }
  r.passed = r.violations == 0;
  r.metrics["steps"] = static_cast<double>(steps);
  r.detail = "steps=" + std::to_string(steps);
  return r;
}

/// Negative control: a flip that skips the unsat repair must be detected.
inline CheckResult mutation_control(std::uint64_t seed = 404) {
  CheckResult r;
  r.name = "negative control: skipped unsat repair is detected";
  Stream rng = Stream::derive(seed, 0, StreamRole::Test);
  std::uint64_t detected = 0;
  for (int k = 0; k < 20; ++k) {
    const Formula f = generate_random_2cnf(50, 45, rng());
    Engine engine(f);
    if (engine.satisfied()) continue;
    ++r.cases;
    const ClauseIndex ci = engine.sample_unsat_clause(rng);
    engine.apply_flip_without_repair(f.clause(ci).first.variable());
    if (!unsat_consistent(engine)) ++detected;
  }
  r.violations = r.cases - detected;
  r.passed = r.cases > 0 && r.violations == 0;
  return r;
}

struct DominationConfig {
  std::size_t instances = 100;  // per alpha
  std::size_t n = 10000;
  std::vector<double> alphas{0.5, 0.9};
  std::uint64_t seed = 505;
};

/// |V(l)| never exceeds the variable-graph component size of |l|.
inline CheckResult domination(const DominationConfig& cfg = {}) {
  CheckResult r;
  r.name = "sub-formula size bounded by variable-graph component";
  UcpScratch scratch;
  std::uint64_t literals = 0;
  for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai)
    for (std::size_t k = 0; k < cfg.instances; ++k) {
      const Formula f = generate_random_2cnf(cfg.n, clauses_for_density(cfg.n, cfg.alphas[ai]),
                                             hash_words({cfg.seed, ai, k}));
      const auto sizes = all_subformula_sizes(f, scratch);
      const auto comps = variable_graph_components(f);
      ++r.cases;
      for (std::uint32_t code = 0; code < sizes.size(); ++code) {
        ++literals;
        if (sizes[code] > comps.size_of_variable(Literal::from_code(code).variable())) ++r.violations;
      }
    }
  r.passed = r.violations == 0;
  r.detail = "literals=" + std::to_string(literals);
  return r;
}

// ---------------------------------------------------------------------------
// Instrumented walks

struct InstrumentedConfig {
  std::size_t runs = 50;
  std::size_t n = 1000;
  double alpha = 0.8;
  std::size_t roots = 64;
  std::uint64_t seed = 606;
  std::size_t max_draws_per_run = 100;  // redraws until satisfiable
};

struct InstrumentedResults {
  CheckResult persistence;
  CheckResult flip_bound;
  CheckResult case_table;
  CheckResult tracker_equivalence;  // incremental Delta* vs recount, bound, stopped process
  CheckResult drift_sign;
  CheckResult case2_drift;
  DriftAccumulator drift;
  FlipCaseHistogram histogram;
  std::uint64_t total_flips = 0;
};

/// Runs instrumented walks and cross-checks the online instrumentation
/// against a per-step recount of every tracked quantity.
inline InstrumentedResults instrumented_runs(const InstrumentedConfig& cfg = {}) {
  InstrumentedResults out;
  out.persistence.name = "E persists once established along walk";
  out.flip_bound.name = "flips <= sum_x N(root(x))";
  out.case_table.name = "realized Delta* transitions match case table";
  out.tracker_equivalence.name = "incremental Delta*/N match recount";
  out.drift_sign.name = "pooled Delta* drift <= 0 + 3 SE";
  out.drift_sign.exact = false;
  out.case2_drift.name = "Case2 drift within 3 SE of -1/2";
  out.case2_drift.exact = false;

  UcpScratch scratch;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    std::optional<Formula> formula;
    std::optional<Assignment> sigma_star;
    std::uint64_t seed = 0;
    for (std::size_t attempt = 0; attempt < cfg.max_draws_per_run && !formula; ++attempt) {
      seed = hash_words({cfg.seed, run, attempt});
      Formula f = generate_random_2cnf(cfg.n, clauses_for_density(cfg.n, cfg.alpha), seed);
      SatCertificate cert = solve_2sat(f);
      if (cert.sat()) {
        formula = std::move(f);
        sigma_star = std::move(cert.assignment);
      }
    }
    if (!formula) continue;
    const Formula& f = *formula;

    Stream pick = Stream::derive(seed, 0, StreamRole::Sampling);
    const auto roots = select_roots(f, cfg.roots, pick);
    Engine engine(f);
    Instrumentation inst(f, *sigma_star, roots, engine.assignment(), {.keep_history = false});

    // Reference state recomputed from the stored sets after each step.
    struct Ref {
      std::vector<Literal> lset;
      std::vector<Variable> vset;
      std::int64_t delta = 0;
      bool hit = false;
      std::uint64_t n_count = 0;
    };
    std::vector<Ref> refs;
    struct Watch {
      std::vector<Literal> lset;
      bool established = false;
    };
    std::vector<Watch> watches;
    for (Variable x : roots) {
      const Literal seeds[] = {root_literal(x, *sigma_star)};
      UcpResult u = ucp(f, seeds, scratch);
      refs.push_back({u.literals, u.variables});
      watches.push_back({u.literals});
      const Literal neg[] = {~root_literal(x, *sigma_star)};
      watches.push_back({ucp(f, neg, scratch).literals});
    }
    auto raw_count = [&](const Ref& ref) {
      std::int64_t c = 0;
      for (Literal l : ref.lset) c += engine.assignment().value(l) != sigma_star->value(l);
      return c;
    };
    auto holds = [&](const Watch& w) {
      return std::all_of(w.lset.begin(), w.lset.end(), [&](Literal l) { return engine.assignment().is_true(l); });
    };
    const bool sat0 = engine.satisfied();
    for (auto& ref : refs) {
      ref.delta = sat0 ? 0 : raw_count(ref);
      ref.hit = ref.delta == 0;
    }
    for (auto& w : watches) w.established = holds(w);

    Stream rng = Stream::derive(seed, 0, StreamRole::Walk);
    while (!engine.done()) {
      std::vector<std::int64_t> raw_before(refs.size());
      for (std::size_t i = 0; i < refs.size(); ++i) raw_before[i] = raw_count(refs[i]);
      const FlipRecord rec = engine.step(rng);
      inst.on_flip(rec, &engine.assignment());
      const bool sat_now = engine.satisfied();

      for (std::size_t i = 0; i < refs.size(); ++i) {
        Ref& ref = refs[i];
        const std::int64_t raw_after = raw_count(ref);
        const std::int64_t delta_after = sat_now ? 0 : raw_after;
        if (std::binary_search(ref.vset.begin(), ref.vset.end(), rec.flipped_variable)) ++ref.n_count;
        if (!ref.hit) {
          ++out.case_table.cases;
          const FlipCase c = classify_flip(rec, ref.vset);
          if (!transition_conforms(c, rec.h, static_cast<int>(raw_after - raw_before[i]))) ++out.case_table.violations;
        } else if (delta_after != 0) {
          ++out.tracker_equivalence.violations;  // stopped process moved
        }
        ref.delta = delta_after;
        if (ref.delta == 0) ref.hit = true;
        ++out.tracker_equivalence.cases;
        const DeltaTracker& tr = inst.trackers()[i];
        if (tr.delta != ref.delta || tr.raw_mismatch != raw_after || tr.n_count != ref.n_count ||
            tr.delta > static_cast<std::int64_t>(tr.literal_set.size()))
          ++out.tracker_equivalence.violations;
      }
      for (auto& w : watches) {
        const bool h = holds(w);
        ++out.persistence.cases;
        if (w.established && !h) ++out.persistence.violations;
        if (h) w.established = true;
      }
    }
    const RunOutcome outcome = engine.outcome();
    out.total_flips += outcome.flips;
    out.persistence.violations += inst.summary().persistence_violations;
    out.case_table.violations += inst.summary().case_table_violations;
    out.tracker_equivalence.violations += inst.summary().bound_violations + inst.summary().stopped_violations +
                                          inst.summary().hamming_violations + inst.summary().flips_after_hit;

    const FlipBoundCheck fc = check_flip_bound(outcome, *sigma_star, f);
    ++out.flip_bound.cases;
    if (!fc.holds) ++out.flip_bound.violations;
    // Identity (2.2): every step flips exactly one variable, so flip counts sum to T.
    std::uint64_t total = 0;
    for (auto c : outcome.per_variable_flip_counts) total += c;
    if (total != outcome.flips) ++out.flip_bound.violations;

    out.drift.merge(inst.summary().drift);
    out.histogram.merge(inst.summary().histogram);
  }
  for (CheckResult* c : {&out.persistence, &out.flip_bound, &out.case_table, &out.tracker_equivalence})
    c->passed = c->violations == 0 && c->cases > 0;

  const DriftReport report = make_drift_report(out.drift);
  {
    CheckResult& c = out.drift_sign;
    c.cases = report.overall.count;
    if (report.overall.mean && report.overall.stderr_) {
      const double mean = *report.overall.mean, se = *report.overall.stderr_;
      c.passed = mean <= 3.0 * se;
      c.metrics = {{"mean", mean}, {"stderr", se}};
      c.detail = "mean=" + std::to_string(mean) + " se=" + std::to_string(se);
    } else {
      c.detail = "no data";
    }
  }
  {
    CheckResult& c = out.case2_drift;
    const auto& e = report.per_case[static_cast<std::size_t>(FlipCase::Case2)];
    c.cases = e.count;
    if (e.mean && e.stderr_) {
      const double mean = *e.mean, se = *e.stderr_;
      c.passed = std::fabs(mean + 0.5) <= 3.0 * se;
      c.metrics = {{"mean", mean}, {"stderr", se}};
      c.detail = "mean=" + std::to_string(mean) + " se=" + std::to_string(se);
    } else {
      c.detail = "no data";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistical suites

struct SamplerConfig {
  std::uint64_t draws = 100000;
  std::uint64_t seed = 707;
};

/// Uniform sampling after an adversarial insert/erase history.
inline CheckResult sampler_uniformity(const SamplerConfig& cfg = {}) {
  CheckResult r;
  r.name = "unsat-set sampling is uniform";
  r.exact = false;
  Stream rng = Stream::derive(cfg.seed, 0, StreamRole::Test);
  IndexSet set(200);
  // Churn: inserts, erasures from both ends of the dense array, re-inserts.
  for (std::uint32_t i = 0; i < 200; ++i) set.insert(i);
  for (std::uint32_t i = 0; i < 200; i += 3) set.erase(i);
  for (std::uint32_t i = 199; i > 100; i -= 7) set.erase(i);
  for (int k = 0; k < 5000; ++k) {
    const auto i = static_cast<std::uint32_t>(rng.below(200));
    if (rng.coin()) set.insert(i); else set.erase(i);
  }
  const std::size_t k = set.size();
  std::map<std::uint32_t, std::uint64_t> counts;
  for (std::uint64_t d = 0; d < cfg.draws; ++d) ++counts[set.sample(rng)];
  const double expected = static_cast<double>(cfg.draws) / static_cast<double>(k);
  double chi2 = 0;
  for (std::uint32_t m : set.members()) {
    const double c = static_cast<double>(counts[m]);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  const double z = chi_square_z(chi2, static_cast<double>(k - 1));

  IndexSet small(10);
  for (std::uint32_t i : {1u, 2u, 5u, 7u, 9u}) small.insert(i);
  small.erase(1);
  small.erase(7);
  std::map<std::uint32_t, std::uint64_t> sc;
  for (std::uint64_t d = 0; d < cfg.draws; ++d) ++sc[small.sample(rng)];
  double worst = 0;
  for (std::uint32_t i : {2u, 5u, 9u})
    worst = std::max(worst, std::fabs(static_cast<double>(sc[i]) / static_cast<double>(cfg.draws) - 1.0 / 3.0));

  r.cases = 2 * cfg.draws;
  r.passed = z < 3.72 && worst <= 0.01 && sc.size() == 3;
  r.metrics = {{"chi2_z", z}, {"small_max_dev", worst}};
  r.detail = "members=" + std::to_string(k) + " chi2_z=" + std::to_string(z) +
             " {2,5,9} max|f-1/3|=" + std::to_string(worst);
  return r;
}

struct TailConfig {
  std::size_t n = 100000;
  double alpha = 0.5;
  std::size_t instances = 4;
  std::size_t t_max = 100;
  double slack = 3.0;
  std::uint64_t seed = 808;
};

/// Empirical Pr[|V(l)| > t] <= slack * exp(-alpha t / 20) for integer
/// t with 4/(1-alpha) < t <= t_max.
inline CheckResult tail_bound(const TailConfig& cfg = {}) {
  CheckResult r;
  r.name = "sub-formula size tail below bound";
  r.exact = false;
  std::vector<std::uint64_t> hist(cfg.t_max + 2, 0);  // hist[s] sizes == s, clamped at t_max+1
  std::uint64_t total = 0;
  UcpScratch scratch;
  for (std::size_t k = 0; k < cfg.instances; ++k) {
    const Formula f = generate_random_2cnf(cfg.n, clauses_for_density(cfg.n, cfg.alpha), hash_words({cfg.seed, k}));
    for (std::uint32_t s : all_subformula_sizes(f, scratch)) {
      ++hist[std::min<std::size_t>(s, cfg.t_max + 1)];
      ++total;
    }
  }
  const double t0 = 4.0 / (1.0 - cfg.alpha);
  double worst_ratio = 0;
  for (std::size_t t = 1; t <= cfg.t_max; ++t) {
    if (static_cast<double>(t) <= t0) continue;
    std::uint64_t above = 0;
    for (std::size_t s = t + 1; s < hist.size(); ++s) above += hist[s];
    const double p = static_cast<double>(above) / static_cast<double>(total);
    const double bound = cfg.slack * std::exp(-cfg.alpha * static_cast<double>(t) / 20.0);
    ++r.cases;
    if (p > bound) ++r.violations;
    worst_ratio = std::max(worst_ratio, p / bound);
  }
  r.passed = r.violations == 0 && r.cases > 0;
  r.metrics = {{"worst_ratio", worst_ratio}, {"literals", static_cast<double>(total)}};
  r.detail = "literals=" + std::to_string(total) + " worst p/bound=" + std::to_string(worst_ratio);
  return r;
}

struct ConcentrationConfig {
  std::size_t n = 100000;
  double alpha = 0.9;
  std::size_t instances = 20;
  double max_rsd = 0.20;
  std::uint64_t seed = 909;
};

/// Relative standard deviation of X/n across independent instances. The
/// truncated Y/n spread is reported alongside but does not gate.
inline CheckResult x_concentration(const ConcentrationConfig& cfg = {}) {
  CheckResult r;
  r.name = "X/n concentration";
  r.exact = false;
  MomentAccumulator acc, acc_y;
  UcpScratch scratch;
  const double n = static_cast<double>(cfg.n);
  for (std::size_t k = 0; k < cfg.instances; ++k) {
    const Formula f = generate_random_2cnf(cfg.n, clauses_for_density(cfg.n, cfg.alpha), hash_words({cfg.seed, k}));
    const auto sizes = all_subformula_sizes(f, scratch);
    acc.add(static_cast<double>(x_statistic(sizes)) / n);
    acc_y.add(y_statistic(f, sizes) / n);
    ++r.cases;
  }
  auto rsd_of = [](const MomentAccumulator& a) {
    return *a.stderr_of_mean() * std::sqrt(static_cast<double>(a.count)) / *a.mean();
  };
  const double rsd = rsd_of(acc), rsd_y = rsd_of(acc_y);
  r.passed = rsd <= cfg.max_rsd;
  r.metrics = {{"mean_x_per_n", *acc.mean()}, {"rsd", rsd}, {"rsd_y", rsd_y}};
  r.detail = "mean X/n=" + std::to_string(*acc.mean()) + " rsd=" + std::to_string(rsd) +
             " (limit " + std::to_string(cfg.max_rsd) + "; Y/n rsd=" + std::to_string(rsd_y) + ", not gated)";
  return r;
}

struct VerifyConfig {
  std::uint64_t seed = 1;
  bool quick = false;  // scaled-down sizes for smoke runs
};

/// Every suite, in a fixed order.
inline std::vector<CheckResult> run_all(const VerifyConfig& cfg = {}) {
  std::vector<CheckResult> out;
  const std::uint64_t s = cfg.seed;
  OracleEquivalenceConfig oc;
  oc.seed = hash_words({s, 1});
  if (cfg.quick) oc.per_cell = 20;
  out.push_back(oracle_equivalence(oc));

  ClosureConfig cc;
  cc.seed = hash_words({s, 2});
  if (cfg.quick) cc.formulas = 40;
  auto closure = ucp_closure(cc);
  out.push_back(closure.closure);
  out.push_back(closure.root_consistency);

  InstrumentedConfig ic;
  ic.seed = hash_words({s, 3});
  if (cfg.quick) ic.runs = 5;
  auto inst = instrumented_runs(ic);
  out.push_back(inst.persistence);
  out.push_back(inst.flip_bound);
  out.push_back(inst.case_table);
  out.push_back(inst.tracker_equivalence);

  DominationConfig dc;
  dc.seed = hash_words({s, 4});
  if (cfg.quick) dc.instances = 5;
  out.push_back(domination(dc));

  EngineConsistencyConfig ec;
  ec.seed = hash_words({s, 5});
  if (cfg.quick) ec.instances = 20;
  out.push_back(engine_consistency(ec));
  out.push_back(mutation_control(hash_words({s, 6})));

  SamplerConfig sc;
  sc.seed = hash_words({s, 7});
  out.push_back(sampler_uniformity(sc));
  out.push_back(inst.drift_sign);
  out.push_back(inst.case2_drift);

  TailConfig tc;
  tc.seed = hash_words({s, 8});
  if (cfg.quick) tc.instances = 1;
  out.push_back(tail_bound(tc));
  return out;
}

}  // namespace walk2sat::verify
