#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "walk2sat/formula.hpp"
#include "walk2sat/instrumentation.hpp"
#include "walk2sat/rng.hpp"
#include "walk2sat/two_sat.hpp"
#include "walk2sat/ucp.hpp"
#include "walk2sat/variable_graph.hpp"
#include "walk2sat/walksat.hpp"

namespace walk2sat {

inline constexpr const char* kCsvHeader =
    "n,m,alpha,seed,sat,status,flips,flips_per_n,wall_ns,x_stat,y_stat,max_subformula,max_component,"
    "persistence_violations,drift_mean,drift_stderr,case1,case2,case3,case4";

/// Walk status column. Skipped marks oracle-UNSAT instances in sweeps,
/// where a capped walk would take 100 n^2 flips for nothing.
enum class RecordStatus { Satisfied, CapReached, Skipped };

inline const char* to_string(RecordStatus s) noexcept {
  switch (s) {
    case RecordStatus::Satisfied: return "Satisfied";
    case RecordStatus::CapReached: return "CapReached";
    case RecordStatus::Skipped: return "Skipped";
  }
  return "?";
}

struct RunRecord {
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  Verdict sat = Verdict::Unsat;
  RecordStatus status = RecordStatus::Skipped;
  std::uint64_t flips = 0;
  double flips_per_n = 0.0;
  std::uint64_t wall_ns = 0;
  std::optional<std::uint64_t> x_stat;
  std::optional<double> y_stat;
  std::optional<std::uint32_t> max_subformula;
  std::optional<std::uint32_t> max_component;
  // instrumentation, present when roots were tracked
  std::optional<std::uint64_t> persistence_violations;
  std::optional<double> drift_mean;
  std::optional<double> drift_stderr;
  std::optional<std::array<std::uint64_t, 4>> cases;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

template <typename T>
std::string opt_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>)
    return format_double(*v);
  else
    return std::to_string(*v);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline std::string to_csv_row(const RunRecord& r) {
  using detail::format_double;
  using detail::opt_field;
  std::string s;
  s += std::to_string(r.n) + "," + std::to_string(r.m) + "," + format_double(r.alpha) + "," +
       std::to_string(r.seed) + "," + to_string(r.sat) + "," + to_string(r.status) + "," +
       std::to_string(r.flips) + "," + format_double(r.flips_per_n) + "," + std::to_string(r.wall_ns) + "," +
       opt_field(r.x_stat) + "," + opt_field(r.y_stat) + "," + opt_field(r.max_subformula) + "," +
       opt_field(r.max_component) + "," + opt_field(r.persistence_violations) + "," + opt_field(r.drift_mean) +
       "," + opt_field(r.drift_stderr);
  for (int i = 0; i < 4; ++i) s += "," + (r.cases ? std::to_string((*r.cases)[i]) : std::string());
  return s;
}

class CsvSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a sweep CSV. Throws CsvSchemaError unless the header matches exactly.
inline std::vector<RunRecord> parse_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw CsvSchemaError("unexpected CSV header: " + line);
  std::vector<RunRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 20) throw CsvSchemaError("line " + std::to_string(line_no) + ": expected 20 fields");
    try {
      RunRecord r;
      r.n = std::stoull(f[0]);
      r.m = std::stoull(f[1]);
      r.alpha = std::stod(f[2]);
      r.seed = std::stoull(f[3]);
      if (f[4] == "SAT") r.sat = Verdict::Sat;
      else if (f[4] == "UNSAT") r.sat = Verdict::Unsat;
      else throw CsvSchemaError("bad sat field");
      if (f[5] == "Satisfied") r.status = RecordStatus::Satisfied;
      else if (f[5] == "CapReached") r.status = RecordStatus::CapReached;
      else if (f[5] == "Skipped") r.status = RecordStatus::Skipped;
      else throw CsvSchemaError("bad status field");
      r.flips = std::stoull(f[6]);
      r.flips_per_n = std::stod(f[7]);
      r.wall_ns = std::stoull(f[8]);
      if (!f[9].empty()) r.x_stat = std::stoull(f[9]);
      if (!f[10].empty()) r.y_stat = std::stod(f[10]);
      if (!f[11].empty()) r.max_subformula = static_cast<std::uint32_t>(std::stoul(f[11]));
      if (!f[12].empty()) r.max_component = static_cast<std::uint32_t>(std::stoul(f[12]));
      if (!f[13].empty()) r.persistence_violations = std::stoull(f[13]);
      if (!f[14].empty()) r.drift_mean = std::stod(f[14]);
      if (!f[15].empty()) r.drift_stderr = std::stod(f[15]);
      if (!f[16].empty()) {
        std::array<std::uint64_t, 4> c{};
        for (int i = 0; i < 4; ++i) c[i] = std::stoull(f[16 + i]);
        r.cases = c;
      }
      rows.push_back(r);
    } catch (const CsvSchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw CsvSchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

/// Per-cell seed, independent of scheduling.
inline std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t n, std::size_t m, std::size_t alpha_index,
                               std::size_t replicate) {
  return hash_words({base_seed, n, m, alpha_index, replicate});
}

struct InstanceOptions {
  std::optional<std::uint64_t> cap;
  std::size_t track_vars = 0;      // 0 disables instrumentation
  bool compute_statistics = true;  // X, Y, max sub-formula, max component
  bool run_unsat = false;          // walk also on oracle-UNSAT inputs
};

struct InstanceResult {
  RunRecord record;
  std::optional<SatCertificate> oracle;
  std::optional<RunOutcome> outcome;
  std::optional<InstrumentationSummary> instrumentation;
};

/// Oracle, then statistics, then the (optionally instrumented) walk.
template <typename ExtraSink = NoSink>
InstanceResult run_instance(const Formula& formula, double alpha, std::uint64_t seed, const InstanceOptions& opt,
                            ExtraSink&& extra = {}) {
  const std::size_t n = formula.num_variables();
  InstanceResult res;
  RunRecord& r = res.record;
  r.n = n;
  r.m = formula.num_clauses();
  r.alpha = alpha;
  r.seed = seed;

  res.oracle = solve_2sat(formula);
  r.sat = res.oracle->verdict;

  if (opt.compute_statistics) {
    UcpScratch scratch;
    const auto sizes = all_subformula_sizes(formula, scratch);
    r.x_stat = x_statistic(sizes);
    if (n >= 2) r.y_stat = y_statistic(formula, sizes);
    r.max_subformula = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    r.max_component = variable_graph_components(formula).largest();
  }

  if (r.sat == Verdict::Unsat && !opt.run_unsat) {
    r.status = RecordStatus::Skipped;
    return res;
  }

  Engine engine(formula, opt.cap);
  Stream rng = Stream::derive(seed, 0, StreamRole::Walk);
  std::optional<Instrumentation> inst;
  if (opt.track_vars > 0 && r.sat == Verdict::Sat) {
    Stream pick = Stream::derive(seed, 0, StreamRole::Sampling);
    const auto roots = select_roots(formula, opt.track_vars, pick);
    inst.emplace(formula, *res.oracle->assignment, roots, engine.assignment());
  }
  const auto start = std::chrono::steady_clock::now();
  RunOutcome outcome;
  if (inst) {
    outcome = run_walk(engine, rng, [&](const FlipRecord& rec, const Assignment& after) {
      inst->on_flip(rec, nullptr);
      if constexpr (std::invocable<ExtraSink&, const FlipRecord&, const Assignment&>)
        extra(rec, after);
      else
        extra(rec);
    });
  } else {
    outcome = run_walk(engine, rng, std::forward<ExtraSink>(extra));
  }
  const auto stop = std::chrono::steady_clock::now();
  r.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  r.status = outcome.status == RunStatus::Satisfied ? RecordStatus::Satisfied : RecordStatus::CapReached;
  r.flips = outcome.flips;
  r.flips_per_n = n ? static_cast<double>(outcome.flips) / static_cast<double>(n) : 0.0;
  if (inst) {
    const auto& s = inst->summary();
    r.persistence_violations = s.persistence_violations;
    const auto overall = s.drift.overall();
    r.drift_mean = overall.mean();
    r.drift_stderr = overall.stderr_of_mean();
    r.cases = s.histogram.steps;
    res.instrumentation = s;
  }
  res.outcome = std::move(outcome);
  return res;
}

struct Cell {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t alpha_index = 0;
  std::size_t replicate = 0;
};

struct SweepConfig {
  std::vector<std::size_t> n_values;
  std::vector<double> alpha_values;
  std::size_t replicates = 1;
  std::uint64_t base_seed = 1;
  std::size_t workers = 1;
  InstanceOptions instance;
};

inline void validate(const SweepConfig& c) {
  if (c.n_values.empty()) throw std::invalid_argument("no n values");
  if (c.alpha_values.empty()) throw std::invalid_argument("no alpha values");
  if (c.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  for (auto n : c.n_values)
    if (n < 2) throw std::invalid_argument("n must be >= 2");
  for (auto a : c.alpha_values)
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be > 0");
}

/// Cells in (n, alpha, replicate) lexicographic order.
inline std::vector<Cell> enumerate_cells(const SweepConfig& c) {
  std::vector<Cell> cells;
  for (auto n : c.n_values)
    for (std::size_t ai = 0; ai < c.alpha_values.size(); ++ai)
      for (std::size_t r = 0; r < c.replicates; ++r) cells.push_back({n, c.alpha_values[ai], ai, r});
  return cells;
}

inline RunRecord run_cell(const Cell& cell, const SweepConfig& config) {
  const std::size_t m = clauses_for_density(cell.n, cell.alpha);
  const std::uint64_t seed = cell_seed(config.base_seed, cell.n, m, cell.alpha_index, cell.replicate);
  const Formula f = generate_random_2cnf(cell.n, m, seed);
  return run_instance(f, cell.alpha, seed, config.instance).record;
}

/// Runs all cells on a fixed worker pool. Rows reach `on_row` in cell
/// order as soon as their prefix is complete, so interrupted sweeps keep
/// every finished leading row.
inline std::vector<RunRecord> run_sweep(const SweepConfig& config,
                                        const std::function<void(const RunRecord&)>& on_row = {}) {
  validate(config);
  const auto cells = enumerate_cells(config);
  std::vector<std::optional<RunRecord>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t emitted = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      RunRecord rec;
      try {
        rec = run_cell(cells[i], config);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = cells.size();
        return;
      }
      std::lock_guard lock(mu);
      results[i] = rec;
      while (emitted < results.size() && results[emitted]) {
        if (on_row) on_row(*results[emitted]);
        ++emitted;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<RunRecord> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(*r);
  return out;
}

/// n in [lo, hi] spaced geometrically, rounded, deduplicated.
inline std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  if (lo < 1 || hi < lo || points < 1) throw std::invalid_argument("bad geometric grid");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = std::exp(std::log(static_cast<double>(lo)) * (1 - f) + std::log(static_cast<double>(hi)) * f);
    const auto n = static_cast<std::size_t>(std::llround(v));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 1 || hi < lo) throw std::invalid_argument("bad linear grid");
  std::vector<double> out;
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  return out;
}

/// Linear-interpolated quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

struct SummaryStats {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t rows = 0;
  std::size_t sat_rows = 0;
  double unsat_fraction = 0.0;
  double success_rate = 0.0;  // Satisfied among SAT rows
  double mean = std::nan("");
  double median = std::nan("");
  double p10 = std::nan("");
  double p90 = std::nan("");
  double mean_x_per_n = std::nan("");
};

/// One entry per (n, alpha) in first-appearance order. T/n uses SAT rows only.
inline std::vector<SummaryStats> summarize(const std::vector<RunRecord>& rows) {
  std::vector<std::pair<std::size_t, double>> keys;
  std::map<std::pair<std::size_t, double>, std::vector<const RunRecord*>> groups;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.n, r.alpha);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<SummaryStats> out;
  for (const auto& key : keys) {
    const auto& g = groups[key];
    SummaryStats s;
    s.n = key.first;
    s.alpha = key.second;
    s.rows = g.size();
    std::vector<double> tn;
    double x_sum = 0.0;
    std::size_t x_count = 0, satisfied = 0;
    for (const RunRecord* r : g) {
      if (r->x_stat) {
        x_sum += static_cast<double>(*r->x_stat) / static_cast<double>(r->n);
        ++x_count;
      }
      if (r->sat != Verdict::Sat) continue;
      ++s.sat_rows;
      if (r->status == RecordStatus::Satisfied) ++satisfied;
      tn.push_back(r->flips_per_n);
    }
    s.unsat_fraction = static_cast<double>(s.rows - s.sat_rows) / static_cast<double>(s.rows);
    s.success_rate = s.sat_rows ? static_cast<double>(satisfied) / static_cast<double>(s.sat_rows) : 0.0;
    if (x_count) s.mean_x_per_n = x_sum / static_cast<double>(x_count);
    if (!tn.empty()) {
      std::sort(tn.begin(), tn.end());
      double sum = 0.0;
      for (double v : tn) sum += v;
      s.mean = sum / static_cast<double>(tn.size());
      s.median = quantile_sorted(tn, 0.5);
      s.p10 = quantile_sorted(tn, 0.1);
      s.p90 = quantile_sorted(tn, 0.9);
    }
    out.push_back(s);
  }
  return out;
}

inline void write_summary(std::ostream& os, const std::vector<SummaryStats>& stats) {
  using detail::format_double;
  os << "n,alpha,rows,sat_rows,unsat_fraction,success_rate,mean_flips_per_n,median,p10,p90,mean_x_per_n\n";
  for (const auto& s : stats)
    os << s.n << ',' << format_double(s.alpha) << ',' << s.rows << ',' << s.sat_rows << ','
       << format_double(s.unsat_fraction) << ',' << format_double(s.success_rate) << ',' << format_double(s.mean)
       << ',' << format_double(s.median) << ',' << format_double(s.p10) << ',' << format_double(s.p90) << ','
       << format_double(s.mean_x_per_n) << '\n';
}

/// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// SVG plot

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  if (std::fabs(v) >= 10000 || (v != 0 && std::fabs(v) < 0.01))
    std::snprintf(buf, sizeof buf, "%.2g", v);
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// T/n against n (log2 axis) when the rows span several n, else against
/// alpha. One circle per walked row, plus a polyline through per-x means.
inline std::string plot_svg(const std::vector<RunRecord>& rows) {
  using detail::svg_num;
  constexpr double width = 800, height = 500, left = 70, right = 20, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  std::vector<const RunRecord*> pts;
  std::vector<std::size_t> distinct_n;
  for (const auto& r : rows) {
    if (r.status == RecordStatus::Skipped) continue;
    pts.push_back(&r);
    if (std::find(distinct_n.begin(), distinct_n.end(), r.n) == distinct_n.end()) distinct_n.push_back(r.n);
  }
  const bool by_n = distinct_n.size() > 1;
  auto xval = [&](const RunRecord& r) { return by_n ? std::log2(static_cast<double>(r.n)) : r.alpha; };

  double xmin = by_n ? 10 : 0.5, xmax = by_n ? 18 : 1.0, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = xmax = xval(*pts.front());
    ymax = 0;
    for (const RunRecord* r : pts) {
      xmin = std::min(xmin, xval(*r));
      xmax = std::max(xmax, xval(*r));
      ymax = std::max(ymax, r->flips_per_n);
    }
    if (xmax - xmin < 1e-12) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (ymax <= 0) ymax = 1;
    ymax *= 1.05;
  }
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << (by_n ? "WalkSAT flips / n vs n" : "WalkSAT flips / n vs alpha") << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    const std::string xl = by_n ? detail::tick_label(std::exp2(xv)) : detail::tick_label(xv);
    os << "<text x=\"" << svg_num(sx(xv)) << "\" y=\"" << svg_num(top + ph + 18) << "\" text-anchor=\"middle\">" << xl
       << "</text>\n";
    os << "<text x=\"" << svg_num(left - 6) << "\" y=\"" << svg_num(sy(yv) + 4) << "\" text-anchor=\"end\">"
       << detail::tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
     << (by_n ? "n (log scale)" : "alpha") << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">flips / n</text>\n";
  os << "</g>\n";

  os << "<g fill=\"steelblue\" fill-opacity=\"0.6\">\n";
  for (const RunRecord* r : pts)
    os << "<circle cx=\"" << svg_num(sx(xval(*r))) << "\" cy=\"" << svg_num(sy(r->flips_per_n)) << "\" r=\"2.5\"/>\n";
  os << "</g>\n";

  std::map<double, std::pair<double, std::size_t>> means;
  for (const RunRecord* r : pts) {
    auto& e = means[xval(*r)];
    e.first += r->flips_per_n;
    e.second += 1;
  }
  if (means.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, e] : means) {
      if (!first) os << ' ';
      first = false;
      os << svg_num(sx(x)) << ',' << svg_num(sy(e.first / static_cast<double>(e.second)));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace walk2sat
