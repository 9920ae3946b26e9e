// walk2sat: random 2-SAT generation, WalkSAT runs, sweeps, verification
// and plotting.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "walk2sat/dimacs.hpp"
#include "walk2sat/harness.hpp"
#include "walk2sat/verify.hpp"

namespace {

using namespace walk2sat;

struct FormulaSource {
  std::string input;
  std::size_t n = 0;
  std::optional<double> alpha;
  std::optional<std::size_t> m;
  std::uint64_t seed = 1;

  void add_options(CLI::App* app, bool allow_input) {
    if (allow_input) app->add_option("--input,-i", input, "DIMACS file ('-' for stdin); otherwise generate");
    app->add_option("--n", n, "variable count for a generated formula");
    app->add_option("--alpha", alpha, "clause density, m = round(alpha n)");
    app->add_option("--m", m, "clause count (overrides --alpha)");
    app->add_option("--seed", seed, "seed")->capture_default_str();
  }

  std::size_t clause_count() const {
    if (m) return *m;
    if (alpha) return clauses_for_density(n, *alpha);
    throw std::invalid_argument("need --m or --alpha");
  }

  Formula load() const {
    if (!input.empty()) {
      std::stringstream ss;
      if (input == "-") {
        ss << std::cin.rdbuf();
      } else {
        std::ifstream in(input);
        if (!in) throw std::runtime_error("cannot read " + input);
        ss << in.rdbuf();
      }
      return parse_dimacs(ss.str());
    }
    return generate_random_2cnf(n, clause_count(), seed);
  }

  double density(const Formula& f) const {
    if (input.empty() && alpha && !m) return *alpha;
    return f.density();
  }
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

void print_summary(const std::vector<RunRecord>& rows, const std::string& out_path) {
  const auto stats = summarize(rows);
  std::printf("%10s %10s %6s %6s %8s %10s %10s %10s %10s %10s\n", "n", "alpha", "rows", "sat", "unsat%",
              "mean T/n", "median", "p10", "p90", "X/n");
  for (const auto& s : stats)
    std::printf("%10zu %10.6g %6zu %6zu %8.2f %10.4g %10.4g %10.4g %10.4g %10.4g\n", s.n, s.alpha, s.rows,
                s.sat_rows, 100.0 * s.unsat_fraction, s.mean, s.median, s.p10, s.p90, s.mean_x_per_n);
  if (!out_path.empty() && out_path != "-") {
    std::ofstream sum(out_path + ".summary.csv", std::ios::binary);
    write_summary(sum, stats);
  }
}

int run_sweep_command(SweepConfig config, const std::string& out_path) {
  std::ofstream file;
  std::ostream& os = out_path.empty() ? file : open_out(out_path, file);
  const bool to_file = !out_path.empty();
  if (to_file) os << kCsvHeader << '\n' << std::flush;
  const auto rows = run_sweep(config, [&](const RunRecord& r) {
    if (to_file) os << to_csv_row(r) << '\n' << std::flush;
  });
  if (out_path == "-") return 0;
  print_summary(rows, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walk2sat: WalkSAT on random 2-SAT, with exact oracles and instrumentation"};
  app.require_subcommand(1);

  // gen
  FormulaSource gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random 2-CNF in DIMACS format");
  gen_src.add_options(gen, false);
  gen->add_option("--out,-o", gen_out, "output path (default stdout)");

  // run
  FormulaSource run_src;
  std::optional<std::uint64_t> run_cap;
  std::size_t run_track = 64;
  std::string run_trace;
  auto* runc = app.add_subcommand("run", "oracle, statistics and one WalkSAT run; prints a CSV record");
  run_src.add_options(runc, true);
  runc->add_option("--cap", run_cap, "flip cap (default 100 n^2)");
  runc->add_option("--track-vars", run_track, "instrumented root variables (0 disables)")->capture_default_str();
  runc->add_option("--trace", run_trace, "stream flip records as CSV to this path");

  // sweeps
  SweepConfig sn;
  sn.alpha_values = {0.1, 0.3, 0.5, 0.7, 0.9};
  sn.replicates = 8;
  std::size_t sn_min = 1 << 10, sn_max = 1 << 18, sn_points = 16;
  std::string sn_out = "sweep_n.csv";
  auto* sweep_n = app.add_subcommand("sweep-n", "normalized runtime across n at fixed densities");
  sweep_n->add_option("--n", sn.n_values, "explicit n values (overrides the geometric grid)");
  sweep_n->add_option("--n-min", sn_min)->capture_default_str();
  sweep_n->add_option("--n-max", sn_max)->capture_default_str();
  sweep_n->add_option("--points", sn_points, "geometric grid size")->capture_default_str();
  sweep_n->add_option("--alpha", sn.alpha_values, "densities")->capture_default_str();
  sweep_n->add_option("--replicates", sn.replicates)->capture_default_str();
  sweep_n->add_option("--seed", sn.base_seed)->capture_default_str();
  sweep_n->add_option("--cap", sn.instance.cap, "flip cap");
  sweep_n->add_option("--workers", sn.workers)->capture_default_str();
  sweep_n->add_option("--track-vars", sn.instance.track_vars)->capture_default_str();
  sweep_n->add_option("--out,-o", sn_out, "CSV path ('-' for stdout)")->capture_default_str();

  SweepConfig sa;
  sa.n_values = {1000000};
  sa.replicates = 4;
  double sa_min = 0.5, sa_max = 1.0 - std::ldexp(1.0, -10);
  std::size_t sa_points = 32;
  std::string sa_out = "sweep_alpha.csv";
  auto* sweep_a = app.add_subcommand("sweep-alpha", "normalized runtime across densities at fixed n");
  sweep_a->add_option("--n", sa.n_values, "n values")->capture_default_str();
  sweep_a->add_option("--alpha", sa.alpha_values, "explicit densities (overrides the even grid)");
  sweep_a->add_option("--alpha-min", sa_min)->capture_default_str();
  sweep_a->add_option("--alpha-max", sa_max)->capture_default_str();
  sweep_a->add_option("--points", sa_points, "even grid size")->capture_default_str();
  sweep_a->add_option("--replicates", sa.replicates)->capture_default_str();
  sweep_a->add_option("--seed", sa.base_seed)->capture_default_str();
  sweep_a->add_option("--cap", sa.instance.cap, "flip cap");
  sweep_a->add_option("--workers", sa.workers)->capture_default_str();
  sweep_a->add_option("--track-vars", sa.instance.track_vars)->capture_default_str();
  sweep_a->add_option("--out,-o", sa_out, "CSV path ('-' for stdout)")->capture_default_str();

  // verify
  verify::VerifyConfig vcfg;
  auto* ver = app.add_subcommand("verify", "run the exact and statistical verification suites");
  ver->add_option("--seed", vcfg.seed)->capture_default_str();
  ver->add_flag("--quick", vcfg.quick, "scaled-down suite sizes");

  // ucp-stats
  FormulaSource us_src;
  auto* ustats = app.add_subcommand("ucp-stats", "implication sub-formula statistics of one formula");
  us_src.add_options(ustats, true);

  // plot
  std::string plot_csv, plot_out = "plot.svg";
  auto* plot = app.add_subcommand("plot", "SVG plot of flips/n from a sweep CSV");
  plot->add_option("csv", plot_csv, "sweep CSV")->required();
  plot->add_option("--out,-o", plot_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Formula f = gen_src.load();
      std::ofstream file;
      std::ostream& os = open_out(gen_out, file);
      os << write_dimacs(f);
      std::fprintf(gen_out.empty() ? stderr : stdout, "n=%zu m=%zu seed=%llu\n", f.num_variables(),
                   f.num_clauses(), static_cast<unsigned long long>(gen_src.seed));
      return 0;
    }

    if (*runc) {
      const Formula f = run_src.load();
      InstanceOptions opt;
      opt.cap = run_cap;
      opt.track_vars = run_track;
      opt.run_unsat = true;
      std::ofstream trace_file;
      if (!run_trace.empty()) {
        trace_file.open(run_trace, std::ios::binary);
        if (!trace_file) throw std::runtime_error("cannot write " + run_trace);
        trace_file << "t,clause,first,second,h,variable,unsat_after\n";
      }
      auto sink = [&](const FlipRecord& r) {
        if (trace_file.is_open())
          trace_file << r.t << ',' << r.clause_index << ',' << r.first.to_dimacs() << ',' << r.second.to_dimacs()
                     << ',' << r.h << ',' << r.flipped_variable << ',' << r.unsat_count_after << '\n';
      };
      const auto res = run_instance(f, run_src.density(f), run_src.seed, opt, sink);
      std::cout << kCsvHeader << '\n' << to_csv_row(res.record) << '\n';
      if (res.record.status == RecordStatus::Satisfied && !satisfies(f, res.outcome->final_assignment)) {
        std::cerr << "internal error: reported assignment does not satisfy the formula\n";
        return 3;
      }
      return 0;
    }

    if (*sweep_n) {
      if (sn.n_values.empty()) sn.n_values = geometric_grid(sn_min, sn_max, sn_points);
      return run_sweep_command(sn, sn_out);
    }

    if (*sweep_a) {
      if (sa.alpha_values.empty()) sa.alpha_values = linear_grid(sa_min, sa_max, sa_points);
      return run_sweep_command(sa, sa_out);
    }

    if (*ver) {
      const auto results = verify::run_all(vcfg);
      bool exact_fail = false, stat_fail = false;
      for (const auto& r : results) {
        std::cout << verify::format_line(r) << '\n';
        if (!r.passed) (r.exact ? exact_fail : stat_fail) = true;
      }
      std::cout << (exact_fail ? "exact checks FAILED" : "all exact checks passed") << '\n';
      return exact_fail ? 1 : (stat_fail ? 2 : 0);
    }

    if (*ustats) {
      const Formula f = us_src.load();
      const auto sizes = all_subformula_sizes(f);
      const auto comps = variable_graph_components(f);
      const std::uint64_t x = x_statistic(sizes);
      const double n = static_cast<double>(f.num_variables());
      std::uint64_t sum = 0;
      std::uint32_t max_size = 0;
      for (auto s : sizes) {
        sum += s;
        max_size = std::max(max_size, s);
      }
      std::printf("n=%zu\nm=%zu\nalpha=%.9g\n", f.num_variables(), f.num_clauses(), f.density());
      std::printf("x_stat=%llu\nx_per_n=%.9g\n", static_cast<unsigned long long>(x), static_cast<double>(x) / n);
      if (f.num_variables() >= 2) std::printf("y_stat=%.9g\n", y_statistic(f, sizes));
      std::printf("mean_subformula=%.9g\nmax_subformula=%u\n", static_cast<double>(sum) / (2 * n), max_size);
      std::printf("components=%zu\nmax_component=%u\n", comps.sizes.size(), comps.largest());
      const double alpha = f.density();
      if (alpha > 0 && alpha < 1) {
        std::printf("t,tail_fraction,bound_3exp(-alpha t/20)\n");
        for (std::size_t t = static_cast<std::size_t>(std::floor(4.0 / (1.0 - alpha))) + 1; t <= 100; ++t) {
          std::uint64_t above = 0;
          for (auto s : sizes) above += s > t;
          std::printf("%zu,%.9g,%.9g\n", t, static_cast<double>(above) / (2 * n),
                      3.0 * std::exp(-alpha * static_cast<double>(t) / 20.0));
        }
      }
      return 0;
    }

    if (*plot) {
      std::ifstream in(plot_csv);
      if (!in) throw std::runtime_error("cannot read " + plot_csv);
      const auto rows = parse_records_csv(in);
      std::ofstream file;
      std::ostream& os = open_out(plot_out, file);
      os << plot_svg(rows);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
