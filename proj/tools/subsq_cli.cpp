#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subsq/bench.hpp"
#include "subsq/hull_oracle.hpp"
#include "subsq/subsquares.hpp"
#include "subsq/system_file.hpp"

using namespace subsq;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;

struct Shape {
  int m, n, overlap;
};

int exit_code(Status s) {
  switch (s) {
    case Status::Enclosure: return 0;
    case Status::ProvenUnsolvable: return 2;
    case Status::Inconclusive: return 3;
  }
  return kExitUsage;
}

json bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json box_json(const IVector& box) {
  if (box.size() == 0 || is_empty(box)) return nullptr;
  json out = json::array();
  for (Eigen::Index i = 0; i < box.size(); ++i) out.push_back({bound(box[i].lo()), bound(box[i].hi())});
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SUBSQ_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
    throw CLI::ValidationError("SUBSQ_SEED", std::string("not an unsigned integer: ") + env);
  }
  return 1;
}

std::optional<Budget> parse_budget(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "all") return Budget::all();
  char* end = nullptr;
  const long k = std::strtol(text.c_str(), &end, 10);
  if (*end != '\0' || k < 1) throw CLI::ValidationError("--budget", "expected 'all' or a positive count");
  return Budget::random(static_cast<int>(k));
}

// "lo,hi;lo,hi;..." with one pair per unknown.
IVector parse_box(const std::string& text, Eigen::Index n) {
  std::vector<Ival> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--x0", "expected lo,hi pairs separated by ';'");
    try {
      parts.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--x0", "bad interval '" + item + "'");
    }
  }
  if (static_cast<Eigen::Index>(parts.size()) != n) {
    throw CLI::ValidationError("--x0", "expected " + std::to_string(n) + " intervals, got " +
                                           std::to_string(parts.size()));
  }
  IVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = parts[static_cast<std::size_t>(i)];
  return x;
}

Mode parse_mode(const std::string& s) {
  if (s == "simple") return Mode::Simple;
  if (s == "parallel") return Mode::Parallel;
  return Mode::Sequential;
}

GeneratorKind parse_generator(const std::string& s) {
  if (s == "centered") return GeneratorKind::Centered;
  if (s == "inconsistent") return GeneratorKind::Inconsistent;
  return GeneratorKind::Shifted;
}

struct Options {
  std::string file;
  std::string mode = "sequential";
  int overlap = -1;
  double eps = 1e-6;
  int max_iter = 100;
  std::optional<std::uint64_t> seed;
  std::vector<double> radii;
  int trials = 0;
  int workers = 1;
  std::string budget;
  std::string x0;
  int m = 0, n = 0;
  std::string generator = "shifted";
  std::string table;
  bool timings = false;
  int redraws = 10;
  double inflation = 4.0;
  int n_cap = 10;
};

int run_solve(const Options& o) {
  const auto sys = read_system_file(o.file);
  const std::uint64_t seed = o.seed.value_or(default_seed());
  Rng rng(seed);
  std::optional<IVector> x0;
  if (!o.x0.empty()) x0 = parse_box(o.x0, sys.a.cols());

  const int n = static_cast<int>(sys.a.cols());
  const int overlap = o.overlap < 0 ? default_overlap(n) : o.overlap;
  const Mode mode = parse_mode(o.mode);
  SolveOutcome out;
  if (mode == Mode::Simple) {
    SimpleOptions opts;
    opts.square = {o.eps, o.max_iter};
    opts.x0 = x0;
    const Budget budget =
        parse_budget(o.budget).value_or(default_budget(static_cast<int>(sys.a.rows()), n, overlap));
    out = simple_solve(sys.a, sys.b, budget, opts, rng);
  } else {
    SequentialOptions opts;
    opts.overlap = overlap;
    opts.eps = o.eps;
    opts.max_iter = o.max_iter;
    if (mode == Mode::Parallel || o.workers > 1) {
      opts.sweep = Sweep::Jacobi;
      out = parallel_sequential_solve(sys.a, sys.b, x0, opts, rng, o.workers);
    } else {
      out = sequential_solve(sys.a, sys.b, x0, opts, rng);
    }
  }

  json line = {{"status", std::string(to_string(out.status))},
               {"box", box_json(out.box)},
               {"iterations", out.iterations},
               {"subsquares_used", out.subsquares_used},
               {"inconclusive_subsquares", out.inconclusive_subsquares},
               {"seed", seed}};
  if (!out.reason.empty()) line["reason"] = out.reason;
  std::cout << line.dump() << '\n';
  return exit_code(out.status);
}

int run_gen(const Options& o) {
  ExperimentConfig cfg;
  cfg.m = o.m ? o.m : cfg.m;
  cfg.n = o.n ? o.n : cfg.n;
  cfg.radius = o.radii.empty() ? cfg.radius : o.radii.front();
  cfg.generator = parse_generator(o.generator);
  cfg.seed = o.seed.value_or(default_seed());
  Rng rng(cfg.seed);
  const auto g = generate_random_system(cfg, rng);

  std::string xs;
  for (Eigen::Index j = 0; j < g.x_star.size(); ++j) xs += (j ? " " : "") + hex_float(g.x_star[j]);
  std::ostringstream comment;
  comment << "generator " << to_string(cfg.generator) << " m " << cfg.m << " n " << cfg.n << " radius "
          << hex_float(cfg.radius) << " seed " << cfg.seed << "\nx* " << xs;
  std::cout << write_system(g.a, g.b, comment.str());
  return 0;
}

int run_hull(const Options& o) {
  const auto sys = read_system_file(o.file);
  const auto h = exact_hull(sys.a, sys.b, o.n_cap);
  json line = {{"feasible", h.feasible}, {"box", box_json(h.box)}, {"orthants_visited", h.orthants_visited}};
  std::cout << line.dump() << '\n';
  return h.feasible ? 0 : 2;
}

std::vector<Shape> default_shapes(const std::string& table) {
  if (table == "table1") return {{5, 3, -1}, {9, 5, -1}, {13, 7, -1}};
  if (table == "table3") return {{15, 10, -1}, {25, 21, -1}, {35, 23, -1}, {50, 35, -1}, {73, 55, -1}, {100, 87, -1}};
  if (table == "table4") return {{15, 10, 3}, {25, 13, 5}, {37, 20, 7}, {50, 35, 11}};
  return {{15, 10, 3}, {25, 13, 5}, {37, 20, 7}, {50, 35, 11}};
}

std::vector<double> default_radii(const std::string& table) {
  if (table == "table1") return {0.01};
  if (table == "table3") return {0.01, 0.001, 0.0001};
  if (table == "table4") return {0.1, 0.25, 0.35, 0.5};
  return {0.1, 0.25, 0.35};
}

int run_bench(const Options& o) {
  std::vector<Shape> shapes = default_shapes(o.table);
  if (o.m || o.n) {
    if (!o.m || !o.n) throw CLI::ValidationError("--m/--n", "give both --m and --n");
    shapes = {{o.m, o.n, -1}};
  }
  const std::vector<double> radii = o.radii.empty() ? default_radii(o.table) : o.radii;
  const std::optional<Budget> budget = parse_budget(o.budget);

  if (o.table == "table1") std::cout << csv_header_table1() << '\n';
  else if (o.table == "table3") std::cout << csv_header_table3() << '\n';
  else std::cout << csv_header_table4(o.timings) << '\n';

  int code = 0;
  for (const auto& shape : shapes) {
    for (double r : radii) {
      ExperimentConfig cfg;
      cfg.m = shape.m;
      cfg.n = shape.n;
      cfg.radius = r;
      cfg.overlap = o.overlap >= 0 ? o.overlap : shape.overlap;
      cfg.eps = o.eps;
      cfg.max_iter = o.max_iter;
      if (o.trials > 0) cfg.trials = o.trials;
      cfg.seed = o.seed.value_or(default_seed());
      cfg.mode = o.workers > 1 ? Mode::Parallel : parse_mode(o.mode);
      cfg.budget = budget;
      cfg.generator = parse_generator(o.generator);
      cfg.redraws = o.redraws;
      cfg.inflation = o.inflation;
      cfg.workers = o.workers;
      cfg.timings = o.timings;
      cfg.oracle_cap = o.n_cap;
      try {
        if (o.table == "table1") std::cout << csv_row(run_table1(cfg)) << '\n';
        else if (o.table == "table3") std::cout << csv_row(run_table3(cfg)) << '\n';
        else if (o.table == "table4") std::cout << csv_row(run_table4(cfg), o.timings) << '\n';
        else std::cout << csv_row(run_table5(cfg), o.timings) << '\n';
      } catch (const Error& e) {
        std::cerr << o.table << ' ' << shape.m << 'x' << shape.n << " radius " << r << ": " << e.what()
                  << '\n';
        code = kExitUsage;
      }
      std::cout.flush();
    }
  }
  return code;
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "simple | sequential | parallel")
      ->check(CLI::IsMember({"simple", "sequential", "parallel"}));
  cmd->add_option("--overlap", o.overlap, "rows shared between consecutive subsquares")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", o.eps, "convergence tolerance per endpoint")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "iteration / round cap")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "threads for the parallel sequential method")->check(CLI::Range(1, 256));
  cmd->add_option("--budget", o.budget, "simple method subsquares: all | k");
}

void add_seed_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "master seed (default: $SUBSQ_SEED, else 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enclosures of overdetermined interval linear systems by square subsystems"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "enclose the solution set of a system file (JSON line)");
  solve->add_option("file", o.file, "system file")->required();
  add_solver_flags(solve, o);
  add_seed_flag(solve, o);
  solve->add_option("--x0", o.x0, "starting box 'lo,hi;lo,hi;...'");

  auto* gen = app.add_subcommand("gen", "write a random system file to stdout");
  gen->add_option("--m", o.m, "rows")->check(CLI::PositiveNumber);
  gen->add_option("--n", o.n, "columns")->check(CLI::PositiveNumber);
  gen->add_option("--radius", o.radii, "coefficient radius")->expected(1);
  gen->add_option("--generator", o.generator, "shifted | centered | inconsistent")
      ->check(CLI::IsMember({"shifted", "centered", "inconsistent"}));
  add_seed_flag(gen, o);

  auto* bench = app.add_subcommand("bench", "experiment tables as CSV");
  bench->add_option("table", o.table, "table1 | table3 | table4 | table5")
      ->required()
      ->check(CLI::IsMember({"table1", "table3", "table4", "table5"}));
  add_solver_flags(bench, o);
  add_seed_flag(bench, o);
  bench->add_option("--radius", o.radii, "coefficient radius (repeatable)");
  bench->add_option("--trials", o.trials, "systems per row")->check(CLI::PositiveNumber);
  bench->add_option("--m", o.m, "rows (replaces the default sizes)")->check(CLI::PositiveNumber);
  bench->add_option("--n", o.n, "columns")->check(CLI::PositiveNumber);
  bench->add_option("--generator", o.generator, "table4 generator: shifted | centered")
      ->check(CLI::IsMember({"shifted", "centered"}));
  bench->add_option("--redraws", o.redraws, "subsquare selections per system (table4/5)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--inflation", o.inflation, "width factor of the starting box (table4/5)")
      ->check(CLI::Range(1.0, 1e6));
  bench->add_option("--oracle-cap", o.n_cap, "largest n handed to the LP oracle")->check(CLI::PositiveNumber);
  bench->add_flag("--timings", o.timings, "add a mean_ms column (output no longer reproducible)");

  auto* hull = app.add_subcommand("hull", "interval hull by orthant LPs (small n)");
  hull->add_option("file", o.file, "system file")->required();
  hull->add_option("--n-cap", o.n_cap, "largest n accepted")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) return run_solve(o);
    if (*gen) return run_gen(o);
    if (*bench) return run_bench(o);
    if (*hull) return run_hull(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}
