// One PASS/FAIL line per acceptance criterion. argv[1] is the CLI binary.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "subsq/bench.hpp"
#include "subsq/hull_oracle.hpp"
#include "subsq/square_solve.hpp"
#include "subsq/subsquares.hpp"
#include "subsq/system_file.hpp"

using namespace subsq;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Subset test with a relative slack on every endpoint, for LP-derived boxes.
bool inside(const IVector& a, const IVector& b, double rel = 1e-7) {
  if (is_empty(a)) return true;
  if (is_empty(b) || a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double slo = rel * std::max(1.0, std::abs(b[i].lo()));
    const double shi = rel * std::max(1.0, std::abs(b[i].hi()));
    if (a[i].lo() < b[i].lo() - slo || a[i].hi() > b[i].hi() + shi) return false;
  }
  return true;
}

Verdict tightness() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (auto [m, n] : {std::pair{5, 3}, std::pair{9, 5}}) {
    ExperimentConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.trials = 50;
    cfg.seed = 101;
    const auto row = run_table1(cfg);
    ok = ok && row.failures == 0 && row.av_w_ratio >= 1.0 && row.av_w_ratio <= 1.05;
    detail += fmt("%dx%d av W ratio %.5f (failures %d); ", m, n, row.av_w_ratio, row.failures);
  }
  const double s = seconds_since(t0);
  return {ok && s < 120, detail + fmt("%.1f s", s)};
}

Verdict detection() {
  const auto t0 = Clock::now();
  ExperimentConfig small;
  small.m = 15;
  small.n = 10;
  small.radius = 0.001;
  small.trials = 50;
  small.seed = 202;
  const auto a = run_table3(small);
  ExperimentConfig big;
  big.m = 100;
  big.n = 87;
  big.radius = 0.01;
  big.trials = 10;
  big.seed = 203;
  const auto b = run_table3(big);
  const double s = seconds_since(t0);
  const bool ok = a.detected == 50 && a.mean_used >= 2.0 && a.mean_used <= 3.0 && b.detected > 0 &&
                  b.mean_used >= 3 && s < 300;
  return {ok, fmt("15x10/0.001 mean %.2f (%d/50 detected); 100x87/0.01 mean %.2f (%d/10 detected); %.1f s",
                  a.mean_used, a.detected, b.mean_used, b.detected, s)};
}

Verdict shaving_trend() {
  std::vector<double> av;
  bool all_le_one = true;
  int failures = 0;
  for (double r : {0.1, 0.25, 0.35, 0.5}) {
    ExperimentConfig cfg;
    cfg.m = 15;
    cfg.n = 10;
    cfg.radius = r;
    cfg.trials = 30;
    cfg.seed = 303;
    const auto row = run_table4(cfg);
    av.push_back(row.av_ratio);
    failures += row.failures;
    for (double x : row.ratios) all_le_one = all_le_one && x <= 1;
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < av.size(); ++i) decreasing = decreasing && av[i] < av[i - 1];
  return {decreasing && all_le_one,
          fmt("av ratios %.4f %.4f %.4f %.4f at 0.1 0.25 0.35 0.5; all <= 1: %s; failures %d", av[0], av[1],
              av[2], av[3], all_le_one ? "yes" : "no", failures)};
}

Verdict centered_advantage() {
  int matched = 0, better = 0;
  std::string detail;
  for (auto [m, n] : {std::pair{15, 10}, std::pair{25, 13}, std::pair{37, 20}}) {
    for (double r : {0.1, 0.25, 0.35, 0.5}) {
      ExperimentConfig cfg;
      cfg.m = m;
      cfg.n = n;
      cfg.radius = r;
      cfg.trials = 10;
      cfg.seed = 404 + static_cast<std::uint64_t>(m);
      const auto shifted = run_table4(cfg);
      const auto centered = run_table5(cfg);
      if (shifted.ratios.empty() || centered.ratios.empty()) continue;
      ++matched;
      if (centered.av_ratio <= shifted.av_ratio) ++better;
      detail += fmt("%dx%d/%g %.3f vs %.3f; ", m, n, r, centered.av_ratio, shifted.av_ratio);
    }
  }
  return {matched > 0 && better * 10 >= matched * 9, fmt("centered <= shifted in %d/%d: ", better, matched) + detail};
}

Verdict soundness() {
  const auto t0 = Clock::now();
  const std::array<std::pair<int, int>, 7> shapes{{{3, 2}, {5, 3}, {9, 5}, {15, 10}, {25, 13}, {37, 20}, {50, 35}}};
  const std::array<double, 3> radii{0, 0.01, 0.5};
  int misses = 0, false_unsolvable = 0, inconclusive = 0;
  for (int k = 0; k < 1000; ++k) {
    ExperimentConfig cfg;
    cfg.m = shapes[k % shapes.size()].first;
    cfg.n = shapes[k % shapes.size()].second;
    cfg.radius = radii[(k / shapes.size()) % radii.size()];
    Rng gen(derive_seed(505, k));
    const auto g = generate_random_system(cfg, gen);
    Rng rng(derive_seed(506, k));
    SolveOutcome out;
    try {
      switch (k % 3) {
      case 0:
        out = simple_solve(g.a, g.b, default_budget(cfg.m, cfg.n, cfg.resolved_overlap()), {}, rng);
        break;
      case 1: {
        SequentialOptions opts;
        opts.overlap = cfg.resolved_overlap();
        out = sequential_solve(g.a, g.b, std::nullopt, opts, rng);
        break;
      }
      default: {
        SequentialOptions opts;
        opts.overlap = cfg.resolved_overlap();
        opts.sweep = Sweep::Jacobi;
        out = parallel_sequential_solve(g.a, g.b, std::nullopt, opts, rng, 2);
      }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllSubsquaresInconclusive) throw;
      out.status = Status::Inconclusive;
    }
    if (out.status == Status::ProvenUnsolvable) ++false_unsolvable;
    if (out.status == Status::Inconclusive) ++inconclusive;
    if (out.status == Status::Enclosure && !contains(out.box, g.x_star)) ++misses;
  }
  const double s = seconds_since(t0);
  return {misses == 0 && false_unsolvable == 0 && s < 180,
          fmt("x* missed %d, false unsolvable %d, inconclusive %d of 1000; %.1f s", misses, false_unsolvable,
              inconclusive, s)};
}

Verdict sandwich() {
  const std::array<double, 4> radii{0, 0.01, 0.1, 0.5};
  int broken = 0, mismatched = 0, infeasible = 0, inconclusive = 0;
  for (int k = 0; k < 200; ++k) {
    ExperimentConfig cfg;
    cfg.n = 1 + k % 3;
    cfg.m = cfg.n + 1 + (k / 3) % 4;
    cfg.radius = radii[(k / 12) % radii.size()];
    cfg.generator = k % 2 ? GeneratorKind::Inconsistent : GeneratorKind::Shifted;
    Rng gen(derive_seed(606, k));
    const auto g = generate_random_system(cfg, gen);
    const auto hull = exact_hull(g.a, g.b);
    Rng rng(derive_seed(607, k));
    const auto out = simple_solve(g.a, g.b, Budget::all(), {}, rng);
    if (out.status == Status::Inconclusive) ++inconclusive;
    const bool proven = out.status == Status::ProvenUnsolvable;
    if (!hull.feasible) ++infeasible;
    if (proven == hull.feasible) ++mismatched;
    if (!hull.feasible) continue;
    const auto inner = inner_hull_sampling(g.a, g.b, 200, rng);
    if (inner && !inside(*inner, hull.box)) ++broken;
    if (out.status == Status::Enclosure && !inside(hull.box, out.box)) ++broken;
  }
  return {broken == 0 && mismatched == 0,
          fmt("sandwich violations %d, infeasible <=> unsolvable mismatches %d (%d infeasible, %d inconclusive) "
              "of 200",
              broken, mismatched, infeasible, inconclusive)};
}

Verdict sweep_invariants() {
  Rng rng(707);
  std::uniform_int_distribution<int> dim(2, 10);
  std::uniform_real_distribution<double> rad(0, 0.2);
  std::uniform_real_distribution<double> pad(0, 50);
  int checked = 0, bad = 0, redrawn = 0;
  while (checked < 500) {
    ExperimentConfig cfg;
    cfg.n = dim(rng);
    cfg.m = cfg.n;
    cfg.radius = rad(rng);
    const auto g = generate_random_system(cfg, rng);
    PreconditionedSystem p;
    try {
      p = precondition(g.a, g.b);
    } catch (const Error&) {
      continue;
    }
    IVector x(cfg.n);
    for (int j = 0; j < cfg.n; ++j) x[j] = Ival(g.x_star[j] - pad(rng), g.x_star[j] + pad(rng));
    IVector gs, jac;
    try {
      gs = gs_sweep(p, x);
      jac = jacobi_sweep(p, x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DiagonalContainsZero) throw;
      ++redrawn;
      continue;
    }
    ++checked;
    if (!subset_of(gs, x) || !subset_of(jac, x) || !subset_of(gs, jac)) ++bad;
  }
  return {bad == 0, fmt("%d of %d systems broke an inclusion (%d redrawn: zero on the diagonal)", bad, checked,
                        redrawn)};
}

Verdict count_formula() {
  Rng rng(808);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const int m = std::uniform_int_distribution<int>(1, 80)(rng);
    const int n = k % 10 == 0 ? m : std::uniform_int_distribution<int>(1, m)(rng);
    const int overlap = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const int expected = 1 + (m - n + (n - overlap) - 1) / (n - overlap);
    const auto sel = choose_subsquares(m, n, overlap, rng);
    std::vector<bool> seen(m, false);
    bool shape_ok = true;
    for (const auto& s : sel.sets) {
      std::vector<int> sorted = s;
      std::sort(sorted.begin(), sorted.end());
      shape_ok = shape_ok && static_cast<int>(s.size()) == n &&
                 std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      for (int r : s) seen[r] = true;
    }
    const bool covered = std::all_of(seen.begin(), seen.end(), [](bool v) { return v; });
    if (count_subsquares(m, n, overlap) != expected || static_cast<int>(sel.sets.size()) != expected || !shape_ok ||
        !covered)
      ++bad;
  }
  return {bad == 0, fmt("%d of 1000 triples disagree", bad)};
}

bool same_bits(const IVector& a, const IVector& b) {
  if (a.size() != b.size()) return false;
  if (is_empty(a) || is_empty(b)) return is_empty(a) == is_empty(b);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].lo() != b[i].lo() || a[i].hi() != b[i].hi()) return false;
  }
  return true;
}

Verdict parallel_consistency() {
  int unsound = 0, not_enclosure = 0, differ = 0, systems = 0;
  for (int k = 0; k < 50; ++k) {
    ExperimentConfig cfg;
    cfg.m = 20 + k % 21;
    cfg.n = 5 + k % 11;
    cfg.radius = k % 2 ? 0.01 : 0.1;
    Rng gen(derive_seed(909, k));
    const auto g = generate_random_system(cfg, gen);
    const auto x0 = loose_start_box(g.a, g.b, 4.0, gen);
    if (!x0) continue;
    ++systems;
    SequentialOptions opts;
    opts.overlap = cfg.resolved_overlap();
    opts.sweep = Sweep::Jacobi;
    for (int workers : {1, 2, 8}) {
      Rng rng(derive_seed(910, k));
      const auto out = parallel_sequential_solve(g.a, g.b, *x0, opts, rng, workers);
      if (out.status != Status::Enclosure) {
        ++not_enclosure;
        continue;
      }
      if (!subset_of(out.box, *x0) || !contains(out.box, g.x_star)) ++unsound;
      if (workers == 1) {
        Rng r2(derive_seed(910, k));
        const auto seq = sequential_solve(g.a, g.b, *x0, opts, r2);
        if (seq.status != out.status || seq.iterations != out.iterations || !same_bits(seq.box, out.box)) ++differ;
      }
    }
  }
  return {systems == 50 && unsound == 0 && not_enclosure == 0 && differ == 0,
          fmt("%d systems: unsound %d, non-enclosure %d, 1-worker vs Jacobi differences %d", systems, unsound,
              not_enclosure, differ)};
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) return "<popen failed>";
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  const int rc = pclose(p);
  return out + "\nexit " + std::to_string(rc);
}

Verdict determinism(const std::string& cli) {
  const std::string file = "acceptance_system.txt";
  run(cli + " gen --m 12 --n 7 --radius 0.05 --seed 11 > " + file);
  const std::vector<std::string> cmds{
      cli + " gen --m 12 --n 7 --radius 0.05 --seed 11",
      cli + " solve " + file + " --mode simple --budget 6 --seed 3 --workers 1",
      cli + " solve " + file + " --mode sequential --seed 3 --workers 1",
      cli + " solve " + file + " --mode parallel --seed 3 --workers 1",
      cli + " hull " + file,
      cli + " bench table1 --trials 3 --seed 5 --m 5 --n 3",
      cli + " bench table3 --trials 3 --seed 5 --m 15 --n 10 --radius 0.001",
      cli + " bench table4 --trials 3 --seed 5 --m 15 --n 10 --radius 0.25 --redraws 3 --workers 1",
      cli + " bench table5 --trials 3 --seed 5 --m 15 --n 10 --radius 0.25 --redraws 3 --workers 1",
  };
  int differ = 0, failed = 0;
  for (const auto& c : cmds) {
    const std::string a = run(c), b = run(c);
    if (a != b) ++differ;
    if (a.find("\nexit 0") == std::string::npos) ++failed;
  }
  std::remove(file.c_str());
  return {differ == 0 && failed == 0,
          fmt("%d of %zu commands differed between runs, %d exited non-zero", differ, cmds.size(), failed)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to subsq>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 tightness vs LP hull", tightness},
      {"2 unsolvability detection", detection},
      {"3 shaving trend in radius", shaving_trend},
      {"4 centered midpoint advantage", centered_advantage},
      {"5 soundness on planted systems", soundness},
      {"6 oracle sandwich n <= 3", sandwich},
      {"7 sweep inclusions", sweep_invariants},
      {"8 subsquare count formula", count_formula},
      {"9 parallel consistency", parallel_consistency},
      {"10 CLI determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
