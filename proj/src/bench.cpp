#include "subsq/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>

#include "subsq/hull_oracle.hpp"

namespace subsq {

std::string to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::Shifted: return "shifted";
    case GeneratorKind::Centered: return "centered";
    case GeneratorKind::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

std::string to_string(const Budget& b) {
  return b.kind == Budget::Kind::AllSubsquares ? "all" : std::to_string(b.k);
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Simple: return "simple";
    case Mode::Sequential: return "sequential";
    case Mode::Parallel: return "parallel";
  }
  return "unknown";
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.m < cfg.n) throw Error(ErrorCode::ShapeMismatch, "need m >= n >= 1");
  if (!(cfg.radius >= 0)) throw Error(ErrorCode::InvalidBounds, "radius must be >= 0");
  if (cfg.trials < 1) throw Error(ErrorCode::ShapeMismatch, "trials must be >= 1");
  if (cfg.workers < 1) throw Error(ErrorCode::ShapeMismatch, "workers must be >= 1");
  if (cfg.redraws < 1) throw Error(ErrorCode::ShapeMismatch, "redraws must be >= 1");
  if (!(cfg.eps > 0)) throw Error(ErrorCode::InvalidBounds, "eps must be > 0");
  if (cfg.max_iter < 1) throw Error(ErrorCode::ShapeMismatch, "max_iter must be >= 1");
  const int ov = cfg.resolved_overlap();
  if (ov < 0 || ov >= cfg.n) throw Error(ErrorCode::InvalidOverlap, "overlap must lie in [0, n)");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GeneratedSystem generate_random_system(const ExperimentConfig& cfg, Rng& rng) {
  validate(cfg);
  const int m = cfg.m;
  const int n = cfg.n;
  const double r = cfg.radius;
  std::uniform_real_distribution<double> coef(-20.0, 20.0);
  std::uniform_real_distribution<double> shift(-r, r);
  const Ival spread(-r, r);

  GeneratedSystem g;
  g.a_point.resize(m, n);
  g.x_star.resize(n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) g.a_point(i, j) = coef(rng);
  }
  for (int j = 0; j < n; ++j) g.x_star[j] = coef(rng);

  // Shifts are always drawn so every generator kind consumes the same stream.
  auto draw_shift = [&]() {
    const double u = r > 0 ? shift(rng) : 0.0;
    return cfg.generator == GeneratorKind::Centered ? 0.0 : u;
  };

  g.a.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      g.a(i, j) = Ival(g.a_point(i, j)) + Ival(draw_shift()) + spread;
    }
  }

  g.b.resize(m);
  g.b_point.resize(m);
  std::vector<Ival> exact(static_cast<std::size_t>(m), Ival(0));
  std::vector<double> shifts(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& c = exact[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) c += Ival(g.a_point(i, j)) * Ival(g.x_star[j]);
    g.b_point[i] = midpoint(c);
    shifts[static_cast<std::size_t>(i)] = draw_shift();
  }
  if (cfg.generator == GeneratorKind::Inconsistent) {
    const double scale = g.b_point.cwiseAbs().maxCoeff() / 20.0;
    for (int i = 0; i < m; ++i) {
      g.b_point[i] += scale * coef(rng);
      exact[static_cast<std::size_t>(i)] = Ival(g.b_point[i]);
    }
  }
  for (int i = 0; i < m; ++i) {
    g.b[i] = exact[static_cast<std::size_t>(i)] + Ival(shifts[static_cast<std::size_t>(i)]) + spread;
  }
  return g;
}

std::optional<IVector> loose_start_box(const IMatrix& a, const IVector& b, double inflation, Rng& rng,
                                       int attempts) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const auto total = binomial(m, n);
  const int k = total < static_cast<std::uint64_t>(attempts) ? static_cast<int>(total) : attempts;
  for (const auto& rows : draw_subsquares(m, n, Budget::random(k), 5000, rng)) {
    try {
      const auto p = precondition(select_rows(a, rows), select_rows(b, rows));
      return inflate(initial_enclosure(p), inflation);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMidpoint && e.code() != ErrorCode::NotContracting) throw;
    }
  }
  return std::nullopt;
}

namespace {

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

SequentialOptions sequential_options(const ExperimentConfig& cfg) {
  SequentialOptions o;
  o.overlap = cfg.resolved_overlap();
  o.eps = cfg.eps;
  o.max_iter = cfg.max_iter;
  return o;
}

// Separate streams for building a trial's system and for the solver's choices.
Rng system_rng(const ExperimentConfig& cfg, int trial, int attempt = 0) {
  return Rng(derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)),
                         static_cast<std::uint64_t>(2 * attempt)));
}
Rng solver_rng(const ExperimentConfig& cfg, int trial) {
  return Rng(derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)), 1));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

Table1Row run_table1(const ExperimentConfig& cfg) {
  validate(cfg);
  Table1Row row;
  row.m = cfg.m;
  row.n = cfg.n;
  row.radius = cfg.radius;
  row.trials = cfg.trials;
  row.seed = cfg.seed;
  row.eps = cfg.eps;
  row.max_iter = cfg.max_iter;
  const Budget budget = cfg.budget.value_or(Budget::all());
  row.budget = to_string(budget);
  std::vector<double> v_ratios;
  SimpleOptions opts;
  opts.square = {cfg.eps, cfg.max_iter};
  ExperimentConfig gen_cfg = cfg;
  gen_cfg.generator = GeneratorKind::Shifted;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng gen = system_rng(cfg, t);
    Rng solve = solver_rng(cfg, t);
    const auto sys = generate_random_system(gen_cfg, gen);
    const auto out = simple_solve(sys.a, sys.b, budget, opts, solve);
    const auto hull = exact_hull(sys.a, sys.b, cfg.oracle_cap);
    if (out.status != Status::Enclosure || !hull.feasible || !hull.box.allFinite() ||
        !out.box.unaryExpr([](const Ival& x) { return x.is_finite(); }).all()) {
      ++row.failures;
      continue;
    }
    row.w_ratios.push_back(w_metric(out.box) / w_metric(hull.box));
    v_ratios.push_back(v_metric(out.box) / v_metric(hull.box));
  }
  row.av_w_ratio = mean(row.w_ratios);
  row.av_v_ratio = mean(v_ratios);
  row.max_w_ratio = row.w_ratios.empty() ? 0 : *std::max_element(row.w_ratios.begin(), row.w_ratios.end());
  return row;
}

Table3Row run_table3(const ExperimentConfig& cfg) {
  validate(cfg);
  Table3Row row;
  row.m = cfg.m;
  row.n = cfg.n;
  row.radius = cfg.radius;
  row.trials = cfg.trials;
  row.seed = cfg.seed;
  ExperimentConfig gen_cfg = cfg;
  gen_cfg.generator = GeneratorKind::Inconsistent;
  SimpleOptions opts;
  opts.square = {cfg.eps, cfg.max_iter};
  const Budget budget = cfg.budget.value_or(Budget::random(200));
  row.eps = cfg.eps;
  row.max_iter = cfg.max_iter;
  row.budget = to_string(budget);
  const bool verify = cfg.verify_unsolvable && cfg.n <= cfg.oracle_cap;
  std::vector<double> used;
  std::vector<double> inconclusive;
  constexpr int kMaxAttempts = 50;

  for (int t = 0; t < cfg.trials; ++t) {
    std::optional<GeneratedSystem> sys;
    for (int attempt = 0; attempt < kMaxAttempts && !sys; ++attempt) {
      Rng gen = system_rng(cfg, t, attempt);
      auto candidate = generate_random_system(gen_cfg, gen);
      if (verify && lp_solvable(candidate.a, candidate.b, cfg.oracle_cap)) {
        ++row.solvable_skipped;
        continue;
      }
      sys = std::move(candidate);
    }
    if (!sys) {
      ++row.undetected;
      continue;
    }
    Rng solve = solver_rng(cfg, t);
    const auto out = simple_solve(sys->a, sys->b, budget, opts, solve);
    inconclusive.push_back(out.inconclusive_subsquares);
    if (out.status == Status::ProvenUnsolvable) {
      ++row.detected;
      row.counts.push_back(out.subsquares_used);
      used.push_back(out.subsquares_used);
    } else {
      ++row.undetected;
    }
  }
  row.mean_used = mean(used);
  row.mean_inconclusive = mean(inconclusive);
  return row;
}

Table4Row run_table4(const ExperimentConfig& cfg) {
  validate(cfg);
  Table4Row row;
  row.m = cfg.m;
  row.n = cfg.n;
  row.overlap = cfg.resolved_overlap();
  row.radius = cfg.radius;
  row.trials = cfg.trials;
  row.redraws = cfg.redraws;
  row.seed = cfg.seed;
  row.generator = cfg.generator;
  row.mode = cfg.mode;
  row.workers = cfg.workers;
  row.inflation = cfg.inflation;
  row.eps = cfg.eps;
  row.max_iter = cfg.max_iter;
  const SequentialOptions opts = sequential_options(cfg);
  std::vector<double> per_system_mean;
  std::vector<double> per_system_best;
  double total_ms = 0;
  int solves = 0;

  for (int t = 0; t < cfg.trials; ++t) {
    Rng gen = system_rng(cfg, t);
    Rng solve = solver_rng(cfg, t);
    const auto sys = generate_random_system(cfg, gen);
    const auto x0 = loose_start_box(sys.a, sys.b, cfg.inflation, solve);
    if (!x0) {
      ++row.failures;
      continue;
    }
    const double w0 = w_metric(*x0);
    std::vector<double> ratios;
    for (int k = 0; k < cfg.redraws; ++k) {
      const auto start = std::chrono::steady_clock::now();
      const SolveOutcome out = cfg.mode == Mode::Parallel
                                   ? parallel_sequential_solve(sys.a, sys.b, x0, opts, solve, cfg.workers)
                                   : sequential_solve(sys.a, sys.b, x0, opts, solve);
      total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      ++solves;
      if (out.status != Status::Enclosure) {
        ++row.failures;
        continue;
      }
      ratios.push_back(w_metric(out.box) / w0);
    }
    if (ratios.empty()) continue;
    row.ratios.insert(row.ratios.end(), ratios.begin(), ratios.end());
    per_system_mean.push_back(mean(ratios));
    per_system_best.push_back(*std::min_element(ratios.begin(), ratios.end()));
  }
  row.av_ratio = mean(per_system_mean);
  row.av_best_ratio = mean(per_system_best);
  row.max_ratio = row.ratios.empty() ? 0 : *std::max_element(row.ratios.begin(), row.ratios.end());
  row.mean_ms = solves ? total_ms / solves : 0;
  return row;
}

Table4Row run_table5(const ExperimentConfig& cfg) {
  ExperimentConfig centered = cfg;
  centered.generator = GeneratorKind::Centered;
  return run_table4(centered);
}

std::string csv_header_table1() {
  return "table,m,n,radius,trials,seed,eps,max_iter,budget,av_w_ratio,av_v_ratio,max_w_ratio,failures";
}

std::string csv_row(const Table1Row& r) {
  return "table1," + std::to_string(r.m) + "," + std::to_string(r.n) + "," + fmt(r.radius) + "," +
         std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + sci(r.eps) + "," +
         std::to_string(r.max_iter) + "," + r.budget + "," + fmt(r.av_w_ratio) + "," +
         fmt(r.av_v_ratio) + "," + fmt(r.max_w_ratio) + "," + std::to_string(r.failures);
}

std::string csv_header_table3() {
  return "table,m,n,radius,trials,seed,eps,max_iter,budget,mean_subsquares,detected,undetected,solvable_skipped,"
         "mean_inconclusive";
}

std::string csv_row(const Table3Row& r) {
  return "table3," + std::to_string(r.m) + "," + std::to_string(r.n) + "," + fmt(r.radius) + "," +
         std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + sci(r.eps) + "," +
         std::to_string(r.max_iter) + "," + r.budget + "," + fmt(r.mean_used) + "," +
         std::to_string(r.detected) + "," + std::to_string(r.undetected) + "," +
         std::to_string(r.solvable_skipped) + "," + fmt(r.mean_inconclusive);
}

std::string csv_header_table4(bool timings) {
  std::string h = "table,generator,mode,workers,m,n,overlap,radius,trials,redraws,inflation,eps,max_iter,seed,av_ratio,av_best_ratio,max_ratio,failures";
  if (timings) h += ",mean_ms";
  return h;
}

std::string csv_row(const Table4Row& r, bool timings) {
  std::string s = std::string(r.generator == GeneratorKind::Centered ? "table5," : "table4,") +
                  to_string(r.generator) + "," + to_string(r.mode) + "," + std::to_string(r.workers) + "," +
                  std::to_string(r.m) + "," + std::to_string(r.n) + "," + std::to_string(r.overlap) + "," +
                  fmt(r.radius) + "," + std::to_string(r.trials) + "," + std::to_string(r.redraws) + "," +
                  fmt(r.inflation) + "," + sci(r.eps) + "," + std::to_string(r.max_iter) + "," +
                  std::to_string(r.seed) + "," + fmt(r.av_ratio) + "," +
                  fmt(r.av_best_ratio) + "," + fmt(r.max_ratio) + "," + std::to_string(r.failures);
  if (timings) s += "," + fmt(r.mean_ms);
  return s;
}

}  // namespace subsq
