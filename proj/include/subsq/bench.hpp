#ifndef SUBSQ_BENCH_HPP
#define SUBSQ_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsq/subsquares.hpp"
#include "subsq/types.hpp"

namespace subsq {

/// How the interval system is built around the random point system.
///  - Shifted: every coefficient sits at a random position inside its interval.
///  - Centered: intervals are centred on the point system (solvable midpoint).
///  - Inconsistent: as Shifted, but every point right-hand side entry is moved
///    by up to max|A' x*| so the system is (almost surely) unsolvable.
enum class GeneratorKind { Shifted, Centered, Inconsistent };
enum class Mode { Simple, Sequential, Parallel };

struct ExperimentConfig {
  int m = 15;
  int n = 10;
  double radius = 0.01;
  int overlap = -1;  // negative: default_overlap(n)
  double eps = 1e-6;
  int max_iter = 100;
  int trials = 20;
  std::uint64_t seed = 1;
  Mode mode = Mode::Sequential;
  std::optional<Budget> budget;
  GeneratorKind generator = GeneratorKind::Shifted;
  int redraws = 10;         // subsquare selections per system (shaving tables)
  double inflation = 4.0;   // width factor of the loose starting box
  int workers = 1;
  bool timings = false;
  bool verify_unsolvable = true;  // LP-filter generated systems when n <= oracle_cap
  int oracle_cap = 10;

  int resolved_overlap() const { return overlap < 0 ? default_overlap(n) : overlap; }
};

/// Throws Error(ShapeMismatch / InvalidOverlap) on inconsistent settings.
void validate(const ExperimentConfig& cfg);

struct GeneratedSystem {
  IMatrix a;
  IVector b;
  Vector x_star;   // planted point solution (not a solution for Inconsistent)
  Matrix a_point;  // A' in A
  Vector b_point;  // b' in b; A' x* up to rounding except for Inconsistent
};

/// Coefficients of A' and x* uniform on [-20, 20], b' = A' x*. Each point
/// coefficient c becomes [c + u - r, c + u + r] with u uniform on [-r, r]
/// (u = 0 for Centered). The right-hand side intervals are built around an
/// outward enclosure of A' x*, so x* lies in the solution set exactly.
GeneratedSystem generate_random_system(const ExperimentConfig& cfg, Rng& rng);

/// Independent per-trial seeds from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Norm-bound box of the first of up to `attempts` random distinct subsquares
/// that admits one, widened by `inflation`. Stands in for an externally
/// supplied enclosure.
std::optional<IVector> loose_start_box(const IMatrix& a, const IVector& b, double inflation, Rng& rng,
                                       int attempts = 200);

struct Table1Row {
  int m = 0, n = 0;
  double radius = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double eps = 0;
  int max_iter = 0;
  std::string budget;
  double av_w_ratio = 0;
  double av_v_ratio = 0;
  double max_w_ratio = 0;
  int failures = 0;
  std::vector<double> w_ratios;
};

struct Table3Row {
  int m = 0, n = 0;
  double radius = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double eps = 0;
  int max_iter = 0;
  std::string budget;
  double mean_used = 0;  // over detected trials, skipped subsquares included
  int detected = 0;
  int undetected = 0;
  int solvable_skipped = 0;
  double mean_inconclusive = 0;
  std::vector<int> counts;
};

struct Table4Row {
  int m = 0, n = 0, overlap = 0;
  double radius = 0;
  int trials = 0;
  int redraws = 0;
  std::uint64_t seed = 0;
  GeneratorKind generator = GeneratorKind::Shifted;
  Mode mode = Mode::Sequential;
  int workers = 1;
  double inflation = 0;
  double eps = 0;
  int max_iter = 0;
  double av_ratio = 0;
  double av_best_ratio = 0;
  double max_ratio = 0;
  int failures = 0;  // systems without a starting box plus inconclusive redraws
  double mean_ms = 0;
  std::vector<double> ratios;  // one per (system, redraw)
};

/// Simple method over all subsquares versus the LP hull (W and V ratios).
Table1Row run_table1(const ExperimentConfig& cfg);

/// Subsquares consumed by the simple method until an empty intersection,
/// on Inconsistent systems.
Table3Row run_table3(const ExperimentConfig& cfg);

/// Sequential shaving of a loose starting box: W(out) / W(X0), averaged and
/// best over subsquare redraws. Uses cfg.generator as given.
Table4Row run_table4(const ExperimentConfig& cfg);

/// run_table4 with the centred generator.
Table4Row run_table5(const ExperimentConfig& cfg);

std::string csv_header_table1();
std::string csv_row(const Table1Row& r);
std::string csv_header_table3();
std::string csv_row(const Table3Row& r);
std::string csv_header_table4(bool timings);
std::string csv_row(const Table4Row& r, bool timings);

std::string to_string(GeneratorKind g);
std::string to_string(Mode m);
std::string to_string(const Budget& b);

}  // namespace subsq

#endif  // SUBSQ_BENCH_HPP
