#ifndef SUBSQ_SUBSQUARES_HPP
#define SUBSQ_SUBSQUARES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsq/square_solve.hpp"
#include "subsq/types.hpp"

namespace subsq {

/// Row-index sets (0-based) of the chosen square subsystems.
struct SubsquareSelection {
  std::vector<std::vector<int>> sets;
  int overlap = 0;
};

struct SolveOutcome {
  Status status = Status::Inconclusive;
  IVector box;
  int subsquares_used = 0;          // subsquares solved or swept
  int iterations = 0;               // rounds for the sequential solvers
  int inconclusive_subsquares = 0;  // skipped or dropped subsquares
  std::string reason;
};

/// 1 + ceil((m - n) / (n - overlap)).
int count_subsquares(int m, int n, int overlap);

/// max(1, n/3), clamped below n.
int default_overlap(int n);

/// Covers rows 0..m-1 with square row sets: the first set is random, each
/// following set reuses `overlap` covered rows and takes n - overlap waiting
/// rows, and the last one takes every remaining waiting row padded with
/// covered rows.
SubsquareSelection choose_subsquares(int m, int n, int overlap, Rng& rng);

/// Saturates at UINT64_MAX.
std::uint64_t binomial(int m, int n);

IMatrix select_rows(const IMatrix& a, const std::vector<int>& rows);
IVector select_rows(const IVector& b, const std::vector<int>& rows);

struct Budget {
  enum class Kind { AllSubsquares, Random };
  Kind kind = Kind::AllSubsquares;
  int k = 0;

  static Budget all() { return {Kind::AllSubsquares, 0}; }
  static Budget random(int k) { return {Kind::Random, k}; }
};

/// Distinct row sets (sorted, 0-based) in random order: all of them, or k
/// random ones. AllSubsquares throws BudgetExceeded when C(m, n) > cap.
std::vector<std::vector<int>> draw_subsquares(int m, int n, const Budget& budget, std::uint64_t cap,
                                              Rng& rng);

/// AllSubsquares when C(m, n) <= cap, otherwise Random(3 * count_subsquares).
Budget default_budget(int m, int n, int overlap, std::uint64_t cap = 5000);

struct SimpleOptions {
  SquareOptions square;
  std::uint64_t all_cap = 5000;
  /// Starting box; the whole space when absent.
  std::optional<IVector> x0;
};

/// Solves randomly ordered, distinct subsquares independently and intersects
/// their enclosures. Stops with ProvenUnsolvable at the first empty
/// intersection. Inconclusive subsquares are skipped.
SolveOutcome simple_solve(const IMatrix& a, const IVector& b, const Budget& budget,
                          const SimpleOptions& opts, Rng& rng);

struct SequentialOptions {
  int overlap = 1;
  double eps = 1e-6;
  int max_iter = 100;
  Sweep sweep = Sweep::GaussSeidel;
};

/// Rounds of one sweep per chosen subsquare against a single shared box,
/// until a full round moves no endpoint by eps or max_iter rounds elapse.
/// Without `x0` the box is seeded from the first subsquare whose norm bound
/// succeeds.
SolveOutcome sequential_solve(const IMatrix& a, const IVector& b, const std::optional<IVector>& x0,
                              const SequentialOptions& opts, Rng& rng);

/// Jacobi rounds with the subsquares spread over `workers` threads. The box is
/// shared; each component is only ever replaced by a subset of its current
/// value (compare-and-swap). With one worker the result is bit-identical to
/// sequential_solve using Jacobi sweeps and the same seed.
SolveOutcome parallel_sequential_solve(const IMatrix& a, const IVector& b,
                                       const std::optional<IVector>& x0,
                                       const SequentialOptions& opts, Rng& rng, int workers);

}  // namespace subsq

#endif  // SUBSQ_SUBSQUARES_HPP
