#ifndef SUBSQ_HULL_ORACLE_HPP
#define SUBSQ_HULL_ORACLE_HPP

#include <optional>

#include "subsq/types.hpp"

namespace subsq {

/// maximize objective . x  s.t.  constraints * x <= rhs,  lower <= x <= upper.
/// Bounds may be infinite.
struct LpProblem {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower;
  Vector upper;
};

struct LpResult {
  enum class Kind { Optimal, Infeasible, Unbounded };
  Kind kind = Kind::Infeasible;
  double value = 0;
  Vector point;
};

struct SimplexOptions {
  double tol = 1e-9;
  int dimension_cap = 2000;  // variables + constraints after standardization
};

/// Dense two-phase tableau simplex with Bland's rule. Optimal results are
/// rechecked for primal feasibility and reduced-cost signs before returning;
/// a failed recheck throws NumericalFailure.
LpResult simplex_solve(const LpProblem& problem, const SimplexOptions& opts = {});

/// Oettli-Prager test: 0 in A x - b for every row, with A x - b enclosed in
/// outward-rounded arithmetic. Never rejects a true member of the united
/// solution set.
bool op_membership(const IMatrix& a, const IVector& b, const Vector& x);

struct HullResult {
  bool feasible = false;
  IVector box;  // empty when infeasible
  int orthants_visited = 0;
};

/// Interval hull of the united solution set. Each orthant linearizes the
/// Oettli-Prager inequalities; every coordinate is minimized and maximized by
/// LP and the orthant boxes are joined. Throws DimensionCap when n > n_cap.
HullResult exact_hull(const IMatrix& a, const IVector& b, int n_cap = 10,
                      const SimplexOptions& opts = {});

/// Whether the united solution set is non-empty: feasibility of the orthant
/// LPs only, stopping at the first feasible orthant.
bool lp_solvable(const IMatrix& a, const IVector& b, int n_cap = 10, const SimplexOptions& opts = {});

/// Hull of sampled members of the solution set: vertex systems solved on
/// random row subsets or in the least-squares sense, filtered by
/// op_membership. nullopt when no sample was a member.
std::optional<IVector> inner_hull_sampling(const IMatrix& a, const IVector& b, int samples, Rng& rng);

}  // namespace subsq

#endif  // SUBSQ_HULL_ORACLE_HPP
