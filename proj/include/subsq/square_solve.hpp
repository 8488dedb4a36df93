#ifndef SUBSQ_SQUARE_SOLVE_HPP
#define SUBSQ_SQUARE_SOLVE_HPP

#include <optional>
#include <string>
#include <vector>

#include "subsq/types.hpp"

namespace subsq {

/// A square system left-multiplied by the inverse of its midpoint matrix.
/// `rows` records which rows of the parent system it was built from.
struct PreconditionedSystem {
  IMatrix c;
  IVector d;
  std::vector<int> rows;
};

struct SquareOutcome {
  Status status = Status::Inconclusive;
  IVector box;
  int iterations = 0;
  std::string reason;  // set when Inconclusive
};

enum class Sweep { GaussSeidel, Jacobi };

/// Throws SingularMidpoint when mid(a) is numerically singular.
PreconditionedSystem precondition(const IMatrix& a, const IVector& b, std::vector<int> rows = {});

/// Box [-r, r]^n with r = |d|_inf / (1 - rho), rho = |I - C|_inf.
/// Throws NotContracting when rho >= 1.
IVector initial_enclosure(const PreconditionedSystem& p);

/// One Gauss-Seidel component update of row i against the current box,
/// intersected with x[i]. May return the empty interval.
Ival gs_step(const PreconditionedSystem& p, const IVector& x, int i);

IVector gs_sweep(const PreconditionedSystem& p, const IVector& x);
IVector jacobi_sweep(const PreconditionedSystem& p, const IVector& x);
IVector sweep(const PreconditionedSystem& p, const IVector& x, Sweep kind);

/// True when every endpoint moved by less than eps between the two boxes.
bool has_converged(const IVector& previous, const IVector& current, double eps);

struct SquareOptions {
  double eps = 1e-6;
  int max_iter = 100;
};

/// Precondition, seed with the norm bound (intersected with `x0` when one is
/// given), then Gauss-Seidel sweeps until the endpoint criterion holds or the
/// iteration cap is reached. Numerical failures become Inconclusive.
SquareOutcome solve_square(const IMatrix& a, const IVector& b, const SquareOptions& opts = {},
                           const std::optional<IVector>& x0 = std::nullopt);

}  // namespace subsq

#endif  // SUBSQ_SQUARE_SOLVE_HPP
