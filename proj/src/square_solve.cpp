#include "subsq/square_solve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace subsq {

PreconditionedSystem precondition(const IMatrix& a, const IVector& b, std::vector<int> rows) {
  if (a.rows() != a.cols() || b.size() != a.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "precondition expects a square system");
  }
  Matrix inv;
  try {
    inv = point_inverse<double>(midpoint(a));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularMidpoint, e.what());
  }
  return PreconditionedSystem{pmat_imat(inv, a), pmat_ivec(inv, b), std::move(rows)};
}

IVector initial_enclosure(const PreconditionedSystem& p) {
  const Eigen::Index n = p.c.rows();
  double rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Ival r = Ival(i == j ? 1.0 : 0.0) - p.c(i, j);
      row = rounding::add_up(row, magnitude(r));
    }
    rho = std::max(rho, row);
  }
  if (!(rho < 1)) {
    throw Error(ErrorCode::NotContracting, "|I - C| = " + std::to_string(rho) + " >= 1");
  }
  double norm_d = 0;
  for (Eigen::Index i = 0; i < n; ++i) norm_d = std::max(norm_d, magnitude(p.d[i]));
  const double r = rounding::div_up(norm_d, rounding::sub_down(1.0, rho));
  if (!std::isfinite(r)) throw Error(ErrorCode::NotContracting, "initial bound overflowed");
  return IVector::Constant(n, Ival(-r, r));
}

Ival gs_step(const PreconditionedSystem& p, const IVector& x, int i) {
  const Ival& diag = p.c(i, i);
  if (diag.contains_zero()) {
    throw Error(ErrorCode::DiagonalContainsZero, "C(" + std::to_string(i) + "," + std::to_string(i) + ")");
  }
  if (x[i].is_empty()) return Ival::empty();
  Ival acc = p.d[i];
  for (Eigen::Index j = 0; j < p.c.cols(); ++j) {
    if (j != i) acc -= p.c(i, j) * x[j];
  }
  return intersect(acc / diag, x[i]);
}

IVector gs_sweep(const PreconditionedSystem& p, const IVector& x) {
  if (is_empty(x)) return x;
  IVector next = x;
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    next[i] = gs_step(p, next, static_cast<int>(i));
    if (next[i].is_empty()) return empty_vector<double>(x.size());
  }
  return next;
}

IVector jacobi_sweep(const PreconditionedSystem& p, const IVector& x) {
  if (is_empty(x)) return x;
  IVector next(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    next[i] = gs_step(p, x, static_cast<int>(i));
    if (next[i].is_empty()) return empty_vector<double>(x.size());
  }
  return next;
}

IVector sweep(const PreconditionedSystem& p, const IVector& x, Sweep kind) {
  return kind == Sweep::GaussSeidel ? gs_sweep(p, x) : jacobi_sweep(p, x);
}

namespace {

bool endpoint_close(double a, double b, double eps) {
  if (a == b) return true;  // covers equal infinities
  return std::abs(a - b) < eps;
}

}  // namespace

bool has_converged(const IVector& previous, const IVector& current, double eps) {
  if (is_empty(previous) || is_empty(current)) return is_empty(previous) == is_empty(current);
  for (Eigen::Index i = 0; i < current.size(); ++i) {
    if (!endpoint_close(previous[i].lo(), current[i].lo(), eps) ||
        !endpoint_close(previous[i].hi(), current[i].hi(), eps)) {
      return false;
    }
  }
  return true;
}

SquareOutcome solve_square(const IMatrix& a, const IVector& b, const SquareOptions& opts,
                           const std::optional<IVector>& x0) {
  SquareOutcome out;
  out.box = entire_vector<double>(a.cols());

  PreconditionedSystem p;
  try {
    p = precondition(a, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMidpoint) throw;
    out.reason = e.what();
    return out;
  }

  IVector x;
  try {
    x = initial_enclosure(p);
    if (x0) x = intersect(x, *x0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotContracting) throw;
    if (!x0) {
      out.reason = e.what();
      return out;
    }
    x = *x0;
  }

  try {
    while (!is_empty(x) && out.iterations < opts.max_iter) {
      IVector next = gs_sweep(p, x);
      ++out.iterations;
      const bool done = has_converged(x, next, opts.eps);
      x = std::move(next);
      if (done) break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DiagonalContainsZero) throw;
    out.reason = e.what();
    return out;
  }

  out.status = is_empty(x) ? Status::ProvenUnsolvable : Status::Enclosure;
  out.box = std::move(x);
  return out;
}

}  // namespace subsq
