#ifndef SUBSQ_INTERVAL_MATRIX_HPP
#define SUBSQ_INTERVAL_MATRIX_HPP

#include <Eigen/Core>
#include <Eigen/LU>

#include <cstddef>
#include <string>

#include "subsq/errors.hpp"
#include "subsq/interval.hpp"

namespace Eigen {

template <typename Scalar>
struct NumTraits<subsq::Interval<Scalar>> : NumTraits<Scalar> {
  using Real = subsq::Interval<Scalar>;
  using NonInteger = subsq::Interval<Scalar>;
  using Nested = subsq::Interval<Scalar>;
  using Literal = Scalar;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 8
  };
};

}  // namespace Eigen

namespace subsq {

template <typename Scalar>
using IntervalMatrix = Eigen::Matrix<Interval<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using IntervalVector = Eigen::Matrix<Interval<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using PointVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A vector is empty as soon as one of its components is.
template <typename Scalar>
bool is_empty(const IntervalVector<Scalar>& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i].is_empty()) return true;
  }
  return false;
}

template <typename Scalar>
IntervalVector<Scalar> empty_vector(Eigen::Index n) {
  return IntervalVector<Scalar>::Constant(n, Interval<Scalar>::empty());
}

template <typename Scalar>
IntervalVector<Scalar> entire_vector(Eigen::Index n) {
  return IntervalVector<Scalar>::Constant(n, Interval<Scalar>::entire());
}

template <typename Scalar>
IntervalVector<Scalar> point_box(const PointVector<Scalar>& x) {
  return x.unaryExpr([](Scalar v) { return Interval<Scalar>(v); });
}

template <typename Derived>
auto midpoint(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar::scalar_type;
  return a.unaryExpr([](const Interval<Scalar>& x) { return midpoint(x); }).eval();
}

template <typename Derived>
auto radius(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar::scalar_type;
  return a.unaryExpr([](const Interval<Scalar>& x) { return radius(x); }).eval();
}

/// W(u): sum of component widths.
template <typename Scalar>
Scalar w_metric(const IntervalVector<Scalar>& u) {
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += width(u[i]);
  return sum;
}

/// V(u): product of component widths.
template <typename Scalar>
Scalar v_metric(const IntervalVector<Scalar>& u) {
  Scalar prod = 1;
  for (Eigen::Index i = 0; i < u.size(); ++i) prod *= width(u[i]);
  return prod;
}

template <typename Scalar>
IntervalVector<Scalar> intersect(const IntervalVector<Scalar>& u, const IntervalVector<Scalar>& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::ShapeMismatch, "intersect of vectors");
  IntervalVector<Scalar> r(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    r[i] = intersect(u[i], v[i]);
    if (r[i].is_empty()) return empty_vector<Scalar>(u.size());
  }
  return r;
}

/// Componentwise convex union.
template <typename Scalar>
IntervalVector<Scalar> hull(const IntervalVector<Scalar>& u, const IntervalVector<Scalar>& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::ShapeMismatch, "hull of vectors");
  if (is_empty(u)) return v;
  if (is_empty(v)) return u;
  IntervalVector<Scalar> r(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) r[i] = hull(u[i], v[i]);
  return r;
}

template <typename Scalar>
bool subset_of(const IntervalVector<Scalar>& u, const IntervalVector<Scalar>& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::ShapeMismatch, "subset_of on vectors");
  if (is_empty(u)) return true;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!u[i].subset_of(v[i])) return false;
  }
  return true;
}

template <typename Scalar>
bool contains(const IntervalVector<Scalar>& u, const PointVector<Scalar>& x) {
  if (u.size() != x.size()) throw Error(ErrorCode::ShapeMismatch, "contains on vectors");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!u[i].contains(x[i])) return false;
  }
  return true;
}

template <typename Scalar>
IntervalVector<Scalar> inflate(const IntervalVector<Scalar>& u, Scalar factor) {
  return u.unaryExpr([factor](const Interval<Scalar>& x) { return inflate(x, factor); });
}

/// Interval matrix times interval vector; every dot product is accumulated
/// left to right with outward rounding.
template <typename Scalar>
IntervalVector<Scalar> imat_vec(const IntervalMatrix<Scalar>& a, const IntervalVector<Scalar>& x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::ShapeMismatch, "imat_vec: cols != size");
  IntervalVector<Scalar> r(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Interval<Scalar> acc(0);
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    r[i] = acc;
  }
  return r;
}

template <typename Scalar>
IntervalMatrix<Scalar> pmat_imat(const PointMatrix<Scalar>& m, const IntervalMatrix<Scalar>& a) {
  if (m.cols() != a.rows()) throw Error(ErrorCode::ShapeMismatch, "pmat_imat: cols != rows");
  IntervalMatrix<Scalar> r(m.rows(), a.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      Interval<Scalar> acc(0);
      for (Eigen::Index k = 0; k < m.cols(); ++k) acc += Interval<Scalar>(m(i, k)) * a(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

template <typename Scalar>
IntervalVector<Scalar> pmat_ivec(const PointMatrix<Scalar>& m, const IntervalVector<Scalar>& b) {
  if (m.cols() != b.size()) throw Error(ErrorCode::ShapeMismatch, "pmat_ivec: cols != size");
  IntervalVector<Scalar> r(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Interval<Scalar> acc(0);
    for (Eigen::Index k = 0; k < m.cols(); ++k) acc += Interval<Scalar>(m(i, k)) * b[k];
    r[i] = acc;
  }
  return r;
}

/// Approximate inverse by LU with partial pivoting. Only used as a
/// preconditioner, so the result is not verified. Throws SingularMatrix when
/// a pivot falls below `rel_threshold` times the largest absolute row sum.
template <typename Scalar>
PointMatrix<Scalar> point_inverse(const PointMatrix<Scalar>& m, Scalar rel_threshold = Scalar(1e-12)) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "point_inverse of a non-square matrix");
  if (!m.allFinite()) throw Error(ErrorCode::SingularMatrix, "non-finite entries");
  const Scalar scale = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (m.size() == 0 || scale == 0) throw Error(ErrorCode::SingularMatrix, "zero matrix");
  Eigen::PartialPivLU<PointMatrix<Scalar>> lu(m);
  const Scalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= rel_threshold * scale)) {
    throw Error(ErrorCode::SingularMatrix,
                "pivot " + std::to_string(min_pivot) + " below threshold");
  }
  return lu.inverse();
}

}  // namespace subsq

#endif  // SUBSQ_INTERVAL_MATRIX_HPP
