#include "subsq/hull_oracle.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace subsq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x_j = offset + sign * y[col] - y[col_neg]  (col_neg < 0 when unused)
struct VarMap {
  double offset = 0;
  int col = 0;
  double sign = 1;
  int col_neg = -1;
};

// Dense tableau over y >= 0 for rows  a y <= r.  Columns are laid out as
// [structural | slack | artificial | rhs]; the last row holds reduced costs.
class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& r, double tol)
      : rows_(static_cast<int>(a.rows())), ny_(static_cast<int>(a.cols())), tol_(tol) {
    for (int i = 0; i < rows_; ++i) {
      if (r[i] < 0) ++nart_;
    }
    cols_ = ny_ + rows_ + nart_;
    t_ = Matrix::Zero(rows_ + 1, cols_ + 1);
    full_ = Matrix::Zero(rows_, cols_);
    basis_.resize(static_cast<std::size_t>(rows_));
    int art = 0;
    for (int i = 0; i < rows_; ++i) {
      const double s = r[i] < 0 ? -1.0 : 1.0;
      for (int j = 0; j < ny_; ++j) full_(i, j) = s * a(i, j);
      full_(i, ny_ + i) = s;
      if (r[i] < 0) {
        const int c = ny_ + rows_ + art++;
        full_(i, c) = 1;
        basis_[static_cast<std::size_t>(i)] = c;
      } else {
        basis_[static_cast<std::size_t>(i)] = ny_ + i;
      }
      t_.row(i).head(cols_) = full_.row(i);
      t_(i, cols_) = s * r[i];
    }
    if (rows_ > 0) scale_ = 1.0 + r.cwiseAbs().maxCoeff();
  }

  bool phase_one() {
    if (nart_ == 0) return true;
    Vector cost = Vector::Zero(cols_);
    cost.tail(nart_).setOnes();
    run(cost);
    double infeasibility = 0;
    for (int i = 0; i < rows_; ++i) {
      if (is_artificial(basis_[static_cast<std::size_t>(i)])) infeasibility += t_(i, cols_);
    }
    if (infeasibility > tol_ * scale_) return false;
    // Pivot remaining (zero-valued) artificials out where the row allows it.
    for (int i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      for (int j = 0; j < ny_ + rows_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
    return true;
  }

  /// Minimizes cost . y from the current feasible basis. False if unbounded.
  bool minimize(const Vector& cost_y) {
    Vector cost = Vector::Zero(cols_);
    cost.head(ny_) = cost_y;
    return run(cost);
  }

  Vector y() const {
    Vector y = Vector::Zero(ny_);
    for (int i = 0; i < rows_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < ny_) y[b] = std::max(0.0, t_(i, cols_));
    }
    return y;
  }

  /// Recomputes the duals from the original columns of the current basis and
  /// checks that no admissible column has a negative reduced cost.
  bool reduced_costs_ok(const Vector& cost_y) const {
    if (rows_ == 0) return (cost_y.array() >= -tol_).all();
    Matrix basis(rows_, rows_);
    Vector cb(rows_);
    for (int i = 0; i < rows_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      basis.col(i) = full_.col(b);
      cb[i] = b < ny_ ? cost_y[b] : 0.0;
    }
    const Vector duals = basis.transpose().partialPivLu().solve(cb);
    const double slack = 1e-7 * (1.0 + cost_y.cwiseAbs().maxCoeff()) * (1.0 + duals.cwiseAbs().maxCoeff());
    for (int j = 0; j < ny_ + rows_; ++j) {
      const double c = j < ny_ ? cost_y[j] : 0.0;
      if (c - duals.dot(full_.col(j)) < -slack) return false;
    }
    return true;
  }

 private:
  bool is_artificial(int col) const { return col >= ny_ + rows_; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      t_.row(i) -= t_(i, c) * t_.row(r);
    }
    for (int i = 0; i < rows_; ++i) {
      if (std::abs(t_(i, cols_)) < tol_ * 1e-3) t_(i, cols_) = 0;
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Bland's rule: lowest-index improving column, lowest-index leaving basic
  // variable among ratio ties. Artificial columns never enter.
  bool run(const Vector& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cols_) = cost.transpose();
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0) t_.row(rows_) -= cb * t_.row(i);
    }
    const int max_pivots = 50 * (rows_ + cols_ + 10);
    for (int it = 0; it < max_pivots; ++it) {
      int enter = -1;
      for (int j = 0; j < ny_ + rows_; ++j) {
        if (t_(rows_, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < rows_; ++i) {
        const double coef = t_(i, enter);
        if (coef <= tol_) continue;
        const double ratio = t_(i, cols_) / coef;
        const bool tie = leave >= 0 && std::abs(ratio - best) <= tol_ * (1.0 + std::abs(best));
        if ((!tie && ratio < best) ||
            (tie && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          if (!tie) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::NumericalFailure, "simplex pivot limit reached");
  }

  int rows_;
  int ny_;
  int nart_ = 0;
  int cols_ = 0;
  double tol_;
  double scale_ = 1;
  Matrix t_;
  Matrix full_;
  std::vector<int> basis_;
};

// An LP in the original variables, standardized once; phase one runs on
// construction so several objectives can share it.
class LpSession {
 public:
  LpSession(const LpProblem& p, const SimplexOptions& opts) : problem_(p), opts_(opts) {
    const Eigen::Index n = p.constraints.cols();
    if (p.rhs.size() != p.constraints.rows() || p.lower.size() != n || p.upper.size() != n ||
        p.objective.size() != n) {
      throw Error(ErrorCode::ShapeMismatch, "LP data sizes disagree");
    }
    if (!p.constraints.allFinite() || !p.rhs.allFinite() || !p.objective.allFinite()) {
      throw Error(ErrorCode::NumericalFailure, "LP data must be finite");
    }
    int ny = 0;
    std::vector<std::pair<int, double>> boxed;  // (y column, u - l)
    maps_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      VarMap& v = maps_[static_cast<std::size_t>(j)];
      const double lo = p.lower[j];
      const double hi = p.upper[j];
      if (lo > hi) throw Error(ErrorCode::InvalidBounds, "variable bounds cross");
      if (std::isfinite(lo)) {
        v = {lo, ny++, 1.0, -1};
        if (std::isfinite(hi)) boxed.emplace_back(v.col, hi - lo);
      } else if (std::isfinite(hi)) {
        v = {hi, ny++, -1.0, -1};
      } else {
        v = {0.0, ny, 1.0, ny + 1};
        ny += 2;
      }
    }
    const auto mr = static_cast<int>(p.constraints.rows() + static_cast<Eigen::Index>(boxed.size()));
    if (ny + mr > opts.dimension_cap) {
      throw Error(ErrorCode::DimensionCap, std::to_string(ny + mr) + " exceeds " +
                                               std::to_string(opts.dimension_cap));
    }
    map_ = Matrix::Zero(n, ny);
    offset_ = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const VarMap& v = maps_[static_cast<std::size_t>(j)];
      offset_[j] = v.offset;
      map_(j, v.col) = v.sign;
      if (v.col_neg >= 0) map_(j, v.col_neg) = -1.0;
    }
    Matrix a = Matrix::Zero(mr, ny);
    Vector r(mr);
    const Eigen::Index m0 = p.constraints.rows();
    a.topRows(m0) = p.constraints * map_;
    r.head(m0) = p.rhs - p.constraints * offset_;
    for (std::size_t k = 0; k < boxed.size(); ++k) {
      a(m0 + static_cast<Eigen::Index>(k), boxed[k].first) = 1.0;
      r[m0 + static_cast<Eigen::Index>(k)] = boxed[k].second;
    }
    tableau_.emplace(a, r, opts.tol);
    feasible_ = tableau_->phase_one();
  }

  bool feasible() const { return feasible_; }

  LpResult maximize(const Vector& objective) {
    LpResult res;
    if (!feasible_) return res;
    const Vector cost_y = -(map_.transpose() * objective);
    if (!tableau_->minimize(cost_y)) {
      res.kind = LpResult::Kind::Unbounded;
      res.value = kInf;
      return res;
    }
    res.kind = LpResult::Kind::Optimal;
    res.point = offset_ + map_ * tableau_->y();
    res.value = objective.dot(res.point);
    verify(res.point, cost_y);
    return res;
  }

 private:
  void verify(const Vector& x, const Vector& cost_y) const {
    const double tol = 1e-7;
    const Vector lhs = problem_.constraints * x;
    for (Eigen::Index i = 0; i < lhs.size(); ++i) {
      const double scale = 1.0 + std::abs(problem_.rhs[i]) +
                           problem_.constraints.row(i).cwiseAbs().dot(x.cwiseAbs());
      if (lhs[i] > problem_.rhs[i] + tol * scale) {
        throw Error(ErrorCode::NumericalFailure, "simplex optimum violates a constraint");
      }
    }
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double scale = tol * (1.0 + std::abs(x[j]));
      if (x[j] < problem_.lower[j] - scale || x[j] > problem_.upper[j] + scale) {
        throw Error(ErrorCode::NumericalFailure, "simplex optimum violates a bound");
      }
    }
    if (!tableau_->reduced_costs_ok(cost_y)) {
      throw Error(ErrorCode::NumericalFailure, "simplex optimum has a negative reduced cost");
    }
  }

  const LpProblem& problem_;
  SimplexOptions opts_;
  std::vector<VarMap> maps_;
  Matrix map_;
  Vector offset_;
  std::optional<Tableau> tableau_;
  bool feasible_ = false;
};

}  // namespace

LpResult simplex_solve(const LpProblem& problem, const SimplexOptions& opts) {
  LpSession session(problem, opts);
  return session.maximize(problem.objective);
}

bool op_membership(const IMatrix& a, const IVector& b, const Vector& x) {
  if (a.rows() != b.size() || a.cols() != x.size()) {
    throw Error(ErrorCode::ShapeMismatch, "op_membership shapes");
  }
  const IVector residual = imat_vec<double>(a, point_box<double>(x));
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (!(residual[i] - b[i]).contains_zero()) return false;
  }
  return true;
}

namespace {

// Orthant given by the sign bits of `mask`. On it |x| = diag(s) x, so the
// Oettli-Prager inequalities become  A_s x <= b.hi  and  A_t x >= b.lo,  where
// A_s / A_t pick the lower / upper (or upper / lower) bound of each entry by
// the sign of its column.
void set_orthant(LpProblem& lp, const IMatrix& a, unsigned mask) {
  const auto m = static_cast<int>(a.rows());
  const auto n = static_cast<int>(a.cols());
  for (int j = 0; j < n; ++j) {
    const bool positive = (mask >> j) & 1u;
    lp.lower[j] = positive ? 0.0 : -kInf;
    lp.upper[j] = positive ? kInf : 0.0;
    for (int i = 0; i < m; ++i) {
      lp.constraints(i, j) = positive ? a(i, j).lo() : a(i, j).hi();
      lp.constraints(m + i, j) = -(positive ? a(i, j).hi() : a(i, j).lo());
    }
  }
}

LpProblem orthant_template(const IMatrix& a, const IVector& b, int n_cap) {
  const auto n = static_cast<int>(a.cols());
  const auto m = static_cast<int>(a.rows());
  if (b.size() != m) throw Error(ErrorCode::ShapeMismatch, "hull oracle shapes");
  if (n > n_cap) {
    throw Error(ErrorCode::DimensionCap, "n = " + std::to_string(n) + " exceeds " + std::to_string(n_cap));
  }
  LpProblem lp;
  lp.constraints.resize(2 * m, n);
  lp.rhs.resize(2 * m);
  lp.lower.resize(n);
  lp.upper.resize(n);
  lp.objective = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    lp.rhs[i] = b[i].hi();
    lp.rhs[m + i] = -b[i].lo();
  }
  return lp;
}

}  // namespace

HullResult exact_hull(const IMatrix& a, const IVector& b, int n_cap, const SimplexOptions& opts) {
  LpProblem lp = orthant_template(a, b, n_cap);
  const auto n = static_cast<int>(a.cols());
  HullResult out;
  out.box = empty_vector<double>(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    ++out.orthants_visited;
    set_orthant(lp, a, mask);
    LpSession session(lp, opts);
    if (!session.feasible()) continue;
    IVector box(n);
    for (int j = 0; j < n; ++j) {
      Vector e = Vector::Zero(n);
      e[j] = 1.0;
      const LpResult hi = session.maximize(e);
      const LpResult lo = session.maximize(-e);
      const double upper = hi.kind == LpResult::Kind::Unbounded ? kInf : hi.value;
      const double lower = lo.kind == LpResult::Kind::Unbounded ? -kInf : -lo.value;
      box[j] = Ival(std::min(lower, upper), std::max(lower, upper));
    }
    out.box = hull(out.box, box);
    out.feasible = true;
  }
  return out;
}

bool lp_solvable(const IMatrix& a, const IVector& b, int n_cap, const SimplexOptions& opts) {
  LpProblem lp = orthant_template(a, b, n_cap);
  for (unsigned mask = 0; mask < (1u << a.cols()); ++mask) {
    set_orthant(lp, a, mask);
    if (LpSession(lp, opts).feasible()) return true;
  }
  return false;
}

std::optional<IVector> inner_hull_sampling(const IMatrix& a, const IVector& b, int samples, Rng& rng) {
  const auto m = static_cast<int>(a.rows());
  const auto n = static_cast<int>(a.cols());
  std::bernoulli_distribution coin(0.5);
  std::vector<int> rows(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;

  std::optional<IVector> box;
  Matrix av(m, n);
  Vector bv(m);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) av(i, j) = coin(rng) ? a(i, j).hi() : a(i, j).lo();
      bv[i] = coin(rng) ? b[i].hi() : b[i].lo();
    }
    Vector x;
    if (m == n || s % 2 == 0) {
      std::shuffle(rows.begin(), rows.end(), rng);
      Matrix sa(n, n);
      Vector sb(n);
      for (int k = 0; k < n; ++k) {
        sa.row(k) = av.row(rows[static_cast<std::size_t>(k)]);
        sb[k] = bv[rows[static_cast<std::size_t>(k)]];
      }
      Eigen::FullPivLU<Matrix> lu(sa);
      if (!lu.isInvertible()) continue;
      x = lu.solve(sb);
    } else {
      x = av.colPivHouseholderQr().solve(bv);
    }
    if (!x.allFinite() || !op_membership(a, b, x)) continue;
    const IVector p = point_box<double>(x);
    box = box ? hull(*box, p) : p;
  }
  return box;
}

}  // namespace subsq
