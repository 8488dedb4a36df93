#ifndef SUBSQ_TESTS_SUPPORT_HPP
#define SUBSQ_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "subsq/interval_matrix.hpp"
#include "subsq/types.hpp"

namespace subsq::test {

// Three equations, two unknowns; the two 2x2 subsystems {0,1} and {1,2}
// have overlapping but different solution sets.
inline IMatrix example_a() {
  IMatrix a(3, 2);
  a << Ival(-0.8, 0.2), Ival(-20.1, -19.5),
       Ival(-15.6, -15.2), Ival(14.8, 16.7),
       Ival(18.8, 20.1), Ival(8.1, 9.5);
  return a;
}

inline IVector example_b() {
  IVector b(3);
  b << Ival(292.1, 292.7), Ival(-361.9, -361.1), Ival(28.4, 30.3);
  return b;
}

// Interval hulls of the example's solution sets, from an independent LP
// solve of the orthant inequalities (HiGHS) agreeing with exact_hull to 1e-14.
inline IVector box2(double a, double b, double c, double d) {
  IVector x(2);
  x << Ival(a, b), Ival(c, d);
  return x;
}
inline IVector hull_rows01() {
  return box2(6.780954780199022, 9.753800898995241, -15.372956138074226, -14.435285563194077);
}
inline IVector hull_rows12() {
  return box2(7.357076380321624, 9.195745788377815, -16.26844983357109, -13.6662627661416);
}
inline IVector hull_all_rows() {
  return box2(7.357076380321624, 9.195745788377815, -15.372956138074226, -14.443677918795093);
}

// Widens every component by `pad` on both sides.
inline IVector padded(const IVector& x, double pad) {
  IVector r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = Ival(x[i].lo() - pad, x[i].hi() + pad);
  return r;
}

// a subset of b up to an absolute slack on every endpoint.
inline bool loosely_inside(const IVector& a, const IVector& b, double slack = 1e-7) {
  return subset_of(a, padded(b, slack));
}

struct Planted {
  IMatrix a;
  IVector b;
  Vector x;
};

// A' and x uniform on [-20, 20]; every coefficient interval has radius r and
// holds A' at a uniformly random position; b encloses A' x the same way, so x
// is a member of the solution set by construction.
inline Planted planted(int m, int n, double r, Rng& rng) {
  std::uniform_real_distribution<double> coef(-20, 20);
  std::uniform_real_distribution<double> pos(0, 1);
  Planted p{IMatrix(m, n), IVector(m), Vector(n)};
  Matrix ap(m, n);
  for (int j = 0; j < n; ++j) p.x[j] = coef(rng);
  auto around = [&](const Ival& c) {
    const double t = pos(rng);
    return c + Ival(-2 * r * t, 2 * r * (1 - t));
  };
  for (int i = 0; i < m; ++i) {
    Ival bp(0);
    for (int j = 0; j < n; ++j) {
      ap(i, j) = coef(rng);
      p.a(i, j) = around(Ival(ap(i, j)));
      bp += Ival(ap(i, j)) * Ival(p.x[j]);
    }
    p.b[i] = around(bp);
  }
  return p;
}

}  // namespace subsq::test

#endif  // SUBSQ_TESTS_SUPPORT_HPP
