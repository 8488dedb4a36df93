#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "subsq/interval_matrix.hpp"
#include "subsq/types.hpp"

using namespace subsq;
using Rational = boost::multiprecision::cpp_rational;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::NumericalFailure;
}

// Random double with a random exponent in [-40, 40], random sign.
double wild(Rng& rng) {
  std::uniform_real_distribution<double> mant(1.0, 2.0);
  std::uniform_int_distribution<int> ex(-40, 40);
  std::bernoulli_distribution neg(0.5);
  const double v = std::ldexp(mant(rng), ex(rng));
  return neg(rng) ? -v : v;
}

Ival wild_interval(Rng& rng) {
  double a = wild(rng);
  double b = std::bernoulli_distribution(0.2)(rng) ? a : wild(rng);
  if (a > b) std::swap(a, b);
  return Ival(a, b);
}

bool contains_exact(const Ival& x, const Rational& lo, const Rational& hi) {
  return Rational(x.lo()) <= lo && hi <= Rational(x.hi());
}

}  // namespace

TEST_CASE("scalar arithmetic examples") {
  CHECK(Ival(1, 2) + Ival(3, 4) == Ival(4, 6));
  CHECK(Ival(-1, 2) * Ival(3, 4) == Ival(-4, 8));
  CHECK(code_of([] { return Ival(1, 1) / Ival(-1, 1); }) == ErrorCode::DivisionByZeroInterval);
  CHECK(Ival(6, 8) / Ival(2, 2) == Ival(3, 4));
  CHECK(Ival(1, 2) - Ival(3, 4) == Ival(-3, -1));
  CHECK(-Ival(1, 2) == Ival(-2, -1));
}

TEST_CASE("inexact results step outward") {
  const Ival third = Ival(1) / Ival(3);
  CHECK(third.lo() < third.hi());
  CHECK(std::nextafter(third.lo(), 1.0) == third.hi());
  CHECK(Ival(0.5) * Ival(4) == Ival(2));
  const Ival tenth = Ival(0.1) + Ival(0.2);
  CHECK(tenth.lo() < tenth.hi());
  CHECK(tenth.contains(0.1 + 0.2));
}

TEST_CASE("empty operands and invalid bounds") {
  const Ival e = Ival::empty();
  CHECK(e.is_empty());
  CHECK(code_of([&] { return e + Ival(1); }) == ErrorCode::EmptyOperand);
  CHECK(code_of([&] { return Ival(1) * e; }) == ErrorCode::EmptyOperand);
  CHECK(code_of([&] { return e.lo(); }) == ErrorCode::EmptyOperand);
  CHECK(code_of([&] { return width(e); }) == ErrorCode::EmptyOperand);
  CHECK(code_of([] { return Ival(2, 1); }) == ErrorCode::InvalidBounds);
  CHECK(code_of([] { return Ival(std::nan(""), 1); }) == ErrorCode::InvalidBounds);
  CHECK_FALSE(e.contains(0));
  CHECK(e.subset_of(Ival(0)));
}

TEST_CASE("midpoint, width, radius") {
  CHECK(midpoint(Ival(1, 3)) == 2);
  CHECK(width(Ival(-20.1, -19.5)) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(midpoint(Ival(5)) == 5);
  CHECK(width(Ival(5)) == 0);
  CHECK(radius(Ival(1, 4)) == 1.5);
  CHECK(code_of([] { return width(Ival::entire()); }) == ErrorCode::InfiniteBound);
  CHECK(code_of([] { return midpoint(Ival(0, INFINITY)); }) == ErrorCode::InfiniteBound);
  const double big = std::numeric_limits<double>::max();
  CHECK(Ival(big * 0.75, big).contains(midpoint(Ival(big * 0.75, big))));
}

TEST_CASE("intersect and hull") {
  CHECK(intersect(Ival(0, 2), Ival(1, 3)) == Ival(1, 2));
  CHECK(intersect(Ival(0, 1), Ival(2, 3)).is_empty());
  CHECK(intersect(Ival::entire(), Ival(1, 2)) == Ival(1, 2));
  CHECK(intersect(Ival::empty(), Ival(1, 2)).is_empty());
  CHECK(intersect(Ival(0, 1), Ival(1, 2)) == Ival(1));
  CHECK(hull(Ival(0, 1), Ival(3, 4)) == Ival(0, 4));
  CHECK(hull(Ival::empty(), Ival(3, 4)) == Ival(3, 4));
}

TEST_CASE("vector metrics") {
  IVector u(2);
  u << Ival(1, 2), Ival(0, 4);
  CHECK(w_metric(u) == 5);
  CHECK(v_metric(u) == 4);
  IVector p(2);
  p << Ival(3), Ival(7);
  CHECK(w_metric(p) == 0);
  CHECK(v_metric(p) == 0);
  IVector swapped(2);
  swapped << u[1], u[0];
  CHECK(w_metric(swapped) == w_metric(u));
  CHECK(v_metric(swapped) == v_metric(u));
  IVector with_empty = u;
  with_empty[1] = Ival::empty();
  CHECK(is_empty(with_empty));
  CHECK(code_of([&] { return w_metric(with_empty); }) == ErrorCode::EmptyOperand);
}

TEST_CASE("vector intersect empties the whole vector") {
  IVector u(2), v(2);
  u << Ival(0, 1), Ival(0, 1);
  v << Ival(0.5, 2), Ival(2, 3);
  CHECK(is_empty(intersect(u, v)));
  v[1] = Ival(0.5, 3);
  const IVector w = intersect(u, v);
  CHECK(w[0] == Ival(0.5, 1));
  CHECK(subset_of(w, u));
  CHECK(subset_of(w, v));
}

TEST_CASE("matrix products") {
  IMatrix a(1, 2);
  a << Ival(1), Ival(1);
  IVector x(2);
  x << Ival(2, 3), Ival(0);
  CHECK(imat_vec(a, x)[0] == Ival(2, 3));

  Matrix m(1, 1);
  m << 2;
  IMatrix b(1, 1);
  b << Ival(-1, 1);
  CHECK(pmat_imat(m, b)(0, 0) == Ival(-2, 2));

  IMatrix c(2, 2);
  c << Ival(0.1, 0.3), Ival(-1), Ival(2, 2.5), Ival(7);
  const IMatrix ic = pmat_imat(Matrix(Matrix::Identity(2, 2)), c);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(c(i, j).subset_of(ic(i, j)));
      CHECK(ic(i, j).lo() >= std::nextafter(c(i, j).lo(), -INFINITY));
      CHECK(ic(i, j).hi() <= std::nextafter(c(i, j).hi(), INFINITY));
    }
  }
  CHECK(code_of([&] { return imat_vec(c, IVector(3)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("point inverse") {
  Matrix d(2, 2);
  d << 2, 0, 0, 4;
  const Matrix inv = point_inverse(d);
  CHECK(inv(0, 0) == 0.5);
  CHECK(inv(1, 1) == 0.25);
  CHECK(inv(0, 1) == 0);
  CHECK(point_inverse(Matrix(Matrix::Identity(3, 3))).isIdentity());
  Matrix s(2, 2);
  s << 1, 2, 2, 4;
  CHECK(code_of([&] { return point_inverse(s); }) == ErrorCode::SingularMatrix);
}

TEST_CASE("inclusion of sampled point results") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  std::uniform_real_distribution<double> t(0, 1);
  for (int k = 0; k < 1000; ++k) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Ival x(a, b), y(c, d);
    const double xs = a + (b - a) * t(rng);
    const double ys = c + (d - c) * t(rng);
    CHECK((x + y).contains(xs + ys));
    CHECK((x - y).contains(xs - ys));
    CHECK((x * y).contains(xs * ys));
    if (!y.contains_zero()) CHECK((x / y).contains(xs / ys));
  }
}

TEST_CASE("exact rational result is enclosed") {
  Rng rng(12);
  for (int k = 0; k < 1000; ++k) {
    const Ival x = wild_interval(rng);
    const Ival y = wild_interval(rng);
    const Rational xl(x.lo()), xh(x.hi()), yl(y.lo()), yh(y.hi());
    CHECK(contains_exact(x + y, xl + yl, xh + yh));
    CHECK(contains_exact(x - y, xl - yh, xh - yl));
    const Rational p[] = {xl * yl, xl * yh, xh * yl, xh * yh};
    CHECK(contains_exact(x * y, *std::min_element(p, p + 4), *std::max_element(p, p + 4)));
    if (!y.contains_zero()) {
      const Rational q[] = {xl / yl, xl / yh, xh / yl, xh / yh};
      CHECK(contains_exact(x / y, *std::min_element(q, q + 4), *std::max_element(q, q + 4)));
    }
  }
}

TEST_CASE("subnormal range stays enclosed") {
  const double tiny = std::numeric_limits<double>::denorm_min();
  const Ival x(tiny * 3, tiny * 5);
  const Ival y(0.3, 0.7);
  const Ival p = x * y;
  CHECK(Rational(p.lo()) <= Rational(x.lo()) * Rational(y.lo()));
  CHECK(Rational(x.hi()) * Rational(y.hi()) <= Rational(p.hi()));
  const Ival q = Ival(1e-300) / Ival(1e10);
  CHECK(Rational(q.lo()) <= Rational(1e-300) / Rational(1e10));
  CHECK(Rational(1e-300) / Rational(1e10) <= Rational(q.hi()));
}

TEST_CASE("finite inputs never produce infinite bounds unless they overflow") {
  const double big = std::numeric_limits<double>::max();
  const Ival s = Ival(big) + Ival(big);
  CHECK(s.hi() == INFINITY);
  CHECK(s.lo() == big);
  const Ival m = Ival(2, 3) * Ival(-4, 5);
  CHECK(m.is_finite());
}

TEST_CASE("intersect is monotone") {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const Ival x = wild_interval(rng), y = wild_interval(rng);
    const Ival z = intersect(x, y);
    CHECK(z.subset_of(x));
    CHECK(z.subset_of(y));
  }
}

TEST_CASE("inflate keeps the original box") {
  CHECK(inflate(Ival(1, 3), 4.0) == Ival(-2, 6));
  CHECK(Ival(1, 3).subset_of(inflate(Ival(1, 3), 1.0)));
  CHECK(inflate(Ival(5), 4.0) == Ival(5));
}
