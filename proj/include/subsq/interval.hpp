#ifndef SUBSQ_INTERVAL_HPP
#define SUBSQ_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <ostream>

#include "subsq/errors.hpp"
#include "subsq/rounding.hpp"

namespace subsq {

/// Closed real interval [lo, hi] with outward-rounded arithmetic.
///
/// Bounds may be infinite (the whole line is a valid box component), but an
/// interval never degenerates to a single infinite point. Emptiness is a
/// separate flag rather than an lo > hi encoding; querying the bounds of an
/// empty interval throws.
template <std::floating_point Scalar>
class Interval {
 public:
  using scalar_type = Scalar;

  constexpr Interval() = default;

  // Implicit on purpose: lets point literals mix into interval expressions.
  Interval(Scalar point) : Interval(point, point) {}

  Interval(Scalar lo, Scalar hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi ||
        lo == rounding::infinity<Scalar>() || hi == -rounding::infinity<Scalar>()) {
      throw Error(ErrorCode::InvalidBounds, "interval bounds must satisfy lo <= hi");
    }
  }

  static Interval empty() {
    Interval r;
    r.empty_ = true;
    return r;
  }

  static Interval entire() {
    return Interval(-rounding::infinity<Scalar>(), rounding::infinity<Scalar>());
  }

  bool is_empty() const noexcept { return empty_; }

  Scalar lo() const {
    require_nonempty();
    return lo_;
  }
  Scalar hi() const {
    require_nonempty();
    return hi_;
  }

  bool is_finite() const noexcept { return !empty_ && std::isfinite(lo_) && std::isfinite(hi_); }

  bool contains(Scalar x) const noexcept { return !empty_ && lo_ <= x && x <= hi_; }
  bool contains_zero() const noexcept { return contains(Scalar(0)); }

  /// Set inclusion; the empty interval is a subset of everything.
  bool subset_of(const Interval& other) const noexcept {
    if (empty_) return true;
    if (other.empty_) return false;
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  friend bool operator==(const Interval& a, const Interval& b) noexcept {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  friend Interval operator-(const Interval& x) {
    x.require_nonempty();
    return Interval(-x.hi_, -x.lo_);
  }

  friend Interval operator+(const Interval& x, const Interval& y) {
    x.require_nonempty();
    y.require_nonempty();
    return Interval(rounding::add_down(x.lo_, y.lo_), rounding::add_up(x.hi_, y.hi_));
  }

  friend Interval operator-(const Interval& x, const Interval& y) {
    x.require_nonempty();
    y.require_nonempty();
    return Interval(rounding::sub_down(x.lo_, y.hi_), rounding::sub_up(x.hi_, y.lo_));
  }

  friend Interval operator*(const Interval& x, const Interval& y) {
    x.require_nonempty();
    y.require_nonempty();
    using namespace rounding;
    const Scalar lo = std::min({mul_down(x.lo_, y.lo_), mul_down(x.lo_, y.hi_),
                                mul_down(x.hi_, y.lo_), mul_down(x.hi_, y.hi_)});
    const Scalar hi = std::max({mul_up(x.lo_, y.lo_), mul_up(x.lo_, y.hi_),
                                mul_up(x.hi_, y.lo_), mul_up(x.hi_, y.hi_)});
    return Interval(lo, hi);
  }

  friend Interval operator/(const Interval& x, const Interval& y) {
    x.require_nonempty();
    y.require_nonempty();
    if (y.contains_zero()) {
      throw Error(ErrorCode::DivisionByZeroInterval, "denominator interval contains zero");
    }
    using namespace rounding;
    const Scalar lo = std::min({div_down(x.lo_, y.lo_), div_down(x.lo_, y.hi_),
                                div_down(x.hi_, y.lo_), div_down(x.hi_, y.hi_)});
    const Scalar hi = std::max({div_up(x.lo_, y.lo_), div_up(x.lo_, y.hi_),
                                div_up(x.hi_, y.lo_), div_up(x.hi_, y.hi_)});
    return Interval(lo, hi);
  }

  Interval& operator+=(const Interval& y) { return *this = *this + y; }
  Interval& operator-=(const Interval& y) { return *this = *this - y; }
  Interval& operator*=(const Interval& y) { return *this = *this * y; }
  Interval& operator/=(const Interval& y) { return *this = *this / y; }

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    if (x.empty_) return os << "[empty]";
    return os << '[' << x.lo_ << ", " << x.hi_ << ']';
  }

 private:
  void require_nonempty() const {
    if (empty_) throw Error(ErrorCode::EmptyOperand, "operation on an empty interval");
  }

  Scalar lo_ = 0;
  Scalar hi_ = 0;
  bool empty_ = false;
};

template <std::floating_point Scalar>
Scalar midpoint(const Interval<Scalar>& x) {
  if (!x.is_finite()) {
    if (x.is_empty()) throw Error(ErrorCode::EmptyOperand, "midpoint of an empty interval");
    throw Error(ErrorCode::InfiniteBound, "midpoint of an unbounded interval");
  }
  Scalar m = (x.lo() + x.hi()) / 2;
  if (!std::isfinite(m)) m = x.lo() / 2 + x.hi() / 2;
  return std::clamp(m, x.lo(), x.hi());
}

template <std::floating_point Scalar>
Scalar width(const Interval<Scalar>& x) {
  if (x.is_empty()) throw Error(ErrorCode::EmptyOperand, "width of an empty interval");
  if (!x.is_finite()) throw Error(ErrorCode::InfiniteBound, "width of an unbounded interval");
  return x.hi() - x.lo();
}

template <std::floating_point Scalar>
Scalar radius(const Interval<Scalar>& x) {
  return width(x) / 2;
}

/// max |x| over the interval.
template <std::floating_point Scalar>
Scalar magnitude(const Interval<Scalar>& x) {
  return std::max(std::abs(x.lo()), std::abs(x.hi()));
}

template <std::floating_point Scalar>
Interval<Scalar> intersect(const Interval<Scalar>& x, const Interval<Scalar>& y) {
  if (x.is_empty() || y.is_empty()) return Interval<Scalar>::empty();
  const Scalar lo = std::max(x.lo(), y.lo());
  const Scalar hi = std::min(x.hi(), y.hi());
  if (lo > hi) return Interval<Scalar>::empty();
  return Interval<Scalar>(lo, hi);
}

/// Smallest interval containing both arguments.
template <std::floating_point Scalar>
Interval<Scalar> hull(const Interval<Scalar>& x, const Interval<Scalar>& y) {
  if (x.is_empty()) return y;
  if (y.is_empty()) return x;
  return Interval<Scalar>(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

/// Scales the width by `factor` about the midpoint, rounding outward. The
/// result always contains `x`.
template <std::floating_point Scalar>
Interval<Scalar> inflate(const Interval<Scalar>& x, Scalar factor) {
  const Interval<Scalar> c(midpoint(x));
  const Interval<Scalar> r = Interval<Scalar>(radius(x)) * Interval<Scalar>(factor);
  return hull(x, Interval<Scalar>((c - r).lo(), (c + r).hi()));
}

}  // namespace subsq

#endif  // SUBSQ_INTERVAL_HPP
