#ifndef SUBSQ_ROUNDING_HPP
#define SUBSQ_ROUNDING_HPP

// Directed rounding without touching the FPU control word.
//
// Each operation is evaluated in round-to-nearest, the exact rounding error is
// recovered with an error-free transformation (TwoSum, or an FMA residual for
// products and quotients), and the result is stepped one ulp outward only when
// the error points the wrong way. Away from the underflow range this yields
// the correctly rounded-down / rounded-up value; inside it the result is
// stepped unconditionally, which is still an enclosure.

#include <cmath>
#include <concepts>
#include <limits>

namespace subsq::rounding {

template <std::floating_point T>
constexpr T infinity() {
  return std::numeric_limits<T>::infinity();
}

template <std::floating_point T>
T next_down(T x) {
  return std::nextafter(x, -infinity<T>());
}

template <std::floating_point T>
T next_up(T x) {
  return std::nextafter(x, infinity<T>());
}

namespace detail {

// Below this magnitude an FMA residual may itself be inexact.
template <std::floating_point T>
T tiny_threshold() {
  return std::ldexp(std::numeric_limits<T>::min(), std::numeric_limits<T>::digits + 2);
}

// Sign of (exact - rounded) for a + b, via TwoSum.
template <std::floating_point T>
int sum_error_sign(T a, T b, T s) {
  const T bb = s - a;
  const T err = (a - (s - bb)) + (b - bb);
  return (err > 0) - (err < 0);
}

}  // namespace detail

template <std::floating_point T>
T add_down(T a, T b) {
  const T s = a + b;
  if (std::isnan(s)) return -infinity<T>();
  if (std::isinf(s)) {
    if (std::isfinite(a) && std::isfinite(b) && s > 0) return std::numeric_limits<T>::max();
    return s;
  }
  return detail::sum_error_sign(a, b, s) < 0 ? next_down(s) : s;
}

template <std::floating_point T>
T add_up(T a, T b) {
  const T s = a + b;
  if (std::isnan(s)) return infinity<T>();
  if (std::isinf(s)) {
    if (std::isfinite(a) && std::isfinite(b) && s < 0) return std::numeric_limits<T>::lowest();
    return s;
  }
  return detail::sum_error_sign(a, b, s) > 0 ? next_up(s) : s;
}

template <std::floating_point T>
T sub_down(T a, T b) {
  return add_down(a, -b);
}

template <std::floating_point T>
T sub_up(T a, T b) {
  return add_up(a, -b);
}

// 0 * inf is taken as 0: the interval convention for products of bounds.
template <std::floating_point T>
T mul_down(T a, T b) {
  if (a == 0 || b == 0) return T(0);
  const T p = a * b;
  if (std::isinf(p)) {
    if (std::isfinite(a) && std::isfinite(b) && p > 0) return std::numeric_limits<T>::max();
    return p;
  }
  if (std::abs(p) < detail::tiny_threshold<T>()) return next_down(p);
  const T err = std::fma(a, b, -p);
  return err < 0 ? next_down(p) : p;
}

template <std::floating_point T>
T mul_up(T a, T b) {
  if (a == 0 || b == 0) return T(0);
  const T p = a * b;
  if (std::isinf(p)) {
    if (std::isfinite(a) && std::isfinite(b) && p < 0) return std::numeric_limits<T>::lowest();
    return p;
  }
  if (std::abs(p) < detail::tiny_threshold<T>()) return next_up(p);
  const T err = std::fma(a, b, -p);
  return err > 0 ? next_up(p) : p;
}

namespace detail {

// Returns the sign of (a/b - q); 2 when the residual is unreliable.
template <std::floating_point T>
int quotient_error_sign(T a, T b, T q) {
  if (std::abs(q) < tiny_threshold<T>() || std::abs(a) < tiny_threshold<T>()) return 2;
  const T r = std::fma(-q, b, a);
  if (r == 0) return 0;
  return ((r > 0) == (b > 0)) ? 1 : -1;
}

}  // namespace detail

/// Requires b != 0. Infinite numerator over infinite denominator is widened
/// to the whole line.
template <std::floating_point T>
T div_down(T a, T b) {
  if (a == 0) return T(0);
  if (std::isinf(a) && std::isinf(b)) return -infinity<T>();
  if (std::isinf(b)) return T(0);
  const T q = a / b;
  if (std::isinf(q)) {
    if (std::isfinite(a) && q > 0) return std::numeric_limits<T>::max();
    return q;
  }
  if (std::isinf(a)) return q;
  const int sign = detail::quotient_error_sign(a, b, q);
  return (sign < 0 || sign == 2) ? next_down(q) : q;
}

template <std::floating_point T>
T div_up(T a, T b) {
  if (a == 0) return T(0);
  if (std::isinf(a) && std::isinf(b)) return infinity<T>();
  if (std::isinf(b)) return T(0);
  const T q = a / b;
  if (std::isinf(q)) {
    if (std::isfinite(a) && q < 0) return std::numeric_limits<T>::lowest();
    return q;
  }
  if (std::isinf(a)) return q;
  const int sign = detail::quotient_error_sign(a, b, q);
  return (sign > 0 || sign == 2) ? next_up(q) : q;
}

}  // namespace subsq::rounding

#endif  // SUBSQ_ROUNDING_HPP
