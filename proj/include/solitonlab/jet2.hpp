#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace solitonlab {

// Value and first two derivatives of a scalar function of one variable r,
// propagated by forward-mode rules. This is the AD currency of the library:
// psi, psi', psi'' (and h, h', h'') come out of these jets exactly.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

constexpr Jet2 lift_const(double c) { return {c, 0.0, 0.0}; }
constexpr Jet2 lift_var(double r0) { return {r0, 1.0, 0.0}; }

inline bool finite(const Jet2& a) {
  return std::isfinite(a.v) && std::isfinite(a.d1) && std::isfinite(a.d2);
}

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

// Leibniz rule at both orders: (ab)'' = a''b + 2a'b' + ab''.
constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v,
          a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

// Quotient rule, solved from a = (a/b) * b order by order.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.v == 0.0) {
    throw DivisionByZero("jet division by zero denominator value");
  }
  const double v = a.v / b.v;
  const double d1 = (a.d1 - v * b.d1) / b.v;
  const double d2 = (a.d2 - 2.0 * d1 * b.d1 - v * b.d2) / b.v;
  return {v, d1, d2};
}

constexpr Jet2 operator+(const Jet2& a, double c) { return a + lift_const(c); }
constexpr Jet2 operator+(double c, const Jet2& a) { return lift_const(c) + a; }
constexpr Jet2 operator-(const Jet2& a, double c) { return a - lift_const(c); }
constexpr Jet2 operator-(double c, const Jet2& a) { return lift_const(c) - a; }
constexpr Jet2 operator*(const Jet2& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c}; }
constexpr Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return a / lift_const(c); }
inline Jet2 operator/(double c, const Jet2& a) { return lift_const(c) / a; }

inline Jet2 exp(const Jet2& a) {
  const double v = std::exp(a.v);
  if (!std::isfinite(v)) {
    throw EvalError("jet exp overflow at exponent " + std::to_string(a.v));
  }
  return {v, v * a.d1, v * (a.d1 * a.d1 + a.d2)};
}

namespace detail {

// Integer powers by repeated multiplication; stays valid for negative bases.
inline Jet2 ipow(const Jet2& a, long k) {
  if (k < 0) {
    return lift_const(1.0) / ipow(a, -k);
  }
  Jet2 acc = lift_const(1.0);
  Jet2 base = a;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

}  // namespace detail

// t -> t^p composed with a. Non-integer exponents require a positive base;
// integer exponents go through repeated multiplication so even/odd powers of
// negative quantities stay meaningful.
inline Jet2 pow(const Jet2& a, double p) {
  if (p == std::nearbyint(p) && std::abs(p) <= 1024.0) {
    return detail::ipow(a, static_cast<long>(p));
  }
  if (a.v <= 0.0) {
    throw DomainError("jet pow: non-integer exponent " + std::to_string(p) +
                      " with non-positive base " + std::to_string(a.v));
  }
  const double v = std::pow(a.v, p);
  const double c1 = p * std::pow(a.v, p - 1.0);
  const double c2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return {v, c1 * a.d1, c2 * a.d1 * a.d1 + c1 * a.d2};
}

inline Jet2 sqrt(const Jet2& a) { return pow(a, 0.5); }

}  // namespace solitonlab
