#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet2.hpp"

namespace solitonlab {

// Open interval of admissible radii.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double r) const { return r > lo && r < hi; }
};

// Named evaluatable map r -> Jet2 with an explicit domain. Every successful
// evaluation returns a finite jet; anything else throws.
class RadialProfile {
 public:
  RadialProfile(std::string id, std::function<Jet2(double)> eval,
                Interval domain = {})
      : id_(std::move(id)), eval_(std::move(eval)), domain_(domain) {}

  const std::string& id() const { return id_; }
  const Interval& domain() const { return domain_; }

  Jet2 operator()(double r) const {
    if (!domain_.contains(r)) {
      std::ostringstream msg;
      msg << id_ << ": r=" << r << " outside domain (" << domain_.lo << ", "
          << domain_.hi << ")";
      throw DomainError(msg.str());
    }
    Jet2 j = eval_(r);
    if (!finite(j)) {
      throw EvalError(id_ + ": non-finite jet at r=" + std::to_string(r));
    }
    return j;
  }

 private:
  std::string id_;
  std::function<Jet2(double)> eval_;
  Interval domain_;
};

inline RadialProfile constant_profile(double c) {
  const Interval whole{-std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  return RadialProfile("const(" + std::to_string(c) + ")",
                       [c](double) { return lift_const(c); }, whole);
}

inline RadialProfile linear_profile(double k2) {
  const Interval whole{-std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  return RadialProfile("linear(k2=" + std::to_string(k2) + ")",
                       [k2](double r) { return k2 * lift_var(r); }, whole);
}

inline RadialProfile power_profile(double p) {
  return RadialProfile("power(p=" + std::to_string(p) + ")",
                       [p](double r) { return pow(lift_var(r), p); });
}

// The diagonal pseudo-Euclidean background: g_ij = eps_i delta_ij.
class Signature {
 public:
  explicit Signature(std::vector<int> eps) : eps_(std::move(eps)) {
    if (eps_.size() < 3) {
      throw DomainError("signature needs dimension n >= 3");
    }
    for (int e : eps_) {
      if (e != 1 && e != -1) {
        throw DomainError("signature entries must be +1 or -1");
      }
    }
  }

  static Signature euclidean(int n) {
    if (n < 3) throw DomainError("signature needs dimension n >= 3");
    return Signature(std::vector<int>(n, 1));
  }

  static Signature parse(std::string_view s) {
    std::vector<int> eps;
    eps.reserve(s.size());
    for (char c : s) {
      if (c == '+') {
        eps.push_back(1);
      } else if (c == '-') {
        eps.push_back(-1);
      } else {
        throw DomainError(std::string("signature string has invalid char '") +
                          c + "' (use + and -)");
      }
    }
    return Signature(std::move(eps));
  }

  int dim() const { return static_cast<int>(eps_.size()); }
  int eps(int i) const { return eps_[i]; }
  const std::vector<int>& entries() const { return eps_; }

  std::string str() const {
    std::string s;
    for (int e : eps_) s += (e > 0 ? '+' : '-');
    return s;
  }

 private:
  std::vector<int> eps_;
};

using PointN = std::vector<double>;

// The basic invariant r = sum eps_i x_i^2 of the pseudo-orthogonal action.
inline double radial_invariant(const PointN& x, const Signature& s) {
  if (static_cast<int>(x.size()) != s.dim()) {
    throw DimensionMismatch("point dimension " + std::to_string(x.size()) +
                            " != signature dimension " +
                            std::to_string(s.dim()));
  }
  double r = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    r += s.eps(i) * x[i] * x[i];
  }
  return r;
}

// Deterministic point with all coordinates nonzero and the requested
// invariant r > 0. Minus-slots get a small weight so the invariant stays
// positive for any signature with at least one plus entry.
inline PointN point_with_invariant(double r, const Signature& s,
                                   int variant = 0) {
  if (!(r > 0.0)) {
    throw DomainError("point_with_invariant requires r > 0");
  }
  const int n = s.dim();
  PointN w(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double base = 1.0 + 0.37 * ((i * 7 + variant * 3) % 5);
    if (s.eps(i) < 0) base *= 0.1;
    w[i] = base;
    sum += s.eps(i) * base * base;
  }
  if (!(sum > 0.0)) {
    throw DomainError("signature admits no positive-invariant point pattern");
  }
  const double t = std::sqrt(r / sum);
  for (double& xi : w) xi *= t;
  return w;
}

}  // namespace solitonlab
