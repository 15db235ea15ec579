#pragma once

#include <cmath>
#include <functional>

#include "errors.hpp"

namespace solitonlab {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for a bracketed one-dimensional minimum on [a, b].
// Returns the leftmost minimizer within tolerance when the valley is flat.
inline Minimum golden_section(const std::function<double(double)>& f, double a,
                              double b, double tol_x = 1e-12,
                              int max_iter = 400) {
  if (!(b > a)) throw DomainError("golden_section: requires a < b");
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  static const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;

  double x1 = a + invphi2 * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);

  for (int it = 0; it < max_iter && (b - a) > tol_x * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + invphi2 * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 <= f2) ? Minimum{x1, f1} : Minimum{x2, f2};
}

}  // namespace solitonlab
