#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace solitonlab {

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw DomainError("log_grid requires 0 < lo < hi and count >= 2");
  }
  std::vector<double> g(count);
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) {
    g[k] = lo * std::exp(ratio * k);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int count) {
  if (!(hi > lo) || count < 2) {
    throw DomainError("linear_grid requires lo < hi and count >= 2");
  }
  std::vector<double> g(count);
  const double step = (hi - lo) / (count - 1);
  for (int k = 0; k < count; ++k) {
    g[k] = lo + step * k;
  }
  g.back() = hi;
  return g;
}

}  // namespace solitonlab
