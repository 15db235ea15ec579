#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "errors.hpp"

namespace solitonlab {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_steps = 200000;
  double blow_up = 1e12;
};

// Adaptive Dormand-Prince 5(4) for a scalar first-order ODE y' = f(t, y),
// integrated from (t0, y0) to t1 (either direction).
inline double integrate_rk45(const std::function<double(double, double)>& f,
                             double t0, double y0, double t1,
                             const OdeOptions& opt = {}) {
  if (t0 == t1) return y0;

  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double y = y0;
  double h = dir * std::min(std::abs(t1 - t0) / 100.0, 0.1);
  if (h == 0.0) h = dir * 1e-8;

  for (int step = 0; step < opt.max_steps; ++step) {
    if (dir * (t - t1) >= 0.0) return y;
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    const double k1 = f(t, y);
    const double k2 = f(t + a21 * h, y + h * a21 * k1);
    const double k3 = f(t + 0.3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(t + 0.8 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        f(t + (8.0 / 9) * h,
          y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + h, y5);
    const double y4 =
        y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    if (!std::isfinite(y5) || std::abs(y5) > opt.blow_up) {
      throw BlowUp("ode solution blow-up near t=" + std::to_string(t));
    }

    const double scale =
        opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y5));
    const double err = std::abs(y5 - y4) / scale;

    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    const double factor =
        (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  throw EvalError("ode integrator exceeded max step count");
}

}  // namespace solitonlab
