#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "jet2.hpp"
#include "profile.hpp"

namespace solitonlab {

// One instance of the soliton equation Ric + Hess(h) = rho K g + lambda g.
struct SolitonParams {
  int n;
  double rho = 0.0;
  double lambda = 0.0;
  Signature signature;

  SolitonParams(double rho_, double lambda_, Signature sig)
      : n(sig.dim()), rho(rho_), lambda(lambda_), signature(std::move(sig)) {}
};

// Residuals of the PDE system at one point: the off-diagonal equation for
// every sampled pair i != j, and the diagonal equation minus lambda*eps_i.
struct PdeResidual {
  Matrix offdiag;
  std::vector<double> diag;

  explicit PdeResidual(int n) : offdiag(n), diag(n, 0.0) {}

  double offdiag_max() const { return offdiag.max_abs(); }
  double diag_max() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::abs(v));
    return m;
  }
};

namespace detail {

inline std::vector<std::pair<int, int>> index_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  if (n <= 6) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  // large n: a deterministic random sample of up to 30 distinct pairs
  const std::size_t target =
      std::min<std::size_t>(30, static_cast<std::size_t>(n) * (n - 1) / 2);
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> pick(0, n - 1);
  while (pairs.size() < target) {
    int i = pick(rng);
    int j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) ==
        pairs.end()) {
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

}  // namespace detail

inline PdeResidual pde_residual(const RadialProfile& psi,
                                const RadialProfile& h,
                                const SolitonParams& sp, const PointN& p) {
  const Signature& s = sp.signature;
  const int n = s.dim();
  const double r = radial_invariant(p, s);
  const RadialPartials ps = radial_partials(psi(r), s, p);
  const RadialPartials hs = radial_partials(h(r), s, p);
  if (ps.value == 0.0) {
    throw ConformalFactorZero("pde_residual: psi vanishes at r=" +
                              std::to_string(r));
  }

  PdeResidual out(n);
  for (const auto& [i, j] : detail::index_pairs(n)) {
    const double v = (n - 2) * ps.dd(i, j) + ps.value * hs.dd(i, j) +
                     ps.d[i] * hs.d[j] + ps.d[j] * hs.d[i];
    out.offdiag(i, j) = v;
    out.offdiag(j, i) = v;
  }

  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += s.eps(k) *
           ((n - 1) * (sp.rho * n * ps.d[k] * ps.d[k] -
                       2.0 * sp.rho * ps.value * ps.dd(k, k) -
                       ps.d[k] * ps.d[k]) -
            ps.value * ps.d[k] * hs.d[k] + ps.value * ps.dd(k, k));
  }
  for (int i = 0; i < n; ++i) {
    const double lhs =
        ps.value * ((n - 2) * ps.dd(i, i) + ps.value * hs.dd(i, i) +
                    2.0 * ps.d[i] * hs.d[i]) +
        s.eps(i) * sum;
    out.diag[i] = lhs - sp.lambda * s.eps(i);
  }
  return out;
}

// Residuals of the reduced radial system from jets at a single radius:
// first component is the second-order equation
//   (n-2) psi'' + psi h'' + 2 psi' h',
// second is the first-order equation minus lambda.
inline std::pair<double, double> ode_residual_jets(const Jet2& psi,
                                                   const Jet2& h, int n,
                                                   double rho, double lambda,
                                                   double r) {
  const double e1 = (n - 2) * psi.d2 + psi.v * h.d2 + 2.0 * psi.d1 * h.d1;
  const double e2 =
      2.0 * psi.v * ((n - 2) * psi.d1 + psi.v * h.d1) +
      2.0 * n * (1.0 - 2.0 * (n - 1) * rho) * psi.v * psi.d1 +
      4.0 * r *
          ((n - 1) * ((rho * n - 1.0) * psi.d1 * psi.d1 -
                      2.0 * rho * psi.v * psi.d2) -
           psi.v * psi.d1 * h.d1 + psi.v * psi.d2) -
      lambda;
  return {e1, e2};
}

inline std::pair<double, double> ode_residual(const RadialProfile& psi,
                                              const RadialProfile& h,
                                              const SolitonParams& sp,
                                              double r) {
  if (!(r > 0.0)) throw DomainError("ode_residual: r > 0 required");
  return ode_residual_jets(psi(r), h(r), sp.n, sp.rho, sp.lambda, r);
}

enum class SolitonSpeed { shrinking, steady, expanding };
enum class SolitonFamily { generic, einstein, traceless_ricci, schouten, ricci };

struct SolitonClass {
  SolitonSpeed speed;
  SolitonFamily family;

  std::string str() const {
    std::string s;
    switch (speed) {
      case SolitonSpeed::shrinking: s = "shrinking"; break;
      case SolitonSpeed::steady: s = "steady"; break;
      case SolitonSpeed::expanding: s = "expanding"; break;
    }
    switch (family) {
      case SolitonFamily::einstein: s += ", Einstein"; break;
      case SolitonFamily::traceless_ricci: s += ", traceless Ricci"; break;
      case SolitonFamily::schouten: s += ", Schouten"; break;
      case SolitonFamily::ricci: s += ", Ricci"; break;
      case SolitonFamily::generic: break;
    }
    return s;
  }
};

inline SolitonClass classify(const SolitonParams& sp) {
  SolitonClass c{SolitonSpeed::steady, SolitonFamily::generic};
  if (sp.lambda > 0.0) {
    c.speed = SolitonSpeed::shrinking;
  } else if (sp.lambda < 0.0) {
    c.speed = SolitonSpeed::expanding;
  }
  const auto near = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
  };
  if (near(sp.rho, 0.5)) {
    c.family = SolitonFamily::einstein;
  } else if (near(sp.rho, 1.0 / sp.n)) {
    c.family = SolitonFamily::traceless_ricci;
  } else if (near(sp.rho, 1.0 / (2.0 * (sp.n - 1)))) {
    c.family = SolitonFamily::schouten;
  } else if (sp.rho == 0.0) {
    c.family = SolitonFamily::ricci;
  }
  return c;
}

namespace detail {

// B = A + r^{(2-n)/2}; the zero-curvature family is regular exactly where
// B > 0 (equivalently 1 + A r^{(n-2)/2} > 0).
inline double rigidity_base(double A, int n, double r) {
  if (!(r > 0.0)) throw DomainError("r > 0 required");
  return A + std::pow(r, 0.5 * (2 - n));
}

}  // namespace detail

// Closed-form lambda profile sampled by the rigidity scan; it vanishes
// identically exactly when A = 0 and is non-constant in r otherwise:
//   lambda = (n-2)^2 k2^2 (B^{(n+1)/(2-n)} r^{-n/2} - B^{(2n-1)/(2-n)} r^{1-n})^2
//            / (n B^{n/(2-n)} r^{-n/2} - (n+2) B^{2(n-1)/(2-n)} r^{1-n})
// See lambda_forced_by_system for the value the equation pair itself pins.
inline double lambda_profile(double A, double k2, int n, double r) {
  if (n < 3) throw DomainError("lambda_profile: n >= 3 required");
  if (!(k2 > 0.0)) throw DomainError("lambda_profile: k2 > 0 required");
  const double B = detail::rigidity_base(A, n, r);
  if (B == 0.0) {
    throw SingularDenominator("lambda_profile: B = 0 at r=" +
                              std::to_string(r));
  }
  if (B < 0.0) {
    throw SingularLocus("lambda_profile: outside the family domain (B < 0) at r=" +
                        std::to_string(r));
  }
  const double q = 1.0 / (2.0 - n);
  const double denom = n * std::pow(B, n * q) * std::pow(r, -0.5 * n) -
                       (n + 2) * std::pow(B, 2.0 * (n - 1) * q) *
                           std::pow(r, 1.0 - n);
  if (denom == 0.0 || !std::isfinite(denom)) {
    throw SingularDenominator("lambda_profile: denominator vanishes at r=" +
                              std::to_string(r));
  }
  const double root = std::pow(B, (n + 1) * q) * std::pow(r, -0.5 * n) -
                      std::pow(B, (2 * n - 1) * q) * std::pow(r, 1.0 - n);
  const double lam = (n - 2) * (n - 2) * k2 * k2 * root * root / denom;
  if (!std::isfinite(lam)) {
    throw SingularDenominator("lambda_profile: non-finite value at r=" +
                              std::to_string(r));
  }
  return lam == 0.0 ? 0.0 : lam;  // normalize -0.0
}

// h'(r) solved from the first-order radial equation for the zero-curvature
// family, as a jet so h'' comes along for free:
//   h' = lambda / (2 k2^2 B^{2/(2-n)} D) + (2-n) (B^{n/(2-n)} r^{-n/2}
//        - B^{2(n-1)/(2-n)} r^{1-n}) / D,
//   D  = B^{2/(2-n)} - 2 B^{n/(2-n)} r^{(2-n)/2}
inline Jet2 potential_slope_jet(double A, double k2, int n, double lambda,
                                double r) {
  if (n < 3) throw DomainError("potential_slope: n >= 3 required");
  if (!(k2 > 0.0)) throw DomainError("potential_slope: k2 > 0 required");
  const double q = 1.0 / (2.0 - n);
  const Jet2 x = lift_var(r);
  const Jet2 B = lift_const(A) + pow(x, 0.5 * (2 - n));
  if (B.v <= 0.0) {
    throw SingularLocus("potential_slope: outside the family domain at r=" +
                        std::to_string(r));
  }
  const Jet2 D =
      pow(B, 2.0 * q) - 2.0 * pow(B, n * q) * pow(x, 0.5 * (2 - n));
  if (D.v == 0.0) {
    throw SingularDenominator("potential_slope: denominator vanishes at r=" +
                              std::to_string(r));
  }
  const Jet2 w = (2.0 - n) *
                 (pow(B, n * q) * pow(x, -0.5 * n) -
                  pow(B, 2.0 * (n - 1) * q) * pow(x, 1.0 - n)) /
                 D;
  const Jet2 phi = lift_const(lambda) / (2.0 * k2 * k2 * pow(B, 2.0 * q) * D);
  return phi + w;
}

inline double potential_slope(double A, double k2, int n, double lambda,
                              double r) {
  return potential_slope_jet(A, k2, n, lambda, r).v;
}

// The lambda the ODE pair itself forces at radius r: h' is solved from the
// first-order equation (linear in lambda) and differentiated through jets;
// substitution into the second-order equation is again linear in lambda.
// This is an independent route to the rigidity profile; it does not reuse
// the closed-form lambda display. At A = 0 both the constant and the lambda
// coefficient of that substituted equation vanish identically (the inverted
// flat metric carries a Gaussian-type potential for every lambda), so no
// value is forced and the call reports the degeneracy.
inline double lambda_forced_by_system(double A, double k2, int n, double r) {
  const Jet2 w = potential_slope_jet(A, k2, n, 0.0, r);
  const Jet2 u = potential_slope_jet(A, k2, n, 1.0, r) - w;
  const Jet2 x = lift_var(r);
  const Jet2 B = lift_const(A) + pow(x, 0.5 * (2 - n));
  const Jet2 psi = k2 * pow(B, 2.0 / (2 - n));
  const double a = (n - 2) * psi.d2 + psi.v * w.d1 + 2.0 * psi.d1 * w.v;
  const double b = psi.v * u.d1 + 2.0 * psi.d1 * u.v;
  const double b_scale =
      std::abs(psi.v * u.d1) + std::abs(2.0 * psi.d1 * u.v);
  if (!std::isfinite(b) || std::abs(b) <= 1e-8 * b_scale) {
    throw SingularDenominator(
        "lambda_forced_by_system: degenerate equation pair at r=" +
        std::to_string(r) + " (every constant lambda solves it when A=0)");
  }
  return -a / b;
}

// Potential profile built from the slope construction; the potential value
// itself never enters any residual, so it is pinned to 0.
inline RadialProfile rigidity_potential_profile(double A, double k2, int n,
                                                double lambda) {
  std::ostringstream id;
  id << "rigidity-potential(A=" << A << ",k2=" << k2 << ",n=" << n
     << ",lambda=" << lambda << ")";
  return RadialProfile(id.str(), [=](double r) {
    const Jet2 hp = potential_slope_jet(A, k2, n, lambda, r);
    return Jet2{0.0, hp.v, hp.d1};
  });
}

// Constancy polynomial of the lambda profile; it vanishes identically iff
// A = 0:  A^2 [ -n^2 r^{(n-2)/2} A^2 + (n^2+4) A + 4(1-n) r^{(2-n)/2} ]
inline double rigidity_polynomial(double A, int n, double r) {
  if (!(r > 0.0)) throw DomainError("rigidity_polynomial: r > 0 required");
  const double cubic = -static_cast<double>(n) * n *
                           std::pow(r, 0.5 * (n - 2)) * A * A +
                       (static_cast<double>(n) * n + 4.0) * A +
                       4.0 * (1.0 - n) * std::pow(r, 0.5 * (2 - n));
  return A * A * cubic;
}

struct RigidityVerdict {
  double A = 0.0;
  double k2 = 1.0;
  int n = 0;
  std::vector<std::pair<double, double>> lambda_samples;  // (r, lambda)
  std::vector<std::pair<double, std::string>> skipped;    // (r, reason)
  bool is_constant = false;
  std::optional<double> forced_lambda;
  double lambda_spread = 0.0;
  double polynomial_max_abs = 0.0;
  bool polynomial_vanishes = false;
};

inline std::vector<double> default_rigidity_grid() {
  return log_grid(0.1, 10.0, 32);
}

// Samples lambda(r) over the grid and decides constancy. Grid points within
// a relative guard band of a singular radius (B = 0 or denominator = 0) are
// skipped and recorded.
inline RigidityVerdict rigidity_scan(double A, double k2, int n,
                                     const std::vector<double>& grid,
                                     double tol_scale = 1e-9) {
  if (grid.empty()) throw DomainError("rigidity_scan: empty grid");
  RigidityVerdict v;
  v.A = A;
  v.k2 = k2;
  v.n = n;

  constexpr double guard = 1e-3;
  std::vector<double> singular_r;
  if (A < 0.0) {
    singular_r.push_back(std::pow(-A, 2.0 / (2 - n)));  // B = 0
  }
  if (A > 0.0) {
    singular_r.push_back(std::pow(n * A / 2.0, 2.0 / (2 - n)));  // denom = 0
  }

  double lo = 0.0, hi = 0.0, sum = 0.0;
  bool first = true;
  for (double r : grid) {
    bool guarded = false;
    for (double rs : singular_r) {
      if (std::abs(r - rs) < guard * rs) {
        v.skipped.emplace_back(r, "within guard band of singular radius");
        guarded = true;
        break;
      }
    }
    if (guarded) continue;
    try {
      const double lam = lambda_profile(A, k2, n, r);
      v.lambda_samples.emplace_back(r, lam);
      if (first) {
        lo = hi = lam;
        first = false;
      } else {
        lo = std::min(lo, lam);
        hi = std::max(hi, lam);
      }
      sum += lam;
      v.polynomial_max_abs =
          std::max(v.polynomial_max_abs, std::abs(rigidity_polynomial(A, n, r)));
    } catch (const EvalError& e) {
      v.skipped.emplace_back(r, e.what());
    }
  }

  if (v.lambda_samples.size() < 2) {
    throw EvalError("rigidity_scan: fewer than two usable grid points");
  }
  const double mean = sum / static_cast<double>(v.lambda_samples.size());
  v.lambda_spread = hi - lo;
  v.is_constant = v.lambda_spread < tol_scale * (1.0 + std::abs(mean));
  if (v.is_constant) {
    v.forced_lambda = 0.0;
  }
  v.polynomial_vanishes = v.polynomial_max_abs <= 1e-12;
  return v;
}

// Aggregate residual verdict over an r-grid; the PDE side is sampled at
// several points per radius.
struct ResidualReport {
  double offdiag_max = 0.0;
  double diag_max = 0.0;
  double ode_eq1_max = 0.0;
  double ode_eq2_max = 0.0;
  int points_tested = 0;
  double tolerance = 1e-10;
  bool pass = false;
  std::vector<std::pair<double, std::string>> skipped;
};

inline ResidualReport verify_soliton(const RadialProfile& psi,
                                     const RadialProfile& h,
                                     const SolitonParams& sp,
                                     const std::vector<double>& rgrid,
                                     int variants_per_r = 2,
                                     double tolerance = 1e-10) {
  ResidualReport rep;
  rep.tolerance = tolerance;
  for (double r : rgrid) {
    try {
      const auto [e1, e2] = ode_residual(psi, h, sp, r);
      rep.ode_eq1_max = std::max(rep.ode_eq1_max, std::abs(e1));
      rep.ode_eq2_max = std::max(rep.ode_eq2_max, std::abs(e2));
      for (int v = 0; v < variants_per_r; ++v) {
        const PointN p = point_with_invariant(r, sp.signature, v);
        const PdeResidual res = pde_residual(psi, h, sp, p);
        rep.offdiag_max = std::max(rep.offdiag_max, res.offdiag_max());
        rep.diag_max = std::max(rep.diag_max, res.diag_max());
        ++rep.points_tested;
      }
    } catch (const EvalError& e) {
      rep.skipped.emplace_back(r, e.what());
    }
  }
  rep.pass = rep.points_tested > 0 && rep.offdiag_max < tolerance &&
             rep.diag_max < tolerance && rep.ode_eq1_max < tolerance &&
             rep.ode_eq2_max < tolerance;
  return rep;
}

}  // namespace solitonlab
