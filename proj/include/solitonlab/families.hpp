#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "jet2.hpp"
#include "ode.hpp"
#include "profile.hpp"

namespace solitonlab {

// The zero-scalar-curvature conformal family
//   psi(r) = k2 r / (1 + A r^{(n-2)/2})^{2/(n-2)},  k2 > 0.
// r parametrizes the squared coordinate radius; the family is regular on
// 0 < r < r_singular (r_singular finite only for A < 0). Domains are kept at
// r > 0 even when the exponents are integers; lifting that restriction for
// even n is a possible extension.
struct ZeroCurvatureFamily {
  double A = 0.0;
  double k2 = 1.0;
  int n = 3;

  ZeroCurvatureFamily(double A_, double k2_, int n_) : A(A_), k2(k2_), n(n_) {
    if (n < 3) throw DomainError("zero-curvature family: n >= 3 required");
    if (!(k2 > 0.0)) throw DomainError("zero-curvature family: k2 > 0 required");
  }

  std::string id() const {
    std::ostringstream s;
    s << "family(A=" << A << ",k2=" << k2 << ",n=" << n << ")";
    return s.str();
  }
};

// Largest admissible r: where 1 + A r^{(n-2)/2} reaches 0 (A < 0 only).
inline double family_singular_r(const ZeroCurvatureFamily& f) {
  if (f.A >= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(-1.0 / f.A, 2.0 / (f.n - 2));
}

inline Jet2 family_psi(const ZeroCurvatureFamily& f, double r) {
  if (!(r > 0.0)) throw DomainError(f.id() + ": r > 0 required");
  const Jet2 x = lift_var(r);
  const Jet2 base = 1.0 + f.A * pow(x, 0.5 * (f.n - 2));
  if (base.v <= 0.0) {
    throw SingularLocus(f.id() + ": singular locus at r=" + std::to_string(r) +
                        " (1 + A r^{(n-2)/2} <= 0)");
  }
  return f.k2 * x / pow(base, 2.0 / (f.n - 2));
}

inline RadialProfile family_profile(const ZeroCurvatureFamily& f) {
  return RadialProfile(
      f.id(), [f](double r) { return family_psi(f, r); },
      Interval{0.0, family_singular_r(f)});
}

struct SingularSet {
  bool has_origin = true;
  std::optional<double> sphere_radius;  // coordinate radius, A < 0 only
};

inline SingularSet singular_set(const ZeroCurvatureFamily& f) {
  SingularSet s;
  if (f.A < 0.0) {
    s.sphere_radius = std::pow(-1.0 / f.A, 1.0 / (f.n - 2));
  }
  return s;
}

// Right-hand side of the Bernoulli equation governing y = psi'/psi when the
// scalar curvature vanishes:  y' = -(n/2r) y + ((n-2)/2) y^2.
inline double bernoulli_rhs(int n, double r, double y) {
  if (!(r > 0.0)) throw DomainError("bernoulli_rhs: r > 0 required");
  return -(0.5 * n / r) * y + 0.5 * (n - 2) * y * y;
}

// Coefficient A of the general solution y^{-1} = A r^{n/2} + r fixed by the
// initial condition y(r0) = y0.
inline double bernoulli_param_from_ic(int n, double r0, double y0) {
  if (!(r0 > 0.0)) throw DomainError("bernoulli parameter: r0 > 0 required");
  if (y0 == 0.0) throw DomainError("bernoulli parameter: y0 != 0 required");
  return (1.0 / y0 - r0) / std::pow(r0, 0.5 * n);
}

inline double bernoulli_closed_form(int n, double A, double r) {
  const double inv = A * std::pow(r, 0.5 * n) + r;
  if (inv == 0.0) throw BlowUp("bernoulli closed form: pole at r=" + std::to_string(r));
  return 1.0 / inv;
}

inline double solve_bernoulli(int n, double r0, double y0, double r1,
                              const OdeOptions& opt = {}) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) {
    throw DomainError("solve_bernoulli: radii must be positive");
  }
  return integrate_rk45(
      [n](double r, double y) { return bernoulli_rhs(n, r, y); }, r0, y0, r1,
      opt);
}

// Cylinder profile psi = sqrt(r): the reference complete metric with constant
// positive scalar curvature (n-1)(n-2).
inline Jet2 cylinder_psi(double r) {
  if (!(r > 0.0)) throw DomainError("cylinder_psi: r > 0 required");
  return sqrt(lift_var(r));
}

inline RadialProfile cylinder_profile() {
  return RadialProfile("cylinder", [](double r) { return cylinder_psi(r); });
}

// The negative-curvature conformal factor phi = r exp(-(1 + r^a)^b) with
// a = (n-2)/2 and b = 2/(n-2). The `swapped_exponents` variant exchanges a
// and b; the two coincide for n = 4. The standard variant is the one whose
// curvature is verified negative on the whole ray and is the default
// everywhere.
enum class KazdanVariant { standard, swapped_exponents };

inline Jet2 kazdan_negative_phi(
    int n, double r, KazdanVariant variant = KazdanVariant::standard) {
  if (n < 3) throw DomainError("kazdan_negative_phi: n >= 3 required");
  if (!(r > 0.0)) throw DomainError("kazdan_negative_phi: r > 0 required");
  const double inner = (variant == KazdanVariant::standard)
                           ? 0.5 * (n - 2)
                           : 2.0 / (n - 2);
  const double outer = (variant == KazdanVariant::standard)
                           ? 2.0 / (n - 2)
                           : 0.5 * (n - 2);
  const Jet2 x = lift_var(r);
  return x * exp(-pow(1.0 + pow(x, inner), outer));
}

inline RadialProfile kazdan_negative_profile(
    int n, KazdanVariant variant = KazdanVariant::standard) {
  std::string id = "kazdan-negative(n=" + std::to_string(n) + ")";
  if (variant == KazdanVariant::swapped_exponents) id += "[swapped-exponents]";
  return RadialProfile(
      id, [n, variant](double r) { return kazdan_negative_phi(n, r, variant); });
}

// One leg of the Kazdan triple with its grid verification.
struct LegReport {
  std::string profile_id;
  std::string expectation;
  double k_min = 0.0;
  double k_max = 0.0;
  int points_tested = 0;
  bool pass = false;
};

struct KazdanTriple {
  LegReport positive;
  LegReport zero;
  LegReport negative;
  bool all_pass = false;
};

namespace detail {

inline LegReport verify_leg(const RadialProfile& profile, int n,
                            const std::vector<double>& grid,
                            const std::string& expectation, double target,
                            double tol, bool sign_only) {
  LegReport leg;
  leg.profile_id = profile.id();
  leg.expectation = expectation;
  bool first = true;
  double worst = 0.0;
  for (double r : grid) {
    if (!profile.domain().contains(r)) continue;
    const double k = radial_scalar_curvature(profile, n, r);
    if (first) {
      leg.k_min = leg.k_max = k;
      first = false;
    } else {
      leg.k_min = std::min(leg.k_min, k);
      leg.k_max = std::max(leg.k_max, k);
    }
    worst = std::max(worst, std::abs(k - target));
    ++leg.points_tested;
  }
  if (leg.points_tested == 0) {
    leg.pass = false;
  } else if (sign_only) {
    leg.pass = leg.k_max < 0.0;
  } else {
    leg.pass = worst <= tol;
  }
  return leg;
}

}  // namespace detail

// Three complete metrics on R^n minus the origin with scalar curvature of
// every sign: the cylinder (positive), the A > 0 family member (zero), and
// the negative-curvature profile.
inline KazdanTriple kazdan_triple(int n, const ZeroCurvatureFamily& zero_leg,
                                  const std::vector<double>& grid,
                                  double zero_tol = 1e-8,
                                  double positive_tol = 1e-9) {
  if (zero_leg.n != n) {
    throw DomainError("kazdan_triple: zero-leg dimension mismatch");
  }
  if (!(zero_leg.A > 0.0)) {
    throw DomainError("kazdan_triple: zero leg needs A > 0 for completeness");
  }
  KazdanTriple t;
  const double target = static_cast<double>((n - 1) * (n - 2));
  t.positive = detail::verify_leg(cylinder_profile(), n, grid,
                                  "K == (n-1)(n-2)", target, positive_tol,
                                  /*sign_only=*/false);
  t.zero = detail::verify_leg(family_profile(zero_leg), n, grid, "|K| ~ 0",
                              0.0, zero_tol, /*sign_only=*/false);
  t.negative =
      detail::verify_leg(kazdan_negative_profile(n), n, grid, "K < 0", 0.0,
                         0.0, /*sign_only=*/true);
  t.all_pass = t.positive.pass && t.zero.pass && t.negative.pass;
  return t;
}

inline KazdanTriple kazdan_triple(int n) {
  return kazdan_triple(n, ZeroCurvatureFamily(1.0, 1.0, n),
                       log_grid(0.1, 10.0, 32));
}

}  // namespace solitonlab
