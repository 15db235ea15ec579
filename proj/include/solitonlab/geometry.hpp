#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "jet2.hpp"
#include "linalg.hpp"
#include "profile.hpp"

namespace solitonlab {

// Coordinate partials of a radial function f(r), r = sum eps_k x_k^2,
// obtained from its jet by the chain rule:
//   f_{,x_i}     = 2 eps_i x_i f'
//   f_{,x_i x_i} = 4 x_i^2 f'' + 2 eps_i f'
//   f_{,x_i x_j} = 4 eps_i eps_j x_i x_j f''   (i != j)
struct RadialPartials {
  double value = 0.0;
  std::vector<double> d;  // d[i] = f_{,x_i}
  Matrix dd;              // dd(i,j) = f_{,x_i x_j}

  explicit RadialPartials(int n) : d(n, 0.0), dd(n) {}
};

inline RadialPartials radial_partials(const Jet2& f, const Signature& s,
                                      const PointN& x) {
  const int n = s.dim();
  if (static_cast<int>(x.size()) != n) {
    throw DimensionMismatch("radial_partials: point/signature dimensions");
  }
  RadialPartials out(n);
  out.value = f.v;
  for (int i = 0; i < n; ++i) {
    out.d[i] = 2.0 * s.eps(i) * x[i] * f.d1;
  }
  for (int i = 0; i < n; ++i) {
    out.dd(i, i) = 4.0 * x[i] * x[i] * f.d2 + 2.0 * s.eps(i) * f.d1;
    for (int j = i + 1; j < n; ++j) {
      const double v = 4.0 * s.eps(i) * s.eps(j) * x[i] * x[j] * f.d2;
      out.dd(i, j) = v;
      out.dd(j, i) = v;
    }
  }
  return out;
}

namespace detail {

inline RadialPartials profile_partials(const RadialProfile& f,
                                       const Signature& s, const PointN& p) {
  const double r = radial_invariant(p, s);
  return radial_partials(f(r), s, p);
}

inline void require_nonzero_factor(const RadialPartials& psi,
                                   const std::string& who) {
  if (psi.value == 0.0) {
    throw ConformalFactorZero(who + ": conformal factor psi vanishes");
  }
}

}  // namespace detail

// Christoffel symbols of gbar = g/psi^2:
//   Gamma^k_ij = 0 for distinct i, j, k
//   Gamma^i_ij = -psi_{,x_j}/psi
//   Gamma^k_ii = eps_i eps_k psi_{,x_k}/psi   (k != i)
//   Gamma^i_ii = -psi_{,x_i}/psi
inline Christoffels conformal_christoffels(const RadialProfile& psi,
                                           const Signature& s,
                                           const PointN& p) {
  const int n = s.dim();
  const RadialPartials ps = detail::profile_partials(psi, s, p);
  detail::require_nonzero_factor(ps, "conformal_christoffels");

  Christoffels gam(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double v = 0.0;
        if (i == j) {
          v = (k == i) ? -ps.d[i] / ps.value
                       : s.eps(i) * s.eps(k) * ps.d[k] / ps.value;
        } else if (k == i) {
          v = -ps.d[j] / ps.value;
        } else if (k == j) {
          v = -ps.d[i] / ps.value;
        }
        gam.set_sym(k, i, j, v);
      }
    }
  }
  return gam;
}

// Hessian of h with respect to gbar = g/psi^2:
//   off-diagonal: h_{,x_i x_j} + (psi_{,x_j} h_{,x_i} + psi_{,x_i} h_{,x_j})/psi
//   diagonal:     h_{,x_i x_i} + 2 psi_{,x_i} h_{,x_i}/psi
//                 - eps_i sum_k eps_k psi_{,x_k} h_{,x_k}/psi
inline Matrix conformal_hessian(const RadialProfile& h,
                                const RadialProfile& psi, const Signature& s,
                                const PointN& p) {
  const int n = s.dim();
  const RadialPartials ps = detail::profile_partials(psi, s, p);
  const RadialPartials hs = detail::profile_partials(h, s, p);
  detail::require_nonzero_factor(ps, "conformal_hessian");

  double grad_dot = 0.0;
  for (int k = 0; k < n; ++k) {
    grad_dot += s.eps(k) * ps.d[k] * hs.d[k];
  }

  Matrix hess(n);
  for (int i = 0; i < n; ++i) {
    hess(i, i) = hs.dd(i, i) + 2.0 * ps.d[i] * hs.d[i] / ps.value -
                 s.eps(i) * grad_dot / ps.value;
    for (int j = i + 1; j < n; ++j) {
      const double v =
          hs.dd(i, j) + (ps.d[j] * hs.d[i] + ps.d[i] * hs.d[j]) / ps.value;
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

// Ricci tensor of gbar = g/psi^2:
//   Ric = (1/psi^2) { (n-2) psi Hess_g(psi)
//                     + [psi Lap_g(psi) - (n-1)|grad_g psi|^2] g }
inline Matrix conformal_ricci(const RadialProfile& psi, const Signature& s,
                              const PointN& p) {
  const int n = s.dim();
  const RadialPartials ps = detail::profile_partials(psi, s, p);
  detail::require_nonzero_factor(ps, "conformal_ricci");

  double lap = 0.0;
  double grad2 = 0.0;
  for (int k = 0; k < n; ++k) {
    lap += s.eps(k) * ps.dd(k, k);
    grad2 += s.eps(k) * ps.d[k] * ps.d[k];
  }
  const double trace_part = ps.value * lap - (n - 1) * grad2;
  const double inv_psi2 = 1.0 / (ps.value * ps.value);

  Matrix ric(n);
  for (int i = 0; i < n; ++i) {
    ric(i, i) =
        inv_psi2 * ((n - 2) * ps.value * ps.dd(i, i) + trace_part * s.eps(i));
    for (int j = i + 1; j < n; ++j) {
      const double v = inv_psi2 * (n - 2) * ps.value * ps.dd(i, j);
      ric(i, j) = v;
      ric(j, i) = v;
    }
  }
  return ric;
}

// Trace of a symmetric tensor against gbar^{ij} = psi^2 eps_i delta^{ij}.
inline double gbar_trace(const Matrix& t, double psi_value,
                         const Signature& s) {
  double tr = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    tr += s.eps(i) * t(i, i);
  }
  return psi_value * psi_value * tr;
}

// Scalar curvature of gbar = g/psi^2:
//   R = (n-1) (2 psi Lap_g(psi) - n |grad_g psi|^2)
inline double scalar_curvature(const RadialProfile& psi, const Signature& s,
                               const PointN& p) {
  const int n = s.dim();
  const RadialPartials ps = detail::profile_partials(psi, s, p);

  double lap = 0.0;
  double grad2 = 0.0;
  for (int k = 0; k < n; ++k) {
    lap += s.eps(k) * ps.dd(k, k);
    grad2 += s.eps(k) * ps.d[k] * ps.d[k];
  }
  return (n - 1) * (2.0 * ps.value * lap - n * grad2);
}

// Radial reduction of the scalar curvature for gbar = g/phi(r)^2:
//   K = 4r [2(n-1) phi phi'' - n(n-1) (phi')^2] + 4n(n-1) phi phi'
inline double radial_scalar_curvature(const RadialProfile& phi, int n,
                                      double r) {
  if (n < 3) throw DomainError("radial_scalar_curvature: n >= 3 required");
  const Jet2 f = phi(r);
  return 4.0 * r *
             (2.0 * (n - 1) * f.v * f.d2 - n * (n - 1) * f.d1 * f.d1) +
         4.0 * n * (n - 1) * f.v * f.d1;
}

}  // namespace solitonlab
