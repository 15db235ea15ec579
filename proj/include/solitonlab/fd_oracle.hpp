#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "profile.hpp"

// Brute-force curvature from pointwise metric components via central
// differences. This module differentiates raw metric values only and never
// touches the closed-form conformal calculus, so it can serve as an
// independent oracle for it.

namespace solitonlab {

struct MetricField {
  int dim = 0;
  std::function<Matrix(const PointN&)> components;
  std::function<bool(const PointN&)> admissible;  // null -> everywhere
  double det_floor = 1e-30;
};

namespace fd_detail {

inline double coord_step(double xi, double step) {
  return std::max(std::abs(xi), 1.0) * step;
}

inline Matrix metric_at(const MetricField& m, const PointN& p) {
  try {
    return m.components(p);
  } catch (const SingularMetric&) {
    throw;
  } catch (const ConformalFactorZero&) {
    throw;
  } catch (const EvalError& e) {
    throw StencilOutOfDomain(std::string("metric stencil left domain: ") +
                             e.what());
  }
}

// Central difference of the metric along coordinate l.
inline Matrix metric_partial(const MetricField& m, const PointN& p, int l,
                             double step) {
  const double h = coord_step(p[l], step);
  PointN plus = p;
  PointN minus = p;
  plus[l] += h;
  minus[l] -= h;
  const Matrix gp = metric_at(m, plus);
  const Matrix gm = metric_at(m, minus);
  Matrix d(m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) d(i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
  return d;
}

inline void check_admissible(const MetricField& m, const PointN& p) {
  if (static_cast<int>(p.size()) != m.dim) {
    throw DimensionMismatch("fd oracle: point dimension != metric dimension");
  }
  if (m.admissible && !m.admissible(p)) {
    throw StencilOutOfDomain("fd oracle: point rejected by admissibility guard");
  }
}

}  // namespace fd_detail

// Gamma^k_ij = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
inline Christoffels fd_christoffels(const MetricField& m, const PointN& p,
                                    double step) {
  fd_detail::check_admissible(m, p);
  if (!(step > 0.0)) throw DomainError("fd_christoffels: step must be > 0");
  const int n = m.dim;

  const Matrix g = fd_detail::metric_at(m, p);
  const Matrix ginv = g.inverse(m.det_floor);
  std::vector<Matrix> dg;
  dg.reserve(n);
  for (int l = 0; l < n; ++l) {
    dg.push_back(fd_detail::metric_partial(m, p, l, step));
  }

  Christoffels gam(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        gam.set_sym(k, i, j, 0.5 * sum);
      }
    }
  }
  return gam;
}

// Riemann from Gamma and its central differences:
//   R^a_{b c d} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//                 + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
inline Tensor4 fd_riemann(const MetricField& m, const PointN& p, double step) {
  fd_detail::check_admissible(m, p);
  const int n = m.dim;

  const Christoffels gam = fd_christoffels(m, p, step);
  std::vector<Christoffels> dgam;
  dgam.reserve(n);
  for (int c = 0; c < n; ++c) {
    const double h = fd_detail::coord_step(p[c], step);
    PointN plus = p;
    PointN minus = p;
    plus[c] += h;
    minus[c] -= h;
    const Christoffels gp = fd_christoffels(m, plus, step);
    const Christoffels gm = fd_christoffels(m, minus, step);
    Christoffels d(n);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d(a, i, j) = (gp(a, i, j) - gm(a, i, j)) / (2.0 * h);
    dgam.push_back(std::move(d));
  }

  Tensor4 riem(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double val = dgam[c](a, d, b) - dgam[d](a, c, b);
          for (int e = 0; e < n; ++e) {
            val += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
          }
          riem(a, b, c, d) = val;
        }
      }
    }
  }
  return riem;
}

inline Matrix fd_ricci(const MetricField& m, const PointN& p, double step) {
  const Tensor4 riem = fd_riemann(m, p, step);
  const int n = m.dim;
  Matrix ric(n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a) sum += riem(a, b, a, d);
      ric(b, d) = sum;
    }
  return ric;
}

inline double fd_scalar_curvature(const MetricField& m, const PointN& p,
                                  double step) {
  const Matrix ric = fd_ricci(m, p, step);
  const Matrix ginv = fd_detail::metric_at(m, p).inverse(m.det_floor);
  const int n = m.dim;
  double r = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) r += ginv(b, d) * ric(b, d);
  return r;
}

inline Tensor4 fd_riemann_lowered(const MetricField& m, const PointN& p,
                                  double step) {
  const Tensor4 up = fd_riemann(m, p, step);
  const Matrix g = fd_detail::metric_at(m, p);
  const int n = m.dim;
  Tensor4 low(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double sum = 0.0;
          for (int e = 0; e < n; ++e) sum += g(a, e) * up(e, b, c, d);
          low(a, b, c, d) = sum;
        }
  return low;
}

// Max of |R_{abcd} + R_{acdb} + R_{adbc}| over all indices (first Bianchi).
inline double fd_first_bianchi_max(const MetricField& m, const PointN& p,
                                   double step) {
  const Tensor4 low = fd_riemann_lowered(m, p, step);
  const int n = m.dim;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double cyc =
              low(a, b, c, d) + low(a, c, d, b) + low(a, d, b, c);
          worst = std::max(worst, std::abs(cyc));
        }
  return worst;
}

// Max of |nabla_c g_{ab}| over all indices (metric compatibility).
inline double fd_metric_compatibility_max(const MetricField& m,
                                          const PointN& p, double step) {
  fd_detail::check_admissible(m, p);
  const int n = m.dim;
  const Christoffels gam = fd_christoffels(m, p, step);
  const Matrix g = fd_detail::metric_at(m, p);
  double worst = 0.0;
  for (int c = 0; c < n; ++c) {
    const Matrix dg = fd_detail::metric_partial(m, p, c, step);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double cov = dg(a, b);
        for (int e = 0; e < n; ++e) {
          cov -= gam(e, c, a) * g(e, b) + gam(e, c, b) * g(a, e);
        }
        worst = std::max(worst, std::abs(cov));
      }
  }
  return worst;
}

// Metric field of gbar = g/psi^2 over the given signature, built from raw
// profile values. The admissibility guard rejects points whose nested
// stencils could reach the profile's singular set.
inline MetricField conformal_metric_field(const RadialProfile& psi,
                                          const Signature& s, double step,
                                          double guard_factor = 10.0) {
  MetricField m;
  m.dim = s.dim();
  m.components = [psi, s](const PointN& x) {
    const double r = radial_invariant(x, s);
    const Jet2 pj = psi(r);
    if (pj.v == 0.0) {
      throw ConformalFactorZero("conformal metric: psi(r)=0 at r=" +
                                std::to_string(r));
    }
    Matrix g(s.dim());
    const double w = 1.0 / (pj.v * pj.v);
    for (int i = 0; i < s.dim(); ++i) g(i, i) = s.eps(i) * w;
    return g;
  };
  m.admissible = [psi, s, step, guard_factor](const PointN& x) {
    const double r = radial_invariant(x, s);
    double reach = 0.0;
    for (double xi : x) {
      const double h = fd_detail::coord_step(xi, step);
      // two nested shifts along the same coordinate at worst
      reach = std::max(reach, 2.0 * (2.0 * std::abs(xi) * h + h * h) +
                                  2.0 * h * h);
    }
    const double margin = guard_factor * reach;
    const Interval& dom = psi.domain();
    return (r - margin) > dom.lo && (r + margin) < dom.hi;
  };
  return m;
}

}  // namespace solitonlab
