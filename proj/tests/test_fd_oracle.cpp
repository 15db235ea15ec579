#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "solitonlab/families.hpp"
#include "solitonlab/fd_oracle.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/profile.hpp"

using namespace solitonlab;

namespace {

constexpr double kStep = 1e-4;

MetricField constant_diag_field(const Signature& s) {
  MetricField m;
  m.dim = s.dim();
  m.components = [s](const PointN&) {
    Matrix g(s.dim());
    for (int i = 0; i < s.dim(); ++i) g(i, i) = s.eps(i);
    return g;
  };
  return m;
}

}  // namespace

TEST_CASE("flat metric has zero christoffels and curvature") {
  const Signature s = Signature::euclidean(3);
  const PointN p{0.4, -0.9, 1.3};
  const MetricField mf = conformal_metric_field(constant_profile(1.0), s, kStep);
  CHECK(fd_christoffels(mf, p, kStep).max_abs() < 1e-10);
  CHECK(std::abs(fd_scalar_curvature(mf, p, kStep)) < 1e-8);
}

TEST_CASE("constant pseudo-Euclidean metric has zero christoffels") {
  const Signature s = Signature::parse("++-");
  const MetricField mf = constant_diag_field(s);
  CHECK(fd_christoffels(mf, {1.0, 0.5, 0.3}, kStep).max_abs() < 1e-12);
}

TEST_CASE("fd christoffels match the closed conformal form") {
  const Signature s = Signature::euclidean(3);
  const PointN p{1.0, 0.0, 0.0};
  const RadialProfile psi = linear_profile(1.0);
  const MetricField mf = conformal_metric_field(psi, s, kStep);
  const Christoffels fd = fd_christoffels(mf, p, kStep);
  const Christoffels closed = conformal_christoffels(psi, s, p);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(fd(k, i, j) - closed(k, i, j)) < 1e-6);
}

TEST_CASE("cylinder curvature from the oracle") {
  const Signature s = Signature::euclidean(3);
  const double c = 1.0 / std::sqrt(3.0);
  const PointN p{c, c, c};  // r = 1
  const MetricField mf = conformal_metric_field(cylinder_profile(), s, kStep);
  CHECK(std::abs(fd_scalar_curvature(mf, p, kStep) - 2.0) < 1e-4);
}

TEST_CASE("zero-curvature family member through the oracle") {
  const Signature s = Signature::euclidean(4);
  const ZeroCurvatureFamily fam(1.0, 1.0, 4);
  const MetricField mf = conformal_metric_field(family_profile(fam), s, kStep);
  const PointN p = point_with_invariant(2.0, s, 0);
  CHECK(std::abs(fd_scalar_curvature(mf, p, kStep)) < 1e-4);
}

TEST_CASE("first Bianchi identity on the assembled Riemann tensor") {
  const ZeroCurvatureFamily fam(0.5, 1.0, 4);
  for (const auto& sig : {Signature::euclidean(4), Signature::parse("+++-")}) {
    const MetricField mf =
        conformal_metric_field(family_profile(fam), sig, kStep);
    const PointN p = point_with_invariant(1.3, sig, 0);
    const double scale =
        1.0 + fd_riemann_lowered(mf, p, kStep).max_abs();
    CHECK(fd_first_bianchi_max(mf, p, kStep) < 1e-5 * scale);
  }
}

TEST_CASE("fd covariant derivative of the metric vanishes") {
  const ZeroCurvatureFamily fam(1.0, 2.0, 3);
  for (const auto& sig : {Signature::euclidean(3), Signature::parse("++-")}) {
    const MetricField mf =
        conformal_metric_field(family_profile(fam), sig, kStep);
    const PointN p = point_with_invariant(0.9, sig, 1);
    CHECK(fd_metric_compatibility_max(mf, p, kStep) < 1e-6);
  }
}

TEST_CASE("randomized oracle vs closed-form agreement") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> rdist(0.5, 3.0);
  std::uniform_int_distribution<int> pick_profile(0, 3);
  std::uniform_int_distribution<int> pick_sig(0, 3);
  std::uniform_int_distribution<int> pick_variant(0, 2);

  const std::vector<Signature> sigs = {
      Signature::euclidean(3), Signature::euclidean(4),
      Signature::euclidean(5), Signature::parse("++-")};

  for (int trial = 0; trial < 20; ++trial) {
    const Signature& sig = sigs[pick_sig(rng)];
    const int n = sig.dim();
    RadialProfile prof = [&]() -> RadialProfile {
      switch (pick_profile(rng)) {
        case 0:
          return family_profile(ZeroCurvatureFamily(0.5, 1.0, n));
        case 1:
          return cylinder_profile();
        case 2:
          return power_profile(1.6);
        default:
          return kazdan_negative_profile(n);
      }
    }();
    const double r = rdist(rng);
    const PointN p = point_with_invariant(r, sig, pick_variant(rng));
    const double closed = scalar_curvature(prof, sig, p);
    const MetricField mf = conformal_metric_field(prof, sig, kStep);
    const double fd = fd_scalar_curvature(mf, p, kStep);
    CHECK(std::abs(fd - closed) <=
          std::max(1e-6, 1e-4 * std::abs(closed)));
  }
}

TEST_CASE("near-singular points are rejected by the guard") {
  const Signature s = Signature::euclidean(4);
  const ZeroCurvatureFamily fam(-1.0, 1.0, 4);  // singular at r = 1
  const MetricField mf = conformal_metric_field(family_profile(fam), s, kStep);
  const PointN close = point_with_invariant(0.9999, s, 0);
  CHECK_THROWS_AS(fd_christoffels(mf, close, kStep), StencilOutOfDomain);
  const PointN fine = point_with_invariant(0.5, s, 0);
  CHECK(fd_christoffels(mf, fine, kStep).dim() == 4);
}

TEST_CASE("determinant floor flags numerically singular metrics") {
  const Signature s = Signature::euclidean(4);
  MetricField mf = conformal_metric_field(constant_profile(1e6), s, kStep);
  mf.det_floor = 1e-12;
  CHECK_THROWS_AS(fd_christoffels(mf, {1.0, 1.0, 1.0, 1.0}, kStep),
                  SingularMetric);
}

TEST_CASE("stencils that would leave the profile domain are refused") {
  const Signature s = Signature::euclidean(3);
  RadialProfile narrow("narrow", [](double r) { return lift_const(1.0 + 0 * r); },
                       Interval{0.5, 1.5});
  const MetricField mf = conformal_metric_field(narrow, s, kStep);
  CHECK_THROWS_AS(fd_scalar_curvature(mf, point_with_invariant(0.5000001, s, 0), kStep),
                  StencilOutOfDomain);
}
