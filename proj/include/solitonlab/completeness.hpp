#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "jet2.hpp"
#include "minimize.hpp"
#include "profile.hpp"

namespace solitonlab {

// Ratio f(r) = psi_reference(r) / psi_target(r), the factor by which tangent
// norms scale between the two conformal metrics: |v|_target = f(r) |v|_ref.
// A positive lower bound on f transfers completeness from the reference.
inline Jet2 comparison_ratio_jet(const RadialProfile& target,
                                 const RadialProfile& reference, double r) {
  return reference(r) / target(r);
}

inline double comparison_ratio(const RadialProfile& target,
                               const RadialProfile& reference, double r) {
  return comparison_ratio_jet(target, reference, r).v;
}

struct CertifyOptions {
  double scan_lo = 1e-6;
  double scan_hi = 1e6;
  int scan_points = 241;
  double probe_r = 1e-8;        // left-boundary limit probing
  double ladder_factor = 100.0; // right-boundary probe spacing
  int ladder_steps = 3;
  double golden_tol = 1e-13;
  double grid_slack = 1e-9;
  double positive_floor = 1e-12;
};

struct CompletenessCertificate {
  std::string target_id;
  std::string reference_id;
  std::optional<double> minimizer_r;
  double bound_c = 0.0;
  bool attained = false;
  bool certified = false;
  std::string infimum_location;  // "interior", "r->0", "r->inf", "none"
  double second_derivative = 0.0;  // d^2 f / dr^2 at an interior minimizer
  int grid_points_checked = 0;
  bool grid_verified = false;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace detail

// Locates inf f over r in (0, inf) by a log-grid scan plus golden-section
// refinement; monotone boundary infima are estimated by limit probing. The
// certificate records what was actually verified.
inline CompletenessCertificate certify(const RadialProfile& target,
                                       const RadialProfile& reference,
                                       const CertifyOptions& opt = {}) {
  CompletenessCertificate cert;
  cert.target_id = target.id();
  cert.reference_id = reference.id();
  cert.infimum_location = "none";

  const auto ratio = [&](double r) {
    return comparison_ratio(target, reference, r);
  };

  const std::vector<double> rs =
      log_grid(opt.scan_lo, opt.scan_hi, opt.scan_points);
  std::vector<double> fs(rs.size());
  std::vector<bool> ok(rs.size(), false);
  int skipped = 0;
  for (size_t i = 0; i < rs.size(); ++i) {
    try {
      fs[i] = ratio(rs[i]);
      ok[i] = std::isfinite(fs[i]);
    } catch (const EvalError&) {
      ok[i] = false;
    }
    if (!ok[i]) ++skipped;
  }
  if (skipped > 0) {
    cert.notes.push_back("scan skipped " + std::to_string(skipped) +
                         " of " + std::to_string(rs.size()) + " grid points");
  }

  int first = -1, last = -1, argmin = -1;
  for (size_t i = 0; i < rs.size(); ++i) {
    if (!ok[i]) continue;
    if (first < 0) first = static_cast<int>(i);
    last = static_cast<int>(i);
    if (argmin < 0 || fs[i] < fs[argmin]) argmin = static_cast<int>(i);
  }
  if (argmin < 0) {
    cert.notes.push_back("ratio undefined on the whole scan range");
    return cert;
  }

  if (argmin > first && argmin < last) {
    // interior minimum: refine over log r between the nearest valid
    // neighbors
    int lo_idx = argmin - 1;
    while (lo_idx > 0 && !ok[lo_idx]) --lo_idx;
    int hi_idx = argmin + 1;
    while (hi_idx + 1 < static_cast<int>(rs.size()) && !ok[hi_idx]) ++hi_idx;
    const double ta = std::log(rs[lo_idx]);
    const double tb = std::log(rs[hi_idx]);
    const Minimum m = golden_section(
        [&](double t) { return ratio(std::exp(t)); }, ta, tb, opt.golden_tol);
    cert.minimizer_r = std::exp(m.x);
    cert.bound_c = m.value;
    cert.attained = true;
    cert.infimum_location = "interior";
    cert.second_derivative =
        comparison_ratio_jet(target, reference, *cert.minimizer_r).d2;
  } else if (argmin == first && first == 0) {
    // decreasing toward r -> 0: estimate the limit by Richardson probing.
    // A ratio still falling materially at the probe scale is decaying to an
    // unverified (possibly zero) limit and certifies nothing; convergence
    // to a positive limit leaves only an O(probe) linear tail, which the
    // two-point extrapolation removes.
    cert.infimum_location = "r->0";
    cert.attained = false;
    try {
      const double f1 = ratio(opt.probe_r);
      const double f2 = ratio(opt.probe_r / 2.0);
      if (!(f2 > 0.0) || f1 / f2 > 1.0 + 1e-3) {
        cert.bound_c = 0.0;
        cert.notes.push_back("ratio still falling at r=" +
                             detail::fmt(opt.probe_r) +
                             "; no positive limit certified");
      } else {
        cert.bound_c = 2.0 * f2 - f1;
        cert.notes.push_back("limit probe f(" + detail::fmt(opt.probe_r) +
                             ")=" + detail::fmt(f1) + ", f(" +
                             detail::fmt(opt.probe_r / 2.0) + ")=" +
                             detail::fmt(f2) + ", extrapolated " +
                             detail::fmt(cert.bound_c));
      }
    } catch (const EvalError& e) {
      cert.notes.push_back(std::string("limit probe failed: ") + e.what());
      cert.bound_c = fs[argmin];
    }
  } else if (argmin == last && last + 1 == static_cast<int>(rs.size())) {
    // decreasing toward r -> inf: probe a geometric ladder and decide
    // whether the ratio keeps decaying (infimum 0) or plateaus
    cert.infimum_location = "r->inf";
    cert.attained = false;
    double prev = fs[argmin];
    double lastval = prev;
    bool decaying = true;
    double r = rs[argmin];
    for (int k = 0; k < opt.ladder_steps; ++k) {
      r *= opt.ladder_factor;
      try {
        lastval = ratio(r);
      } catch (const EvalError& e) {
        cert.notes.push_back(std::string("ladder probe failed: ") + e.what());
        break;
      }
      cert.notes.push_back("ladder probe f(" + detail::fmt(r) + ")=" +
                           detail::fmt(lastval));
      if (!(lastval < prev * (1.0 - 1e-6))) {
        decaying = false;
        break;
      }
      prev = lastval;
    }
    if (decaying && lastval < 0.9 * fs[argmin]) {
      cert.bound_c = 0.0;
      cert.notes.push_back("ratio decays toward r->inf; no positive bound");
    } else {
      cert.bound_c = lastval;
    }
  } else {
    // minimum at the edge of the *usable* range: a domain boundary sits
    // inside the scan window (a singular sphere, say). Probe a geometric
    // sequence toward that boundary; if the ratio keeps falling the infimum
    // is treated as its limit, which voids the bound when it reaches 0.
    cert.infimum_location = "domain-edge";
    cert.attained = false;
    const bool toward_hi = (argmin == last);
    const double edge = toward_hi ? std::min(target.domain().hi,
                                             reference.domain().hi)
                                  : std::max(target.domain().lo,
                                             reference.domain().lo);
    double best = fs[argmin];
    if (std::isfinite(edge)) {
      double gap = std::abs(edge - rs[argmin]);
      for (int k = 0; k < 12 && gap > 0.0; ++k) {
        gap /= 4.0;
        const double rp = toward_hi ? edge - gap : edge + gap;
        try {
          best = std::min(best, ratio(rp));
        } catch (const EvalError&) {
          break;
        }
      }
      cert.notes.push_back("edge probe toward r=" + detail::fmt(edge) +
                           " reached ratio " + detail::fmt(best));
    }
    if (best < 0.5 * fs[argmin]) {
      // still falling at the resolution limit: no positive bound certified
      cert.bound_c = 0.0;
      cert.notes.push_back("ratio decays toward the domain edge; "
                           "no positive bound");
    } else {
      cert.bound_c = best;
      cert.notes.push_back("infimum estimated at domain edge r=" +
                           detail::fmt(rs[argmin]));
    }
  }

  // verify the claimed bound against every usable scan sample
  cert.grid_verified = true;
  for (size_t i = 0; i < rs.size(); ++i) {
    if (!ok[i]) continue;
    ++cert.grid_points_checked;
    if (fs[i] < cert.bound_c * (1.0 - opt.grid_slack)) {
      cert.grid_verified = false;
    }
  }
  cert.certified = cert.grid_verified && cert.bound_c > opt.positive_floor;
  return cert;
}

// Bookkeeping for the comparison chain: certificates may only lean on
// references already known to be complete, starting from registered roots.
class CompletenessRegistry {
 public:
  void add_known_complete(const std::string& id) { known_.insert(id); }
  bool is_known_complete(const std::string& id) const {
    return known_.count(id) > 0;
  }

  CompletenessCertificate certify_chained(const RadialProfile& target,
                                          const RadialProfile& reference,
                                          const CertifyOptions& opt = {}) {
    if (!is_known_complete(reference.id())) {
      throw NotKnownComplete("reference '" + reference.id() +
                             "' is not registered as known-complete");
    }
    CompletenessCertificate cert = certify(target, reference, opt);
    if (cert.certified) {
      known_.insert(target.id());
    }
    return cert;
  }

 private:
  std::set<std::string> known_;
};

}  // namespace solitonlab
