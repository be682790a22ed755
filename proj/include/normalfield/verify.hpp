#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "normalfield/coords.hpp"
#include "normalfield/core.hpp"
#include "normalfield/curvature.hpp"
#include "normalfield/disturbance.hpp"
#include "normalfield/field.hpp"
#include "normalfield/geodetic.hpp"
#include "normalfield/numdiff.hpp"
#include "normalfield/potential.hpp"
#include "normalfield/reference.hpp"

namespace normalfield {

struct VerifyOptions {
  std::uint64_t seed = 42;
  int count = 50;
  double tolerance_scale = 1.0;  ///< multiplies every numeric tolerance
};

struct VerifyCheck {
  std::string name;
  bool passed = true;
  bool skipped = false;  ///< every point was domain-gated away
  double worst = 0;      ///< worst observed error in the check's metric
  double tol = 0;
  int points = 0;
  int gated = 0;
  std::string worst_at;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.passed) return false;
    return true;
  }
};

/// Point-mass configuration used by the quadratic-scaling check: one mass
/// buried 100 km below the equatorial evaluation point with a 1 km eastward
/// offset.  mu is sized so the deflection is ~4e-6 rad while T's Hessian
/// stays ~2.5% of U's; at the equator U_yz = 0 and the mass placement keeps
/// the north deflection zero, so the first-order couplings vanish and the
/// relation residual is cleanly quadratic in the mass scaling (and about six
/// orders of magnitude above double rounding).
inline PointMassModeld default_relation_model(const EllipsoidParamsd& p) {
  PointMassModeld m;
  m.masses.push_back({4e7, Vec3<double>(p.a - 100000.0, 1000.0, 0.0)});
  return m;
}

inline Vec3<double> default_relation_point(const EllipsoidParamsd& p) {
  return Vec3<double>(p.a, 0.0, 0.0);
}

/// Least-squares slope of log|residual| against log(scale); NaN when any
/// residual vanishes (e.g. an empty model) or fewer than two scales remain.
inline double residual_loglog_slope(const std::vector<double>& scales,
                                    const std::vector<double>& residuals) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (scales.size() != residuals.size() || scales.size() < 2) return nan;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0) || residuals[i] == 0 || !std::isfinite(residuals[i]))
      return nan;
    xs.push_back(std::log(scales[i]));
    ys.push_back(std::log(std::fabs(residuals[i])));
  }
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= double(xs.size());
  ym /= double(ys.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  return den > 0 ? num / den : nan;
}

namespace detail {

/// Deterministic uniform deviates; the 53 high bits of the engine output.
class Uniform {
public:
  explicit Uniform(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return std::ldexp(double(eng_() >> 11), -53); }
  double range(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

private:
  std::mt19937_64 eng_;
};

inline std::string describe_point(const HarmonicCoordd& h) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "u=%.10g beta=%.10g lambda=%.10g", h.u, h.beta,
                h.lambda);
  return buf;
}

/// Pseudo-random exterior sweep.  count == 1 pins the sweep to a fixed
/// near-equatorial anchor where |gamma_Z| < 0.1 |gamma|, which forces the
/// domain-gated graph check to skip while every other check still runs (at
/// 5 degrees the plumbline quantities are safely nonzero).
inline std::vector<HarmonicCoordd> sweep_points(const EllipsoidParamsd& p,
                                                std::uint64_t seed, int count,
                                                double beta_lo_deg, double beta_hi_deg,
                                                double umax_over_b) {
  constexpr double deg = std::numbers::pi / 180;
  std::vector<HarmonicCoordd> pts;
  if (count == 1) {
    pts.push_back({1.05 * p.b, 5 * deg, 0.3});
    return pts;
  }
  Uniform rng(seed);
  pts.reserve(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    const double u = p.b * rng.range(1.0, umax_over_b);
    const double mag = rng.range(beta_lo_deg, beta_hi_deg) * deg;
    const double sign = rng() < 0.5 ? -1.0 : 1.0;
    const double lambda = rng.range(-std::numbers::pi, std::numbers::pi);
    pts.push_back({u, sign * mag, lambda});
  }
  return pts;
}

class CheckBuilder {
public:
  CheckBuilder(std::string name, double tol, double scale) {
    c_.name = std::move(name);
    c_.tol = tol * scale;
  }

  void observe(double err, const std::string& at) {
    ++c_.points;
    if (err > c_.worst || c_.points == 1) {
      c_.worst = err;
      c_.worst_at = at;
    }
  }

  void gate() { ++c_.gated; }

  VerifyCheck finish() {
    if (c_.points == 0) {
      c_.skipped = true;
      c_.passed = true;
    } else {
      c_.passed = c_.worst <= c_.tol;
    }
    return c_;
  }

private:
  VerifyCheck c_;
};

inline double rel_to(double value, double ref) {
  return std::fabs(value - ref) / std::fabs(ref);
}

}  // namespace detail

/**
 * Runs the whole invariant suite at `count` seeded pseudo-random exterior
 * points and at the fixed surface/axis anchors, collecting per-check
 * worst-case errors.  The report is a pure function of (params, options), so
 * repeated runs are bit-identical.
 */
inline VerifyReport run_verification(const EllipsoidParamsd& p, const VerifyOptions& opt) {
  using detail::CheckBuilder;
  using detail::describe_point;
  using detail::rel_to;
  constexpr double pi = std::numbers::pi;
  if (opt.count < 1) throw DomainError("verification needs count >= 1");
  const double scale = opt.tolerance_scale;
  if (!(scale > 0)) throw DomainError("tolerance scale must be positive");
  VerifyReport report;

  // Two sweep domains: a wide one for transform identities, and a
  // mid-latitude one for curvature cross-checks, away from the equator and
  // pole where the compared quantities legitimately vanish or gate out.
  const auto wide = detail::sweep_points(p, opt.seed, opt.count, 0.0, 85.0, 3.0);
  const auto mid = detail::sweep_points(p, opt.seed + 1, opt.count, 10.0, 80.0, 2.0);
  const double om2x2 = 2 * p.omega * p.omega;

  {
    CheckBuilder c("trace_identity", 1e-10, scale);
    for (const auto& h : wide) {
      const FieldJet2d jet = field_jet(p, h);
      const double denom = om2x2 > 0 ? om2x2 : jet.hess.norm();
      c.observe(std::fabs(jet.hess.trace() - om2x2) / denom, describe_point(h));
    }
    report.checks.push_back(c.finish());
  }

  const auto Ufield = [&p](const Vec3<double>& y) {
    const HarmonicCoordd hc = from_cartesian(p, y);
    return potential(p, hc.u, hc.beta);
  };

  {
    CheckBuilder cg("gradient_fd", 1e-7, scale);
    CheckBuilder ch("hessian_fd", 1e-5, scale);
    for (const auto& h : wide) {
      const Vec3<double> x = to_cartesian(p, h);
      const FieldJet2d jet = field_jet(p, x);
      FDConfig<double> cfg(1e-4);
      cfg.abs_floor = Vec3<double>::Constant(cfg.rel_step * x.norm());
      const Vec3<double> gfd = fd_gradient(Ufield, x, cfg);
      const Sym3<double> hfd = fd_hessian(Ufield, x, cfg);
      cg.observe((jet.gamma - gfd).norm() / jet.gamma_mag, describe_point(h));
      ch.observe((jet.hess - hfd).norm() / jet.hess.norm(), describe_point(h));
    }
    report.checks.push_back(cg.finish());
    report.checks.push_back(ch.finish());
  }

  {
    CheckBuilder c("somigliana_surface", 1e-9, scale);
    for (int i = 0; i <= 18; ++i) {
      const double lat = i * 5.0 * pi / 180;
      const FieldJet2d jet = field_jet(p, surface_point(p, lat, 0.4));
      char at[64];
      std::snprintf(at, sizeof at, "lat=%g deg", i * 5.0);
      c.observe(rel_to(jet.gamma_mag, reference::somigliana_gravity(p, lat)), at);
    }
    report.checks.push_back(c.finish());
  }

  {
    CheckBuilder c("surface_curvature", 1e-8, scale);
    for (int i = 0; i <= 18; ++i) {
      const double lat = i * 5.0 * pi / 180;
      const Vec3<double> x = surface_point(p, lat, -0.2);
      const FieldJet2d jet = field_jet(p, x);
      const CurvatureSummary<double> s = curvature_summary(p, jet, x);
      const double M = reference::meridian_radius(p, lat);
      const double N = reference::prime_vertical_radius(p, lat);
      char at[64];
      std::snprintf(at, sizeof at, "lat=%g deg", i * 5.0);
      c.observe(rel_to(s.K_G, 1 / (M * N)), at);
      c.observe(rel_to(s.k1, 1 / N), at);
      c.observe(rel_to(std::fabs(s.J), 1 / M + 1 / N), at);
    }
    report.checks.push_back(c.finish());
  }

  {
    CheckBuilder c("graph_vs_general", 1e-10, scale);
    for (const auto& h : mid) {
      const FieldJet2d jet = field_jet(p, h);
      const double Kg = gauss_curvature_general(jet);
      try {
        c.observe(rel_to(gauss_curvature_graph(jet), Kg), describe_point(h));
      } catch (const GraphDegenerateError&) {
        c.gate();
      }
    }
    report.checks.push_back(c.finish());
  }

  {
    // The graph form must refuse the equator, where the level surface is not
    // a graph over Z.
    CheckBuilder c("graph_rejects_equator", 0.0, 1.0);
    const FieldJet2d jet = field_jet(p, Vec3<double>(p.a + 500.0, 0.0, 0.0));
    bool rejected = false;
    try {
      (void)gauss_curvature_graph(jet);
    } catch (const GraphDegenerateError&) {
      rejected = true;
    }
    c.observe(rejected ? 0.0 : 1.0, "equator");
    report.checks.push_back(c.finish());
  }

  {
    CheckBuilder c("plumbline_cross_frame", 1e-10, scale);
    for (const auto& h : mid) {
      const Vec3<double> x = to_cartesian(p, h);
      const FieldJet2d jet = field_jet(p, x);
      const double k_global = plumbline_curvature_global(jet);
      const Sym3<double> local = rotate_hessian(jet.hess, local_frame(jet));
      const double k_frame = std::fabs(local.yz()) / jet.gamma_mag;
      c.observe(rel_to(k_global, k_frame), describe_point(h));
    }
    report.checks.push_back(c.finish());
  }

  {
    // The plumbline is straight where symmetry demands it.
    CheckBuilder c("plumbline_zero_equator_pole", 1e-12, scale);
    const FieldJet2d eq = field_jet(p, Vec3<double>(p.a, 0.0, 0.0));
    const FieldJet2d ax = field_jet(p, Vec3<double>(0.0, 0.0, p.b + 1000.0));
    c.observe(plumbline_curvature_global(eq), "equator");
    c.observe(plumbline_curvature_global(ax), "axis");
    report.checks.push_back(c.finish());
  }

  {
    // Entrywise agreement of the curvature-assembled matrix with the rotated
    // Hessian; metric is |difference| / max(1e-9 |entry|, 1e-12 s^-2), i.e.
    // values <= 1 pass at unit tolerance.
    CheckBuilder c("assembly_vs_rotation", 1.0, scale);
    for (const auto& h : mid) {
      const Vec3<double> x = to_cartesian(p, h);
      const FieldJet2d jet = field_jet(p, x);
      const EotvosMatrix<double> asm_ = eotvos_assemble(p, jet, x);
      const Sym3<double> rot = rotate_hessian(jet.hess, local_frame(jet));
      const Sym3<double> diff = asm_.sym() - rot;
      double worst = 0;
      for (int i = 0; i < 6; ++i) {
        const double allow =
            std::max(1e-9 * std::fabs(rot.coeffs()(i)), 1e-12);
        worst = std::max(worst, std::fabs(diff.coeffs()(i)) / allow);
      }
      c.observe(worst, describe_point(h));
    }
    report.checks.push_back(c.finish());
  }

  {
    CheckBuilder c("lambda_invariance", 1e-12, scale);
    for (const auto& h : mid) {
      HarmonicCoordd h2 = h;
      h2.lambda += 0.7;
      const Vec3<double> x1 = to_cartesian(p, h);
      const Vec3<double> x2 = to_cartesian(p, h2);
      const FieldJet2d j1 = field_jet(p, x1);
      const FieldJet2d j2 = field_jet(p, x2);
      const CurvatureSummary<double> s1 = curvature_summary(p, j1, x1);
      const CurvatureSummary<double> s2 = curvature_summary(p, j2, x2);
      double worst = rel_to(j2.gamma_mag, j1.gamma_mag);
      worst = std::max(worst, rel_to(s2.K_G, s1.K_G));
      worst = std::max(worst, rel_to(s2.J, s1.J));
      worst = std::max(worst, rel_to(s2.k1, s1.k1));
      worst = std::max(worst, rel_to(s2.k_pl, s1.k_pl));
      worst = std::max(worst, rel_to(s2.phi_N, s1.phi_N));
      c.observe(worst, describe_point(h));
    }
    report.checks.push_back(c.finish());
  }

  {
    // Harmonicity carries over to the disturbed field: trace(W'') = 2 omega^2.
    CheckBuilder c("harmonicity_actual", 1e-10, scale);
    const PointMassModeld model = default_relation_model(p);
    for (const auto& h : mid) {
      const Vec3<double> x = to_cartesian(p, h);
      const FieldJet2d jet = actual_field_jet(p, model, x);
      const double denom = om2x2 > 0 ? om2x2 : jet.hess.norm();
      c.observe(std::fabs(jet.hess.trace() - om2x2) / denom, describe_point(h));
    }
    report.checks.push_back(c.finish());
  }

  {
    // Pure algebra: the same-frame curvature relation is an identity for
    // arbitrary symmetric tangential blocks, not just gravitational ones.
    CheckBuilder c("same_frame_identity", 1e-13, scale);
    detail::Uniform rng(opt.seed + 2);
    for (int i = 0; i < std::max(opt.count, 16); ++i) {
      const double Uxx = -rng.range(1e-7, 5e-6);
      const double Uyy = -rng.range(1e-7, 5e-6);
      const double Txx = rng.range(-1e-6, 1e-6);
      const double Txy = rng.range(-1e-6, 1e-6);
      const double Tyy = rng.range(-1e-6, 1e-6);
      const double rhs = (Uxx + Txx) * (Uyy + Tyy) - Txy * Txy;
      const double res = same_frame_relation_residual(Uxx, Uyy, Txx, Txy, Tyy);
      char at[128];
      std::snprintf(at, sizeof at, "U_xx=%.6g U_yy=%.6g T=(%.6g,%.6g,%.6g)", Uxx,
                    Uyy, Txx, Txy, Tyy);
      c.observe(std::fabs(res) / std::fabs(rhs), at);
    }
    report.checks.push_back(c.finish());
  }

  {
    // Cross-frame residual of the curvature relation scales quadratically
    // with the mass strength; metric is |fitted slope - 2|.
    CheckBuilder c("relation_quadratic_scaling", 0.1, scale);
    const PointMassModeld model = default_relation_model(p);
    const Vec3<double> x = default_relation_point(p);
    const std::vector<double> scales = {1.0, 2.0, 4.0};
    std::vector<double> residuals;
    for (const double s : scales)
      residuals.push_back(curvature_relation(p, model.scaled(s), x).residual);
    const double slope = residual_loglog_slope(scales, residuals);
    c.observe(std::isfinite(slope) ? std::fabs(slope - 2.0) : 1.0,
              "equatorial default configuration");
    report.checks.push_back(c.finish());
  }

  return report;
}

/// Fixed-layout textual report; identical inputs yield identical bytes.
inline std::string format_report(const VerifyReport& report) {
  std::string out;
  char line[256];
  int failed = 0, skipped = 0;
  for (const auto& c : report.checks) {
    const char* status = c.skipped ? "SKIP" : (c.passed ? "pass" : "FAIL");
    if (c.skipped) ++skipped;
    if (!c.skipped && !c.passed) ++failed;
    std::snprintf(line, sizeof line,
                  "check %-28s %s  worst %.6e  tol %.6e  points %d  gated %d\n",
                  c.name.c_str(), status, c.worst, c.tol, c.points, c.gated);
    out += line;
    if (!c.skipped && !c.passed && !c.worst_at.empty()) {
      std::snprintf(line, sizeof line, "      worst at %s\n", c.worst_at.c_str());
      out += line;
    }
  }
  std::snprintf(line, sizeof line, "verification %s  (%zu checks, %d failed, %d skipped)\n",
                report.all_passed() ? "PASS" : "FAIL", report.checks.size(), failed,
                skipped);
  out += line;
  return out;
}

}  // namespace normalfield
