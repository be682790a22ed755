#pragma once

#include <numbers>

#include "normalfield/coords.hpp"
#include "normalfield/core.hpp"
#include "normalfield/potential.hpp"

namespace normalfield {

/// Second-order jet of a potential at a point: value, gradient (the gravity
/// vector for U), Hessian, and the cached gradient magnitude.
template <typename Scalar>
struct FieldJet2 {
  Scalar U;
  Vec3<Scalar> gamma;
  Sym3<Scalar> hess;
  Scalar gamma_mag;
};

using FieldJet2d = FieldJet2<double>;

/// Reduced latitudes above this route through the axial-limit evaluation;
/// the 6x6 Hessian transform degenerates like cos^2(beta) toward the poles
/// while the field itself stays perfectly regular there.
template <typename Scalar>
constexpr Scalar pole_band() {
  return (Scalar(90) - Scalar(0.01)) * std::numbers::pi_v<Scalar> / 180;
}

/**
 * Evaluates U, gamma = grad U, and the full Cartesian Hessian at an exterior
 * point.  Off the poles this transports the closed-form (u, beta) derivatives
 * through the coordinate map.  Within the pole band the field is evaluated in
 * its axial limit: by rotational symmetry gamma is axis-aligned with
 * magnitude |U_u(u, pi/2)| (the u scale factor is 1 on the axis), the Hessian
 * is diagonal with U_ZZ = U_uu(u, pi/2), and the two tangential entries are
 * equal and fixed by the trace identity trace = 2 omega^2.
 */
template <typename Scalar>
FieldJet2<Scalar> field_jet(const EllipsoidParams<Scalar>& p, const Vec3<Scalar>& x) {
  using std::abs;
  using std::copysign;
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  const HarmonicCoord<Scalar> h = from_cartesian(p, x);
  if (!(h.u >= p.b * (1 - Scalar(1e-12))))
    throw DomainError("point is interior to the reference ellipsoid");
  FieldJet2<Scalar> jet;
  if (abs(h.beta) > pole_band<Scalar>()) {
    const PotentialJet<Scalar> pj = potential_jet(p, h.u, copysign(half_pi, h.beta));
    const Scalar sgn = h.beta >= Scalar(0) ? Scalar(1) : Scalar(-1);
    const Scalar Uzz = pj.U_uu;
    const Scalar Utan = p.omega * p.omega - Uzz / 2;
    jet.U = pj.U;
    jet.gamma = Vec3<Scalar>(Scalar(0), Scalar(0), sgn * pj.U_u);
    jet.hess = Sym3<Scalar>(Utan, Utan, Uzz, Scalar(0), Scalar(0), Scalar(0));
  } else {
    const PotentialJet<Scalar> pj = potential_jet(p, h.u, h.beta);
    const Vec3<Scalar> gh(pj.U_u, pj.U_beta, Scalar(0));
    const Sym3<Scalar> Hh(pj.U_uu, pj.U_betabeta, Scalar(0), pj.U_ubeta,
                          Scalar(0), Scalar(0));
    jet.U = pj.U;
    jet.gamma = grad_to_cartesian(p, h, gh);
    jet.hess = hessian_to_cartesian(p, h, gh, Hh);
  }
  jet.gamma_mag = jet.gamma.norm();
  return jet;
}

/// Convenience overload; canonicalizes through the Cartesian point so both
/// coordinate forms follow the identical evaluation path.
template <typename Scalar>
FieldJet2<Scalar> field_jet(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h) {
  return field_jet(p, to_cartesian(p, h));
}

/// Latitude of the upward vertical: arcsin(-gamma_Z/|gamma|).  The sign makes
/// it increase northward and coincide with geodetic latitude on the normal
/// field's level surfaces.
template <typename Scalar>
Scalar phi_N(const FieldJet2<Scalar>& jet) {
  using std::asin;
  using std::max;
  using std::min;
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; vertical direction undefined");
  const Scalar s = min(Scalar(1), max(Scalar(-1), -jet.gamma(2) / jet.gamma_mag));
  return asin(s);
}

/// Local astronomical frame: x east, y north, z up along -gamma.
template <typename Scalar>
struct LocalFrame {
  Mat3<Scalar> R;  ///< rows are the east, north, up axes
  Vec3<Scalar> east() const { return R.row(0); }
  Vec3<Scalar> north() const { return R.row(1); }
  Vec3<Scalar> up() const { return R.row(2); }
};

template <typename Scalar>
LocalFrame<Scalar> local_frame(const FieldJet2<Scalar>& jet) {
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; local frame undefined");
  const Vec3<Scalar> up = -jet.gamma / jet.gamma_mag;
  Vec3<Scalar> east(-up(1), up(0), Scalar(0));  // z_hat x up
  const Scalar en = east.norm();
  if (!(en > Scalar(1e-12)))
    throw AxisError("east is undefined where the vertical is parallel to the rotation axis");
  east /= en;
  LocalFrame<Scalar> f;
  f.R.row(0) = east;
  f.R.row(1) = up.cross(east);
  f.R.row(2) = up;
  return f;
}

/// Congruence R H R^T expressing a Hessian in the local frame.
template <typename Scalar>
Sym3<Scalar> rotate_hessian(const Sym3<Scalar>& hess, const LocalFrame<Scalar>& frame) {
  return Sym3<Scalar>::fromFull(Mat3<Scalar>(frame.R * hess.full() * frame.R.transpose()));
}

}  // namespace normalfield
