#pragma once

#include "normalfield/core.hpp"
#include "normalfield/field.hpp"

namespace normalfield {

/**
 * Gauss curvature of the level surface through the evaluation point, written
 * without reference to any axis:
 *
 *   K_G = gamma^T adj(H) gamma / |gamma|^4
 *
 * (adj = adjugate).  For the implicit surface U = const this is the standard
 * closed form; restricted to the local frame it reduces to
 * (U_xx U_yy - U_xy^2)/|gamma|^2.
 */
template <typename Scalar>
Scalar gauss_curvature_general(const FieldJet2<Scalar>& jet) {
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; curvature undefined");
  const Scalar g2 = jet.gamma_mag * jet.gamma_mag;
  return jet.hess.adjugate().quadraticForm(jet.gamma) / (g2 * g2);
}

/**
 * Gauss curvature computed by treating the level surface as a graph
 * Z = z(X, Y), eliminating z via implicit differentiation:
 *
 *   K_G = (B1 B2 - B3^2) / (U_Z^2 |gamma|^4)
 *
 *   B1 = -U_XX U_Z^2 + 2 U_XZ U_X U_Z - U_ZZ U_X^2
 *   B2 = -U_YY U_Z^2 + 2 U_YZ U_Y U_Z - U_ZZ U_Y^2
 *   B3 =  U_Z (U_Y U_XZ + U_X U_YZ - U_Z U_XY) - U_ZZ U_X U_Y
 *
 * The graph parameterization needs a usable vertical component; the formula
 * is rejected when |U_Z| <= 0.1 |gamma| (near the equator the level surface
 * is vertical in Z and no graph exists).
 */
template <typename Scalar>
Scalar gauss_curvature_graph(const FieldJet2<Scalar>& jet) {
  using std::abs;
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; curvature undefined");
  const Scalar Ux = jet.gamma(0), Uy = jet.gamma(1), Uz = jet.gamma(2);
  if (!(abs(Uz) > Scalar(0.1) * jet.gamma_mag))
    throw GraphDegenerateError(
        "graph-form curvature needs the level surface expressible as Z = z(X, Y); "
        "|U_Z| is too small here");
  const Sym3<Scalar>& H = jet.hess;
  const Scalar B1 = -H.xx() * Uz * Uz + 2 * H.xz() * Ux * Uz - H.zz() * Ux * Ux;
  const Scalar B2 = -H.yy() * Uz * Uz + 2 * H.yz() * Uy * Uz - H.zz() * Uy * Uy;
  const Scalar B3 = Uz * (Uy * H.xz() + Ux * H.yz() - Uz * H.xy()) - H.zz() * Ux * Uy;
  const Scalar g2 = jet.gamma_mag * jet.gamma_mag;
  return (B1 * B2 - B3 * B3) / (Uz * Uz * g2 * g2);
}

/// East-west principal curvature via Meusnier's theorem: the parallel circle
/// of radius R_p = sqrt(X^2+Y^2) shares its tangent with the east-west normal
/// section and is inclined to it by phi_N, so k1 = cos(phi_N)/R_p.
template <typename Scalar>
Scalar meusnier_k1(const FieldJet2<Scalar>& jet, const Vec3<Scalar>& x) {
  using std::cos;
  using std::hypot;
  const Scalar Rp = hypot(x(0), x(1));
  if (!(Rp > Scalar(0)))
    throw AxisError("parallel-circle curvature is undefined on the rotation axis");
  return cos(phi_N(jet)) / Rp;
}

/// Plumbline curvature |gamma x (H gamma)| / |gamma|^3 (magnitude form; the
/// curvature vector of the field line is kappa = (gamma x H gamma) x gamma / |gamma|^4).
template <typename Scalar>
Scalar plumbline_curvature_global(const FieldJet2<Scalar>& jet) {
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; plumbline undefined");
  const Vec3<Scalar> c = jet.gamma.cross(jet.hess * jet.gamma);
  return c.norm() / (jet.gamma_mag * jet.gamma_mag * jet.gamma_mag);
}

/// North component of the plumbline curvature vector.  For a rotationally
/// symmetric field the curvature vector lies in the meridian plane, so this
/// carries the full magnitude with a sign (positive = bending northward); in
/// the local frame it equals -U_yz/|gamma|.  Zero on the axis, where north is
/// undefined but the plumbline is straight.
template <typename Scalar>
Scalar plumbline_curvature_signed(const FieldJet2<Scalar>& jet) {
  if (!(jet.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; plumbline undefined");
  const Vec3<Scalar> up = -jet.gamma / jet.gamma_mag;
  Vec3<Scalar> east(-up(1), up(0), Scalar(0));
  const Scalar en = east.norm();
  if (!(en > Scalar(1e-12))) return Scalar(0);
  east /= en;
  const Vec3<Scalar> north = up.cross(east);
  const Scalar g2 = jet.gamma_mag * jet.gamma_mag;
  const Vec3<Scalar> kappa = jet.gamma.cross(jet.hess * jet.gamma).cross(jet.gamma) / (g2 * g2);
  return kappa.dot(north);
}

/**
 * The local-frame Hessian of a rotationally symmetric potential: U_xy and
 * U_xz vanish structurally, leaving four independent entries.  Values are
 * true second derivatives, so for an attraction-dominated field the two
 * tangential entries are negative: the curvature of the level surface in the
 * x direction is k = -U_xx/|gamma| (Heiskanen & Moritz 2-50), hence
 * U_xx = -|gamma| k1 with k1 > 0.
 */
template <typename Scalar>
struct EotvosMatrix {
  Scalar U_xx, U_yy, U_zz, U_yz;
  Scalar gamma_mag;  ///< the gradient magnitude used in the assembly

  Sym3<Scalar> sym() const {
    return Sym3<Scalar>(U_xx, U_yy, U_zz, Scalar(0), Scalar(0), U_yz);
  }
  Scalar trace() const { return U_xx + U_yy + U_zz; }
};

/**
 * Reconstructs the full local-frame Hessian from scalar curvature data alone:
 *
 *   U_xx = -|gamma| k1          (Meusnier east-west curvature)
 *   U_yy = |gamma|^2 K_G / U_xx (Gauss curvature splits the product)
 *   U_yz = -|gamma| k_pl        (signed plumbline curvature)
 *   U_zz = 2 omega^2 - U_xx - U_yy   (Poisson's equation for U)
 *
 * On the axis (within the pole band) the surface point is an umbilic and the
 * tangential entries collapse to U_xx = U_yy = -|gamma| sqrt(K_G).
 */
template <typename Scalar>
EotvosMatrix<Scalar> eotvos_assemble(const EllipsoidParams<Scalar>& p,
                                     const FieldJet2<Scalar>& jet, const Vec3<Scalar>& x) {
  using std::abs;
  using std::sqrt;
  const Scalar K = gauss_curvature_general(jet);
  EotvosMatrix<Scalar> e;
  e.gamma_mag = jet.gamma_mag;
  const HarmonicCoord<Scalar> h = from_cartesian(p, x);
  if (abs(h.beta) > pole_band<Scalar>()) {
    e.U_xx = e.U_yy = -jet.gamma_mag * sqrt(K);
    e.U_yz = Scalar(0);
  } else {
    e.U_xx = -jet.gamma_mag * meusnier_k1(jet, x);
    e.U_yy = jet.gamma_mag * jet.gamma_mag * K / e.U_xx;
    e.U_yz = -jet.gamma_mag * plumbline_curvature_signed(jet);
  }
  e.U_zz = 2 * p.omega * p.omega - e.U_xx - e.U_yy;
  return e;
}

/// Mean-curvature quantity J = -(U_xx + U_yy)/|gamma|; with true-sign entries
/// this is k1 + k2 > 0 for exterior Earth-like fields.
template <typename Scalar>
Scalar mean_curvature(const EotvosMatrix<Scalar>& e) {
  if (!(e.gamma_mag > Scalar(0)))
    throw DegenerateFieldError("gravity vector vanishes; mean curvature undefined");
  return -(e.U_xx + e.U_yy) / e.gamma_mag;
}

/// Scalar curvature data of the field at one point.
template <typename Scalar>
struct CurvatureSummary {
  Scalar K_G;          ///< Gauss curvature of the level surface, 1/m^2
  Scalar J;            ///< mean-curvature quantity k1 + k2, 1/m
  Scalar k1;           ///< east-west principal curvature, 1/m
  Scalar k_pl;         ///< plumbline curvature magnitude, 1/m
  Scalar k_pl_signed;  ///< its north component, 1/m
  Scalar phi_N;        ///< latitude of the vertical, rad
  Scalar R_p;          ///< distance from the rotation axis, m
};

template <typename Scalar>
CurvatureSummary<Scalar> curvature_summary(const EllipsoidParams<Scalar>& p,
                                           const FieldJet2<Scalar>& jet,
                                           const Vec3<Scalar>& x) {
  using std::hypot;
  const EotvosMatrix<Scalar> e = eotvos_assemble(p, jet, x);
  CurvatureSummary<Scalar> s;
  s.K_G = gauss_curvature_general(jet);
  s.J = mean_curvature(e);
  s.k1 = -e.U_xx / jet.gamma_mag;  // umbilic sqrt(K_G) on the axis
  s.k_pl = plumbline_curvature_global(jet);
  s.k_pl_signed = plumbline_curvature_signed(jet);
  s.phi_N = phi_N(jet);
  s.R_p = hypot(x(0), x(1));
  return s;
}

}  // namespace normalfield
