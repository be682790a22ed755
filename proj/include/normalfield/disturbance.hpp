#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "normalfield/coords.hpp"
#include "normalfield/core.hpp"
#include "normalfield/curvature.hpp"
#include "normalfield/field.hpp"

namespace normalfield {

/// One attracting point: mu = G * mass, so T gains mu/r per mass.
template <typename Scalar>
struct PointMass {
  Scalar mu;  ///< m^3/s^2
  Vec3<Scalar> position;
};

template <typename Scalar>
struct PointMassModel {
  std::vector<PointMass<Scalar>> masses;

  bool empty() const { return masses.empty(); }

  PointMassModel scaled(Scalar s) const {
    PointMassModel m = *this;
    for (auto& pm : m.masses) pm.mu *= s;
    return m;
  }
};

using PointMassModeld = PointMassModel<double>;

/**
 * Reads a point-mass model: one `mu x y z` quadruple per line (SI units),
 * blank lines and `#` comments allowed.  An empty model is legal and means
 * T = 0.
 */
inline PointMassModeld load_point_mass_model(std::istream& in,
                                             const std::string& source = "mass model") {
  PointMassModeld model;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!(fields >> tok))
        throw ParseError(where + ": expected 'mu x y z', got only " +
                         std::to_string(i) + " fields");
      vals[i] = detail::parse_number(tok, where);
    }
    if (fields >> tok)
      throw ParseError(where + ": trailing content '" + tok + "'");
    model.masses.push_back({vals[0], Vec3<double>(vals[1], vals[2], vals[3])});
  }
  return model;
}

inline PointMassModeld load_point_mass_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mass model '" + path + "'");
  return load_point_mass_model(in, path);
}

/// Masses must be positive and buried strictly inside the reference
/// ellipsoid, so every exterior evaluation point stays in T's harmonic region.
template <typename Scalar>
void validate_model(const EllipsoidParams<Scalar>& p, const PointMassModel<Scalar>& model) {
  for (std::size_t i = 0; i < model.masses.size(); ++i) {
    const PointMass<Scalar>& pm = model.masses[i];
    const std::string tag = "mass " + std::to_string(i + 1);
    if (!(pm.mu > Scalar(0)) || !pm.position.allFinite())
      throw DomainError(tag + ": mu must be positive and the position finite");
    const Vec3<Scalar>& r = pm.position;
    const Scalar s = (r(0) * r(0) + r(1) * r(1)) / (p.a * p.a) +
                     r(2) * r(2) / (p.b * p.b);
    if (!(s < Scalar(1)))
      throw DomainError(tag + ": position must lie strictly inside the reference ellipsoid");
  }
}

/// Jet of the disturbing potential T = sum mu_i/r_i; exact and harmonic.
template <typename Scalar>
FieldJet2<Scalar> disturbing_jet(const PointMassModel<Scalar>& model, const Vec3<Scalar>& x) {
  using std::sqrt;
  FieldJet2<Scalar> jet;
  jet.U = Scalar(0);
  jet.gamma = Vec3<Scalar>::Zero();
  jet.hess = Sym3<Scalar>::Zero();
  for (const PointMass<Scalar>& pm : model.masses) {
    const Vec3<Scalar> d = x - pm.position;
    const Scalar r2 = d.squaredNorm();
    if (!(r2 > Scalar(0)))
      throw DomainError("evaluation point coincides with a point mass");
    const Scalar r = sqrt(r2);
    const Scalar r3 = r2 * r;
    const Scalar r5 = r3 * r2;
    jet.U += pm.mu / r;
    jet.gamma -= (pm.mu / r3) * d;
    jet.hess = jet.hess + Sym3<Scalar>(pm.mu * (3 * d(0) * d(0) - r2) / r5,
                                       pm.mu * (3 * d(1) * d(1) - r2) / r5,
                                       pm.mu * (3 * d(2) * d(2) - r2) / r5,
                                       pm.mu * 3 * d(0) * d(1) / r5,
                                       pm.mu * 3 * d(0) * d(2) / r5,
                                       pm.mu * 3 * d(1) * d(2) / r5);
  }
  jet.gamma_mag = jet.gamma.norm();
  return jet;
}

/// Jet of the actual potential W = U + T.  An empty model returns the normal
/// jet unchanged, bit for bit, so T = 0 is not merely close to the normal
/// field but identical to it.
template <typename Scalar>
FieldJet2<Scalar> actual_field_jet(const EllipsoidParams<Scalar>& p,
                                   const PointMassModel<Scalar>& model,
                                   const Vec3<Scalar>& x) {
  FieldJet2<Scalar> jet = field_jet(p, x);
  if (model.empty()) return jet;
  const FieldJet2<Scalar> t = disturbing_jet(model, x);
  jet.U += t.U;
  jet.gamma += t.gamma;
  jet.hess = jet.hess + t.hess;
  jet.gamma_mag = jet.gamma.norm();
  return jet;
}

/**
 * Residual of the north-north reconstruction: with every tensor expressed in
 * the NORMAL field's local frame,
 *
 *   (|gamma|^2 K_Gn / U_xx + T_yy) - W_yy
 *
 * where U_xx comes from the Meusnier route.  W_yy = U_yy + T_yy in that one
 * frame, so the residual isolates how well curvature data reconstruct U_yy.
 */
template <typename Scalar>
Scalar north_north_residual(const EllipsoidParams<Scalar>& p,
                            const PointMassModel<Scalar>& model, const Vec3<Scalar>& x) {
  const FieldJet2<Scalar> jetU = field_jet(p, x);
  const LocalFrame<Scalar> frame = local_frame(jetU);
  const Scalar Uxx = -jetU.gamma_mag * meusnier_k1(jetU, x);
  const Scalar K = gauss_curvature_general(jetU);
  const Scalar Uyy_curv = jetU.gamma_mag * jetU.gamma_mag * K / Uxx;
  const FieldJet2<Scalar> jetT = disturbing_jet(model, x);
  const Sym3<Scalar> Tloc = rotate_hessian(jetT.hess, frame);
  const Sym3<Scalar> Wloc = rotate_hessian(jetU.hess + jetT.hess, frame);
  return (Uyy_curv + Tloc.yy()) - Wloc.yy();
}

/// Same-frame form of the curvature relation: when T's Hessian is expressed
/// in the normal frame and the actual curvature is read off in that same
/// frame, the two determinant terms are exactly the cross terms of
/// (U_xx + T_xx)(U_yy + T_yy) - T_xy^2, so lhs - rhs is an algebraic zero.
template <typename Scalar>
Scalar same_frame_relation_residual(Scalar U_xx, Scalar U_yy, Scalar T_xx,
                                    Scalar T_xy, Scalar T_yy) {
  const Scalar lhs = U_xx * U_yy + (T_xx * T_yy - T_xy * T_xy) +
                     (T_xx * U_yy + T_yy * U_xx);
  const Scalar rhs = (U_xx + T_xx) * (U_yy + T_yy) - T_xy * T_xy;
  return lhs - rhs;
}

template <typename Scalar>
struct CurvatureRelationReport {
  Scalar lhs;         ///< |gamma|^2 K_Gn + det(T tangential) + mixed term
  Scalar rhs;         ///< |g|^2 K_G of the actual field, axis-free formula
  Scalar residual;    ///< lhs - rhs
  Scalar deflection;  ///< angle between gamma and g, rad
};

/**
 * Cross-frame curvature relation.  The lhs combines normal-field quantities
 * with T's Hessian rotated into the NORMAL local frame:
 *
 *   lhs = |gamma|^2 K_Gn + (T_xx T_yy - T_xy^2) + (T_xx U_yy + T_yy U_xx)
 *
 * while the rhs evaluates |g|^2 K_G of the actual field exactly, in its own
 * (deflected) frame.  The two frames differ by the deflection of the
 * vertical, and the terms dropped by identifying them are quadratic in it, so
 * the residual scales like the square of the mass strength when the
 * first-order couplings (U_yz and the matching deflection component) vanish
 * at the evaluation point.
 */
template <typename Scalar>
CurvatureRelationReport<Scalar> curvature_relation(const EllipsoidParams<Scalar>& p,
                                                   const PointMassModel<Scalar>& model,
                                                   const Vec3<Scalar>& x) {
  using std::atan2;
  const FieldJet2<Scalar> jetU = field_jet(p, x);
  const LocalFrame<Scalar> frame = local_frame(jetU);
  const Sym3<Scalar> Uloc = rotate_hessian(jetU.hess, frame);
  const Scalar KGn = gauss_curvature_general(jetU);
  const Scalar g2n = jetU.gamma_mag * jetU.gamma_mag;
  CurvatureRelationReport<Scalar> rep;
  if (model.empty()) {
    rep.lhs = g2n * KGn;
    rep.rhs = rep.lhs;
    rep.residual = Scalar(0);
    rep.deflection = Scalar(0);
    return rep;
  }
  const FieldJet2<Scalar> jetT = disturbing_jet(model, x);
  const Sym3<Scalar> Tloc = rotate_hessian(jetT.hess, frame);
  rep.lhs = g2n * KGn + (Tloc.xx() * Tloc.yy() - Tloc.xy() * Tloc.xy()) +
            (Tloc.xx() * Uloc.yy() + Tloc.yy() * Uloc.xx());
  FieldJet2<Scalar> jetW = jetU;
  jetW.U += jetT.U;
  jetW.gamma += jetT.gamma;
  jetW.hess = jetW.hess + jetT.hess;
  jetW.gamma_mag = jetW.gamma.norm();
  const Scalar KW = gauss_curvature_general(jetW);
  rep.rhs = jetW.gamma_mag * jetW.gamma_mag * KW;
  rep.residual = rep.lhs - rep.rhs;
  rep.deflection = atan2(jetU.gamma.cross(jetW.gamma).norm(), jetU.gamma.dot(jetW.gamma));
  return rep;
}

}  // namespace normalfield
