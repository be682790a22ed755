#pragma once

#include "normalfield/core.hpp"
#include "normalfield/ellipsoid.hpp"

namespace normalfield {

/// Value and the nonzero first/second partials of U in (u, beta); the
/// potential is independent of longitude, so all lambda-partials vanish.
template <typename Scalar>
struct PotentialJet {
  Scalar U;
  Scalar U_u, U_beta;
  Scalar U_uu, U_ubeta, U_betabeta;
};

/**
 * Normal gravity potential in ellipsoidal-harmonic coordinates
 * (Heiskanen & Moritz 2-62):
 *
 *   U(u, beta) = (GM/E) atan(E/u)
 *              + (1/2) w^2 a^2 (q(u)/q0) (sin^2(beta) - 1/3)
 *              + (1/2) w^2 (u^2 + E^2) cos^2(beta),      w = omega
 *
 * The reference surface u = b is a level surface of U by construction.
 */
template <typename Scalar>
Scalar potential(const EllipsoidParams<Scalar>& p, Scalar u, Scalar beta) {
  using std::atan;
  using std::cos;
  using std::isfinite;
  using std::sin;
  if (!(isfinite(u) && u > Scalar(0) && isfinite(beta)))
    throw DomainError("potential requires finite u > 0 and finite beta");
  const Scalar om2 = p.omega * p.omega;
  const Scalar a2 = p.a * p.a;
  const Scalar w2 = u * u + p.E * p.E;
  const Scalar sb = sin(beta), cb = cos(beta);
  const Scalar q = detail::q_family(p.E, u).q;
  return p.GM / p.E * atan(p.E / u) +
         om2 * a2 / 2 * (q / p.q0) * (sb * sb - Scalar(1) / 3) +
         om2 / 2 * w2 * cb * cb;
}

/// U with all first and second partials in (u, beta) from the closed form.
template <typename Scalar>
PotentialJet<Scalar> potential_jet(const EllipsoidParams<Scalar>& p, Scalar u, Scalar beta) {
  using std::atan;
  using std::cos;
  using std::isfinite;
  using std::sin;
  if (!(isfinite(u) && u > Scalar(0) && isfinite(beta)))
    throw DomainError("potential requires finite u > 0 and finite beta");
  const Scalar om2 = p.omega * p.omega;
  const Scalar a2 = p.a * p.a;
  const Scalar E2 = p.E * p.E;
  const Scalar w2 = u * u + E2;
  const Scalar sb = sin(beta), cb = cos(beta);
  const Scalar sb2 = sb * sb;
  const Scalar s2b = 2 * sb * cb;       // sin(2 beta)
  const Scalar c2b = 1 - 2 * sb * sb;   // cos(2 beta)
  const detail::QJet<Scalar> qj = detail::q_family(p.E, u);
  const Scalar centr = sb2 - Scalar(1) / 3;
  PotentialJet<Scalar> j;
  j.U = p.GM / p.E * atan(p.E / u) + om2 * a2 / 2 * (qj.q / p.q0) * centr +
        om2 / 2 * w2 * cb * cb;
  j.U_u = -p.GM / w2 + om2 * a2 / 2 * (qj.qu / p.q0) * centr + om2 * u * cb * cb;
  j.U_beta = om2 / 2 * s2b * (a2 * qj.q / p.q0 - w2);
  j.U_uu = 2 * p.GM * u / (w2 * w2) + om2 * a2 / 2 * (qj.quu / p.q0) * centr +
           om2 * cb * cb;
  j.U_ubeta = om2 / 2 * s2b * (a2 * qj.qu / p.q0 - 2 * u);
  j.U_betabeta = om2 * c2b * (a2 * qj.q / p.q0 - w2);
  return j;
}

}  // namespace normalfield
