#pragma once

#include <array>
#include <numbers>

#include "normalfield/core.hpp"
#include "normalfield/ellipsoid.hpp"

namespace normalfield {

/**
 * Ellipsoidal-harmonic coordinates: u labels the confocal ellipsoid with
 * semiminor axis u and focal distance E, beta is the reduced latitude on that
 * ellipsoid, lambda the longitude.  The map to Cartesian coordinates is
 *
 *   X = sqrt(u^2+E^2) cos(beta) cos(lambda)
 *   Y = sqrt(u^2+E^2) cos(beta) sin(lambda)
 *   Z = u sin(beta)
 */
template <typename Scalar>
struct HarmonicCoord {
  Scalar u;       ///< confocal coordinate, m (u = b on the reference surface)
  Scalar beta;    ///< reduced latitude, rad, in [-pi/2, pi/2]
  Scalar lambda;  ///< longitude, rad, in (-pi, pi]
};

using HarmonicCoordd = HarmonicCoord<double>;

template <typename Scalar>
Vec3<Scalar> to_cartesian(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h) {
  using std::cos;
  using std::hypot;
  using std::isfinite;
  using std::sin;
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  using std::abs;
  if (!(isfinite(h.u) && isfinite(h.beta) && isfinite(h.lambda)))
    throw DomainError("harmonic coordinates must be finite");
  if (!(h.u >= Scalar(0)))
    throw DomainError("coordinate u must be nonnegative");
  if (!(abs(h.beta) <= half_pi))
    throw DomainError("reduced latitude must lie in [-pi/2, pi/2]");
  const Scalar w = hypot(h.u, p.E);
  const Scalar cb = cos(h.beta);
  return Vec3<Scalar>(w * cb * cos(h.lambda), w * cb * sin(h.lambda),
                      h.u * sin(h.beta));
}

/**
 * Inverse map.  u^2 is the positive root of a quadratic; the usual form
 * (Q + sqrt(Q^2 + (2EZ)^2))/2 cancels badly for Q < 0, so that branch is
 * rewritten with the conjugate.  Points strictly inside the focal disk
 * (Z = 0, X^2+Y^2 < E^2) have no exterior coordinates and are rejected.
 * Postconditions: beta in [-pi/2, pi/2], lambda in (-pi, pi], lambda = 0 on
 * the rotation axis.
 */
template <typename Scalar>
HarmonicCoord<Scalar> from_cartesian(const EllipsoidParams<Scalar>& p, const Vec3<Scalar>& x) {
  using std::atan2;
  using std::hypot;
  using std::sqrt;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!x.allFinite())
    throw DomainError("cartesian coordinates must be finite");
  const Scalar E2 = p.E * p.E;
  const Scalar rho2 = x(0) * x(0) + x(1) * x(1);
  if (x(2) == Scalar(0) && rho2 < E2)
    throw DomainError("point lies on the open focal disk; harmonic coordinates are undefined there");
  const Scalar Q = rho2 + x(2) * x(2) - E2;
  const Scalar t = 2 * p.E * x(2);
  const Scalar disc = hypot(Q, t);
  const Scalar u2 = Q >= Scalar(0) ? (Q + disc) / 2 : (t * t) / (2 * (disc - Q));
  const Scalar u = sqrt(u2);
  const Scalar w = sqrt(u2 + E2);
  HarmonicCoord<Scalar> h;
  h.u = u;
  h.beta = atan2(x(2) * w, u * sqrt(rho2));
  h.lambda = rho2 == Scalar(0) ? Scalar(0) : atan2(x(1), x(0));
  if (h.lambda == -pi) h.lambda = pi;
  return h;
}

/// Columns are the partials of (X, Y, Z) with respect to (u, beta, lambda).
template <typename Scalar>
Mat3<Scalar> coordinate_jacobian(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h) {
  using std::cos;
  using std::hypot;
  using std::sin;
  const Scalar w = hypot(h.u, p.E);
  const Scalar sb = sin(h.beta), cb = cos(h.beta);
  const Scalar sl = sin(h.lambda), cl = cos(h.lambda);
  const Scalar r = h.u / w;
  Mat3<Scalar> J;
  J << r * cb * cl, -w * sb * cl, -w * cb * sl,
       r * cb * sl, -w * sb * sl,  w * cb * cl,
       sb,           h.u * cb,     Scalar(0);
  return J;
}

/// Squared scale factors (h_u^2, h_beta^2, h_lambda^2); the coordinates are
/// orthogonal, so J^T J is this diagonal.
template <typename Scalar>
Vec3<Scalar> metric_squares(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h) {
  using std::cos;
  using std::sin;
  const Scalar E2 = p.E * p.E;
  const Scalar w2 = h.u * h.u + E2;
  const Scalar sb = sin(h.beta), cb = cos(h.beta);
  const Scalar D = h.u * h.u + E2 * sb * sb;
  return Vec3<Scalar>(D / w2, D, w2 * cb * cb);
}

/// The inverse-transpose Jacobian J diag(1/h^2) that carries coordinate
/// gradients to Cartesian ones.  Defined off the rotation axis only.
template <typename Scalar>
Mat3<Scalar> grad_transform(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h) {
  const Vec3<Scalar> m = metric_squares(p, h);
  if (!(m(2) > Scalar(0)))
    throw PoleSingularityError("gradient transform is singular on the rotation axis");
  return coordinate_jacobian(p, h) * m.cwiseInverse().asDiagonal();
}

namespace detail {

/// How close cos(beta) may get to zero before the lambda direction is treated
/// as numerically lost; the axial-limit path in field_jet owns that band.
template <typename Scalar>
constexpr Scalar pole_gate() {
  return Scalar(1e-12);
}

}  // namespace detail

/**
 * grad_X f = J diag(1/h^2) grad_q f.  The longitude column is singular on the
 * axis; a field with an identically zero lambda-derivative is transported
 * anyway (the limit is zero), otherwise points where |cos beta| falls under
 * the pole gate are rejected.
 */
template <typename Scalar>
Vec3<Scalar> grad_to_cartesian(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h,
                               const Vec3<Scalar>& grad_h) {
  using std::abs;
  using std::cos;
  const Vec3<Scalar> m = metric_squares(p, h);
  Vec3<Scalar> scaled;
  scaled(0) = grad_h(0) / m(0);
  scaled(1) = grad_h(1) / m(1);
  if (grad_h(2) == Scalar(0)) {
    scaled(2) = Scalar(0);
  } else {
    if (abs(cos(h.beta)) < detail::pole_gate<Scalar>())
      throw PoleSingularityError("longitude gradient is singular on the rotation axis");
    scaled(2) = grad_h(2) / m(2);
  }
  return coordinate_jacobian(p, h) * scaled;
}

namespace detail {

/// Second-derivative tensors of the coordinate map: element m of the array is
/// the symmetric matrix of d^2 x_m / dq_k dq_l over q = (u, beta, lambda).
template <typename Scalar>
std::array<Sym3<Scalar>, 3> coordinate_curvature(const EllipsoidParams<Scalar>& p,
                                                 const HarmonicCoord<Scalar>& h) {
  using std::cos;
  using std::hypot;
  using std::sin;
  const Scalar w = hypot(h.u, p.E);
  const Scalar sb = sin(h.beta), cb = cos(h.beta);
  const Scalar sl = sin(h.lambda), cl = cos(h.lambda);
  const Scalar E2w3 = p.E * p.E / (w * w * w);
  const Scalar r = h.u / w;
  return {
      Sym3<Scalar>(E2w3 * cb * cl, -w * cb * cl, -w * cb * cl,
                   -r * sb * cl, -r * cb * sl, w * sb * sl),
      Sym3<Scalar>(E2w3 * cb * sl, -w * cb * sl, -w * cb * sl,
                   -r * sb * sl, r * cb * cl, -w * sb * cl),
      Sym3<Scalar>(Scalar(0), -h.u * sb, Scalar(0), cb, Scalar(0), Scalar(0))};
}

}  // namespace detail

/**
 * Transports a coordinate-space Hessian to Cartesian space.  Chain rule:
 *
 *   hess_q f = J^T (hess_X f) J + sum_m (grad_X f)_m d^2 x_m/dq dq
 *
 * which, read as six linear equations in the six unknown entries of hess_X f,
 * is solved directly.  Points under the pole gate are rejected up front (the
 * axial limit in field_jet covers that neighborhood analytically), and a
 * reciprocal-condition estimate of the equilibrated system guards the solve.
 */
template <typename Scalar>
Sym3<Scalar> hessian_to_cartesian(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h,
                                  const Vec3<Scalar>& grad_h, const Sym3<Scalar>& hess_h) {
  using std::abs;
  using std::cos;
  if (abs(cos(h.beta)) < detail::pole_gate<Scalar>())
    throw PoleSingularityError(
        "second-derivative transform is singular this close to the rotation axis");
  const Mat3<Scalar> J = coordinate_jacobian(p, h);
  const auto T = detail::coordinate_curvature(p, h);
  const Vec3<Scalar> g = grad_to_cartesian(p, h, grad_h);
  constexpr int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  Mat6<Scalar> A;
  Vec6<Scalar> rhs;
  for (int row = 0; row < 6; ++row) {
    const int k = idx[row][0], l = idx[row][1];
    for (int col = 0; col < 6; ++col) {
      const int m = idx[col][0], n = idx[col][1];
      A(row, col) = m == n ? J(m, k) * J(m, l)
                           : J(m, k) * J(n, l) + J(n, k) * J(m, l);
    }
    rhs(row) = hess_h.coeffs()(row) - (g(0) * T[0].coeffs()(row) +
                                       g(1) * T[1].coeffs()(row) +
                                       g(2) * T[2].coeffs()(row));
  }
  // Rows scale like h_k * h_l (metre^0 through metre^2), so equilibrate by
  // row inf-norms first; the conditioning gate then measures actual pole
  // degeneracy instead of the unit mix.
  for (int row = 0; row < 6; ++row) {
    const Scalar s = A.row(row).cwiseAbs().maxCoeff();
    if (s > Scalar(0)) {
      A.row(row) /= s;
      rhs(row) /= s;
    }
  }
  Eigen::PartialPivLU<Mat6<Scalar>> lu(A);
  if (!(lu.rcond() > Scalar(1e-12)))
    throw IllConditionedError(
        "second-derivative transform is ill-conditioned this close to the pole; "
        "use the axial-limit evaluation instead");
  return Sym3<Scalar>(lu.solve(rhs));
}

/// Forward direction of the same chain rule; useful for round-trip checks and
/// for pushing Cartesian Hessians into coordinate space.
template <typename Scalar>
Sym3<Scalar> hessian_to_harmonic(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h,
                                 const Vec3<Scalar>& grad_x, const Sym3<Scalar>& hess_x) {
  const Mat3<Scalar> J = coordinate_jacobian(p, h);
  const auto T = detail::coordinate_curvature(p, h);
  Sym3<Scalar> out = Sym3<Scalar>::fromFull(
      Mat3<Scalar>(J.transpose() * hess_x.full() * J));
  out.coeffs() += grad_x(0) * T[0].coeffs() + grad_x(1) * T[1].coeffs() +
                  grad_x(2) * T[2].coeffs();
  return out;
}

/// A scalar field's value and derivatives at one point, in both spaces.
template <typename Scalar>
struct DerivJet {
  Scalar value;
  Vec3<Scalar> grad_harmonic;   ///< partials w.r.t. (u, beta, lambda)
  Vec3<Scalar> grad_cartesian;  ///< partials w.r.t. (X, Y, Z)
  Sym3<Scalar> hess_cartesian;
};

template <typename Scalar>
DerivJet<Scalar> transport_jet(const EllipsoidParams<Scalar>& p, const HarmonicCoord<Scalar>& h,
                               Scalar value, const Vec3<Scalar>& grad_h,
                               const Sym3<Scalar>& hess_h) {
  DerivJet<Scalar> jet;
  jet.value = value;
  jet.grad_harmonic = grad_h;
  jet.grad_cartesian = grad_to_cartesian(p, h, grad_h);
  jet.hess_cartesian = hessian_to_cartesian(p, h, grad_h, hess_h);
  return jet;
}

}  // namespace normalfield
