#pragma once

#include <utility>

#include "normalfield/core.hpp"

namespace normalfield {

/// Central-difference configuration.  Steps are rel_step * |coordinate| with a
/// per-axis absolute floor for coordinates near zero.
template <typename Scalar>
struct FDConfig {
  Scalar rel_step;
  Vec3<Scalar> abs_floor;

  explicit FDConfig(Scalar rel = Scalar(1e-6))
      : rel_step(rel), abs_floor(Vec3<Scalar>::Constant(rel)) {
    if (!(rel > Scalar(1e-12) && rel < Scalar(1e-2)))
      throw DomainError("finite-difference relative step must lie in (1e-12, 1e-2)");
  }
};

namespace detail {

template <typename Scalar>
Scalar fd_step(const FDConfig<Scalar>& cfg, const Vec3<Scalar>& x, int axis) {
  using std::abs;
  using std::max;
  return max(cfg.rel_step * abs(x(axis)), cfg.abs_floor(axis));
}

template <typename Scalar, typename Field>
Scalar fd_eval(Field& f, const Vec3<Scalar>& x) {
  using std::isfinite;
  const Scalar v = f(x);
  if (!isfinite(v))
    throw EvaluationError("field returned a non-finite value during differentiation");
  return v;
}

}  // namespace detail

/// Second-order central-difference gradient of a scalar field.
template <typename Scalar, typename Field>
Vec3<Scalar> fd_gradient(Field&& f, const Vec3<Scalar>& x,
                         const FDConfig<Scalar>& cfg = FDConfig<Scalar>()) {
  Vec3<Scalar> g;
  for (int i = 0; i < 3; ++i) {
    const Scalar s = detail::fd_step(cfg, x, i);
    Vec3<Scalar> xp = x, xm = x;
    xp(i) += s;
    xm(i) -= s;
    g(i) = (detail::fd_eval(f, xp) - detail::fd_eval(f, xm)) / (2 * s);
  }
  return g;
}

/// Second-order central-difference Hessian (diagonal from the 3-point stencil,
/// off-diagonals from the 4-point cross stencil).
template <typename Scalar, typename Field>
Sym3<Scalar> fd_hessian(Field&& f, const Vec3<Scalar>& x,
                        const FDConfig<Scalar>& cfg = FDConfig<Scalar>()) {
  const Scalar f0 = detail::fd_eval(f, x);
  Scalar s[3];
  for (int i = 0; i < 3; ++i) s[i] = detail::fd_step(cfg, x, i);
  Sym3<Scalar> H;
  for (int i = 0; i < 3; ++i) {
    Vec3<Scalar> xp = x, xm = x;
    xp(i) += s[i];
    xm(i) -= s[i];
    const Scalar d2 = (detail::fd_eval(f, xp) - 2 * f0 + detail::fd_eval(f, xm)) /
                      (s[i] * s[i]);
    if (i == 0) H.xx() = d2;
    else if (i == 1) H.yy() = d2;
    else H.zz() = d2;
  }
  const std::pair<int, int> cross[3] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = cross[k];
    Vec3<Scalar> xpp = x, xpm = x, xmp = x, xmm = x;
    xpp(i) += s[i]; xpp(j) += s[j];
    xpm(i) += s[i]; xpm(j) -= s[j];
    xmp(i) -= s[i]; xmp(j) += s[j];
    xmm(i) -= s[i]; xmm(j) -= s[j];
    const Scalar d2 = (detail::fd_eval(f, xpp) - detail::fd_eval(f, xpm) -
                       detail::fd_eval(f, xmp) + detail::fd_eval(f, xmm)) /
                      (4 * s[i] * s[j]);
    if (k == 0) H.xy() = d2;
    else if (k == 1) H.xz() = d2;
    else H.yz() = d2;
  }
  return H;
}

}  // namespace normalfield
