#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "normalfield/core.hpp"

namespace normalfield {

/**
 * Defining constants of a rotating level ellipsoid (a, f, GM, omega) together
 * with the derived quantities every evaluation needs.  E is the linear
 * eccentricity sqrt(a^2 - b^2), i.e. the focal distance of the coordinate
 * system, and q0 is the value at u = b of the auxiliary function q(u) from
 * the closed-form potential (Heiskanen & Moritz 2-58, 2-66).
 */
template <typename Scalar>
struct EllipsoidParams {
  Scalar a;      ///< semimajor axis, m
  Scalar f;      ///< flattening
  Scalar GM;     ///< geocentric gravitational constant, m^3/s^2
  Scalar omega;  ///< angular velocity, rad/s

  Scalar b;      ///< semiminor axis a(1-f), m
  Scalar E;      ///< linear eccentricity sqrt(a^2-b^2), m
  Scalar e2;     ///< first eccentricity squared f(2-f)
  Scalar q0;     ///< q(b)
};

using EllipsoidParamsd = EllipsoidParams<double>;

namespace detail {

template <typename Scalar>
struct QJet {
  Scalar q, qu, quu;
};

/**
 * q(u) = [(1 + 3u^2/E^2) atan(E/u) - 3u/E] / 2 and its first two u-derivatives.
 *
 * The closed form subtracts two terms of size ~3u/E that agree to O((E/u)^3),
 * so for E/u = z its relative accuracy degrades like eps/z^4: at z = 1e-2 only
 * about seven digits survive, which is far too coarse for second derivatives
 * of the potential.  For z < 1/4 we therefore sum the alternating odd series
 *
 *   q(z) = sum_{k>=1} c_k z^{2k+1},  c_k = (-1)^{k+1} 2k / ((2k+1)(2k+3)),
 *
 * (and its termwise z-derivatives) to machine precision; the ratio of
 * successive terms is below z^2 ~ 1/16, so a handful of terms suffice and the
 * two branches overlap to ~5e-12 relative at the switch.
 */
template <typename Scalar>
QJet<Scalar> q_family(Scalar E, Scalar u) {
  using std::atan;
  QJet<Scalar> out;
  const Scalar z = E / u;
  if (z < Scalar(0.25)) {
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar z2 = z * z;
    Scalar q = 0, qz = 0, qzz = 0;
    Scalar zp = z * z2;  // z^(2k+1)
    for (int k = 1; k <= 200; ++k) {
      const Scalar ck = Scalar((k & 1) ? 2 : -2) * Scalar(k) /
                        (Scalar(2 * k + 1) * Scalar(2 * k + 3));
      const Scalar tq = ck * zp;
      const Scalar tqz = Scalar(2 * k + 1) * tq / z;
      const Scalar tqzz = Scalar(2 * k) * tqz / z;
      using std::abs;
      q += tq;
      qz += tqz;
      qzz += tqzz;
      if (abs(tq) <= eps * abs(q) && abs(tqz) <= eps * abs(qz) &&
          abs(tqzz) <= eps * abs(qzz))
        break;
      zp *= z2;
    }
    // chain rule through z = E/u: dz/du = -z^2/E
    out.q = q;
    out.qu = -(z2 / E) * qz;
    out.quu = (z2 / (E * E)) * (2 * z * qz + z2 * qzz);
  } else {
    const Scalar w2 = u * u + E * E;
    const Scalar th = atan(z);
    const Scalar r = u / E;
    out.q = ((1 + 3 * r * r) * th - 3 * r) / 2;
    out.qu = ((6 * r / E) * th - (1 + 3 * r * r) * (E / w2) - 3 / E) / 2;
    out.quu = (3 / (E * E)) * th - 6 * u / (E * w2) +
              u * (E * E + 3 * u * u) / (E * w2 * w2);
  }
  return out;
}

}  // namespace detail

/// Validates the defining constants and fills in the derived quantities.
/// omega = 0 is accepted (nonrotating limit); f = 0 is not, because the
/// coordinate system needs E > 0.
template <typename Scalar>
EllipsoidParams<Scalar> derive_params(Scalar a, Scalar f, Scalar GM, Scalar omega) {
  using std::isfinite;
  using std::sqrt;
  if (!(isfinite(a) && isfinite(f) && isfinite(GM) && isfinite(omega)))
    throw DomainError("ellipsoid parameters must be finite");
  if (!(a > Scalar(0)))
    throw DomainError("semimajor axis must be positive");
  if (!(f > Scalar(0) && f < Scalar(1)))
    throw DomainError("flattening must lie in (0, 1)");
  if (!(GM > Scalar(0)))
    throw DomainError("GM must be positive");
  if (!(omega >= Scalar(0)))
    throw DomainError("angular velocity must be nonnegative");
  EllipsoidParams<Scalar> p;
  p.a = a;
  p.f = f;
  p.GM = GM;
  p.omega = omega;
  p.b = a * (1 - f);
  p.e2 = f * (2 - f);  // exact rearrangement of (a^2-b^2)/a^2
  p.E = a * sqrt(p.e2);
  if (!(p.E > Scalar(0)))
    throw DomainError("focal distance underflowed; flattening too small");
  p.q0 = detail::q_family(p.E, p.b).q;
  return p;
}

template <typename Scalar>
Scalar q_of_u(const EllipsoidParams<Scalar>& p, Scalar u) {
  using std::isfinite;
  if (!(isfinite(u) && u > Scalar(0)))
    throw DomainError("q(u) requires finite u > 0");
  return detail::q_family(p.E, u).q;
}

template <typename Scalar>
Scalar dq_du(const EllipsoidParams<Scalar>& p, Scalar u) {
  using std::isfinite;
  if (!(isfinite(u) && u > Scalar(0)))
    throw DomainError("dq/du requires finite u > 0");
  return detail::q_family(p.E, u).qu;
}

/// Second derivative; feeds the second derivatives of the potential.
template <typename Scalar>
Scalar d2q_du2(const EllipsoidParams<Scalar>& p, Scalar u) {
  using std::isfinite;
  if (!(isfinite(u) && u > Scalar(0)))
    throw DomainError("d2q/du2 requires finite u > 0");
  return detail::q_family(p.E, u).quu;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const std::string ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

inline double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError(where + ": missing numeric value");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ParseError(where + ": cannot parse '" + t + "' as a number");
  return v;
}

}  // namespace detail

/**
 * Reads an ellipsoid definition of the form
 *
 *   # comment
 *   a     = 6378137.0
 *   f_inv = 298.257222101
 *   GM    = 3.986005e14
 *   omega = 7.292115e-5
 *
 * All four keys are required, each exactly once; anything else is an error.
 */
inline EllipsoidParamsd load_ellipsoid(std::istream& in,
                                       const std::string& source = "ellipsoid config") {
  std::map<std::string, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(where + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key != "a" && key != "f_inv" && key != "GM" && key != "omega")
      throw ParseError(where + ": unknown key '" + key + "'");
    if (values.count(key))
      throw ParseError(where + ": duplicate key '" + key + "'");
    values[key] = detail::parse_number(line.substr(eq + 1), where);
  }
  for (const char* key : {"a", "f_inv", "GM", "omega"})
    if (!values.count(key))
      throw ParseError(source + ": missing required key '" + std::string(key) + "'");
  if (values["f_inv"] == 0)
    throw ParseError(source + ": f_inv must be nonzero");
  return derive_params(values["a"], 1.0 / values["f_inv"], values["GM"],
                       values["omega"]);
}

inline EllipsoidParamsd load_ellipsoid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open ellipsoid config '" + path + "'");
  return load_ellipsoid(in, path);
}

}  // namespace normalfield
