#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace normalfield {

template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid numeric input: interior points, bad parameters, out-of-range steps.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed configuration or model file; message names the offending line.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Longitude derivatives requested where the longitude scale factor vanishes.
class PoleSingularityError : public Error {
public:
  using Error::Error;
};

/// The 6x6 second-derivative transform is numerically singular at this point.
class IllConditionedError : public Error {
public:
  using Error::Error;
};

/// The gravity vector vanishes, leaving directions and curvatures undefined.
class DegenerateFieldError : public Error {
public:
  using Error::Error;
};

/// Quantity needs an east direction or a parallel circle; undefined on the axis.
class AxisError : public Error {
public:
  using Error::Error;
};

/// Graph-form Gauss curvature requested where the surface is not a graph over z.
class GraphDegenerateError : public Error {
public:
  using Error::Error;
};

/// A user-supplied field returned a non-finite value during differentiation.
class EvaluationError : public Error {
public:
  using Error::Error;
};

/**
 * Symmetric 3x3 matrix stored as its six distinct coefficients in the fixed
 * order (xx, yy, zz, xy, xz, yz).  The storage order is shared with the 6x6
 * second-derivative transform, so Hessians move between representations
 * without index shuffling, and symmetry holds by construction rather than to
 * rounding.
 */
template <typename Scalar>
class Sym3 {
public:
  Sym3() : c_(Vec6<Scalar>::Zero()) {}
  Sym3(Scalar xx, Scalar yy, Scalar zz, Scalar xy, Scalar xz, Scalar yz) {
    c_ << xx, yy, zz, xy, xz, yz;
  }
  explicit Sym3(const Vec6<Scalar>& coeffs) : c_(coeffs) {}

  static Sym3 Zero() { return Sym3(); }

  /// Builds from a full matrix, averaging the off-diagonal pairs.
  static Sym3 fromFull(const Mat3<Scalar>& m) {
    return Sym3(m(0, 0), m(1, 1), m(2, 2),
                (m(0, 1) + m(1, 0)) / 2,
                (m(0, 2) + m(2, 0)) / 2,
                (m(1, 2) + m(2, 1)) / 2);
  }

  Scalar xx() const { return c_[0]; }
  Scalar yy() const { return c_[1]; }
  Scalar zz() const { return c_[2]; }
  Scalar xy() const { return c_[3]; }
  Scalar xz() const { return c_[4]; }
  Scalar yz() const { return c_[5]; }

  Scalar& xx() { return c_[0]; }
  Scalar& yy() { return c_[1]; }
  Scalar& zz() { return c_[2]; }
  Scalar& xy() { return c_[3]; }
  Scalar& xz() { return c_[4]; }
  Scalar& yz() { return c_[5]; }

  const Vec6<Scalar>& coeffs() const { return c_; }
  Vec6<Scalar>& coeffs() { return c_; }

  Mat3<Scalar> full() const {
    Mat3<Scalar> m;
    m << c_[0], c_[3], c_[4],
         c_[3], c_[1], c_[5],
         c_[4], c_[5], c_[2];
    return m;
  }

  Scalar trace() const { return c_[0] + c_[1] + c_[2]; }

  /// Frobenius norm.
  Scalar norm() const {
    using std::sqrt;
    return sqrt(c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2] +
                2 * (c_[3] * c_[3] + c_[4] * c_[4] + c_[5] * c_[5]));
  }

  Vec3<Scalar> operator*(const Vec3<Scalar>& v) const {
    return Vec3<Scalar>(c_[0] * v(0) + c_[3] * v(1) + c_[4] * v(2),
                        c_[3] * v(0) + c_[1] * v(1) + c_[5] * v(2),
                        c_[4] * v(0) + c_[5] * v(1) + c_[2] * v(2));
  }

  Sym3 operator+(const Sym3& o) const { return Sym3(Vec6<Scalar>(c_ + o.c_)); }
  Sym3 operator-(const Sym3& o) const { return Sym3(Vec6<Scalar>(c_ - o.c_)); }
  Sym3 operator*(Scalar s) const { return Sym3(Vec6<Scalar>(c_ * s)); }

  /// Adjugate (transposed cofactor matrix), symmetric again.
  Sym3 adjugate() const {
    const Scalar a = c_[0], b = c_[1], c = c_[2], d = c_[3], e = c_[4], f = c_[5];
    return Sym3(b * c - f * f, a * c - e * e, a * b - d * d,
                e * f - d * c, d * f - e * b, d * e - a * f);
  }

  /// v^T M v.
  Scalar quadraticForm(const Vec3<Scalar>& v) const { return v.dot((*this) * v); }

private:
  Vec6<Scalar> c_;
};

}  // namespace normalfield
