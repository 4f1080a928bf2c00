#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "maxpsh/errors.hpp"

namespace maxpsh {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexScalar = std::complex<double>;

/// Nearest double to pi/4, the sup of every maximal function.
inline constexpr double kQuarterPi = 0.7853981633974483;

inline bool all_finite(const RealVector& v) { return v.allFinite(); }

inline void require_dim(const RealVector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

/// A point z = x + iy of C^n stored as its real and imaginary parts.
struct ComplexPoint {
  RealVector x;
  RealVector y;

  ComplexPoint() = default;
  ComplexPoint(RealVector re, RealVector im) : x(std::move(re)), y(std::move(im)) {
    if (x.size() != y.size()) throw DimensionError("ComplexPoint: real and imaginary parts differ in dimension");
  }

  static ComplexPoint scalar(ComplexScalar z) {
    return {RealVector::Constant(1, z.real()), RealVector::Constant(1, z.imag())};
  }
  static ComplexPoint real(RealVector re) {
    RealVector im = RealVector::Zero(re.size());
    return {std::move(re), std::move(im)};
  }
  static ComplexPoint from(const ComplexVector& z) { return {z.real(), z.imag()}; }

  Eigen::Index dim() const { return x.size(); }
  ComplexPoint conjugate() const { return {x, -y}; }
  ComplexVector as_complex() const {
    ComplexVector z(dim());
    z.real() = x;
    z.imag() = y;
    return z;
  }
  /// z + c * v for a complex scalar c and complex direction v.
  ComplexPoint shifted(ComplexScalar c, const ComplexVector& v) const {
    ComplexVector w = c * v;
    return {x + w.real(), y + w.imag()};
  }
  bool finite() const { return x.allFinite() && y.allFinite(); }
  /// Max-norm distance in C^n = R^{2n}.
  double distance(const ComplexPoint& o) const {
    return std::max((x - o.x).lpNorm<Eigen::Infinity>(), (y - o.y).lpNorm<Eigen::Infinity>());
  }
};

}  // namespace maxpsh
