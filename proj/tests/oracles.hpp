#pragma once

// Test-only reference computations. Nothing here calls into the gauge or
// model code it is used to check.

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Membership = std::function<bool(const Vec&)>;

/// inf { t > 0 : x + y/t in D } for a raw membership predicate: bracket by
/// doubling/halving, then bisect down to adjacent doubles.
inline double gauge_bisect(const Membership& inside, const Vec& x, const Vec& y) {
  if (y.norm() == 0.0) return 0.0;
  double lo = 1.0, hi = 1.0;
  if (inside(x + y / hi)) {
    while (inside(x + y / lo)) lo *= 0.5;
  } else {
    while (!inside(x + y / hi)) hi *= 2.0;
    lo = hi * 0.5;
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(x + y / mid) ? hi : lo) = mid;
  }
  return hi;
}

inline Membership square(double r = 1.0) {
  return [r](const Vec& w) { return std::abs(w(0)) < r && std::abs(w(1)) < r; };
}
inline Membership ellipsoid(const Eigen::MatrixXd& Q) {
  return [Q](const Vec& w) { return w.dot(Q * w) < 1.0; };
}
inline Membership interval(double lo, double hi) {
  return [lo, hi](const Vec& w) { return lo < w(0) && w(0) < hi; };
}

/// Hessian of a scalar function of R^n by central differences.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Vec&)>& f, const Vec& y, double h) {
  const auto n = y.size();
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec ei = Vec::Zero(n), ej = Vec::Zero(n);
      ei(i) = h;
      ej(j) = h;
      H(i, j) = (f(y + ei + ej) - f(y + ei - ej) - f(y - ei + ej) + f(y - ei - ej)) / (4 * h * h);
    }
  }
  return H;
}

/// |Im arctanh z| via the logarithm formula.
inline double disc_u(std::complex<double> z) {
  return std::abs((0.5 * std::log((1.0 + z) / (1.0 - z))).imag());
}

}  // namespace oracle
