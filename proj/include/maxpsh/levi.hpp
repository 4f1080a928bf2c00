#pragma once

// Finite-difference pluripotential diagnostics.
//
// The Levi form of u at z along a complex direction xi is
//     L(z, xi) = d^2 (u(z + zeta xi)) / d zeta d conj(zeta) at zeta = 0,
// a quarter of the Laplacian of u restricted to the complex line. It is
// estimated with the five-point stencil, exact on quadratics and O(h^2)
// otherwise. Full Hermitian matrices are assembled by polarization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "maxpsh/gauge.hpp"
#include "maxpsh/models.hpp"
#include "maxpsh/random.hpp"
#include "maxpsh/sampling.hpp"
#include "maxpsh/types.hpp"

namespace maxpsh {

using Field = std::function<double(const ComplexPoint&)>;
using PointSampler = std::function<ComplexPoint(std::uint64_t index)>;

/// One-quarter of the five-point Laplacian of u along the line z + zeta xi.
inline double levi_line(const Field& u, const ComplexPoint& z, const ComplexVector& xi, double h) {
  if (xi.size() != z.dim()) throw DimensionError("levi_line: direction dimension mismatch");
  if (!(h > 0.0)) throw DomainError("levi_line: step must be positive");
  const ComplexScalar I(0.0, 1.0);
  try {
    const double sum = u(z.shifted(h, xi)) + u(z.shifted(-h, xi)) + u(z.shifted(I * h, xi)) +
                       u(z.shifted(-I * h, xi)) - 4.0 * u(z);
    return 0.25 * sum / (h * h);
  } catch (const DomainError&) {
    throw DomainError("levi_line: stencil escapes the model domain");
  }
}

struct LeviReport {
  ComplexMatrix matrix;    // entry (j, k) estimates d^2 u / dz_j d conj(z_k)
  RealVector eigenvalues;  // ascending
  double min_eig = 0.0;
  double max_eig = 0.0;
  double det_abs = 0.0;
  double step = 0.0;
  ComplexPoint point;
};

/// Hermitian Levi matrix by polarization of levi_line; the diagonal comes
/// straight from levi_line. With L(xi) = sum_jk M_jk xi_j conj(xi_k),
///     M_jk = [L(e_j + e_k) - L(e_j - e_k) + i L(e_j + i e_k) - i L(e_j - i e_k)] / 4.
inline LeviReport levi_matrix(const Field& u, const ComplexPoint& z, double h) {
  const Eigen::Index n = z.dim();
  const ComplexScalar I(0.0, 1.0);
  ComplexMatrix M(n, n);
  auto e = [n](Eigen::Index j) {
    ComplexVector v = ComplexVector::Zero(n);
    v(j) = 1.0;
    return v;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    M(j, j) = levi_line(u, z, e(j), h);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const ComplexScalar v = 0.25 * (levi_line(u, z, e(j) + e(k), h) - levi_line(u, z, e(j) - e(k), h) +
                                      I * levi_line(u, z, e(j) + I * e(k), h) -
                                      I * levi_line(u, z, e(j) - I * e(k), h));
      M(j, k) = v;
      M(k, j) = std::conj(v);
    }
  }
  M = 0.5 * (M + M.adjoint()).eval();
  LeviReport rep;
  rep.matrix = M;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M, Eigen::EigenvaluesOnly);
  rep.eigenvalues = es.eigenvalues();
  rep.min_eig = rep.eigenvalues.minCoeff();
  rep.max_eig = rep.eigenvalues.maxCoeff();
  rep.det_abs = std::abs(rep.eigenvalues.prod());
  rep.step = h;
  rep.point = z;
  return rep;
}

/// Outcome of a sampled verification; serialized by the CLI.
struct CheckReport {
  std::string check;
  std::string model;
  int samples = 0;
  double h = 0.0;
  double tol = 0.0;
  ComplexPoint worst_point;
  double worst_value = 0.0;
  bool pass = true;
};

/// Default region for Levi diagnostics at step h. The five-point error grows
/// like h^2 / s^3 in the local scale s (|y| near the center, the distance of
/// Re z to the boundary near the rim), so both stay far above h.
inline SafeRegion levi_safe_region(double h) {
  return SafeRegion{0.9, 10.0 * h, std::max(10.0 * h, 0.35), std::max(10.0 * h, 0.2)};
}

inline PointSampler safe_sampler(const Model& model, std::uint64_t seed, double h) {
  return [model, seed, h](std::uint64_t k) {
    SampleStream rng(seed, k);
    return sample_safe(model, rng, levi_safe_region(h));
  };
}

inline PointSampler safe_sampler(const Model& model, std::uint64_t seed, const SafeRegion& region) {
  return [model, seed, region](std::uint64_t k) {
    SampleStream rng(seed, k);
    return sample_safe(model, rng, region);
  };
}

/// Every sampled Levi matrix has min_eig >= -tol * max(1, max_eig).
/// worst_value is the smallest normalized min_eig seen.
inline CheckReport verify_psh(const Field& u, const PointSampler& sample, int nsamples, double h, double tol,
                              std::string name = "field") {
  CheckReport rep{"psh", std::move(name), nsamples, h, tol, {}, std::numeric_limits<double>::infinity(), true};
  for (int k = 0; k < nsamples; ++k) {
    const ComplexPoint z = sample(static_cast<std::uint64_t>(k));
    const LeviReport L = levi_matrix(u, z, h);
    const double v = L.min_eig / std::max(1.0, L.max_eig);
    if (v < rep.worst_value) {
      rep.worst_value = v;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.worst_value >= -tol;
  return rep;
}

inline CheckReport verify_psh(const Model& model, int nsamples, std::uint64_t seed, double h = 1e-3, double tol = 1e-6) {
  return verify_psh(u_field(model), safe_sampler(model, seed, h), nsamples, h, tol, model.name());
}

/// Every sampled Levi matrix has min_eig <= rel_tol * max(1, max_eig), i.e.
/// one eigenvalue vanishes to relative accuracy and (dd^c u)^n = 0
/// numerically. The floor of 1 keeps a vanishing form (n = 1) from failing on
/// rounding noise. worst_value is the largest min_eig / max_eig seen.
inline CheckReport verify_ma_degenerate(const Field& u, const PointSampler& sample, int nsamples, double h,
                                        double rel_tol, std::string name = "field") {
  CheckReport rep{"ma", std::move(name), nsamples, h, rel_tol, {}, -std::numeric_limits<double>::infinity(), true};
  for (int k = 0; k < nsamples; ++k) {
    const ComplexPoint z = sample(static_cast<std::uint64_t>(k));
    const LeviReport L = levi_matrix(u, z, h);
    if (!(L.min_eig <= rel_tol * std::max(1.0, L.max_eig))) rep.pass = false;
    const double ratio = L.max_eig > 0.0 ? L.min_eig / L.max_eig : (L.min_eig <= 0.0 ? 0.0 : 1.0);
    if (ratio > rep.worst_value) {
      rep.worst_value = ratio;
      rep.worst_point = z;
    }
  }
  return rep;
}

inline CheckReport verify_ma_degenerate(const Model& model, int nsamples, std::uint64_t seed, double h = 1e-3,
                                        double rel_tol = 1e-4) {
  return verify_ma_degenerate(u_field(model), safe_sampler(model, seed, h), nsamples, h, rel_tol, model.name());
}

/// Closed-form Levi matrix of u for tubes over C2 bodies:
///   elliptic tube  (Hess_y p(x, y) + Hess_y p(x, -y)) / 8
///   strip tube     Hess mu(y) / 4
/// For the elliptic tube, d dbar arctan p = Hess_y p / 4 on each of the two
/// gauges, and u carries the factor 1/2.
inline RealMatrix tube_levi_reference(const Model& model, const ComplexPoint& z) {
  const ConvexBody* body = model.body();
  if (body == nullptr) throw UnsupportedError("tube_levi_reference: model has no convex body");
  if (!body->has_c2_boundary()) throw UnsupportedError("tube_levi_reference: polytope bodies are not C2");
  if (z.y.isZero(0.0)) throw DomainError("tube_levi_reference: y = 0 (gauge Hessian undefined at the apex)");
  if (model.is<StripTube>()) return 0.25 * gauge_hessian(*body, RealVector::Zero(z.dim()), z.y);
  return 0.125 * (gauge_hessian(*body, z.x, z.y) + gauge_hessian(*body, z.x, -z.y));
}

/// Max-norm gap between the finite-difference Levi matrix of u and its closed form.
inline double verify_tube_levi(const Model& model, const ComplexPoint& z, double h) {
  const RealMatrix ref = tube_levi_reference(model, z);
  if (!member(model, z)) throw DomainError("verify_tube_levi: point outside the model");
  const LeviReport L = levi_matrix(u_field(model), z, h);
  return (L.matrix - ref.cast<ComplexScalar>()).cwiseAbs().maxCoeff();
}

inline double verify_tube_levi(const ConvexBody& body, const ComplexPoint& z, double h) {
  return verify_tube_levi(Model::elliptic_tube(body), z, h);
}

/// Max-norm residuals of
///   dp/dx_i       = p dp/dy_i
///   d2p/dx_i dy_j = p d2p/dy_i dy_j + dp/dy_i dp/dy_j
///   d2p/dx_i dx_j = p^2 d2p/dy_i dy_j + 2 p dp/dy_i dp/dy_j
/// with every derivative of p(x, y) by central differences of step h.
struct DerivativeResiduals {
  double dx = 0.0;
  double dxy = 0.0;
  double dxx = 0.0;
  double max() const { return std::max({dx, dxy, dxx}); }
};

inline DerivativeResiduals verify_gauge_derivative_identities(const ConvexBody& body, const ComplexPoint& z, double h) {
  if (z.dim() != body.dim()) throw DimensionError("verify_gauge_derivative_identities: dimension mismatch");
  if (!body.has_c2_boundary()) throw UnsupportedError("verify_gauge_derivative_identities: polytope bodies are not C2");
  if (z.y.isZero(0.0)) throw DomainError("verify_gauge_derivative_identities: y = 0");
  if (!body.contains(z.x)) throw DomainError("verify_gauge_derivative_identities: x outside the body");
  const Eigen::Index n = body.dim();
  auto p = [&](const RealVector& x, const RealVector& y) { return centered_gauge(body, x, y); };
  auto unit = [n, h](Eigen::Index i) {
    RealVector e = RealVector::Zero(n);
    e(i) = h;
    return e;
  };
  const RealVector& x = z.x;
  const RealVector& y = z.y;
  const double p0 = p(x, y);

  RealVector px(n), py(n);
  RealMatrix pyy(n, n), pxy(n, n), pxx(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RealVector ei = unit(i);
    px(i) = (p(x + ei, y) - p(x - ei, y)) / (2 * h);
    py(i) = (p(x, y + ei) - p(x, y - ei)) / (2 * h);
    pyy(i, i) = (p(x, y + ei) - 2 * p0 + p(x, y - ei)) / (h * h);
    pxx(i, i) = (p(x + ei, y) - 2 * p0 + p(x - ei, y)) / (h * h);
    for (Eigen::Index j = 0; j < n; ++j) {
      const RealVector ej = unit(j);
      pxy(i, j) = (p(x + ei, y + ej) - p(x + ei, y - ej) - p(x - ei, y + ej) + p(x - ei, y - ej)) / (4 * h * h);
      if (j > i) {
        pyy(i, j) = pyy(j, i) = (p(x, y + ei + ej) - p(x, y + ei - ej) - p(x, y - ei + ej) + p(x, y - ei - ej)) / (4 * h * h);
        pxx(i, j) = pxx(j, i) = (p(x + ei + ej, y) - p(x + ei - ej, y) - p(x - ei + ej, y) + p(x - ei - ej, y)) / (4 * h * h);
      }
    }
  }
  const RealMatrix outer = py * py.transpose();
  DerivativeResiduals r;
  r.dx = (px - p0 * py).lpNorm<Eigen::Infinity>();
  r.dxy = (pxy - (p0 * pyy + outer)).cwiseAbs().maxCoeff();
  r.dxx = (pxx - (p0 * p0 * pyy + 2 * p0 * outer)).cwiseAbs().maxCoeff();
  return r;
}

/// sqrt(2 L_{u^2}(x, xi)) next to E(x, xi) on a strip tube whose squared
/// gauge is C2 (centered ellipsoid). With g(t) = u(x + i t xi)^2 the first
/// entry is sqrt(g''(0) / 2) by a centered second difference.
inline std::pair<double, double> prop_eg_check(const Model& model, const RealVector& x, const RealVector& xi, double h) {
  const auto* tube = std::get_if<StripTube>(&model.variant());
  if (tube == nullptr) throw UnsupportedError("prop_eg_check: requires a strip tube");
  const auto* e = std::get_if<Ellipsoid>(&tube->gauge.body().variant());
  if (e == nullptr || !e->center.isZero(0.0)) {
    throw UnsupportedError("prop_eg_check: squared gauge is C2 only for centered ellipsoids");
  }
  if (x.size() != model.dim() || xi.size() != model.dim()) throw DimensionError("prop_eg_check: dimension mismatch");
  if (xi.isZero(0.0)) return {0.0, 0.0};
  auto g = [&](double t) {
    const ComplexPoint zt{x, t * xi};
    if (!member(model, zt)) throw DomainError("prop_eg_check: x + i h xi leaves the strip tube");
    const double u = u_max(model, zt);
    return u * u;
  };
  const double second = (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
  return {std::sqrt(std::max(0.0, 0.5 * second)), metric_E(model, x, xi)};
}

}  // namespace maxpsh
