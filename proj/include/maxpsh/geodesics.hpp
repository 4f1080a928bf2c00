#pragma once

// Complex geodesics of the catalog models.
//
// Through every point z = x + iy (y != 0) of an elliptic tube passes the flat
// disc
//     f(zeta) = (1 - zeta)/2 * x1 + (1 + zeta)/2 * x2,   |zeta| < 1,
// spanned by the chord x1 = x + t1 y, x2 = x - t2 y of D with t1 = 1/p(z),
// t2 = 1/p(conj z). Along it u(f(zeta)) = |Im arctanh zeta|, and
// h(eta) = f(tanh eta) is an E-complex geodesic of the strip |Im eta| < pi/4.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>

#include "maxpsh/convex_body.hpp"
#include "maxpsh/gauge.hpp"
#include "maxpsh/models.hpp"
#include "maxpsh/random.hpp"
#include "maxpsh/types.hpp"

namespace maxpsh {

struct GeodesicChart {
  double t1 = 0.0;
  double t2 = 0.0;
  RealVector x1;
  RealVector x2;
  ComplexScalar zeta0;
  ComplexPoint z;  // the point the chart was built through
  ConvexBody body;
};

/// Chart of the extremal disc through a non-central elliptic-tube point.
/// zeta0 carries the minus sign on its imaginary part so that f(zeta0) = z.
inline GeodesicChart chart(const ConvexBody& body, const ComplexPoint& z) {
  if (z.dim() != body.dim()) throw DimensionError("chart: dimension mismatch");
  if (z.y.isZero(0.0)) throw DomainError("chart: no chart through a center point (y = 0)");
  if (!member(Model::elliptic_tube(body), z)) throw DomainError("chart: point outside the elliptic tube");
  const TubeGauges g = tube_gauges(body, z);
  const double t1 = 1.0 / g.p;
  const double t2 = 1.0 / g.p_conj;
  return GeodesicChart{t1,
                       t2,
                       z.x + t1 * z.y,
                       z.x - t2 * z.y,
                       ComplexScalar(t1 - t2, -2.0) / (t1 + t2),
                       z,
                       body};
}

inline ComplexPoint disc_geodesic_eval(const GeodesicChart& c, ComplexScalar zeta) {
  if (!(std::norm(zeta) < 1.0)) throw DomainError("disc_geodesic_eval: |zeta| >= 1");
  const double a = zeta.real(), b = zeta.imag();
  return {0.5 * (1.0 - a) * c.x1 + 0.5 * (1.0 + a) * c.x2, 0.5 * b * (c.x2 - c.x1)};
}

/// |f(zeta0) - z| in the max norm.
inline double reconstruction_residual(const GeodesicChart& c) {
  return disc_geodesic_eval(c, c.zeta0).distance(c.z);
}

/// max |p(x, x_k - x) - 1| over both chord endpoints; zero when they lie on the boundary.
inline double boundary_residual(const GeodesicChart& c) {
  return std::max(std::abs(centered_gauge(c.body, c.z.x, c.x1 - c.z.x) - 1.0),
                  std::abs(centered_gauge(c.body, c.z.x, c.x2 - c.z.x) - 1.0));
}

/// h(eta) = f(tanh eta) on the strip |Im eta| < pi/4.
inline ComplexPoint strip_geodesic_eval(const GeodesicChart& c, ComplexScalar eta) {
  if (!(std::abs(eta.imag()) < kQuarterPi)) throw DomainError("strip_geodesic_eval: |Im eta| >= pi/4");
  return disc_geodesic_eval(c, std::tanh(eta));
}

/// Seeded uniform point of the disc |zeta| <= radius.
inline ComplexScalar sample_disc(SampleStream& rng, double radius) {
  return std::polar(radius * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * std::numbers::pi));
}

/// max over seeded zeta of | u(f(zeta)) - |Im arctanh zeta| | along the chart
/// disc through z. Draws stay in |zeta| <= 0.95.
inline double geodesic_identity_residual(const ConvexBody& body, const ComplexPoint& z, int nsamples,
                                         std::uint64_t seed) {
  const GeodesicChart c = chart(body, z);
  const Model tube = Model::elliptic_tube(body);
  double worst = 0.0;
  for (int k = 0; k < nsamples; ++k) {
    SampleStream rng(seed, static_cast<std::uint64_t>(k));
    const ComplexScalar zeta = sample_disc(rng, 0.95);
    const double lhs = u_max(tube, disc_geodesic_eval(c, zeta));
    worst = std::max(worst, std::abs(lhs - std::abs(arctanh(zeta).imag())));
  }
  return worst;
}

/// f(zeta) = x + zeta * y / mu(y) on the upper half strip 0 < Im zeta < pi/4,
/// along which mu(Im f(zeta)) = Im zeta.
inline ComplexPoint striptube_geodesic(const Gauge& gauge, const RealVector& x, const RealVector& y, ComplexScalar zeta) {
  require_dim(x, gauge.dim(), "striptube_geodesic");
  require_dim(y, gauge.dim(), "striptube_geodesic");
  if (y.isZero(0.0)) throw DomainError("striptube_geodesic: y = 0");
  if (!(zeta.imag() > 0.0 && zeta.imag() < kQuarterPi)) throw DomainError("striptube_geodesic: Im zeta outside (0, pi/4)");
  const RealVector v = y / gauge(y);
  return {x + zeta.real() * v, zeta.imag() * v};
}

/// An explicit holomorphic disc phi : unit disc -> M with phi(0) = x,
/// phi'(0) = xi / a and phi(]-1,1[) in V. By contraction, E(x, xi) <= a.
struct ExtremalDisc {
  double a = 0.0;
  std::function<ComplexPoint(ComplexScalar)> map;
};

/// The disc realizing the upper bound for F at (x, xi). For elliptic tubes it
/// is the chart disc of x + i s xi re-centered by a real disc automorphism, so
/// a equals (p(x, xi) + p(x, -xi)) / 2 = E. For strip tubes the disc runs
/// along the real line through xi, giving a = max(mu(xi), mu(-xi)).
inline ExtremalDisc f_upper_bound(const Model& model, const RealVector& x, const RealVector& xi) {
  if (x.size() != model.dim() || xi.size() != model.dim()) throw DimensionError("f_upper_bound: dimension mismatch");
  if (!in_center(model, x)) throw DomainError("f_upper_bound: base point is not in the center");
  if (xi.isZero(0.0)) throw DomainError("f_upper_bound: no candidate disc for xi = 0");
  return std::visit(
      [&](const auto& m) -> ExtremalDisc {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Strip1D>) {
          const double a = std::abs(xi(0));
          const double v = xi(0) / a, x0 = x(0);
          return {a, [x0, v](ComplexScalar w) { return ComplexPoint::scalar(x0 + v * arctanh(w)); }};
        } else if constexpr (std::is_same_v<T, Disc1D>) {
          const double x0 = x(0);
          const double a = std::abs(xi(0)) / (1.0 - x0 * x0);
          const double sigma = xi(0) > 0 ? 1.0 : -1.0;
          return {a, [x0, sigma](ComplexScalar w) { return ComplexPoint::scalar((sigma * w + x0) / (1.0 + x0 * sigma * w)); }};
        } else if constexpr (std::is_same_v<T, StripTube>) {
          const double a = std::max(m.gauge(xi), m.gauge(-xi));
          const RealVector v = xi / a;
          return {a, [x, v](ComplexScalar w) {
                    const ComplexScalar s = arctanh(w);
                    return ComplexPoint{x + s.real() * v, s.imag() * v};
                  }};
        } else {
          const double pp = centered_gauge(m.body, x, xi) * centered_gauge(m.body, x, -xi);
          const double s = 0.5 / std::sqrt(pp);
          const GeodesicChart c = chart(m.body, ComplexPoint{x, s * xi});
          // f(r) = x for r = Re zeta0; w -> (r - w) / (1 - r w) maps 0 to r and
          // flips the orientation so that phi'(0) is a positive multiple of xi.
          const double r = c.zeta0.real();
          const double speed = 0.5 * (c.t1 + c.t2) * s * (1.0 - r * r);
          return {1.0 / speed, [c, r](ComplexScalar w) { return disc_geodesic_eval(c, (r - w) / (1.0 - r * w)); }};
        }
      },
      model.variant());
}

}  // namespace maxpsh
