// A short walk through the elliptic tube over the ellipse x1^2 + 4 x2^2 < 1:
// u at a few points, E against its finite-difference limit, the extremal
// disc through a point, and the Levi form there.

#include <cstdio>

#include "maxpsh/maxpsh.hpp"

using namespace maxpsh;

int main() {
  RealMatrix Q(2, 2);
  Q << 1, 0, 0, 4;
  const ConvexBody body = ConvexBody::ellipsoid(Q);
  const Model tube = Model::elliptic_tube(body);

  RealVector x(2), y(2);
  x << 0.2, 0.1;
  y << 0.3, -0.15;
  const ComplexPoint z{x, y};
  const TubeGauges g = tube_gauges(body, z);
  std::printf("z = (%.2f, %.2f) + i(%.2f, %.2f)\n", x(0), x(1), y(0), y(1));
  std::printf("  p(z) = %.12f  p(conj z) = %.12f  u = %.12f\n", g.p, g.p_conj, u_max(tube, z));

  std::printf("E(x, y) closed %.12f  limit %.12f\n", metric_E(tube, x, y), metric_E_fd(tube, x, y));

  const GeodesicChart c = chart(body, z);
  std::printf("chart: t1 = %.6f t2 = %.6f zeta0 = %.6f%+.6fi, |f(zeta0) - z| = %.2e\n", c.t1, c.t2, c.zeta0.real(),
              c.zeta0.imag(), reconstruction_residual(c));
  for (double r : {0.0, 0.5, 0.9}) {
    const ComplexScalar zeta(r * 0.6, r * 0.8);
    std::printf("  zeta = %.2f%+.2fi  u(f(zeta)) = %.12f  |Im arctanh zeta| = %.12f\n", zeta.real(), zeta.imag(),
                u_max(tube, disc_geodesic_eval(c, zeta)), std::abs(arctanh(zeta).imag()));
  }

  const LeviReport L = levi_matrix(u_field(tube), z, 1e-3);
  std::printf("Levi eigenvalues %.3e %.3e (closed-form gap %.2e)\n", L.eigenvalues(0), L.eigenvalues(1),
              verify_tube_levi(body, z, 1e-3));
  return 0;
}
