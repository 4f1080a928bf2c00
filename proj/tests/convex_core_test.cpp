#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "maxpsh/maxpsh.hpp"
#include "oracles.hpp"

using namespace maxpsh;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) out(i++) = c;
  return out;
}

RealMatrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

ConvexBody square() { return ConvexBody::box(vec({-1, -1}), vec({1, 1})); }

}  // namespace

TEST(ConvexBody, RejectsUnboundedPolytope) {
  std::vector<Halfspace> hs{{vec({1, 0}), 1.0}, {vec({0, 1}), 1.0}};
  EXPECT_THROW(ConvexBody::polytope(hs), SpecError);
}

TEST(ConvexBody, RejectsIndefiniteQ) {
  EXPECT_THROW(ConvexBody::ellipsoid(diag({1, -1})), SpecError);
  EXPECT_THROW(ConvexBody::ellipsoid(diag({1, 0})), SpecError);
}

TEST(ConvexBody, RejectsMismatchedHalfspaceDims) {
  std::vector<Halfspace> hs{{vec({1, 0}), 1.0}, {vec({-1}), 1.0}};
  EXPECT_THROW(ConvexBody::polytope(hs), SpecError);
}

TEST(ConvexBody, ContainsIsStrict) {
  const ConvexBody sq = square();
  EXPECT_TRUE(sq.contains(vec({0.99, -0.99})));
  EXPECT_FALSE(sq.contains(vec({1.0, 0.0})));
  const ConvexBody ball = ConvexBody::unit_ball(2);
  EXPECT_FALSE(ball.contains(vec({1.0, 0.0})));
  EXPECT_TRUE(ball.contains(vec({0.7, 0.7})));
}

TEST(ConvexBody, SupportValues) {
  EXPECT_NEAR(square().support(vec({1, 1})), 2.0, 1e-14);
  EXPECT_NEAR(square().support(vec({-2, 0.5})), 2.5, 1e-14);
  // diag(1, 4): semi-axes 1 and 1/2.
  const ConvexBody e = ConvexBody::ellipsoid(diag({1, 4}));
  EXPECT_NEAR(e.support(vec({0, 1})), 0.5, 1e-14);
  EXPECT_NEAR(e.support(vec({3, 4})), std::sqrt(9.0 + 16.0 / 4.0), 1e-14);
  const ConvexBody shifted = ConvexBody::ellipsoid(diag({1, 1}), vec({2, 0}));
  EXPECT_NEAR(shifted.support(vec({1, 0})), 3.0, 1e-14);
}

TEST(ConvexBody, SuperellipseSupportMatchesHolder) {
  // Support of {|y1|^4 + |y2|^4 < 1} is the dual 4/3-norm.
  const ConvexBody s = ConvexBody::superellipse(4.0, vec({1, 1}));
  const RealVector a = vec({0.6, -0.8});
  const double dual = std::pow(std::pow(0.6, 4.0 / 3.0) + std::pow(0.8, 4.0 / 3.0), 0.75);
  EXPECT_NEAR(s.support(a), dual, 1e-6);
  EXPECT_GE(s.support(a), dual);
}

TEST(Gauge, KnownValues) {
  EXPECT_NEAR(centered_gauge(square(), vec({0, 0}), vec({0.5, 0.25})), 0.5, 1e-15);
  const ConvexBody iv = ConvexBody::interval(-1, 1);
  EXPECT_NEAR(centered_gauge(iv, vec({0.5}), vec({1})), 2.0, 1e-14);
  EXPECT_NEAR(centered_gauge(iv, vec({0.5}), vec({-1})), 2.0 / 3.0, 1e-14);
  const ConvexBody ball = ConvexBody::unit_ball(3);
  EXPECT_NEAR(centered_gauge(ball, vec({0, 0, 0}), vec({1, 2, 2})), 3.0, 1e-14);
  EXPECT_EQ(centered_gauge(ball, vec({0.1, 0, 0}), vec({0, 0, 0})), 0.0);
}

TEST(Gauge, RejectsBaseOutsideBody) {
  EXPECT_THROW(centered_gauge(square(), vec({1.5, 0}), vec({1, 0})), DomainError);
  EXPECT_THROW(centered_gauge(ConvexBody::unit_ball(2), vec({1.0, 0}), vec({1, 0})), DomainError);
}

TEST(Gauge, DimensionMismatch) {
  EXPECT_THROW(centered_gauge(square(), vec({0}), vec({1, 0})), DimensionError);
}

TEST(Gauge, ClosedFormsAgreeWithIndependentBisection) {
  const RealMatrix Q = diag({1, 4});
  struct Case {
    ConvexBody body;
    oracle::Membership inside;
  };
  const std::vector<Case> cases{{square(), oracle::square()},
                                {ConvexBody::ellipsoid(Q), oracle::ellipsoid(Q)},
                                {ConvexBody::unit_ball(2), oracle::ellipsoid(RealMatrix::Identity(2, 2))}};
  for (const auto& c : cases) {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      SampleStream rng(7, k);
      const RealVector x = sample_body(c.body, rng);
      const RealVector y = rng.normal() * rng.direction(2);
      const double p = centered_gauge(c.body, x, y);
      const double ref = oracle::gauge_bisect(c.inside, x, y);
      worst = std::max(worst, std::abs(p - ref) / std::max(1.0, ref));
    }
    EXPECT_LE(worst, 1e-10) << c.body.kind();
  }
}

TEST(Gauge, LibraryBisectionMatchesClosedForm) {
  const ConvexBody e = ConvexBody::ellipsoid(diag({1, 4}), vec({0.2, -0.1}));
  for (std::uint64_t k = 0; k < 200; ++k) {
    SampleStream rng(11, k);
    const RealVector x = sample_body(e, rng);
    const RealVector y = rng.direction(2);
    const double p = centered_gauge(e, x, y);
    EXPECT_NEAR(gauge_by_bisection(e, x, y), p, 1e-12 * std::max(1.0, p));
  }
}

TEST(Gauge, HomogeneityAndDuality) {
  const ConvexBody bodies[] = {square(), ConvexBody::ellipsoid(diag({1, 4})),
                               ConvexBody::superellipse(4.0, vec({1.0, 0.5}))};
  for (const auto& body : bodies) {
    for (std::uint64_t k = 0; k < 1000; ++k) {
      SampleStream rng(3, k);
      const RealVector x = sample_body(body, rng);
      const RealVector y = rng.direction(2) * rng.uniform(0.05, 3.0);
      const double p = centered_gauge(body, x, y);
      const double lam = rng.uniform(0.1, 10.0);
      ASSERT_NEAR(centered_gauge(body, x, lam * y), lam * p, 1e-12 * lam * std::max(1.0, p)) << body.kind();
      // p < 1 exactly when x + y stays inside.
      if (std::abs(p - 1.0) > 1e-9) ASSERT_EQ(p < 1.0, body.contains(x + y)) << body.kind();
    }
  }
}

TEST(Gauge, SubadditiveInDirection) {
  const ConvexBody e = ConvexBody::ellipsoid(diag({1, 4}));
  for (std::uint64_t k = 0; k < 500; ++k) {
    SampleStream rng(5, k);
    const RealVector x = sample_body(e, rng);
    const RealVector a = rng.direction(2), b = rng.direction(2);
    EXPECT_LE(centered_gauge(e, x, a + b), centered_gauge(e, x, a) + centered_gauge(e, x, b) + 1e-12);
  }
}

TEST(Gauge, NonSymmetricInterval) {
  const Gauge g(ConvexBody::interval(-1, 2));
  EXPECT_FALSE(g.is_symmetric());
  EXPECT_NEAR(g(vec({1})), 0.5, 1e-15);
  EXPECT_NEAR(g(vec({-1})), 1.0, 1e-15);
  EXPECT_TRUE(Gauge(ConvexBody::unit_ball(2)).is_symmetric());
  EXPECT_TRUE(Gauge(square()).is_symmetric());
}

TEST(Gauge, RequiresOriginInside) {
  EXPECT_THROW(Gauge(ConvexBody::interval(0.5, 2.0)), SpecError);
}

TEST(Gauge, SuperellipseAtCenterIsWeightedNorm) {
  const ConvexBody s = ConvexBody::superellipse(4.0, vec({1.0, 0.5}));
  const RealVector y = vec({0.3, -0.2});
  const double ref = std::pow(std::pow(0.3, 4) + std::pow(0.4, 4), 0.25);
  EXPECT_NEAR(centered_gauge(s, vec({0, 0}), y), ref, 1e-13);
}

TEST(GaugeHessian, UnitBallAtOrigin) {
  const RealMatrix H = gauge_hessian(ConvexBody::unit_ball(2), vec({0, 0}), vec({1, 0}));
  EXPECT_NEAR((H - diag({0, 1})).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(GaugeHessian, EllipsoidMatchesFiniteDifferenceOfOracle) {
  const RealMatrix Q = diag({1, 4});
  const ConvexBody e = ConvexBody::ellipsoid(Q);
  const auto inside = oracle::ellipsoid(Q);
  const RealVector x = vec({0.1, 0.2}), y = vec({0.3, 0.5});
  auto f = [&](const RealVector& v) { return oracle::gauge_bisect(inside, x, v); };
  const RealMatrix H = gauge_hessian(e, x, y);
  const RealMatrix Hfd = oracle::fd_hessian(f, y, 1e-3);
  EXPECT_LE((H - Hfd).cwiseAbs().maxCoeff(), 1e-5);
  // Homogeneous of degree one: y is in the kernel.
  EXPECT_LE((H * y).norm(), 1e-12);
}

TEST(GaugeHessian, SmoothRouteAgreesWithEllipsoid) {
  // q = 2 superellipse with semi-axes (1, 1/2) is the ellipsoid diag(1, 4).
  const ConvexBody s = ConvexBody::superellipse(2.0, vec({1.0, 0.5}));
  const ConvexBody e = ConvexBody::ellipsoid(diag({1, 4}));
  const RealVector x = vec({0.2, -0.1}), y = vec({-0.4, 0.7});
  EXPECT_NEAR(centered_gauge(s, x, y), centered_gauge(e, x, y), 1e-12);
  EXPECT_LE((gauge_hessian(s, x, y) - gauge_hessian(e, x, y)).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(GaugeHessian, PolytopeUnsupported) {
  EXPECT_THROW(gauge_hessian(square(), vec({0, 0}), vec({1, 0})), UnsupportedError);
  EXPECT_THROW(gauge_hessian(ConvexBody::unit_ball(2), vec({0, 0}), vec({0, 0})), DomainError);
}

TEST(Sampling, StreamsAreReproducible) {
  SampleStream a(42, 17), b(42, 17), c(42, 18);
  const double va = a.uniform();
  EXPECT_EQ(va, b.uniform());
  EXPECT_NE(va, c.uniform());
}
