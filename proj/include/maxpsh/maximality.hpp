#pragma once

// Competitor-based maximality testing.
//
// Competitors are members w of the class U(V, M) (psh, values in [0, pi/4),
// vanishing on V) obtained as holomorphic pullbacks of one-dimensional maximal
// functions, so their membership is certified by construction. Maximality of
// u demands w <= u everywhere; geodesic pullbacks reach equality on their disc.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "maxpsh/convex_body.hpp"
#include "maxpsh/gauge.hpp"
#include "maxpsh/geodesics.hpp"
#include "maxpsh/levi.hpp"
#include "maxpsh/models.hpp"
#include "maxpsh/random.hpp"
#include "maxpsh/sampling.hpp"

namespace maxpsh {

enum class CompetitorKind { SlabPullback, LinearStripPullback, GeodesicPullback };

inline const char* to_string(CompetitorKind k) {
  switch (k) {
    case CompetitorKind::SlabPullback: return "slab";
    case CompetitorKind::LinearStripPullback: return "linear-strip";
    default: return "geodesic";
  }
}

struct Competitor {
  CompetitorKind kind;
  std::string description;
  Field evaluate;
  /// Where the competitor is defined, if narrower than the whole model
  /// (geodesic pullbacks live on their disc). Empty means the whole model.
  PointSampler domain;
  /// Center points inside that domain; empty means the model's center.
  PointSampler center_domain;
};

/// w(z) = |Im arctanh(phi(a . z))| with phi the affine map of (alpha, beta) onto (-1, 1).
/// The map z -> a . z sends the elliptic tube of any body inside the slab
/// alpha < a . x < beta into the disc with diameter (alpha, beta).
inline Competitor slab_pullback(const RealVector& a, double alpha, double beta) {
  if (a.isZero(0.0)) throw DomainError("slab_pullback: a = 0");
  if (!(alpha < beta) || !std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("slab_pullback: empty or unbounded slab");
  const double mid = 0.5 * (alpha + beta), half = 0.5 * (beta - alpha);
  Field w = [a, mid, half](const ComplexPoint& z) {
    const ComplexScalar s((a.dot(z.x) - mid) / half, a.dot(z.y) / half);
    if (!(std::norm(s) < 1.0)) throw DomainError("slab competitor: point maps outside the unit disc");
    return std::abs(arctanh(s).imag());
  };
  return {CompetitorKind::SlabPullback,
          "slab a.x in (" + std::to_string(alpha) + ", " + std::to_string(beta) + ")", std::move(w), {}, {}};
}

/// Slab pullback with alpha, beta the exact (or safely widened) support values of the body.
inline Competitor slab_competitor(const ConvexBody& body, const RealVector& a) {
  require_dim(a, body.dim(), "slab_competitor");
  if (a.isZero(0.0)) throw DomainError("slab_competitor: a = 0");
  return slab_pullback(a, -body.support(-a), body.support(a));
}

/// w(z) = |Im(c . z)|, admissible when |c . y| <= mu(y) for all y, i.e. the
/// support of the unit body in both directions +c and -c is at most 1.
inline Competitor linear_strip_competitor(const Gauge& gauge, const RealVector& c) {
  require_dim(c, gauge.dim(), "linear_strip_competitor");
  const double reach = std::max(gauge.body().support(c), gauge.body().support(-c));
  if (!(reach <= 1.0 + 1e-14)) {
    throw DomainError("linear_strip_competitor: certification failed, |c . y| <= mu(y) does not hold");
  }
  Field w = [c](const ComplexPoint& z) { return std::abs(c.dot(z.y)); };
  return {CompetitorKind::LinearStripPullback, "linear strip |Im(c.z)|", std::move(w), {}, {}};
}

/// Equality witness along the chart disc: w(f(zeta)) = |Im arctanh zeta|.
/// Evaluation at points off the disc image is rejected.
inline Competitor geodesic_pullback_competitor(const GeodesicChart& c, std::uint64_t seed = 0) {
  const RealVector mid = 0.5 * (c.x1 + c.x2);
  const RealVector d = 0.5 * (c.x2 - c.x1);
  const double dd = d.squaredNorm();
  Field w = [mid, d, dd](const ComplexPoint& z) {
    const RealVector rx = z.x - mid;
    const ComplexScalar zeta(rx.dot(d) / dd, z.y.dot(d) / dd);
    const double off = std::max((rx - zeta.real() * d).norm(), (z.y - zeta.imag() * d).norm());
    if (off > 1e-9 * (1.0 + std::sqrt(dd))) throw DomainError("geodesic competitor: point is off the disc image");
    if (!(std::norm(zeta) < 1.0)) throw DomainError("geodesic competitor: point is off the disc image");
    return std::abs(arctanh(zeta).imag());
  };
  PointSampler domain = [c, seed](std::uint64_t k) {
    SampleStream rng(seed, k);
    return disc_geodesic_eval(c, sample_disc(rng, 0.95));
  };
  PointSampler center_domain = [c, seed](std::uint64_t k) {
    SampleStream rng(seed ^ 0xce47e5ULL, k);
    return disc_geodesic_eval(c, ComplexScalar(rng.uniform(-0.95, 0.95), 0.0));
  };
  return {CompetitorKind::GeodesicPullback, "geodesic pullback", std::move(w), std::move(domain), std::move(center_domain)};
}

/// factor * w; used as a deliberately invalid competitor.
inline Competitor scaled(Competitor w, double factor) {
  Field inner = std::move(w.evaluate);
  w.evaluate = [inner, factor](const ComplexPoint& z) { return factor * inner(z); };
  w.description = std::to_string(factor) + " * " + w.description;
  return w;
}

struct Comparison {
  double max_violation = -std::numeric_limits<double>::infinity();
  ComplexPoint worst_point;
  bool pass(double tol = 1e-10) const { return max_violation <= tol; }
};

/// max over seeded samples of w(z) - u(z), with u any field on the model.
inline Comparison compare(const Model& model, const Field& u, const Competitor& w, int nsamples, std::uint64_t seed) {
  if (nsamples < 1) throw DomainError("compare: nsamples must be positive");
  Comparison out;
  for (int k = 0; k < nsamples; ++k) {
    ComplexPoint z;
    if (w.domain) {
      z = w.domain(static_cast<std::uint64_t>(k));
    } else {
      SampleStream rng(seed, static_cast<std::uint64_t>(k));
      z = sample_member(model, rng);
    }
    const double gap = w.evaluate(z) - u(z);
    if (gap > out.max_violation) {
      out.max_violation = gap;
      out.worst_point = z;
    }
  }
  return out;
}

inline Comparison compare(const Model& model, const Competitor& w, int nsamples, std::uint64_t seed) {
  return compare(model, u_field(model), w, nsamples, seed);
}

/// Sampled class constraints: largest |w| on center points and largest w on
/// member points (must stay below pi/4).
struct ClassCheck {
  double max_on_center = 0.0;
  double max_value = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
};

inline ClassCheck check_class_constraints(const Model& model, const Competitor& w, int nsamples, std::uint64_t seed) {
  ClassCheck out;
  for (int k = 0; k < nsamples; ++k) {
    SampleStream rng(seed, static_cast<std::uint64_t>(k));
    const auto idx = static_cast<std::uint64_t>(k);
    const ComplexPoint zc = w.center_domain ? w.center_domain(idx) : ComplexPoint::real(sample_center(model, rng));
    const ComplexPoint zm = w.domain ? w.domain(idx) : sample_member(model, rng);
    out.max_on_center = std::max(out.max_on_center, std::abs(w.evaluate(zc)));
    const double v = w.evaluate(zm);
    out.max_value = std::max(out.max_value, v);
    out.min_value = std::min(out.min_value, v);
  }
  return out;
}

/// A deterministic mix of certified competitors suited to the model.
inline std::vector<Competitor> generate_competitors(const Model& model, int count, std::uint64_t seed) {
  std::vector<Competitor> out;
  const Eigen::Index n = model.dim();
  for (int k = 0; k < count; ++k) {
    SampleStream rng(seed ^ 0xc0ffeeULL, static_cast<std::uint64_t>(k));
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Strip1D>) {
            const Gauge abs_gauge(ConvexBody::interval(-1.0, 1.0));
            out.push_back(linear_strip_competitor(abs_gauge, RealVector::Constant(1, rng.uniform(-1.0, 1.0))));
          } else if constexpr (std::is_same_v<T, Disc1D>) {
            if (k % 2 == 0) {
              out.push_back(slab_pullback(RealVector::Ones(1), -1.0 - rng.uniform(0.0, 1.0), 1.0 + rng.uniform(0.0, 1.0)));
            } else {
              const ConvexBody interval = ConvexBody::ellipsoid(RealMatrix::Identity(1, 1));
              const ComplexPoint z = ComplexPoint::scalar(std::polar(0.9 * std::sqrt(rng.uniform()) + 0.05, rng.uniform(0.1, 3.0)));
              out.push_back(geodesic_pullback_competitor(chart(interval, z), seed + static_cast<std::uint64_t>(k)));
            }
          } else if constexpr (std::is_same_v<T, StripTube>) {
            const RealVector d = rng.direction(n);
            const double reach = std::max(m.gauge.body().support(d), m.gauge.body().support(-d));
            out.push_back(linear_strip_competitor(m.gauge, rng.uniform(0.3, 1.0) * d / reach));
          } else {
            if (k % 3 == 2) {
              SampleStream pr(seed, 1000000u + static_cast<std::uint64_t>(k));
              ComplexPoint z = sample_member(model, pr, 0.9);
              if (z.y.isZero(0.0)) z.y(0) = 1e-3;
              out.push_back(geodesic_pullback_competitor(chart(m.body, z), seed + static_cast<std::uint64_t>(k)));
            } else {
              out.push_back(slab_competitor(m.body, rng.direction(n)));
            }
          }
        },
        model.variant());
  }
  return out;
}

}  // namespace maxpsh
