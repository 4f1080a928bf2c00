#pragma once

// Seeded point draws from models. Every draw k is a pure function of
// (seed, k) through SampleStream, so sweeps are reproducible in any order.

#include <cmath>
#include <cstdint>
#include <limits>

#include "maxpsh/models.hpp"
#include "maxpsh/random.hpp"

namespace maxpsh {

/// Uniform point of the body by rejection from its bounding box.
inline RealVector sample_body(const ConvexBody& body, SampleStream& rng) {
  auto [lo, hi] = body.bounding_box();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    RealVector x = rng.box(lo, hi);
    if (body.contains(x)) return x;
  }
  throw DomainError("sample_body: rejection sampling failed");
}

/// A point of the center V.
inline RealVector sample_center(const Model& model, SampleStream& rng) {
  if (model.is<Disc1D>()) return RealVector::Constant(1, rng.uniform(-0.95, 0.95));
  if (const auto* e = std::get_if<EllipticTube>(&model.variant())) return sample_body(e->body, rng);
  const Eigen::Index n = model.dim();
  return rng.box(RealVector::Constant(n, -2.0), RealVector::Constant(n, 2.0));
}

/// A member point. `reach` in (0, 1] caps how far toward the boundary of M
/// the imaginary part goes: for tubes the defining quantity (|Im z|, |z|,
/// mu(Im z), sqrt(p p-bar)) is at most reach times its bound.
inline ComplexPoint sample_member(const Model& model, SampleStream& rng, double reach = 1.0) {
  const Eigen::Index n = model.dim();
  return std::visit(
      [&](const auto& m) -> ComplexPoint {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Strip1D>) {
          return ComplexPoint::scalar({rng.uniform(-2.0, 2.0), reach * kQuarterPi * rng.uniform(-1.0, 1.0)});
        } else if constexpr (std::is_same_v<T, Disc1D>) {
          const double r = reach * std::sqrt(rng.uniform());
          const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
          return ComplexPoint::scalar(std::polar(r, th));
        } else if constexpr (std::is_same_v<T, StripTube>) {
          RealVector x = rng.box(RealVector::Constant(n, -2.0), RealVector::Constant(n, 2.0));
          const RealVector d = rng.direction(n);
          const double s = reach * rng.uniform() * kQuarterPi / m.gauge(d);
          return {std::move(x), s * d};
        } else {
          RealVector x = sample_body(m.body, rng);
          const RealVector d = rng.direction(n);
          const double pp = centered_gauge(m.body, x, d) * centered_gauge(m.body, x, -d);
          const double s = reach * rng.uniform() / std::sqrt(pp);
          return {std::move(x), s * d};
        }
      },
      model.variant());
}

/// Distance proxy from x to the boundary: the shortest ray x + t d leaving the
/// body over the axes and a fixed fan of directions (exact for polytopes).
inline double boundary_margin(const ConvexBody& body, const RealVector& x) {
  require_dim(x, body.dim(), "boundary_margin");
  if (!body.contains(x)) return 0.0;
  if (const auto* poly = std::get_if<PolytopeH>(&body.variant())) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& hs : poly->halfspaces) d = std::min(d, (hs.b - hs.a.dot(x)) / hs.a.norm());
    return d;
  }
  const Eigen::Index n = body.dim();
  double d = std::numeric_limits<double>::infinity();
  auto ray = [&](const RealVector& dir) { d = std::min(d, 1.0 / centered_gauge(body, x, dir)); };
  for (Eigen::Index i = 0; i < n; ++i) {
    RealVector e = RealVector::Zero(n);
    e(i) = 1.0;
    ray(e);
    ray(-e);
  }
  for (std::uint64_t k = 0; k < 64; ++k) {
    SampleStream rng(0x6d617267696eULL, k);
    ray(rng.direction(n));
  }
  return d;
}

/// How far from the model's edges a point sits: the boundary margin of Re z
/// for elliptic tubes, 1 - |z| for the disc, and the gap pi/4 - u otherwise.
inline double edge_margin(const Model& model, const ComplexPoint& z) {
  if (model.is<Disc1D>()) return 1.0 - std::abs(as_scalar(z));
  if (const auto* e = std::get_if<EllipticTube>(&model.variant())) return boundary_margin(e->body, z.x);
  return kQuarterPi - u_max(model, z);
}

/// Region where finite-difference diagnostics are meaningful: imaginary reach
/// capped so that p p-bar <= max_product (tubes), u >= min_u and
/// |Im z| >= min_imag keep the stencil off the center, and
/// edge_margin >= min_margin keeps it off the edges.
struct SafeRegion {
  double max_product = 0.9;
  double min_u = 0.0;
  double min_margin = 0.0;
  double min_imag = 0.0;
};

inline ComplexPoint sample_safe(const Model& model, SampleStream& rng, const SafeRegion& region) {
  const double reach = std::sqrt(region.max_product);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    ComplexPoint z = sample_member(model, rng, reach);
    if (z.y.norm() >= region.min_imag && u_max(model, z) >= region.min_u && edge_margin(model, z) >= region.min_margin) {
      return z;
    }
  }
  throw DomainError("sample_safe: no sample found in the safe region");
}

}  // namespace maxpsh
