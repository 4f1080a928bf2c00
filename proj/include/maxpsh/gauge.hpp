#pragma once

// Minkowski functionals of a convex body.
//
//   p(x, y) = inf { t > 0 : x + y / t in D }     (centered at an interior x)
//   mu(y)   = p(0, y)                           (origin-centered gauge)
//
// p is positively homogeneous and convex in y but not symmetric in general.

#include <cmath>
#include <limits>
#include <string>

#include "maxpsh/convex_body.hpp"
#include "maxpsh/errors.hpp"
#include "maxpsh/types.hpp"

namespace maxpsh {

struct GaugeOptions {
  double growth = 2.0;            // bracket growth factor
  double rel_tol = 1e-14;         // bisection stopping width, relative
  int max_doublings = 200;
  int max_bisections = 200;
};

/// p(x, y) by bracketed bisection on the membership of x + y / t.
/// Works for every representation; uses nothing but ConvexBody::contains.
inline double gauge_by_bisection(const ConvexBody& body, const RealVector& x, const RealVector& y,
                                 const GaugeOptions& opt = {}) {
  require_dim(x, body.dim(), "gauge_by_bisection");
  require_dim(y, body.dim(), "gauge_by_bisection");
  if (!body.contains(x)) throw DomainError("gauge_by_bisection: base point outside the body");
  if (y.isZero(0.0)) return 0.0;
  auto inside = [&](double t) { return body.contains(x + y / t); };

  double hi = 1.0;
  double lo = 0.0;
  int doublings = 0;
  while (!inside(hi)) {
    lo = hi;
    hi *= opt.growth;
    if (++doublings > opt.max_doublings) throw ConvergenceError("gauge_by_bisection: bracket doubling cap exceeded");
  }
  if (doublings == 0) {
    // Shrink until x + y / lo leaves the body; bounded bodies guarantee this.
    lo = hi;
    int halvings = 0;
    while (inside(lo)) {
      hi = lo;
      lo /= opt.growth;
      if (++halvings > 1100) throw ConvergenceError("gauge_by_bisection: bracket halving cap exceeded");
    }
  }
  for (int it = 0; hi - lo > opt.rel_tol * hi; ++it) {
    if (it >= opt.max_bisections) throw ConvergenceError("gauge_by_bisection: iteration cap exceeded");
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline double polytope_gauge(const PolytopeH& b, const RealVector& x, const RealVector& y) {
  double p = 0.0;
  for (const auto& h : b.halfspaces) {
    const double ay = h.a.dot(y);
    if (ay <= 0.0) continue;  // never constrains t > 0
    p = std::max(p, ay / (h.b - h.a.dot(x)));
  }
  return p;
}

struct EllipsoidTerms {
  double k;  // 1 - w^T Q w
  double b;  // w^T Q y
  double c;  // y^T Q y
  double s;  // sqrt(b^2 + k c)
};

inline EllipsoidTerms ellipsoid_terms(const Ellipsoid& e, const RealVector& x, const RealVector& y) {
  const RealVector w = x - e.center;
  const RealVector Qw = e.Q * w;
  EllipsoidTerms t{};
  t.k = 1.0 - w.dot(Qw);
  if (t.k < 1e-12) throw DomainError("centered_gauge: x too close to the ellipsoid boundary");
  t.b = Qw.dot(y);
  t.c = y.dot(e.Q * y);
  t.s = std::sqrt(t.b * t.b + t.k * t.c);
  return t;
}

inline double ellipsoid_gauge(const Ellipsoid& e, const RealVector& x, const RealVector& y) {
  const EllipsoidTerms t = ellipsoid_terms(e, x, y);
  if (t.c == 0.0) return 0.0;
  // (b + s) / k, rewritten as c / (s - b) when b < 0 to avoid cancellation.
  return t.b >= 0.0 ? (t.b + t.s) / t.k : t.c / (t.s - t.b);
}

// Bisection, then Newton on t -> rho(x + y/t) kept inside the final bracket.
inline double smooth_gauge(const ConvexBody& body, const Smooth& s, const RealVector& x, const RealVector& y,
                           const GaugeOptions& opt) {
  double t = gauge_by_bisection(body, x, y, opt);
  if (t == 0.0) return 0.0;
  const double lo = t * (1.0 - 4 * opt.rel_tol), hi = t * (1.0 + 4 * opt.rel_tol);
  for (int it = 0; it < 3; ++it) {
    const DefiningJet jet = s.defining(x + y / t);
    const double slope = -jet.gradient.dot(y) / (t * t);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = t - jet.value / slope;
    if (!(next >= lo && next <= hi)) break;
    if (next == t) break;
    t = next;
  }
  return t;
}

}  // namespace detail

/// p(x, y): closed form for polytopes and ellipsoids, bisection plus Newton
/// polish for smooth bodies. Returns exactly 0 for y = 0.
inline double centered_gauge(const ConvexBody& body, const RealVector& x, const RealVector& y,
                             const GaugeOptions& opt = {}) {
  require_dim(x, body.dim(), "centered_gauge");
  require_dim(y, body.dim(), "centered_gauge");
  if (!body.contains(x)) throw DomainError("centered_gauge: base point outside the body");
  if (y.isZero(0.0)) return 0.0;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, PolytopeH>) {
          return detail::polytope_gauge(b, x, y);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return detail::ellipsoid_gauge(b, x, y);
        } else {
          return detail::smooth_gauge(body, b, x, y, opt);
        }
      },
      body.variant());
}

/// Hessian in y of p(x, y). Analytic for ellipsoids; central differences with
/// step 1e-4 |y| for smooth bodies. Undefined at y = 0 and for polytopes.
inline RealMatrix gauge_hessian(const ConvexBody& body, const RealVector& x, const RealVector& y) {
  require_dim(x, body.dim(), "gauge_hessian");
  require_dim(y, body.dim(), "gauge_hessian");
  if (body.is_polytope()) throw UnsupportedError("gauge_hessian: polytope bodies are not C2");
  if (y.isZero(0.0)) throw DomainError("gauge_hessian: gauge is not differentiable at y = 0");
  if (!body.contains(x)) throw DomainError("gauge_hessian: base point outside the body");
  const Eigen::Index n = body.dim();
  if (const auto* e = std::get_if<Ellipsoid>(&body.variant())) {
    // p = (b + s) / k with s = sqrt(b^2 + k c), so Hess p = Hess s / k and
    // Hess s = (q q^T + k Q) / s - grad s grad s^T / s, q = Q w.
    const detail::EllipsoidTerms t = detail::ellipsoid_terms(*e, x, y);
    const RealVector q = e->Q * (x - e->center);
    const RealVector grad_s = (t.b * q + t.k * (e->Q * y)) / t.s;
    const RealMatrix hess_s = (q * q.transpose() + t.k * e->Q) / t.s - grad_s * grad_s.transpose() / t.s;
    return hess_s / t.k;
  }
  const double h = 1e-4 * y.norm();
  RealMatrix H(n, n);
  auto p = [&](const RealVector& v) { return centered_gauge(body, x, v); };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      RealVector ei = RealVector::Zero(n), ej = RealVector::Zero(n);
      ei(i) = h;
      ej(j) = h;
      H(i, j) = (p(y + ei + ej) - p(y + ei - ej) - p(y - ei + ej) + p(y - ei - ej)) / (4 * h * h);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

/// The origin-centered gauge mu of a body containing the origin.
class Gauge {
 public:
  explicit Gauge(ConvexBody body, GaugeOptions opt = {}) : body_(std::move(body)), opt_(opt) {
    if (!body_.contains(RealVector::Zero(body_.dim()))) throw SpecError("Gauge: body must contain the origin");
  }

  double operator()(const RealVector& y) const {
    return centered_gauge(body_, RealVector::Zero(body_.dim()), y, opt_);
  }
  RealMatrix hessian(const RealVector& y) const { return gauge_hessian(body_, RealVector::Zero(body_.dim()), y); }

  const ConvexBody& body() const { return body_; }
  Eigen::Index dim() const { return body_.dim(); }
  /// mu(y) = mu(-y) for all y; decided structurally (centered ellipsoid or
  /// polytope whose halfspace set is closed under negation).
  bool is_symmetric() const {
    if (const auto* e = std::get_if<Ellipsoid>(&body_.variant())) return e->center.isZero(0.0);
    if (const auto* p = std::get_if<PolytopeH>(&body_.variant())) {
      for (const auto& h : p->halfspaces) {
        bool found = false;
        for (const auto& g : p->halfspaces) {
          if ((g.a + h.a).lpNorm<Eigen::Infinity>() <= 1e-15 * h.a.norm() && std::abs(g.b - h.b) <= 1e-15 * std::abs(h.b)) found = true;
        }
        if (!found) return false;
      }
      return true;
    }
    const auto& s = std::get<Smooth>(body_.variant());
    return s.kind == "superellipse" && s.interior_point.isZero(0.0);
  }

 private:
  ConvexBody body_;
  GaugeOptions opt_;
};

inline double ConvexBody::smooth_support(const Smooth& s, const RealVector& a) const {
  const Eigen::Index n = dim_;
  const RealVector& c = s.interior_point;
  if (a.norm() == 0.0) return 0.0;
  // Boundary point along direction d from c is c + d / p(c, d).
  auto value = [&](const RealVector& d) { return a.dot(c + d / centered_gauge(*this, c, d)); };
  std::vector<RealVector> starts;
  starts.push_back(a.normalized());
  for (Eigen::Index i = 0; i < n; ++i) {
    RealVector e = RealVector::Zero(n);
    e(i) = 1.0;
    starts.push_back(e);
    starts.push_back(-e);
  }
  SampleStream rng(0x5u, static_cast<std::uint64_t>(n));
  for (int k = 0; k < 8; ++k) starts.push_back(rng.direction(n));

  double best = -std::numeric_limits<double>::infinity();
  for (RealVector d : starts) {
    double f = value(d);
    double step = 0.5;
    for (int it = 0; it < 500 && step > 1e-15; ++it) {
      RealVector g(n);
      const double fd = 1e-6;
      for (Eigen::Index i = 0; i < n; ++i) {
        RealVector dp = d, dm = d;
        dp(i) += fd;
        dm(i) -= fd;
        g(i) = (value(dp.normalized()) - value(dm.normalized())) / (2 * fd);
      }
      g -= g.dot(d) * d;  // tangent to the sphere
      if (g.norm() < 1e-14) break;
      RealVector trial = (d + step * g / g.norm()).normalized();
      const double ft = value(trial);
      if (ft > f) {
        d = trial;
        f = ft;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, f);
  }
  return best + 1e-9 * (1.0 + std::abs(best));
}

}  // namespace maxpsh
