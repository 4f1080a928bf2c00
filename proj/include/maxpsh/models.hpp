#pragma once

// Catalog of analytic pairs (V, M) with explicit maximal functions.
//
//   Strip1D       M = {|Im z| < pi/4},        V = R,    u = |Im z|
//   Disc1D        M = unit disc,              V = (-1,1), u = |Im arctanh z|
//   StripTube     M = {mu(Im z) < pi/4},      V = R^n,  u = mu(Im z)
//   EllipticTube  M = {Re z in D, p(z)p(conj z) < 1}, V = D,
//                 u = (arctan p(z) + arctan p(conj z)) / 2
//
// E(x, xi) is the one-sided slope of u at x along the curve x + i t xi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxpsh/convex_body.hpp"
#include "maxpsh/errors.hpp"
#include "maxpsh/gauge.hpp"
#include "maxpsh/types.hpp"

namespace maxpsh {

struct Strip1D {};
struct Disc1D {};
struct StripTube {
  Gauge gauge;
};
struct EllipticTube {
  ConvexBody body;
};

class Model {
 public:
  using Variant = std::variant<Strip1D, Disc1D, StripTube, EllipticTube>;

  static Model strip1d() { return Model(Strip1D{}); }
  static Model disc1d() { return Model(Disc1D{}); }
  static Model strip_tube(Gauge gauge) { return Model(StripTube{std::move(gauge)}); }
  static Model elliptic_tube(ConvexBody body) { return Model(EllipticTube{std::move(body)}); }

  const Variant& variant() const { return rep_; }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(rep_);
  }

  Eigen::Index dim() const {
    if (const auto* s = std::get_if<StripTube>(&rep_)) return s->gauge.dim();
    if (const auto* e = std::get_if<EllipticTube>(&rep_)) return e->body.dim();
    return 1;
  }

  std::string name() const {
    switch (rep_.index()) {
      case 0: return "strip1d";
      case 1: return "disc1d";
      case 2: return "striptube";
      default: return "elliptictube";
    }
  }

  /// The convex body behind a tube model, if any.
  const ConvexBody* body() const {
    if (const auto* s = std::get_if<StripTube>(&rep_)) return &s->gauge.body();
    if (const auto* e = std::get_if<EllipticTube>(&rep_)) return &e->body;
    return nullptr;
  }

 private:
  explicit Model(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

/// Gauges of an elliptic-tube point: p(z) = p(x, y) and p(conj z) = p(x, -y).
struct TubeGauges {
  double p = 0.0;
  double p_conj = 0.0;
};

inline TubeGauges tube_gauges(const ConvexBody& body, const ComplexPoint& z) {
  return {centered_gauge(body, z.x, z.y), centered_gauge(body, z.x, -z.y)};
}

inline ComplexScalar as_scalar(const ComplexPoint& z) { return {z.x(0), z.y(0)}; }

/// Principal arctanh; on the unit disc (1+z)/(1-z) has positive real part.
inline ComplexScalar arctanh(ComplexScalar z) { return std::atanh(z); }

inline void require_model_dim(const Model& model, const ComplexPoint& z, const char* what) {
  if (z.x.size() != model.dim() || z.y.size() != model.dim()) {
    throw DimensionError(std::string(what) + ": point dimension does not match model " + model.name());
  }
}

inline bool member(const Model& model, const ComplexPoint& z) {
  require_model_dim(model, z, "member");
  return std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Strip1D>) {
          return std::abs(z.y(0)) < kQuarterPi;
        } else if constexpr (std::is_same_v<T, Disc1D>) {
          return z.x(0) * z.x(0) + z.y(0) * z.y(0) < 1.0;
        } else if constexpr (std::is_same_v<T, StripTube>) {
          return m.gauge(z.y) < kQuarterPi;
        } else {
          if (!m.body.contains(z.x)) return false;
          const TubeGauges g = tube_gauges(m.body, z);
          return g.p * g.p_conj < 1.0;
        }
      },
      model.variant());
}

/// The maximal function u of the model at a member point.
inline double u_max(const Model& model, const ComplexPoint& z) {
  require_model_dim(model, z, "u_max");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Strip1D>) {
          if (!(std::abs(z.y(0)) < kQuarterPi)) throw DomainError("u_max: point outside the strip");
          return std::abs(z.y(0));
        } else if constexpr (std::is_same_v<T, Disc1D>) {
          const ComplexScalar w = as_scalar(z);
          if (!(std::norm(w) < 1.0)) throw DomainError("u_max: point outside the unit disc");
          return std::abs(arctanh(w).imag());
        } else if constexpr (std::is_same_v<T, StripTube>) {
          const double mu = m.gauge(z.y);
          if (!(mu < kQuarterPi)) throw DomainError("u_max: point outside the strip tube");
          return mu;
        } else {
          if (!m.body.contains(z.x)) throw DomainError("u_max: real part outside the body");
          const TubeGauges g = tube_gauges(m.body, z);
          if (!(g.p * g.p_conj < 1.0)) throw DomainError("u_max: point outside the elliptic tube");
          return 0.5 * (std::atan(g.p) + std::atan(g.p_conj));
        }
      },
      model.variant());
}

/// u as a field oracle; throws DomainError off the model.
inline std::function<double(const ComplexPoint&)> u_field(const Model& model) {
  return [model](const ComplexPoint& z) { return u_max(model, z); };
}

/// True iff x is a point of the center V.
inline bool in_center(const Model& model, const RealVector& x) {
  if (x.size() != model.dim()) throw DimensionError("in_center: dimension mismatch");
  if (model.is<Disc1D>()) return std::abs(x(0)) < 1.0;
  if (const auto* e = std::get_if<EllipticTube>(&model.variant())) return e->body.contains(x);
  return x.allFinite();
}

/// Closed-form pseudo-metric E(x, xi).
inline double metric_E(const Model& model, const RealVector& x, const RealVector& xi) {
  if (x.size() != model.dim() || xi.size() != model.dim()) throw DimensionError("metric_E: dimension mismatch");
  if (!in_center(model, x)) throw DomainError("metric_E: base point is not in the center");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Strip1D>) {
          return std::abs(xi(0));
        } else if constexpr (std::is_same_v<T, Disc1D>) {
          return std::abs(xi(0)) / (1.0 - x(0) * x(0));
        } else if constexpr (std::is_same_v<T, StripTube>) {
          return m.gauge(xi);
        } else {
          return 0.5 * (centered_gauge(m.body, x, xi) + centered_gauge(m.body, x, -xi));
        }
      },
      model.variant());
}

/// E(x, xi) from its definition: the limit of u(x + i t xi) / t as t -> 0+,
/// Richardson-extrapolated over a decreasing step ladder (error assumed even
/// in t). Steps whose curve point leaves the model are dropped. If successive
/// extrapolants stop contracting, the finest raw quotient is returned.
inline double metric_E_fd(const Model& model, const RealVector& x, const RealVector& xi,
                          std::span<const double> steps = {}) {
  static constexpr double kDefaultSteps[] = {1e-2, 1e-3, 1e-4};
  if (steps.empty()) steps = kDefaultSteps;
  if (x.size() != model.dim() || xi.size() != model.dim()) throw DimensionError("metric_E_fd: dimension mismatch");
  if (!in_center(model, x)) throw DomainError("metric_E_fd: base point is not in the center");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k] > 0.0) || (k > 0 && !(steps[k] < steps[k - 1]))) {
      throw DomainError("metric_E_fd: steps must be positive and strictly decreasing");
    }
  }
  if (xi.isZero(0.0)) return 0.0;

  std::vector<double> t, q;
  for (double s : steps) {
    const ComplexPoint zt{x, s * xi};
    if (t.empty() && !member(model, zt)) continue;
    t.push_back(s);
    q.push_back(u_max(model, zt) / s);
  }
  if (q.empty()) throw DomainError("metric_E_fd: curve x + i t xi leaves the model for every step");
  if (q.size() == 1) return q.front();

  // Neville-style tableau in t^2.
  std::vector<double> col = q;
  std::vector<double> diag{col.back()};
  for (std::size_t level = 1; level < q.size(); ++level) {
    std::vector<double> next;
    for (std::size_t k = 0; k + 1 < col.size(); ++k) {
      const double r = std::pow(t[k] / t[k + level], 2);
      next.push_back((r * col[k + 1] - col[k]) / (r - 1.0));
    }
    col = std::move(next);
    diag.push_back(col.back());
  }
  const double scale = std::max(1.0, std::abs(q.back()));
  const double d1 = std::abs(q[q.size() - 1] - q[q.size() - 2]);
  const double d2 = std::abs(diag.back() - diag[diag.size() - 2]);
  if (d2 > d1 + 1e-14 * scale) return q.back();
  return diag.back();
}

/// One evaluation of a bounded subharmonic function on {0 < Im z < r}.
struct SchwarzSample {
  ComplexScalar z;
  double u = 0.0;
};

struct SchwarzReport {
  double max_excess = -std::numeric_limits<double>::infinity();
  std::size_t worst_index = 0;
  bool holds(double tol = 0.0) const { return max_excess <= tol; }
};

/// Largest excess u - (a/r) Im z over the samples; nonpositive confirms the
/// strip Schwarz bound u(z) <= (a/r) Im z.
inline SchwarzReport schwarz_bound_check(std::span<const SchwarzSample> samples, double a, double r) {
  if (!(a > 0.0) || !(r > 0.0)) throw DomainError("schwarz_bound_check: a and r must be positive");
  SchwarzReport rep;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (!(s.z.imag() > 0.0 && s.z.imag() < r)) throw DomainError("schwarz_bound_check: sample outside the strip 0 < Im z < r");
    if (!(s.u >= 0.0 && s.u < a)) throw DomainError("schwarz_bound_check: sample value outside [0, a)");
    const double excess = s.u - (a / r) * s.z.imag();
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.worst_index = k;
    }
  }
  return rep;
}

}  // namespace maxpsh
