#pragma once

// Bounded open convex bodies in R^n.
//
// Three representations are supported:
//   PolytopeH  {w : a_i . w < b_i for all i}
//   Ellipsoid  {w : (w - c)^T Q (w - c) < 1}
//   Smooth     {w : rho(w) < 0} for a C2 convex defining function rho
//
// Bodies are immutable after construction and safe to share across threads.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "maxpsh/errors.hpp"
#include "maxpsh/random.hpp"
#include "maxpsh/types.hpp"

namespace maxpsh {

struct Halfspace {
  RealVector a;
  double b = 0.0;
};

struct PolytopeH {
  std::vector<Halfspace> halfspaces;
  std::vector<RealVector> vertices;  // filled at construction
};

struct Ellipsoid {
  RealMatrix Q;
  RealVector center;
  RealMatrix Q_inverse;  // filled at construction
};

/// Value, gradient and Hessian of a defining function at one point.
struct DefiningJet {
  double value = 0.0;
  RealVector gradient;
  RealMatrix hessian;
};

struct Smooth {
  std::string kind;
  std::function<DefiningJet(const RealVector&)> defining;
  RealVector interior_point;
  double bounding_radius = 0.0;  // body lies in the ball of this radius around interior_point
};

namespace detail {

inline void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k > m) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline RealMatrix stack_normals(const std::vector<Halfspace>& hs, const std::vector<int>& rows, Eigen::Index n) {
  RealMatrix A(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = hs[static_cast<std::size_t>(rows[r])].a.transpose();
  return A;
}

// Bounded iff the normals have full rank and the recession cone {d : a_i.d <= 0}
// has no extreme ray. Extreme rays of a pointed cone lie on n-1 independent
// active constraints, so it suffices to test those candidate directions.
inline bool normals_positively_span(const std::vector<Halfspace>& hs, Eigen::Index n) {
  const int m = static_cast<int>(hs.size());
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
  if (m < n + 1) return false;
  Eigen::FullPivLU<RealMatrix> full(stack_normals(hs, all, n));
  if (full.rank() < n) return false;
  bool bounded = true;
  for_each_subset(m, static_cast<int>(n - 1), [&](const std::vector<int>& rows) {
    if (!bounded) return;
    RealVector d;
    if (n == 1) {
      d = RealVector::Ones(1);
    } else {
      Eigen::FullPivLU<RealMatrix> lu(stack_normals(hs, rows, n));
      if (lu.rank() != n - 1) return;
      d = lu.kernel().col(0).normalized();
    }
    for (double s : {1.0, -1.0}) {
      bool recedes = true;
      for (const auto& h : hs) {
        if (s * h.a.dot(d) > 1e-12 * h.a.norm()) {
          recedes = false;
          break;
        }
      }
      if (recedes) bounded = false;
    }
  });
  return bounded;
}

inline std::vector<RealVector> enumerate_vertices(const std::vector<Halfspace>& hs, Eigen::Index n) {
  std::vector<RealVector> out;
  const int m = static_cast<int>(hs.size());
  for_each_subset(m, static_cast<int>(n), [&](const std::vector<int>& rows) {
    RealMatrix A = stack_normals(hs, rows, n);
    Eigen::FullPivLU<RealMatrix> lu(A);
    if (lu.rank() < n) return;
    RealVector rhs(n);
    for (Eigen::Index r = 0; r < n; ++r) rhs(r) = hs[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])].b;
    RealVector v = lu.solve(rhs);
    for (const auto& h : hs) {
      if (h.a.dot(v) > h.b + 1e-9 * (1.0 + std::abs(h.b))) return;
    }
    for (const auto& w : out) {
      if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + v.lpNorm<Eigen::Infinity>())) return;
    }
    out.push_back(std::move(v));
  });
  return out;
}

}  // namespace detail

class ConvexBody {
 public:
  using Variant = std::variant<PolytopeH, Ellipsoid, Smooth>;

  /// {w : a_i . w < b_i}. Throws SpecError when unbounded or without interior.
  static ConvexBody polytope(std::vector<Halfspace> halfspaces) {
    if (halfspaces.empty()) throw SpecError("polytope: no halfspaces");
    const Eigen::Index n = halfspaces.front().a.size();
    if (n < 1) throw SpecError("polytope: dimension must be >= 1");
    for (const auto& h : halfspaces) {
      if (h.a.size() != n) throw SpecError("polytope: halfspace normals differ in dimension");
      if (!h.a.allFinite() || !std::isfinite(h.b)) throw SpecError("polytope: non-finite halfspace");
      if (h.a.norm() == 0.0) throw SpecError("polytope: zero normal");
    }
    if (!detail::normals_positively_span(halfspaces, n)) {
      throw SpecError("polytope: halfspace normals do not positively span R^n (unbounded body)");
    }
    PolytopeH p{std::move(halfspaces), {}};
    p.vertices = detail::enumerate_vertices(p.halfspaces, n);
    ConvexBody body(std::move(p), n);
    if (!body.contains(body.interior_point())) throw SpecError("polytope: empty interior");
    return body;
  }

  /// {w : (w - c)^T Q (w - c) < 1} with Q symmetric positive definite.
  static ConvexBody ellipsoid(RealMatrix Q, RealVector center = {}) {
    const Eigen::Index n = Q.rows();
    if (n < 1 || Q.cols() != n) throw SpecError("ellipsoid: Q must be square");
    if (!Q.allFinite()) throw SpecError("ellipsoid: non-finite Q");
    if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * (1.0 + Q.lpNorm<Eigen::Infinity>())) {
      throw SpecError("ellipsoid: Q is not symmetric");
    }
    Q = 0.5 * (Q + Q.transpose());
    Eigen::LLT<RealMatrix> llt(Q);
    if (llt.info() != Eigen::Success) throw SpecError("ellipsoid: Q is not positive definite");
    if (center.size() == 0) center = RealVector::Zero(n);
    if (center.size() != n) throw SpecError("ellipsoid: center dimension mismatch");
    Ellipsoid e{Q, std::move(center), llt.solve(RealMatrix::Identity(n, n))};
    return ConvexBody(std::move(e), n);
  }

  static ConvexBody unit_ball(Eigen::Index n) { return ellipsoid(RealMatrix::Identity(n, n)); }

  /// Axis-aligned box lo < w < hi as a polytope.
  static ConvexBody box(const RealVector& lo, const RealVector& hi) {
    std::vector<Halfspace> hs;
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      RealVector e = RealVector::Zero(lo.size());
      e(i) = 1.0;
      hs.push_back({e, hi(i)});
      hs.push_back({-e, -lo(i)});
    }
    return polytope(std::move(hs));
  }

  static ConvexBody interval(double lo, double hi) {
    return box(RealVector::Constant(1, lo), RealVector::Constant(1, hi));
  }

  /// Generic smooth body {rho < 0}. Convexity is checked by sampling the
  /// Hessian of rho for positive semidefiniteness inside the bounding ball.
  static ConvexBody smooth(std::string kind, std::function<DefiningJet(const RealVector&)> defining,
                           RealVector interior_point, double bounding_radius) {
    const Eigen::Index n = interior_point.size();
    if (n < 1) throw SpecError("smooth body: dimension must be >= 1");
    if (!(bounding_radius > 0.0) || !std::isfinite(bounding_radius)) throw SpecError("smooth body: bounding radius must be positive");
    if (!(defining(interior_point).value < 0.0)) throw SpecError("smooth body: interior point is not inside");
    SampleStream rng(0x5eed, 0);
    for (int k = 0; k < 64; ++k) {
      RealVector w = interior_point + bounding_radius * rng.uniform() * rng.direction(n);
      DefiningJet jet = defining(w);
      if (jet.gradient.size() != n || jet.hessian.rows() != n || jet.hessian.cols() != n) {
        throw SpecError("smooth body: defining function returned wrong dimensions");
      }
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (jet.hessian + jet.hessian.transpose()), Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-9 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff())) {
        throw SpecError("smooth body: defining function is not convex");
      }
    }
    Smooth s{std::move(kind), std::move(defining), std::move(interior_point), bounding_radius};
    return ConvexBody(std::move(s), n);
  }

  /// sum_i |(w_i - c_i) / a_i|^q < 1 with exponent q >= 2 (C2 boundary).
  static ConvexBody superellipse(double exponent, RealVector semi_axes, RealVector center = {}) {
    const Eigen::Index n = semi_axes.size();
    if (n < 1) throw SpecError("superellipse: empty semi_axes");
    if (!(exponent >= 2.0) || !std::isfinite(exponent)) throw SpecError("superellipse: exponent must be >= 2");
    if (!(semi_axes.minCoeff() > 0.0)) throw SpecError("superellipse: semi-axes must be positive");
    if (center.size() == 0) center = RealVector::Zero(n);
    if (center.size() != n) throw SpecError("superellipse: center dimension mismatch");
    const double q = exponent;
    auto rho = [q, semi_axes, center](const RealVector& w) {
      const Eigen::Index m = semi_axes.size();
      DefiningJet jet{-1.0, RealVector::Zero(m), RealMatrix::Zero(m, m)};
      for (Eigen::Index i = 0; i < m; ++i) {
        const double s = (w(i) - center(i)) / semi_axes(i);
        const double a = std::abs(s);
        jet.value += std::pow(a, q);
        jet.gradient(i) = q * std::pow(a, q - 1.0) * (s < 0 ? -1.0 : 1.0) / semi_axes(i);
        jet.hessian(i, i) = q * (q - 1.0) * std::pow(a, q - 2.0) / (semi_axes(i) * semi_axes(i));
      }
      return jet;
    };
    return smooth("superellipse", rho, center, semi_axes.norm());
  }

  Eigen::Index dim() const { return dim_; }
  const Variant& variant() const { return rep_; }
  bool is_polytope() const { return std::holds_alternative<PolytopeH>(rep_); }
  bool is_ellipsoid() const { return std::holds_alternative<Ellipsoid>(rep_); }
  bool is_smooth() const { return std::holds_alternative<Smooth>(rep_); }
  /// Ellipsoids and smooth bodies have C2 boundary; polytopes do not.
  bool has_c2_boundary() const { return !is_polytope(); }

  std::string kind() const {
    if (is_polytope()) return "polytope";
    if (is_ellipsoid()) return "ellipsoid";
    return "smooth:" + std::get<Smooth>(rep_).kind;
  }

  /// Open-body membership (strict inequalities).
  bool contains(const RealVector& x) const {
    require_dim(x, dim_, "contains");
    return std::visit(
        [&](const auto& b) -> bool {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, PolytopeH>) {
            for (const auto& h : b.halfspaces)
              if (!(h.a.dot(x) < h.b)) return false;
            return true;
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            const RealVector w = x - b.center;
            return w.dot(b.Q * w) < 1.0;
          } else {
            return b.defining(x).value < 0.0;
          }
        },
        rep_);
  }

  /// A fixed point strictly inside the body.
  RealVector interior_point() const {
    return std::visit(
        [&](const auto& b) -> RealVector {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, PolytopeH>) {
            RealVector c = RealVector::Zero(dim_);
            for (const auto& v : b.vertices) c += v;
            return c / static_cast<double>(std::max<std::size_t>(b.vertices.size(), 1));
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            return b.center;
          } else {
            return b.interior_point;
          }
        },
        rep_);
  }

  /// sup { a . w : w in body }. Exact for polytopes (max over vertices) and
  /// ellipsoids (a.c + sqrt(a^T Q^-1 a)). Smooth bodies use multistart projected
  /// gradient ascent over boundary directions and add a 1e-9 safety margin,
  /// so the returned value is never below the true support.
  double support(const RealVector& a) const {
    require_dim(a, dim_, "support");
    return std::visit(
        [&](const auto& b) -> double {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, PolytopeH>) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : b.vertices) best = std::max(best, a.dot(v));
            return best;
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            return a.dot(b.center) + std::sqrt(std::max(0.0, a.dot(b.Q_inverse * a)));
          } else {
            return smooth_support(b, a);
          }
        },
        rep_);
  }

  /// Axis-aligned box containing the closure of the body.
  std::pair<RealVector, RealVector> bounding_box() const {
    RealVector lo(dim_), hi(dim_);
    if (const auto* s = std::get_if<Smooth>(&rep_)) {
      lo = s->interior_point.array() - s->bounding_radius;
      hi = s->interior_point.array() + s->bounding_radius;
      return {lo, hi};
    }
    for (Eigen::Index i = 0; i < dim_; ++i) {
      RealVector e = RealVector::Zero(dim_);
      e(i) = 1.0;
      hi(i) = support(e);
      lo(i) = -support(-e);
    }
    return {lo, hi};
  }

  /// Distance from the interior point to the farthest point of the body, bounded above.
  double radius_bound() const {
    auto [lo, hi] = bounding_box();
    const RealVector c = interior_point();
    return (lo - c).cwiseAbs().cwiseMax((hi - c).cwiseAbs()).norm();
  }

 private:
  ConvexBody(Variant rep, Eigen::Index n) : rep_(std::move(rep)), dim_(n) {}

  double smooth_support(const Smooth& s, const RealVector& a) const;

  Variant rep_;
  Eigen::Index dim_;
};

}  // namespace maxpsh

// smooth_support needs centered_gauge; it is defined in gauge.hpp.
#include "maxpsh/gauge.hpp"
