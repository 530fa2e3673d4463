#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "edgesym/error.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

template <int Dim>
struct CircleFit {
  Vec<Dim> center = Vec<Dim>::Zero();
  double radius = 0.0;
  /// max_i | |p_i - center| - radius |
  double max_residual = 0.0;
  /// Unit normal of the supporting plane; only set for points in 3-space.
  std::optional<Vec3> plane_normal;
};

namespace detail {

struct Circle2 {
  Vec2 center;
  double radius;
};

inline double circle_sum_squares(std::span<const Vec2> pts, const Vec2& c, double r) {
  double s = 0.0;
  for (const auto& p : pts) {
    double d = (p - c).norm() - r;
    s += d * d;
  }
  return s;
}

inline std::optional<Circle2> circle_from_algebraic(const Eigen::Vector4d& a) {
  // a0 (x^2 + y^2) + a1 x + a2 y + a3 = 0
  if (!(std::abs(a[0]) > std::numeric_limits<double>::min())) return std::nullopt;
  Vec2 c(-a[1] / (2.0 * a[0]), -a[2] / (2.0 * a[0]));
  double r2 = (a[1] * a[1] + a[2] * a[2] - 4.0 * a[0] * a[3]) / (4.0 * a[0] * a[0]);
  if (!(r2 > 0.0) || !std::isfinite(r2)) return std::nullopt;
  return Circle2{c, std::sqrt(r2)};
}

// Plain linear least squares (Kasa); only used when the hyper fit yields no
// admissible eigenvector.
inline std::optional<Circle2> kasa_fit(std::span<const Vec2> pts) {
  Eigen::MatrixXd a(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    a(i, 0) = pts[i].x();
    a(i, 1) = pts[i].y();
    a(i, 2) = 1.0;
    b(i) = -(pts[i].squaredNorm());
  }
  Eigen::Vector3d s = a.colPivHouseholderQr().solve(b);
  return circle_from_algebraic(Eigen::Vector4d(1.0, s[0], s[1], s[2]));
}

// Hyperaccurate algebraic fit: generalized eigenproblem M a = eta N a with the
// moment matrix M and the hyper constraint N (data centred, so the x/y means
// vanish). The admissible solution has the smallest non-negative eigenvalue.
inline std::optional<Circle2> hyper_fit(std::span<const Vec2> pts) {
  const double n = static_cast<double>(pts.size());
  Eigen::Matrix4d moments = Eigen::Matrix4d::Zero();
  double z_mean = 0.0;
  for (const auto& p : pts) {
    double z = p.squaredNorm();
    Eigen::Vector4d w(z, p.x(), p.y(), 1.0);
    moments += w * w.transpose();
    z_mean += z;
  }
  moments /= n;
  z_mean /= n;
  Eigen::Matrix4d constraint;
  constraint << 8.0 * z_mean, 0.0, 0.0, 2.0,
                0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, 1.0, 0.0,
                2.0, 0.0, 0.0, 0.0;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(constraint.inverse() * moments);
  const double scale = moments.cwiseAbs().maxCoeff();
  std::optional<Circle2> best;
  double best_eta = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const auto eta = solver.eigenvalues()[k];
    if (std::abs(eta.imag()) > 1e-12 * (1.0 + std::abs(eta.real()))) continue;
    if (eta.real() < -1e-12 * scale) continue;
    auto circle = circle_from_algebraic(solver.eigenvectors().col(k).real());
    if (!circle) continue;
    if (eta.real() < best_eta) {
      best_eta = eta.real();
      best = circle;
    }
  }
  if (!best) best = kasa_fit(pts);
  return best;
}

inline Circle2 refine_geometric(std::span<const Vec2> pts, Circle2 circle) {
  constexpr int kMaxSteps = 20;
  double current = circle_sum_squares(pts, circle.center, circle.radius);
  for (int step = 0; step < kMaxSteps; ++step) {
    Eigen::MatrixXd jac(pts.size(), 3);
    Eigen::VectorXd res(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Vec2 d = pts[i] - circle.center;
      double dist = d.norm();
      if (dist == 0.0) return circle;
      jac(i, 0) = -d.x() / dist;
      jac(i, 1) = -d.y() / dist;
      jac(i, 2) = -1.0;
      res(i) = dist - circle.radius;
    }
    Eigen::Vector3d delta = jac.colPivHouseholderQr().solve(-res);
    if (!delta.allFinite()) return circle;
    // Halve the step until the objective does not increase.
    double scale = 1.0;
    bool accepted = false;
    Circle2 trial = circle;
    for (int halving = 0; halving < 30; ++halving) {
      trial.center = circle.center + scale * delta.head<2>();
      trial.radius = circle.radius + scale * delta[2];
      double value = circle_sum_squares(pts, trial.center, trial.radius);
      if (trial.radius > 0.0 && value <= current) {
        accepted = true;
        current = value;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) return circle;
    circle = trial;
    if (scale * delta.norm() <= 1e-15 * (circle.radius + circle.center.norm())) break;
  }
  return circle;
}

template <int Dim>
Vec<Dim> centroid_of(std::span<const Vec<Dim>> pts) {
  Vec<Dim> c = Vec<Dim>::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

// Fits a circle to planar points given in a local frame centred near the
// data. Throws on collinear input.
inline Circle2 fit_circle_2d(std::span<const Vec2> pts, const Tolerance& tol, double diam) {
  Eigen::MatrixXd centred(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) centred.row(i) = pts[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  Vec2 across = svd.matrixV().col(1);
  double spread = 0.0;
  for (const auto& p : pts) spread = std::max(spread, std::abs(across.dot(p)));
  if (spread <= tol.fit_threshold(diam)) {
    throw Error(ErrorKind::CollinearPoints, "fit_circle: points are collinear, no finite circle");
  }
  auto seed = hyper_fit(pts);
  if (!seed) {
    throw Error(ErrorKind::CollinearPoints, "fit_circle: algebraic fit found no finite circle");
  }
  return refine_geometric(pts, *seed);
}

}  // namespace detail

/// Least-squares circle through points in the plane or on a plane in space:
/// hyperaccurate algebraic fit refined by at most 20 Gauss-Newton steps on
/// the geometric residuals.
template <int Dim>
CircleFit<Dim> fit_circle(std::span<const Vec<Dim>> points, const Tolerance& tol = {}) {
  static_assert(Dim == 2 || Dim == 3);
  if (points.size() < 3) {
    throw Error(ErrorKind::InvalidArgument,
                "fit_circle: need at least 3 points, got " + std::to_string(points.size()));
  }
  const double diam = diameter<Dim>(points);
  if (!(diam > 0.0)) throw Error(ErrorKind::CollinearPoints, "fit_circle: all points coincide");
  const Vec<Dim> origin = detail::centroid_of<Dim>(points);

  std::vector<Vec2> local(points.size());
  CircleFit<Dim> out;
  if constexpr (Dim == 2) {
    for (std::size_t i = 0; i < points.size(); ++i) local[i] = points[i] - origin;
    auto c = detail::fit_circle_2d(local, tol, diam);
    out.center = origin + c.center;
    out.radius = c.radius;
  } else {
    Eigen::MatrixXd centred(points.size(), 3);
    for (std::size_t i = 0; i < points.size(); ++i) centred.row(i) = (points[i] - origin).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    Vec3 u = svd.matrixV().col(0);
    Vec3 normal = svd.matrixV().col(2).normalized();
    Vec3 v = normal.cross(u).normalized();
    for (std::size_t i = 0; i < points.size(); ++i) {
      Vec3 d = points[i] - origin;
      if (std::abs(d.dot(normal)) > tol.fit_threshold(diam)) {
        throw Error(ErrorKind::NonCoplanar, "fit_circle: point " + std::to_string(i) +
                                                " lies off the best-fit plane");
      }
      local[i] = Vec2(d.dot(u), d.dot(v));
    }
    auto c = detail::fit_circle_2d(local, tol, diam);
    out.center = origin + c.center.x() * u + c.center.y() * v;
    out.radius = c.radius;
    out.plane_normal = normal;
  }
  for (const auto& p : points) {
    out.max_residual = std::max(out.max_residual, std::abs((p - out.center).norm() - out.radius));
  }
  return out;
}

template <int Dim>
CircleFit<Dim> fit_circle(const std::vector<Vec<Dim>>& points, const Tolerance& tol = {}) {
  return fit_circle<Dim>(std::span<const Vec<Dim>>(points), tol);
}

/// Area of a polygon given in boundary order (absolute value; Newell's
/// formula in 3-space).
template <int Dim>
double polygon_area(std::span<const Vec<Dim>> polygon) {
  const std::size_t n = polygon.size();
  if constexpr (Dim == 2) {
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = polygon[i];
      const auto& b = polygon[(i + 1) % n];
      twice += a.x() * b.y() - a.y() * b.x();
    }
    return std::abs(twice) / 2.0;
  } else {
    Vec3 newell = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) newell += polygon[i].cross(polygon[(i + 1) % n]);
    return newell.norm() / 2.0;
  }
}

template <int Dim>
struct InscribedTest {
  bool inscribed = false;
  CircleFit<Dim> fit;
  double diameter = 0.0;
};

/// A convex polygon is inscribed iff its best-fit circle residual is within
/// fit_eps times the polygon diameter.
template <int Dim>
InscribedTest<Dim> is_inscribed(std::span<const Vec<Dim>> polygon, const Tolerance& tol = {}) {
  if (polygon.size() < 3) {
    throw Error(ErrorKind::DegeneratePolygon, "is_inscribed: polygon has fewer than 3 vertices");
  }
  InscribedTest<Dim> out;
  out.diameter = diameter<Dim>(polygon);
  if (polygon_area<Dim>(polygon) <= tol.fit_threshold(out.diameter) * out.diameter) {
    throw Error(ErrorKind::DegeneratePolygon, "is_inscribed: polygon has zero area");
  }
  out.fit = fit_circle<Dim>(polygon, tol);
  out.inscribed = out.fit.max_residual <= tol.fit_threshold(out.diameter);
  return out;
}

template <int Dim>
InscribedTest<Dim> is_inscribed(const std::vector<Vec<Dim>>& polygon, const Tolerance& tol = {}) {
  return is_inscribed<Dim>(std::span<const Vec<Dim>>(polygon), tol);
}

struct CircumcircleSolution {
  double radius = 0.0;
  /// Index of the longest side when the circle centre lies strictly outside
  /// the polygon; that side then subtends the reflex central angle.
  std::optional<std::size_t> long_chord;
};

namespace detail {

inline void check_side_lengths(std::span<const double> lengths) {
  if (lengths.size() < 3) {
    throw Error(ErrorKind::InvalidArgument,
                "need at least 3 side lengths, got " + std::to_string(lengths.size()));
  }
  double total = 0.0;
  double longest = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorKind::InvalidArgument, "side lengths must be positive and finite");
    }
    total += l;
    longest = std::max(longest, l);
  }
  if (!(longest < total - longest)) {
    throw Error(ErrorKind::PolygonInequality,
                "longest side " + std::to_string(longest) +
                    " is not shorter than the sum of the others " + std::to_string(total - longest));
  }
}

inline double half_angle(double length, double radius) {
  return std::asin(std::min(1.0, length / (2.0 * radius)));
}

/// Root of a function decreasing through zero on [lo, hi].
template <typename F>
double bisect_decreasing(F&& f, double lo, double hi) {
  for (int it = 0; it < 2000 && hi - lo > 1e-14 * hi; ++it) {
    double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2.0;
}

}  // namespace detail

/// Radius of the unique circle carrying a convex polygon with the given
/// side lengths in cyclic order.
inline CircumcircleSolution solve_circumcircle(std::span<const double> lengths) {
  detail::check_side_lengths(lengths);
  const auto longest_it = std::max_element(lengths.begin(), lengths.end());
  const double longest = *longest_it;
  double perimeter = 0.0;
  for (double l : lengths) perimeter += l;

  // Centre inside (or on the boundary): sum of half central angles is pi.
  auto inside = [&](double r) {
    double s = 0.0;
    for (double l : lengths) s += detail::half_angle(l, r);
    return s - std::numbers::pi;
  };
  const double lo = longest / 2.0;
  CircumcircleSolution out;
  if (inside(lo) >= 0.0) {
    // asin(x) <= (pi/2) x, so the residual is <= 0 once r >= perimeter / 4.
    double hi = std::max(perimeter / 4.0, lo);
    out.radius = detail::bisect_decreasing(inside, lo, hi);
    return out;
  }
  // Centre outside: the longest chord's half angle equals the sum of the rest.
  auto outside = [&](double r) {
    double s = detail::half_angle(longest, r);
    bool skipped = false;
    for (double l : lengths) {
      if (!skipped && l == longest) {
        skipped = true;
        continue;
      }
      s -= detail::half_angle(l, r);
    }
    return s;
  };
  double hi = 2.0 * lo;
  for (int it = 0; it < 2000 && outside(hi) > 0.0; ++it) hi *= 2.0;
  if (!(outside(hi) <= 0.0)) {
    throw Error(ErrorKind::NumericFailure, "circumradius: failed to bracket long-chord root");
  }
  out.radius = detail::bisect_decreasing(outside, lo, hi);
  out.long_chord = static_cast<std::size_t>(longest_it - lengths.begin());
  return out;
}

inline double circumradius_from_sides(std::span<const double> lengths) {
  return solve_circumcircle(lengths).radius;
}

inline double circumradius_from_sides(const std::vector<double>& lengths) {
  return circumradius_from_sides(std::span<const double>(lengths));
}

/// Canonical inscribed polygon with the given side lengths: centred at the
/// origin, first vertex at (r, 0), counterclockwise.
inline std::vector<Vec2> reconstruct_inscribed_polygon(std::span<const double> lengths) {
  const auto sol = solve_circumcircle(lengths);
  const double r = sol.radius;
  std::vector<Vec2> out;
  out.reserve(lengths.size());
  double phi = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    out.emplace_back(r * std::cos(phi), r * std::sin(phi));
    double central = 2.0 * detail::half_angle(lengths[i], r);
    if (sol.long_chord && *sol.long_chord == i) central = 2.0 * std::numbers::pi - central;
    phi += central;
  }
  return out;
}

inline std::vector<Vec2> reconstruct_inscribed_polygon(const std::vector<double>& lengths) {
  return reconstruct_inscribed_polygon(std::span<const double>(lengths));
}

}  // namespace edgesym
