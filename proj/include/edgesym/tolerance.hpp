#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "edgesym/error.hpp"

namespace edgesym {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

/// Comparison thresholds. abs_eps is a length, rel_eps is dimensionless and
/// fit_eps is interpreted relative to the instance diameter wherever a fit
/// residual is judged.
struct Tolerance {
  double abs_eps = 1e-9;
  double rel_eps = 1e-9;
  double fit_eps = 1e-6;

  Tolerance() = default;
  Tolerance(double abs, double rel, double fit) : abs_eps(abs), rel_eps(rel), fit_eps(fit) {
    validate();
  }

  void validate() const {
    if (!(abs_eps > 0.0) || !(rel_eps > 0.0) || !(fit_eps > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "tolerance components must be strictly positive");
    }
  }

  /// Defaults scaled uniformly, as the --tol flag does.
  static Tolerance scaled(double factor) {
    Tolerance t;
    return Tolerance(t.abs_eps * factor, t.rel_eps * factor, t.fit_eps * factor);
  }

  /// Threshold for comparing two lengths on an instance of the given diameter.
  double length_threshold(double diameter) const { return abs_eps + rel_eps * diameter; }

  /// Maximum accepted fit residual on an instance of the given diameter.
  double fit_threshold(double diameter) const { return fit_eps * diameter; }
};

template <int Dim>
double diameter(std::span<const Vec<Dim>> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, (points[i] - points[j]).norm());
    }
  }
  return best;
}

template <int Dim>
double diameter(const std::vector<Vec<Dim>>& points) {
  return diameter<Dim>(std::span<const Vec<Dim>>(points));
}

}  // namespace edgesym
