#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "edgesym/combinatorial_map.hpp"
#include "edgesym/error.hpp"
#include "edgesym/isometry.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

/// Convex 3-polytope given by its labelled vertices. Labels are kept in
/// lexicographic order; points[i] belongs to labels[i].
struct IndexedPolytope {
  std::vector<std::string> labels;
  std::vector<Vec3> points;

  std::size_t size() const { return labels.size(); }
  double diameter() const { return edgesym::diameter<3>(points); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
  }
};

using LabeledPoint3 = std::pair<std::string, Vec3>;

namespace detail {

/// Sorts labelled points by label and rejects duplicates.
template <typename Point>
std::pair<std::vector<std::string>, std::vector<Point>> sort_by_label(
    std::vector<std::pair<std::string, Point>> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::pair<std::vector<std::string>, std::vector<Point>> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].first == points[i - 1].first) {
      throw Error(ErrorKind::DuplicateLabel, "label '" + points[i].first + "' used twice");
    }
    out.first.push_back(points[i].first);
    out.second.push_back(points[i].second);
  }
  return out;
}

struct HullFace {
  std::vector<int> cycle;  // counterclockwise seen from outside
  Vec3 normal;             // outward unit normal
};

/// Facets of the convex hull as polygons (coplanar triangles merged), found
/// by enumerating supporting planes through point triples. Every input point
/// must be a vertex of the hull.
inline std::vector<HullFace> hull_faces(std::span<const Vec3> pts, std::span<const std::string> labels,
                                        const Tolerance& tol) {
  const int n = static_cast<int>(pts.size());
  const double diam = diameter<3>(pts);
  const double plane_tol = tol.fit_threshold(diam);
  const double min_cross = tol.fit_eps * diam * diam;

  std::set<std::vector<int>> on_sets;
  std::vector<int> on;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vec3 normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        const double len = normal.norm();
        if (len <= min_cross) continue;
        normal /= len;
        bool above = false;
        bool below = false;
        on.clear();
        for (int m = 0; m < n && !(above && below); ++m) {
          const double d = normal.dot(pts[m] - pts[i]);
          if (d > plane_tol) {
            above = true;
          } else if (d < -plane_tol) {
            below = true;
          } else {
            on.push_back(m);
          }
        }
        if (above && below) continue;
        on_sets.insert(on);
      }
    }
  }

  // Near-degenerate triples can yield a supporting plane whose contact set
  // is a proper subset of a genuine face; keep maximal sets only.
  std::vector<std::vector<int>> maximal;
  for (const auto& s : on_sets) {
    bool dominated = false;
    for (const auto& t : on_sets) {
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(s);
  }

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(n);

  std::vector<bool> is_vertex(n, false);
  std::vector<HullFace> faces;
  for (const auto& s : maximal) {
    Vec3 c = Vec3::Zero();
    for (int v : s) c += pts[v];
    c /= static_cast<double>(s.size());
    Eigen::MatrixXd centred(s.size(), 3);
    for (std::size_t r = 0; r < s.size(); ++r) centred.row(r) = (pts[s[r]] - c).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    Vec3 normal = svd.matrixV().col(2).normalized();
    if (normal.dot(c - centroid) < 0.0) normal = -normal;
    Vec3 u = (pts[s[0]] - c).normalized();
    Vec3 w = normal.cross(u);
    std::vector<std::pair<double, int>> by_angle;
    for (int v : s) {
      Vec3 d = pts[v] - c;
      by_angle.emplace_back(std::atan2(d.dot(w), d.dot(u)), v);
    }
    std::sort(by_angle.begin(), by_angle.end());
    HullFace face;
    face.normal = normal;
    for (const auto& [angle, v] : by_angle) face.cycle.push_back(v);
    const std::size_t m = face.cycle.size();
    for (std::size_t r = 0; r < m; ++r) {
      const Vec3& prev = pts[face.cycle[(r + m - 1) % m]];
      const Vec3& cur = pts[face.cycle[r]];
      const Vec3& next = pts[face.cycle[(r + 1) % m]];
      const Vec3 chord = next - prev;
      const double turn = (cur - prev).cross(chord).dot(normal) / chord.norm();
      if (!(turn > plane_tol)) {
        throw Error(ErrorKind::NonExtremePoint,
                    "point '" + labels[face.cycle[r]] + "' lies on the hull boundary, not at a vertex");
      }
      is_vertex[face.cycle[r]] = true;
    }
    faces.push_back(std::move(face));
  }
  for (int v = 0; v < n; ++v) {
    if (!is_vertex[v]) {
      throw Error(ErrorKind::NonExtremePoint, "point '" + labels[v] + "' lies inside the hull");
    }
  }
  std::sort(faces.begin(), faces.end(), [](const HullFace& a, const HullFace& b) {
    auto ka = a.cycle;
    auto kb = b.cycle;
    std::rotate(ka.begin(), std::min_element(ka.begin(), ka.end()), ka.end());
    std::rotate(kb.begin(), std::min_element(kb.begin(), kb.end()), kb.end());
    return ka < kb;
  });
  return faces;
}

inline void check_full_dimensional(std::span<const Vec3> pts, const Tolerance& tol) {
  const double diam = diameter<3>(pts);
  if (!(diam > 0.0)) throw Error(ErrorKind::NotFullDimensional, "all points coincide");
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Eigen::MatrixXd centred(pts.size(), 3);
  for (std::size_t r = 0; r < pts.size(); ++r) centred.row(r) = (pts[r] - c).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  Vec3 normal = svd.matrixV().col(2);
  double spread = 0.0;
  for (const auto& p : pts) spread = std::max(spread, std::abs(normal.dot(p - c)));
  if (spread <= tol.fit_threshold(diam)) {
    throw Error(ErrorKind::NotFullDimensional, "points span an affine subspace of dimension < 3");
  }
}

}  // namespace detail

/// Validates and stores a V-representation. Every point must be a vertex of
/// the convex hull, and the hull must be 3-dimensional.
inline IndexedPolytope build_polytope(std::vector<LabeledPoint3> points, const Tolerance& tol = {}) {
  tol.validate();
  if (points.size() < 4) {
    throw Error(ErrorKind::NotFullDimensional,
                "a 3-polytope needs at least 4 vertices, got " + std::to_string(points.size()));
  }
  auto [labels, coords] = detail::sort_by_label(std::move(points));
  detail::check_full_dimensional(coords, tol);
  detail::hull_faces(coords, labels, tol);
  return IndexedPolytope{std::move(labels), std::move(coords)};
}

/// Surface map of the polytope: hull facets merged into polygons, oriented
/// counterclockwise seen from outside.
inline CombinatorialMap face_map(const IndexedPolytope& p, const Tolerance& tol = {}) {
  auto faces = detail::hull_faces(p.points, p.labels, tol);
  std::vector<std::vector<int>> cycles;
  cycles.reserve(faces.size());
  for (auto& f : faces) cycles.push_back(std::move(f.cycle));
  try {
    return CombinatorialMap::from_faces(p.labels, canonical_cycles(std::move(cycles)));
  } catch (const Error& e) {
    throw Error(ErrorKind::NumericFailure, std::string("face_map: inconsistent facet merge: ") + e.what());
  }
}

/// Vertex positions of a polytope ordered like the vertices of `m`.
inline std::vector<Vec3> coordinates_for(const IndexedPolytope& p, const CombinatorialMap& m) {
  std::vector<Vec3> out;
  out.reserve(m.vertex_count());
  for (const auto& label : m.labels()) {
    auto idx = p.index_of(label);
    if (!idx) throw Error(ErrorKind::UnknownLabel, "label '" + label + "' not in polytope");
    out.push_back(p.points[*idx]);
  }
  return out;
}

/// Label-matched congruence test shared by polytopes and plane graphs: the
/// isometry is returned iff the Procrustes rmsd is within fit_eps times the
/// diameter of the first point set.
template <int Dim>
std::optional<IsometryFit<Dim>> congruent_labeled(std::span<const std::string> labels_a,
                                                  std::span<const Vec<Dim>> points_a,
                                                  std::span<const std::string> labels_b,
                                                  std::span<const Vec<Dim>> points_b,
                                                  const Tolerance& tol) {
  if (labels_a.size() != labels_b.size()) {
    throw Error(ErrorKind::IndexSetMismatch, "instances have different numbers of labels");
  }
  std::vector<Vec<Dim>> dst;
  dst.reserve(labels_a.size());
  for (const auto& label : labels_a) {
    auto it = std::find(labels_b.begin(), labels_b.end(), label);
    if (it == labels_b.end()) throw Error(ErrorKind::IndexSetMismatch, "label '" + label + "' missing");
    dst.push_back(points_b[static_cast<std::size_t>(it - labels_b.begin())]);
  }
  auto fit = best_fit_isometry<Dim>(points_a, std::span<const Vec<Dim>>(dst), true);
  if (fit.rmsd > tol.fit_threshold(diameter<Dim>(points_a))) return std::nullopt;
  return fit;
}

inline std::optional<IsometryFit<3>> congruent(const IndexedPolytope& p, const IndexedPolytope& q,
                                               const Tolerance& tol = {}) {
  return congruent_labeled<3>(p.labels, p.points, q.labels, q.points, tol);
}

}  // namespace edgesym
