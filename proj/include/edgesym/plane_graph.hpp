#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgesym/combinatorial_map.hpp"
#include "edgesym/error.hpp"
#include "edgesym/isometry.hpp"
#include "edgesym/polytope.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

/// Straight-line plane graph whose bounded faces are convex polygons and
/// whose unbounded face is the complement of a simple polygon. Bounded faces
/// come first in `map`; the outer face is the last one.
struct ConvexPlaneGraph {
  std::vector<std::string> labels;
  std::vector<Vec2> points;
  CombinatorialMap map;

  std::size_t size() const { return labels.size(); }
  double diameter() const { return edgesym::diameter<2>(points); }
  int outer_face() const { return *map.outer_face(); }
  int bounded_face_count() const { return map.bounded_face_count(); }

  std::vector<Vec2> face_points(int face) const {
    std::vector<Vec2> out;
    for (int v : map.faces()[face]) out.push_back(points[v]);
    return out;
  }
};

using LabeledPoint2 = std::pair<std::string, Vec2>;
using LabelEdge = std::pair<std::string, std::string>;

namespace detail {

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

inline double signed_area(std::span<const Vec2> poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) twice += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return twice / 2.0;
}

inline std::string describe_cycle(const std::vector<int>& cyc, const std::vector<std::string>& labels) {
  std::string s = "(";
  for (std::size_t i = 0; i < cyc.size(); ++i) {
    if (i) s += ' ';
    s += labels[cyc[i]];
  }
  return s + ")";
}

}  // namespace detail

inline ConvexPlaneGraph build_plane_graph(std::vector<LabeledPoint2> points, const std::vector<LabelEdge>& edges,
                                          const Tolerance& tol = {}) {
  tol.validate();
  if (points.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "plane graph needs at least 3 vertices");
  }
  auto [labels, coords] = detail::sort_by_label(std::move(points));
  const int n = static_cast<int>(labels.size());
  const double diam = diameter<2>(coords);
  const double length_tol = tol.length_threshold(diam);
  auto id_of = [&](const std::string& label) {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
      throw Error(ErrorKind::UnknownLabel, "edge endpoint '" + label + "' is not a vertex");
    }
    return static_cast<int>(it - labels.begin());
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((coords[i] - coords[j]).norm() <= length_tol) {
        throw Error(ErrorKind::InvalidArgument, "vertices '" + labels[i] + "' and '" + labels[j] + "' coincide");
      }
    }
  }

  std::set<std::pair<int, int>> edge_set;
  for (const auto& [a, b] : edges) {
    const int u = id_of(a);
    const int v = id_of(b);
    if (u == v) throw Error(ErrorKind::InvalidArgument, "self-loop at '" + a + "'");
    if (!edge_set.insert(std::minmax(u, v)).second) {
      throw Error(ErrorKind::InvalidArgument, "edge " + a + "-" + b + " listed twice");
    }
  }
  const std::vector<std::pair<int, int>> edge_list(edge_set.begin(), edge_set.end());

  // Planarity of the straight-line drawing.
  for (const auto& [u, v] : edge_list) {
    for (int w = 0; w < n; ++w) {
      if (w == u || w == v) continue;
      if (detail::point_segment_distance(coords[w], coords[u], coords[v]) <= length_tol) {
        throw Error(ErrorKind::EdgeCrossing,
                    "vertex '" + labels[w] + "' lies on edge " + labels[u] + "-" + labels[v]);
      }
    }
  }
  for (std::size_t i = 0; i < edge_list.size(); ++i) {
    for (std::size_t j = i + 1; j < edge_list.size(); ++j) {
      const auto [a, b] = edge_list[i];
      const auto [c, d] = edge_list[j];
      if (a == c || a == d || b == c || b == d) continue;
      const Vec2 &p = coords[a], &q = coords[b], &r = coords[c], &s = coords[d];
      const double d1 = detail::cross2(q - p, r - p);
      const double d2 = detail::cross2(q - p, s - p);
      const double d3 = detail::cross2(s - r, p - r);
      const double d4 = detail::cross2(s - r, q - r);
      if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        throw Error(ErrorKind::EdgeCrossing, "edges " + labels[a] + "-" + labels[b] + " and " + labels[c] +
                                                 "-" + labels[d] + " cross");
      }
    }
  }

  // Connectivity.
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edge_list) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : adj[x]) {
        if (!seen[y]) {
          seen[y] = true;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    if (reached != n) throw Error(ErrorKind::Disconnected, "graph is not connected");
  }

  // Rotation system: neighbours sorted counterclockwise.
  for (int v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end(), [&](int a, int b) {
      const Vec2 da = coords[a] - coords[v];
      const Vec2 db = coords[b] - coords[v];
      return std::atan2(da.y(), da.x()) < std::atan2(db.y(), db.x());
    });
  }
  auto prev_around = [&](int v, int u) {
    const auto& ring = adj[v];
    const auto it = std::find(ring.begin(), ring.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - ring.begin());
    return ring[(i + ring.size() - 1) % ring.size()];
  };

  // Face traversal: each dart (u, v) bounds the face on its left.
  std::set<std::pair<int, int>> visited;
  std::vector<std::vector<int>> cycles;
  for (int u = 0; u < n; ++u) {
    std::vector<int> starts = adj[u];
    std::sort(starts.begin(), starts.end());
    for (int v : starts) {
      if (visited.count({u, v})) continue;
      std::vector<int> cyc;
      int a = u;
      int b = v;
      while (!visited.count({a, b})) {
        visited.insert({a, b});
        cyc.push_back(a);
        const int c = prev_around(b, a);
        a = b;
        b = c;
      }
      cycles.push_back(std::move(cyc));
    }
  }

  std::vector<std::vector<int>> bounded;
  std::vector<std::vector<int>> outer;
  for (auto& cyc : cycles) {
    std::vector<Vec2> poly;
    for (int v : cyc) poly.push_back(coords[v]);
    if (detail::signed_area(poly) < 0.0) {
      outer.push_back(std::move(cyc));
    } else {
      bounded.push_back(std::move(cyc));
    }
  }
  if (outer.size() != 1 || bounded.empty()) {
    throw Error(ErrorKind::NonSimpleOuterBoundary, "expected exactly one unbounded face and at least one bounded face");
  }
  {
    std::set<int> distinct(outer[0].begin(), outer[0].end());
    if (distinct.size() != outer[0].size()) {
      throw Error(ErrorKind::NonSimpleOuterBoundary,
                  "outer boundary " + detail::describe_cycle(outer[0], labels) + " revisits a vertex");
    }
  }
  bounded = canonical_cycles(std::move(bounded));
  std::rotate(outer[0].begin(), std::min_element(outer[0].begin(), outer[0].end()), outer[0].end());

  constexpr double kMinTurnSine = 1e-9;
  for (std::size_t f = 0; f < bounded.size(); ++f) {
    const auto& cyc = bounded[f];
    const std::size_t m = cyc.size();
    std::set<int> distinct(cyc.begin(), cyc.end());
    double total_turn = 0.0;
    bool convex = distinct.size() == m && m >= 3;
    for (std::size_t i = 0; convex && i < m; ++i) {
      const Vec2 e1 = coords[cyc[i]] - coords[cyc[(i + m - 1) % m]];
      const Vec2 e2 = coords[cyc[(i + 1) % m]] - coords[cyc[i]];
      const double sine = detail::cross2(e1, e2) / (e1.norm() * e2.norm());
      if (!(sine > kMinTurnSine)) convex = false;
      total_turn += std::atan2(detail::cross2(e1, e2), e1.dot(e2));
    }
    if (convex && std::abs(total_turn - 2.0 * std::numbers::pi) > 1e-6) convex = false;
    if (!convex) {
      throw Error(ErrorKind::NonConvexBoundedFace,
                  "bounded face " + std::to_string(f) + " " + detail::describe_cycle(cyc, labels) +
                      " is not a strictly convex polygon");
    }
  }

  const int outer_id = static_cast<int>(bounded.size());
  bounded.push_back(std::move(outer[0]));
  ConvexPlaneGraph g;
  g.map = CombinatorialMap::from_faces(labels, std::move(bounded), outer_id);
  g.labels = std::move(labels);
  g.points = std::move(coords);
  return g;
}

/// Edges as label pairs, in map order.
inline std::vector<LabelEdge> label_edges(const ConvexPlaneGraph& g) {
  std::vector<LabelEdge> out;
  for (const auto& [u, v] : g.map.edges()) out.emplace_back(g.labels[u], g.labels[v]);
  return out;
}

inline std::optional<IsometryFit<2>> congruent(const ConvexPlaneGraph& g, const ConvexPlaneGraph& h,
                                               const Tolerance& tol = {}) {
  return congruent_labeled<2>(g.labels, g.points, h.labels, h.points, tol);
}

namespace detail {

inline std::set<std::pair<int, int>> face_edge_set(const CombinatorialMap& m, int face) {
  std::set<std::pair<int, int>> out;
  const auto& cyc = m.faces()[face];
  for (std::size_t i = 0; i < cyc.size(); ++i) out.insert(std::minmax(cyc[i], cyc[(i + 1) % cyc.size()]));
  return out;
}

inline int count_shared_edges(const CombinatorialMap& m, int f, int g) {
  auto a = face_edge_set(m, f);
  auto b = face_edge_set(m, g);
  int shared = 0;
  for (const auto& e : a) shared += static_cast<int>(b.count(e));
  return shared;
}

}  // namespace detail

/// Bounded faces sharing at least one edge with the unbounded face.
inline std::vector<int> boundary_faces(const ConvexPlaneGraph& g) {
  std::vector<int> out;
  for (int f = 0; f < g.bounded_face_count(); ++f) {
    if (detail::count_shared_edges(g.map, f, g.outer_face()) > 0) out.push_back(f);
  }
  return out;
}

/// Removes the edges shared by `face` and the unbounded face (and the
/// vertices this isolates) and returns the pieces the remaining bounded
/// faces fall into, grouped by edge-adjacency of faces other than `face`.
/// Pieces are ordered by their smallest face id.
inline std::vector<ConvexPlaneGraph> boundary_decomposition(const ConvexPlaneGraph& g, int face,
                                                            const Tolerance& tol = {}) {
  const auto& m = g.map;
  if (face < 0 || face >= g.bounded_face_count()) {
    throw Error(ErrorKind::InvalidArgument, "face id " + std::to_string(face) + " is not a bounded face");
  }
  if (detail::count_shared_edges(m, face, g.outer_face()) == 0) {
    throw Error(ErrorKind::FaceNotOnBoundary,
                "face " + std::to_string(face) + " shares no edge with the unbounded face");
  }
  const int nf = g.bounded_face_count();
  std::vector<std::set<std::pair<int, int>>> face_edges(nf);
  for (int f = 0; f < nf; ++f) face_edges[f] = detail::face_edge_set(m, f);

  std::vector<int> component(nf, -1);
  int components = 0;
  for (int start = 0; start < nf; ++start) {
    if (start == face || component[start] >= 0) continue;
    std::vector<int> stack{start};
    component[start] = components;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < nf; ++y) {
        if (y == face || component[y] >= 0) continue;
        bool adjacent = std::any_of(face_edges[x].begin(), face_edges[x].end(),
                                    [&](const auto& e) { return face_edges[y].count(e) > 0; });
        if (adjacent) {
          component[y] = components;
          stack.push_back(y);
        }
      }
    }
    ++components;
  }

  std::vector<ConvexPlaneGraph> pieces;
  for (int c = 0; c < components; ++c) {
    std::set<std::pair<int, int>> edges;
    bool touches_face = false;
    for (int f = 0; f < nf; ++f) {
      if (component[f] != c) continue;
      edges.insert(face_edges[f].begin(), face_edges[f].end());
      if (detail::count_shared_edges(m, f, face) > 0) touches_face = true;
    }
    if (!touches_face) {
      throw Error(ErrorKind::NumericFailure, "decomposition piece " + std::to_string(c) +
                                                 " shares no edge with the removed face");
    }
    std::set<int> verts;
    for (const auto& [u, v] : edges) {
      verts.insert(u);
      verts.insert(v);
    }
    std::vector<LabeledPoint2> pts;
    for (int v : verts) pts.emplace_back(g.labels[v], g.points[v]);
    std::vector<LabelEdge> es;
    for (const auto& [u, v] : edges) es.emplace_back(g.labels[u], g.labels[v]);
    pieces.push_back(build_plane_graph(std::move(pts), es, tol));
  }
  return pieces;
}

namespace detail {

inline std::vector<std::string> sorted_face_labels(const ConvexPlaneGraph& g, int face) {
  std::vector<std::string> out;
  for (int v : g.map.faces()[face]) out.push_back(g.labels[v]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<LabelEdge> sorted_edge_labels(const ConvexPlaneGraph& g) {
  auto out = label_edges(g);
  for (auto& [a, b] : out) {
    if (b < a) std::swap(a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Vec2> points_for_labels(const ConvexPlaneGraph& g, const std::vector<std::string>& labels) {
  std::vector<Vec2> out;
  for (const auto& l : labels) {
    auto it = std::lower_bound(g.labels.begin(), g.labels.end(), l);
    out.push_back(g.points[static_cast<std::size_t>(it - g.labels.begin())]);
  }
  return out;
}

// Induction on the number of bounded faces: align a boundary face, recurse
// into the pieces left after cutting it off, and demand that every piece's
// own alignment agrees with the face alignment on all of its vertices.
inline std::optional<Isometry<2>> assemble(const ConvexPlaneGraph& g, const ConvexPlaneGraph& h, double threshold,
                                           const Tolerance& tol) {
  const auto candidates = boundary_faces(g);
  const int face = candidates.front();
  const auto face_labels = sorted_face_labels(g, face);
  std::optional<int> partner;
  for (int f = 0; f < h.bounded_face_count(); ++f) {
    if (sorted_face_labels(h, f) == face_labels) partner = f;
  }
  if (!partner) return std::nullopt;

  const auto src = points_for_labels(g, face_labels);
  const auto dst = points_for_labels(h, face_labels);
  const auto rho = best_fit_isometry<2>(src, dst, true);
  if (rho.rmsd > threshold) return std::nullopt;
  if (g.bounded_face_count() == 1) return rho.isometry;

  auto pieces_g = boundary_decomposition(g, face, tol);
  auto pieces_h = boundary_decomposition(h, *partner, tol);
  if (pieces_g.size() != pieces_h.size()) return std::nullopt;
  for (const auto& piece : pieces_g) {
    const auto key = sorted_edge_labels(piece);
    auto match = std::find_if(pieces_h.begin(), pieces_h.end(),
                              [&](const ConvexPlaneGraph& q) { return sorted_edge_labels(q) == key; });
    if (match == pieces_h.end()) return std::nullopt;
    auto sub = assemble(piece, *match, threshold, tol);
    if (!sub) return std::nullopt;
    for (const auto& p : piece.points) {
      if ((rho.isometry(p) - (*sub)(p)).norm() > threshold) return std::nullopt;
    }
  }
  return rho.isometry;
}

}  // namespace detail

/// Constructive congruence of two combinatorially equivalent convex plane
/// graphs from congruence of their corresponding bounded faces. Returns the
/// isometry taking every vertex of g to the equally labelled vertex of h, or
/// nothing when some pair of corresponding faces is not congruent or the
/// piecewise alignments disagree.
inline std::optional<Isometry<2>> assemble_congruence(const ConvexPlaneGraph& g, const ConvexPlaneGraph& h,
                                                      const Tolerance& tol = {}) {
  if (!combinatorially_equivalent(g.map, h.map)) {
    throw Error(ErrorKind::NotCombinatoriallyEquivalent,
                "assemble_congruence: graphs are not combinatorially equivalent under the label identity");
  }
  const double threshold = tol.fit_threshold(g.diameter());
  auto rho = detail::assemble(g, h, threshold, tol);
  if (!rho) return std::nullopt;

  const auto matched = detail::points_for_labels(h, g.labels);
  const auto direct = best_fit_isometry<2>(g.points, matched, true);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const Vec2 image = (*rho)(g.points[i]);
    if ((image - matched[i]).norm() > threshold) return std::nullopt;
    if ((image - direct.isometry(g.points[i])).norm() > threshold) {
      throw Error(ErrorKind::NumericFailure,
                  "assemble_congruence: inductive isometry disagrees with the direct fit at '" + g.labels[i] + "'");
    }
  }
  return rho;
}

}  // namespace edgesym
