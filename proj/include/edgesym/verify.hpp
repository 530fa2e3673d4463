#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "edgesym/circle.hpp"
#include "edgesym/combinatorial_map.hpp"
#include "edgesym/error.hpp"
#include "edgesym/isometry.hpp"
#include "edgesym/plane_graph.hpp"
#include "edgesym/polytope.hpp"
#include "edgesym/symmetry.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

enum class Classification {
  TheoremAppliesAndHolds,
  HypothesisFailsConclusionHolds,
  HypothesisFailsConclusionFails,
  TheoremViolation,
};

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::TheoremAppliesAndHolds: return "theorem-applies-and-holds";
    case Classification::HypothesisFailsConclusionHolds: return "hypothesis-fails-conclusion-holds";
    case Classification::HypothesisFailsConclusionFails: return "hypothesis-fails-conclusion-fails";
    case Classification::TheoremViolation: return "THEOREM-VIOLATION";
  }
  return "unknown";
}

inline Classification classify(bool hypothesis, bool conclusion) {
  if (hypothesis) return conclusion ? Classification::TheoremAppliesAndHolds : Classification::TheoremViolation;
  return conclusion ? Classification::HypothesisFailsConclusionHolds : Classification::HypothesisFailsConclusionFails;
}

struct FaceCheck {
  int face = 0;
  bool inscribed = false;
  double max_residual = 0.0;
  double radius = 0.0;
};

template <int Dim>
struct TheoremVerdict {
  bool hypothesis_holds = false;
  double worst_face_residual = 0.0;
  bool conclusion_holds = false;
  std::vector<SymmetryRecord<Dim>> violations;
  Classification classification = Classification::HypothesisFailsConclusionFails;
  std::vector<FaceCheck> faces;
  SymmetryReport<Dim> report;
};

namespace detail {

template <int Dim>
TheoremVerdict<Dim> compose_verdict(const CombinatorialMap& m, std::span<const Vec<Dim>> coords, const Tolerance& tol,
                                    std::string instance) {
  TheoremVerdict<Dim> v;
  v.hypothesis_holds = true;
  for (int f = 0; f < m.face_count(); ++f) {
    if (!m.is_bounded(f)) continue;
    std::vector<Vec<Dim>> poly;
    for (int x : m.faces()[f]) poly.push_back(coords[x]);
    const auto test = is_inscribed<Dim>(poly, tol);
    v.faces.push_back({f, test.inscribed, test.fit.max_residual, test.fit.radius});
    v.hypothesis_holds = v.hypothesis_holds && test.inscribed;
    v.worst_face_residual = std::max(v.worst_face_residual, test.fit.max_residual);
  }
  v.report = analyze<Dim>(m, coords, tol, std::move(instance));
  v.conclusion_holds = true;
  for (const auto& rec : v.report.records) {
    if (rec.edge_preserving && !rec.realized) {
      v.conclusion_holds = false;
      v.violations.push_back(rec);
    }
  }
  v.classification = classify(v.hypothesis_holds, v.conclusion_holds);
  return v;
}

}  // namespace detail

inline TheoremVerdict<3> verify_polytope_theorem(const IndexedPolytope& p, const Tolerance& tol = {},
                                                 std::string instance = {}) {
  const auto m = face_map(p, tol);
  const auto coords = coordinates_for(p, m);
  return detail::compose_verdict<3>(m, coords, tol, std::move(instance));
}

inline TheoremVerdict<2> verify_graph_theorem(const ConvexPlaneGraph& g, const Tolerance& tol = {},
                                              std::string instance = {}) {
  return detail::compose_verdict<2>(g.map, g.points, tol, std::move(instance));
}

/// Whether every face f and its image under sigma are congruent as indexed
/// polygons (vertex v of f matched with sigma(v)).
template <int Dim>
bool faces_congruent_under(const CombinatorialMap& m, std::span<const Vec<Dim>> coords,
                           const VertexPermutation& sigma, const Tolerance& tol = {}) {
  const double threshold = tol.fit_threshold(diameter<Dim>(coords));
  for (int f = 0; f < m.face_count(); ++f) {
    if (!m.is_bounded(f)) continue;
    std::vector<Vec<Dim>> src;
    std::vector<Vec<Dim>> dst;
    for (int x : m.faces()[f]) {
      src.push_back(coords[x]);
      dst.push_back(coords[sigma(x)]);
    }
    if (best_fit_isometry<Dim>(src, dst, true).rmsd > threshold) return false;
  }
  return true;
}

/// The graph in which label i sits at the position of vertex sigma(i); it
/// is combinatorially equivalent to g exactly when sigma is a symmetry.
inline ConvexPlaneGraph permuted_graph(const ConvexPlaneGraph& g, const VertexPermutation& sigma,
                                       const Tolerance& tol = {}) {
  std::vector<LabeledPoint2> pts;
  for (std::size_t i = 0; i < g.size(); ++i) pts.emplace_back(g.labels[i], g.points[sigma(static_cast<int>(i))]);
  return build_plane_graph(std::move(pts), label_edges(g), tol);
}

// -- gallery -------------------------------------------------------------------

using GalleryInstance = std::variant<IndexedPolytope, ConvexPlaneGraph>;

namespace detail {

inline std::vector<LabeledPoint3> numbered(const std::vector<Vec3>& pts) {
  std::vector<LabeledPoint3> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.emplace_back(std::to_string(i + 1), pts[i]);
  return out;
}

inline std::vector<LabeledPoint2> numbered(const std::vector<Vec2>& pts) {
  std::vector<LabeledPoint2> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.emplace_back(std::to_string(i + 1), pts[i]);
  return out;
}

inline std::vector<LabelEdge> numbered_edges(std::initializer_list<std::pair<int, int>> edges) {
  std::vector<LabelEdge> out;
  for (const auto& [a, b] : edges) out.emplace_back(std::to_string(a), std::to_string(b));
  return out;
}

/// Top face 1..4 over bottom face 5..8, the bottom spanned by a, b from the
/// origin and the top shifted by c.
inline IndexedPolytope parallelepiped(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 base[4] = {Vec3::Zero(), a, a + b, b};
  std::vector<Vec3> pts;
  for (const auto& p : base) pts.push_back(p + c);
  for (const auto& p : base) pts.push_back(p);
  return build_polytope(numbered(pts));
}

inline double regular_polygon_radius(int n) { return 0.5 / std::sin(std::numbers::pi / n); }

}  // namespace detail

/// Prism over the regular n-gon with unit edges; top 1..n, bottom n+1..2n.
inline IndexedPolytope n_prism(int n, double height = 2.0) {
  if (n < 3 || !(height > 0.0)) throw Error(ErrorKind::InvalidParameter, "n_prism needs n >= 3 and height > 0");
  const double r = detail::regular_polygon_radius(n);
  std::vector<Vec3> pts;
  for (int z = 1; z >= 0; --z) {
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      pts.emplace_back(r * std::cos(t), r * std::sin(t), z * height);
    }
  }
  return build_polytope(detail::numbered(pts));
}

/// Uniform antiprism with unit edges; top 1..n, bottom n+1..2n.
inline IndexedPolytope n_antiprism(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidParameter, "n_antiprism needs n >= 3");
  const double r = detail::regular_polygon_radius(n);
  const double offset = 2.0 * r * std::sin(std::numbers::pi / (2.0 * n));
  const double height = std::sqrt(1.0 - offset * offset);
  std::vector<Vec3> pts;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n + std::numbers::pi / n;
    pts.emplace_back(r * std::cos(t), r * std::sin(t), height);
  }
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    pts.emplace_back(r * std::cos(t), r * std::sin(t), 0.0);
  }
  return build_polytope(detail::numbered(pts));
}

/// Outer square 1..4 (side s_out) and inner square 5..8 (side s_in) with a
/// common centre, the inner one turned counterclockwise by alpha_deg; edges
/// are both squares plus the spokes 1-5, 2-6, 3-7, 4-8.
inline ConvexPlaneGraph twisted_squares(double s_out, double s_in, double alpha_deg, const Tolerance& tol = {}) {
  if (!(s_in > 0.0) || !(s_in < s_out)) {
    throw Error(ErrorKind::InvalidParameter, "twisted_squares needs 0 < s_in < s_out");
  }
  if (!(alpha_deg >= 0.0) || !(alpha_deg < 90.0)) {
    throw Error(ErrorKind::InvalidParameter, "twisted_squares alpha must lie in [0, 90) degrees");
  }
  const double r_out = s_out * std::numbers::sqrt2 / 2.0;
  const double r_in = s_in * std::numbers::sqrt2 / 2.0;
  const double alpha = alpha_deg * std::numbers::pi / 180.0;
  std::vector<Vec2> pts;
  for (int k = 0; k < 4; ++k) {
    const double t = std::numbers::pi / 4.0 + k * std::numbers::pi / 2.0;
    pts.emplace_back(r_out * std::cos(t), r_out * std::sin(t));
  }
  for (int k = 0; k < 4; ++k) {
    const double t = std::numbers::pi / 4.0 + k * std::numbers::pi / 2.0 + alpha;
    pts.emplace_back(r_in * std::cos(t), r_in * std::sin(t));
  }
  try {
    return build_plane_graph(
        detail::numbered(pts),
        detail::numbered_edges({{1, 2}, {2, 3}, {3, 4}, {4, 1}, {5, 6}, {6, 7}, {7, 8}, {8, 5},
                                {1, 5}, {2, 6}, {3, 7}, {4, 8}}),
        tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidParameter,
                "twisted_squares: alpha = " + std::to_string(alpha_deg) + " degrees gives no convex plane graph (" +
                    e.what() + ")");
  }
}

namespace detail {

struct ParsedName {
  std::string base;
  std::vector<double> args;
};

inline ParsedName parse_gallery_name(std::string_view name) {
  ParsedName out;
  std::string_view rest;
  if (auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') throw Error(ErrorKind::UnknownGalleryName, "malformed gallery name '" + std::string(name) + "'");
    out.base = std::string(name.substr(0, open));
    rest = name.substr(open + 1, name.size() - open - 2);
  } else if (auto colon = name.find(':'); colon != std::string_view::npos) {
    out.base = std::string(name.substr(0, colon));
    rest = name.substr(colon + 1);
  } else {
    out.base = std::string(name);
  }
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string token(rest.substr(0, comma));
    token.erase(std::remove(token.begin(), token.end(), ' '), token.end());
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw Error(ErrorKind::InvalidParameter, "gallery argument '" + token + "' is not a number");
    }
    out.args.push_back(value);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  return out;
}

inline int integer_arg(const ParsedName& p, std::size_t i, int fallback) {
  if (p.args.size() <= i) return fallback;
  const double v = p.args[i];
  if (v != std::floor(v)) throw Error(ErrorKind::InvalidParameter, p.base + " expects an integer argument");
  return static_cast<int>(v);
}

}  // namespace detail

/// Names accepted by gallery(); parameterised entries take "name(a,b)" or
/// "name:a,b".
inline const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {
      "cube", "box_1_2_3", "oblique_parallelepiped", "tetrahedron", "octahedron", "icosahedron", "dodecahedron",
      "hex_prism", "n_prism(n)", "n_antiprism(n)", "frustum", "octa_tetra_glue", "square", "parallelogram",
      "hex_three_rhombi", "twisted_squares(s_out,s_in,alpha_deg)"};
  return names;
}

/// Exact instances from the example catalogue. Polytope labels are "1".."n";
/// hexahedra put the top face at 1..4 (counterclockwise from above) and the
/// bottom face at 5..8 with vertex i + 4 below vertex i.
inline GalleryInstance gallery(std::string_view name) {
  const auto parsed = detail::parse_gallery_name(name);
  const auto& base = parsed.base;
  const bool parameterised = base == "n_prism" || base == "n_antiprism" || base == "twisted_squares";
  if (!parameterised && !parsed.args.empty()) {
    throw Error(ErrorKind::InvalidParameter, "gallery entry '" + base + "' takes no arguments");
  }
  if (base == "cube") return detail::parallelepiped({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  if (base == "box_1_2_3") return detail::parallelepiped({1, 0, 0}, {0, 2, 0}, {0, 0, 3});
  if (base == "oblique_parallelepiped") return detail::parallelepiped({1, 0, 0}, {0, 1, 0}, {0.2, 0.3, 1.0});
  if (base == "tetrahedron") {
    return build_polytope(detail::numbered(std::vector<Vec3>{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}));
  }
  if (base == "octahedron") {
    return build_polytope(detail::numbered(
        std::vector<Vec3>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}));
  }
  if (base == "icosahedron") {
    const double phi = std::numbers::phi;
    std::vector<Vec3> pts;
    for (double s : {-1.0, 1.0}) {
      for (double t : {-1.0, 1.0}) {
        pts.emplace_back(0, s, t * phi);
        pts.emplace_back(s, t * phi, 0);
        pts.emplace_back(t * phi, 0, s);
      }
    }
    return build_polytope(detail::numbered(pts));
  }
  if (base == "dodecahedron") {
    const double phi = std::numbers::phi;
    std::vector<Vec3> pts;
    for (double x : {-1.0, 1.0}) {
      for (double y : {-1.0, 1.0}) {
        for (double z : {-1.0, 1.0}) pts.emplace_back(x, y, z);
      }
    }
    for (double s : {-1.0, 1.0}) {
      for (double t : {-1.0, 1.0}) {
        pts.emplace_back(0, s / phi, t * phi);
        pts.emplace_back(s / phi, t * phi, 0);
        pts.emplace_back(t * phi, 0, s / phi);
      }
    }
    return build_polytope(detail::numbered(pts));
  }
  if (base == "hex_prism") return n_prism(6, 2.0);
  if (base == "n_prism") {
    if (parsed.args.empty() || parsed.args.size() > 2) throw Error(ErrorKind::InvalidParameter, "n_prism(n[,height])");
    return n_prism(detail::integer_arg(parsed, 0, 0), parsed.args.size() > 1 ? parsed.args[1] : 2.0);
  }
  if (base == "n_antiprism") {
    if (parsed.args.size() != 1) throw Error(ErrorKind::InvalidParameter, "n_antiprism(n)");
    return n_antiprism(detail::integer_arg(parsed, 0, 0));
  }
  if (base == "frustum") {
    std::vector<Vec3> pts{{-0.5, -0.5, 1}, {0.5, -0.5, 1}, {0.5, 0.5, 1}, {-0.5, 0.5, 1},
                          {-1, -1, 0},     {1, -1, 0},     {1, 1, 0},     {-1, 1, 0}};
    return build_polytope(detail::numbered(pts));
  }
  if (base == "octa_tetra_glue") {
    // Unit-edge octahedron with a regular tetrahedron on face (1 2 3); the
    // apex 7 is coplanar with three octahedron faces, forming rhombi.
    const double s = std::numbers::sqrt2 / 2.0;
    std::vector<Vec3> pts{{s, 0, 0}, {0, s, 0}, {0, 0, s}, {-s, 0, 0}, {0, -s, 0}, {0, 0, -s}, {s, s, s}};
    return build_polytope(detail::numbered(pts));
  }
  if (base == "square") {
    return build_plane_graph(detail::numbered(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                             detail::numbered_edges({{1, 2}, {2, 3}, {3, 4}, {4, 1}}));
  }
  if (base == "parallelogram") {
    return build_plane_graph(detail::numbered(std::vector<Vec2>{{0, 0}, {2, 0}, {3, 1}, {1, 1}}),
                             detail::numbered_edges({{1, 2}, {2, 3}, {3, 4}, {4, 1}}));
  }
  if (base == "hex_three_rhombi") {
    // Regular unit hexagon 1..6 with centre 7 joined to 1, 3, 5.
    std::vector<Vec2> pts;
    for (int k = 0; k < 6; ++k) {
      const double t = k * std::numbers::pi / 3.0;
      pts.emplace_back(std::cos(t), std::sin(t));
    }
    pts.emplace_back(0.0, 0.0);
    return build_plane_graph(detail::numbered(pts), detail::numbered_edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                                                                            {6, 1}, {7, 1}, {7, 3}, {7, 5}}));
  }
  if (base == "twisted_squares") {
    if (parsed.args.size() != 3) throw Error(ErrorKind::InvalidParameter, "twisted_squares(s_out,s_in,alpha_deg)");
    return twisted_squares(parsed.args[0], parsed.args[1], parsed.args[2]);
  }
  throw Error(ErrorKind::UnknownGalleryName, "no gallery entry named '" + std::string(name) + "'");
}

// -- random instances ----------------------------------------------------------

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike the std distributions.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Vec3 sphere_point(std::mt19937_64& rng) {
  const double z = 2.0 * unit_uniform(rng) - 1.0;
  const double t = 2.0 * std::numbers::pi * unit_uniform(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(t), rho * std::sin(t), z};
}

constexpr int kMaxRandomAttempts = 100;

}  // namespace detail

/// Hull of n seeded uniform points on the unit sphere.
inline IndexedPolytope random_inscribed_polytope(int n, std::uint64_t seed, const Tolerance& tol = {}) {
  if (n < 4) throw Error(ErrorKind::InvalidParameter, "random_inscribed_polytope needs n >= 4");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < detail::kMaxRandomAttempts; ++attempt) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.push_back(detail::sphere_point(rng));
    try {
      return build_polytope(detail::numbered(pts), tol);
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::NumericFailure, "random_inscribed_polytope: no valid sample after 100 attempts");
}

/// Delaunay triangulation of n seeded points in the unit disk, obtained as
/// the lower hull of the points lifted to the paraboloid z = x^2 + y^2.
/// Cocircular points merge into one (inscribed) polygonal face.
inline ConvexPlaneGraph random_triangulation(int n, std::uint64_t seed, const Tolerance& tol = {}) {
  if (n < 3) throw Error(ErrorKind::InvalidParameter, "random_triangulation needs n >= 3");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < detail::kMaxRandomAttempts; ++attempt) {
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(detail::unit_uniform(rng));
      const double t = 2.0 * std::numbers::pi * detail::unit_uniform(rng);
      pts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    try {
      auto planar = detail::numbered(pts);
      auto [labels, sorted] = detail::sort_by_label(planar);
      std::vector<Vec3> lifted;
      for (const auto& p : sorted) lifted.emplace_back(p.x(), p.y(), p.squaredNorm());
      std::set<std::pair<int, int>> edges;
      for (const auto& face : detail::hull_faces(lifted, labels, tol)) {
        if (!(face.normal.z() < -1e-9)) continue;
        const auto& c = face.cycle;
        for (std::size_t i = 0; i < c.size(); ++i) edges.insert(std::minmax(c[i], c[(i + 1) % c.size()]));
      }
      std::vector<LabelEdge> edge_labels;
      for (const auto& [u, v] : edges) edge_labels.emplace_back(labels[u], labels[v]);
      return build_plane_graph(std::move(planar), edge_labels, tol);
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::NumericFailure, "random_triangulation: no valid sample after 100 attempts");
}

/// Random rigid motion of the plane, a reflection with probability 1/2.
inline Isometry<2> random_isometry2(std::mt19937_64& rng) {
  const double t = 2.0 * std::numbers::pi * detail::unit_uniform(rng);
  Isometry<2> iso;
  iso.linear << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  if (detail::unit_uniform(rng) < 0.5) iso.linear.col(1) *= -1.0;
  iso.translation = Vec2(10.0 * detail::unit_uniform(rng) - 5.0, 10.0 * detail::unit_uniform(rng) - 5.0);
  return iso;
}

inline ConvexPlaneGraph transformed(const ConvexPlaneGraph& g, const Isometry<2>& iso, const Tolerance& tol = {}) {
  std::vector<LabeledPoint2> pts;
  for (std::size_t i = 0; i < g.size(); ++i) pts.emplace_back(g.labels[i], iso(g.points[i]));
  return build_plane_graph(std::move(pts), label_edges(g), tol);
}

// -- twisted squares -------------------------------------------------------------

struct TwistedSquaresCheck {
  double len_twisted = 0.0;
  double len_forced = 0.0;
  bool refuted = false;
};

/// Compares the spoke 1-5 of the twisted configuration with the spoke of the
/// parallel-sided configuration that any symmetric re-embedding with the
/// same square sizes is forced into.
inline TwistedSquaresCheck exm_cube_check(double s_out, double s_in, double alpha_deg, const Tolerance& tol = {}) {
  const auto g = twisted_squares(s_out, s_in, alpha_deg, tol);
  auto at = [&](const std::string& label) {
    return g.points[static_cast<std::size_t>(std::lower_bound(g.labels.begin(), g.labels.end(), label) - g.labels.begin())];
  };
  TwistedSquaresCheck out;
  out.len_twisted = (at("1") - at("5")).norm();
  out.len_forced = (s_out - s_in) * std::numbers::sqrt2 / 2.0;
  out.refuted = std::abs(out.len_twisted - out.len_forced) > tol.length_threshold(g.diameter());
  return out;
}

}  // namespace edgesym
