#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "edgesym/verify.hpp"
#include "oracles.hpp"

namespace edgesym {
namespace {

TheoremVerdict<3> verify_solid(const std::string& name) {
  return verify_polytope_theorem(std::get<IndexedPolytope>(gallery(name)), {}, name);
}

TheoremVerdict<2> verify_plane(const std::string& name) {
  return verify_graph_theorem(std::get<ConvexPlaneGraph>(gallery(name)), {}, name);
}

TEST(Classification, Taxonomy) {
  EXPECT_EQ(classify(true, true), Classification::TheoremAppliesAndHolds);
  EXPECT_EQ(classify(false, true), Classification::HypothesisFailsConclusionHolds);
  EXPECT_EQ(classify(false, false), Classification::HypothesisFailsConclusionFails);
  EXPECT_EQ(classify(true, false), Classification::TheoremViolation);
  EXPECT_EQ(to_string(Classification::TheoremViolation), "THEOREM-VIOLATION");
}

TEST(VerifyPolytope, HexagonalPrism) {
  const auto v = verify_solid("hex_prism");
  EXPECT_TRUE(v.hypothesis_holds);
  EXPECT_TRUE(v.conclusion_holds);
  EXPECT_EQ(v.classification, Classification::TheoremAppliesAndHolds);
  EXPECT_EQ(v.report.total, 24u);
  EXPECT_EQ(v.report.edge_preserving, 24u);
  EXPECT_EQ(v.report.realized, 24u);
  EXPECT_EQ(v.faces.size(), 8u);
  EXPECT_LT(v.worst_face_residual, 1e-12);
}

TEST(VerifyPolytope, ObliqueParallelepiped) {
  const auto v = verify_solid("oblique_parallelepiped");
  EXPECT_FALSE(v.hypothesis_holds);
  EXPECT_FALSE(v.conclusion_holds);
  EXPECT_EQ(v.classification, Classification::HypothesisFailsConclusionFails);
  EXPECT_EQ(v.violations.size(), 14u);
  for (const auto& rec : v.violations) {
    EXPECT_TRUE(rec.edge_preserving);
    EXPECT_FALSE(rec.realized);
  }
}

TEST(VerifyPolytope, OctahedronWithTetrahedronCap) {
  const auto v = verify_solid("octa_tetra_glue");
  int triangles = 0;
  int rhombi = 0;
  const auto m = face_map(std::get<IndexedPolytope>(gallery("octa_tetra_glue")));
  for (const auto& f : m.faces()) (f.size() == 3 ? triangles : rhombi) += 1;
  EXPECT_EQ(triangles, 4);
  EXPECT_EQ(rhombi, 3);
  EXPECT_FALSE(v.hypothesis_holds);
  EXPECT_TRUE(v.conclusion_holds);
  EXPECT_EQ(v.classification, Classification::HypothesisFailsConclusionHolds);
  // A unit pi/3-rhombus misses its best circle by 0.1830127.
  EXPECT_NEAR(v.worst_face_residual, 0.18301270, 1e-6);
}

TEST(VerifyPolytope, GalleryNeverViolates) {
  for (const auto& name : {"cube", "box_1_2_3", "oblique_parallelepiped", "tetrahedron", "octahedron", "icosahedron",
                           "dodecahedron", "hex_prism", "frustum", "octa_tetra_glue"}) {
    EXPECT_NE(verify_solid(name).classification, Classification::TheoremViolation) << name;
  }
  for (int n = 3; n <= 8; ++n) {
    EXPECT_EQ(verify_polytope_theorem(n_prism(n)).classification, Classification::TheoremAppliesAndHolds) << n;
    EXPECT_EQ(verify_polytope_theorem(n_antiprism(n)).classification, Classification::TheoremAppliesAndHolds) << n;
  }
}

TEST(VerifyPolytope, RealizedSymmetriesMapFacesCongruently) {
  for (const auto& name : {"cube", "box_1_2_3", "oblique_parallelepiped", "frustum", "octa_tetra_glue"}) {
    const auto p = std::get<IndexedPolytope>(gallery(name));
    const auto m = face_map(p);
    const auto coords = coordinates_for(p, m);
    for (const auto& rec : analyze<3>(m, coords).records) {
      if (rec.realized) {
        EXPECT_TRUE(faces_congruent_under<3>(m, coords, rec.sigma)) << name;
      }
    }
  }
}

TEST(VerifyGraph, Examples) {
  const auto para = verify_plane("parallelogram");
  EXPECT_EQ(para.classification, Classification::HypothesisFailsConclusionFails);
  ASSERT_EQ(para.violations.size(), 2u);
  const auto labels = std::get<ConvexPlaneGraph>(gallery("parallelogram")).labels;
  std::vector<std::string> unrealized;
  for (const auto& rec : para.violations) unrealized.push_back(rec.sigma.cycle_notation(labels));
  std::sort(unrealized.begin(), unrealized.end());
  // Reflections of the 4-cycle through the diagonals and through the edge midlines.
  EXPECT_EQ(unrealized, (std::vector<std::string>{"(1 2)(3 4)", "(1 4)(2 3)"}));

  EXPECT_EQ(verify_plane("hex_three_rhombi").classification, Classification::HypothesisFailsConclusionHolds);
  EXPECT_EQ(verify_plane("square").classification, Classification::TheoremAppliesAndHolds);
  EXPECT_EQ(verify_plane("twisted_squares(4,2,10)").classification, Classification::HypothesisFailsConclusionFails);
  EXPECT_EQ(verify_plane("twisted_squares(4,2,0)").classification, Classification::TheoremAppliesAndHolds);
}

TEST(VerifyGraph, TriangulationsSatisfyTheHypothesis) {
  for (int seed = 0; seed < 10; ++seed) {
    const auto g = random_triangulation(12 + seed, seed);
    const auto v = verify_graph_theorem(g);
    EXPECT_TRUE(v.hypothesis_holds);
    EXPECT_EQ(v.classification, Classification::TheoremAppliesAndHolds);
  }
}

TEST(VerifyGraph, RealizedSymmetryGivesCongruentPermutedGraph) {
  for (const auto& name : {"square", "hex_three_rhombi", "twisted_squares(4,2,10)"}) {
    const auto g = std::get<ConvexPlaneGraph>(gallery(name));
    for (const auto& rec : analyze<2>(g.map, g.points).records) {
      const auto h = permuted_graph(g, rec.sigma);
      EXPECT_TRUE(combinatorially_equivalent(g.map, h.map));
      if (rec.realized) {
        const auto rho = assemble_congruence(g, h);
        ASSERT_TRUE(rho.has_value()) << name;
        EXPECT_EQ(rho->orientation(), rec.orientation);
      } else if (rec.edge_preserving) {
        EXPECT_FALSE(faces_congruent_under<2>(g.map, g.points, rec.sigma) && assemble_congruence(g, h).has_value());
      }
    }
  }
}

TEST(Gallery, Instances) {
  const auto cube = std::get<IndexedPolytope>(gallery("cube"));
  ASSERT_EQ(cube.size(), 8u);
  for (const auto& p : cube.points)
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(p[k] == 0.0 || p[k] == 1.0);

  const auto frustum = std::get<IndexedPolytope>(gallery("frustum"));
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(frustum.points[i].z(), 1.0);
    EXPECT_EQ(frustum.points[i + 4].z(), 0.0);
    EXPECT_NEAR((frustum.points[(i + 1) % 4] - frustum.points[i]).norm(), 1.0, 1e-15);
    EXPECT_NEAR((frustum.points[4 + (i + 1) % 4] - frustum.points[4 + i]).norm(), 2.0, 1e-15);
  }

  const auto tw = std::get<ConvexPlaneGraph>(gallery("twisted_squares(4,2,10)"));
  EXPECT_EQ(tw.size(), 8u);
  EXPECT_EQ(tw.map.edge_count(), 12);
  EXPECT_EQ(tw.bounded_face_count(), 5);
  EXPECT_EQ(std::get<ConvexPlaneGraph>(gallery("twisted_squares:4,2,10")).points, tw.points);

  EXPECT_EQ(std::get<IndexedPolytope>(gallery("n_prism(6)")).points, std::get<IndexedPolytope>(gallery("hex_prism")).points);
  for (int n = 3; n <= 8; ++n) {
    const auto a = n_antiprism(n);
    const auto m = face_map(a);
    EXPECT_EQ(m.face_count(), 2 * n + 2);
    for (const auto& [u, v] : m.edges()) EXPECT_NEAR((a.points[u] - a.points[v]).norm(), 1.0, 1e-12);
  }

  for (const auto& name : gallery_names()) {
    if (name.find('(') != std::string::npos) continue;
    EXPECT_NO_THROW(gallery(name)) << name;
  }
}

TEST(Gallery, Errors) {
  auto kind_of = [](const std::string& name) {
    try {
      gallery(name);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind_of("klein_bottle"), ErrorKind::UnknownGalleryName);
  EXPECT_EQ(kind_of("twisted_squares(4,2,95)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("twisted_squares(2,4,10)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("twisted_squares(4,2)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("n_prism(2)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("n_prism(3.5)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("cube(3)"), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of("n_antiprism(x)"), ErrorKind::InvalidParameter);
}

TEST(RandomInstances, InscribedPolytopes) {
  for (int seed = 0; seed < 10; ++seed) {
    const auto tetra = random_inscribed_polytope(4, seed);
    EXPECT_EQ(verify_polytope_theorem(tetra).classification, Classification::TheoremAppliesAndHolds);
  }
  const auto p = random_inscribed_polytope(20, 42);
  for (const auto& x : p.points) EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  const auto v = verify_polytope_theorem(p);
  for (const auto& f : v.faces) EXPECT_TRUE(f.inscribed);
  EXPECT_EQ(v.classification, Classification::TheoremAppliesAndHolds);
  // Regression value for this seed.
  EXPECT_EQ(v.report.total, 1u);
  EXPECT_EQ(v.report.edge_preserving, 1u);
  EXPECT_EQ(v.report.realized, 1u);

  const auto again = random_inscribed_polytope(20, 42);
  EXPECT_EQ(again.points, p.points);
  EXPECT_THROW(random_inscribed_polytope(3, 1), Error);
}

TEST(RandomInstances, TriangulationsAreDeterministic) {
  const auto a = random_triangulation(25, 9);
  const auto b = random_triangulation(25, 9);
  EXPECT_EQ(a.points, b.points);
  EXPECT_TRUE(a.map == b.map);
  for (int f = 0; f < a.bounded_face_count(); ++f) EXPECT_EQ(a.map.faces()[f].size(), 3u);
  // Euler: a triangulated disc with h hull vertices has 2n - h - 2 triangles.
  const int h = static_cast<int>(a.map.faces()[a.outer_face()].size());
  EXPECT_EQ(a.bounded_face_count(), 2 * 25 - h - 2);
}

TEST(TwistedSquares, Check) {
  const double r1 = 2.0 * std::numbers::sqrt2;
  const double r2 = std::numbers::sqrt2;
  const auto flat = exm_cube_check(4, 2, 0);
  EXPECT_NEAR(flat.len_twisted, std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(flat.len_forced, std::numbers::sqrt2, 1e-12);
  EXPECT_FALSE(flat.refuted);

  const auto ten = exm_cube_check(4, 2, 10);
  const double expected = oracle::law_of_cosines(r1, r2, 10.0 * std::numbers::pi / 180.0);
  EXPECT_NEAR(expected, 1.4565500251973276, 1e-12);
  EXPECT_NEAR(ten.len_twisted, expected, 1e-12);
  EXPECT_NEAR(ten.len_forced, std::numbers::sqrt2, 1e-12);
  EXPECT_TRUE(ten.refuted);

  double prev = 0.0;
  for (int deg = 1; deg <= 15; ++deg) {
    const auto c = exm_cube_check(4, 2, deg);
    EXPECT_GT(c.len_twisted, prev);
    EXPECT_TRUE(c.refuted);
    prev = c.len_twisted;
  }
  EXPECT_THROW(exm_cube_check(4, 2, -1), Error);
}

}  // namespace
}  // namespace edgesym
