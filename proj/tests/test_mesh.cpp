#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgecurl;

TEST_CASE("single tet enumeration and d o d = 0") {
  auto C = meshgen::build(meshgen::single_tet());
  CHECK(C.n_vertices() == 4);
  CHECK(C.n_edges() == 6);
  CHECK(C.n_faces() == 4);
  CHECK(C.n_tets() == 1);
  CHECK(max_abs(SpMatI(C.d1 * C.d0)) == 0);
  CHECK(max_abs(SpMatI(C.d2 * C.d1)) == 0);
  CHECK(C.tet_volume(0) > 0);
}

TEST_CASE("two tets glued on a face") {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  std::vector<std::array<int, 4>> t{{0, 1, 2, 3}, {1, 2, 3, 4}};
  auto C = build_complex(v, t);
  CHECK(C.n_edges() == 9);
  CHECK(C.n_faces() == 7);
  auto S = extract_boundary(C);
  CHECK(S.n_triangles() == 6);
}

TEST_CASE("structured cube d2 d1 = 0 exactly") {
  auto C = meshgen::build(meshgen::cube(2));
  CHECK(max_abs(SpMatI(C.d2 * C.d1)) == 0);
  CHECK(max_abs(SpMatI(C.d1 * C.d0)) == 0);
}

TEST_CASE("inverted tets are reoriented, not rejected") {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<std::array<int, 4>> t{{0, 1, 3, 2}};  // negative determinant
  auto C = build_complex(v, t);
  CHECK(C.tet_volume(0) > 0);
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  std::vector<std::array<int, 4>> flat{{0, 1, 2, 3}};  // coplanar
  CHECK_THROWS_AS(build_complex(v, flat), DegenerateTetError);

  std::vector<Vec3> v2{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK_THROWS_AS(build_complex(v2, {{0, 1, 2, 3}, {0, 1, 3, 2}}), MeshError);  // duplicate
  CHECK_THROWS_AS(build_complex(v2, {{0, 1, 2, 7}}), MeshError);                // bad index
}

TEST_CASE("non-manifold face incidence is rejected") {
  // three tets sharing the face (0,1,2)
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}};
  std::vector<std::array<int, 4>> t{{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}};
  CHECK_THROWS_AS(build_complex(v, t), NonManifoldError);
}

TEST_CASE("boundary extraction: euler characteristics") {
  auto tet = meshgen::build(meshgen::single_tet());
  CHECK(extract_boundary(tet).euler_characteristic == 2);
  auto ball = meshgen::build(meshgen::ball(1.0, 4));
  CHECK(extract_boundary(ball).euler_characteristic == 2);
  auto torus = meshgen::build(meshgen::solid_torus(2.0, 0.8, 8, 2, 2));
  CHECK(extract_boundary(torus).euler_characteristic == 0);
}

TEST_CASE("trace commutes with d and the boundary is closed") {
  auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, 8, 2, 2));
  auto S = extract_boundary(C);
  CHECK(max_abs(SpMatI(S.T1 * C.d0 - S.d0 * S.T0)) == 0);
  CHECK(max_abs(SpMatI(S.d1 * S.d0)) == 0);
  // every boundary edge in exactly two triangles with opposite orientations
  std::vector<int> use(S.n_edges(), 0), net(S.n_edges(), 0);
  for (int k = 0; k < S.d1.outerSize(); ++k)
    for (SpMatI::InnerIterator it(S.d1, k); it; ++it) {
      use[it.col()]++;
      net[it.col()] += static_cast<int>(it.value());
    }
  for (int e = 0; e < S.n_edges(); ++e) {
    CHECK(use[e] == 2);
    CHECK(net[e] == 0);
  }
}

TEST_CASE("outward orientation of boundary triangles") {
  auto C = meshgen::build(meshgen::single_tet());
  auto S = extract_boundary(C);
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : C.vertices) centroid += p / 4.0;
  for (const auto& tri : S.btris) {
    Vec3 p0 = C.vertices[tri[0]], p1 = C.vertices[tri[1]], p2 = C.vertices[tri[2]];
    Vec3 n = (p1 - p0).cross(p2 - p0);
    Vec3 fc = (p0 + p1 + p2) / 3.0;
    CHECK(n.dot(fc - centroid) > 0.0);
  }
}

TEST_CASE("assembly independent of tet enumeration order") {
  auto raw = meshgen::cube(2);
  auto C1 = build_complex(raw.vertices, raw.tets);
  auto shuffled = raw.tets;
  std::mt19937 rng(7);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto C2 = build_complex(raw.vertices, shuffled);
  SpMat M1a = assemble_mass(C1, 1), M1b = assemble_mass(C2, 1);
  CHECK(inf_norm(SpMat(M1a - M1b)) <= 1e-13 * inf_norm(M1a));
}
