#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgecurl;

namespace {

Mat standard_j(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return J;
}

}  // namespace

TEST_CASE("harmonic space dimension equals 2g") {
  auto sphere = extract_boundary(meshgen::build(meshgen::ball(1.0, 3)));
  BoundaryHodge hs(sphere);
  CHECK(hs.harmonic_basis().cols() == 0);

  auto Ct = meshgen::build(meshgen::solid_torus(2.0, 0.8, 8, 2, 2));
  auto St = extract_boundary(Ct);
  BoundaryHodge ht(St);
  CHECK(ht.harmonic_basis().cols() == 2);
  // harmonic invariants
  Mat H = ht.harmonic_basis();
  CHECK(inf_norm(Mat(St.d1.cast<double>() * H)) < 1e-10);
  CHECK(inf_norm(Mat(St.d0.cast<double>().transpose() * (ht.M1() * H))) < 1e-10);
  Mat G = H.transpose() * (ht.M1() * H);
  CHECK(inf_norm(Mat(G - Mat::Identity(2, 2))) < 1e-12);

  auto Cg = meshgen::build(meshgen::genus2_plate(1));
  auto Sg = extract_boundary(Cg);
  BoundaryHodge hg(Sg);
  CHECK(hg.harmonic_basis().cols() == 4);

  CHECK_THROWS_AS(BoundaryHodge(St, 4), DimensionMismatchError);
}

TEST_CASE("hodge decomposition: exact input, idempotence, orthogonality") {
  auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, 8, 2, 2));
  auto S = extract_boundary(C);
  BoundaryHodge h(S);
  const int nbe = S.n_edges();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  SECTION("omega = d0 p recovers a pure exact field") {
    Vec p(S.n_vertices());
    for (int i = 0; i < p.size(); ++i) p[i] = dist(rng);
    Vec om = S.d0.cast<double>() * p;
    auto sp = h.hodge_decompose(om);
    double scale = std::sqrt(om.dot(h.M1() * om));
    CHECK(sp.harmonic.norm() <= 1e-10 * scale);
    CHECK(sp.coexact.norm() <= 1e-10 * scale);
    CHECK((sp.exact - om).norm() <= 1e-10 * scale);
    // alpha = p up to the per-component constant
    Vec diff = sp.alpha - p;
    CHECK((diff.array() - diff.mean()).abs().maxCoeff() < 1e-9);
  }

  SECTION("harmonic input is fixed") {
    Vec om = h.harmonic_basis().col(0);
    auto sp = h.hodge_decompose(om);
    CHECK(sp.exact.norm() <= 1e-10);
    CHECK(sp.coexact.norm() <= 1e-10);
  }

  SECTION("random input: orthogonality, reconstruction, gauges") {
    Vec om(nbe);
    for (int i = 0; i < nbe; ++i) om[i] = dist(rng);
    om /= std::sqrt(om.dot(h.M1() * om));
    auto sp = h.hodge_decompose(om);
    CHECK((sp.exact + sp.coexact + sp.harmonic - om).norm() < 1e-10);
    CHECK(std::abs(sp.exact.dot(h.M1() * sp.coexact)) < 1e-10);
    CHECK(std::abs(sp.exact.dot(h.M1() * sp.harmonic)) < 1e-10);
    CHECK(std::abs(sp.coexact.dot(h.M1() * sp.harmonic)) < 1e-10);
    // coexact part reproduced by its 2-cochain potential
    Vec lhs = h.M1() * sp.coexact;
    Vec rhs = S.d1.cast<double>().transpose() * sp.beta;
    CHECK((lhs - rhs).norm() < 1e-9);
    // beta gauge: zero sum (single component)
    CHECK(std::abs(sp.beta.sum()) < 1e-9);
    // alpha gauge: zero lumped mean
    Vec lump = Vec::Zero(S.n_vertices());
    SpMat M0 = assemble_mass(S, 0);
    for (int k = 0; k < M0.outerSize(); ++k)
      for (SpMat::InnerIterator it(M0, k); it; ++it) lump[it.row()] += it.value();
    CHECK(std::abs(lump.dot(sp.alpha)) < 1e-9);
  }
}

TEST_CASE("pairing identities") {
  auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, 8, 2, 2));
  auto S = extract_boundary(C);
  BoundaryHodge h(S);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec om(S.n_edges()), p(S.n_vertices()), q(S.n_vertices());
  for (int i = 0; i < om.size(); ++i) om[i] = dist(rng);
  for (int i = 0; i < p.size(); ++i) p[i] = dist(rng);
  for (int i = 0; i < q.size(); ++i) q[i] = dist(rng);

  CHECK(h.pairing(om, om) == 0.0);  // skew
  Vec dp = S.d0.cast<double>() * p, dq = S.d0.cast<double>() * q;
  CHECK(std::abs(h.pairing(dp, dq)) < 1e-12);
  CHECK(std::abs(h.pairing(dp, h.harmonic_basis().col(0))) < 1e-12);

  Vec wrong(3);
  CHECK_THROWS_AS(h.pairing(wrong, om), SizeMismatchError);
}

TEST_CASE("period-normalized symplectic basis on the torus") {
  auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, 10, 3, 3));
  auto S = extract_boundary(C);
  BoundaryHodge h(S);
  auto cycles = canonical_basis(C, S);
  auto basis = h.symplectic_harmonic_basis(cycles);
  REQUIRE(basis.genus() == 1);
  CHECK(inf_norm(Mat(basis.P - Mat::Identity(2, 2))) < basis.tol_basis);
  CHECK(inf_norm(Mat(basis.Gram - standard_j(1))) < basis.tol_symp);
  // eq-38 style: unit period of kappa_1 over the interior cycle, zero over the dual
  CHECK(BoundaryHodge::period(cycles.cycles[0], basis.K.col(0)) == Catch::Approx(1.0).margin(1e-8));
  CHECK(BoundaryHodge::period(cycles.cycles[1], basis.K.col(0)) == Catch::Approx(0.0).margin(1e-8));
  // non-degeneracy of the restricted pairing
  CHECK(std::abs(basis.Gram.determinant()) >= 0.5);

  std::vector<VecI> dup{cycles.cycles[0], cycles.cycles[0]};
  CycleBasis bad;
  bad.cycles = dup;
  CHECK_THROWS_AS(h.symplectic_harmonic_basis(bad), SingularPeriodsError);
}

TEST_CASE("period-normalized basis on genus 2, and empty basis on the sphere") {
  auto Cg = meshgen::build(meshgen::genus2_plate(1));
  auto Sg = extract_boundary(Cg);
  BoundaryHodge h(Sg);
  auto basis = h.symplectic_harmonic_basis(canonical_basis(Cg, Sg));
  REQUIRE(basis.genus() == 2);
  CHECK(inf_norm(Mat(basis.P - Mat::Identity(4, 4))) < basis.tol_basis);
  CHECK(inf_norm(Mat(basis.Gram - standard_j(2))) < basis.tol_symp);

  auto Cs = meshgen::build(meshgen::ball(1.0, 2));
  auto Ss = extract_boundary(Cs);
  BoundaryHodge hs(Ss);
  auto empty = hs.symplectic_harmonic_basis(canonical_basis(Cs, Ss));
  CHECK(empty.K.cols() == 0);
}

TEST_CASE("rotated harmonic fields stay nearly harmonic under refinement") {
  // star stability proxy: residual of the weak 90-degree rotation applied to
  // a harmonic field, expected to decrease with refinement
  double prev = std::numeric_limits<double>::infinity();
  for (int lvl : {8, 16}) {
    auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, lvl, lvl / 4, lvl / 4));
    auto S = extract_boundary(C);
    BoundaryHodge h(S);
    Mat H = h.harmonic_basis();
    Eigen::SimplicialLDLT<SpMat> mass(h.M1());
    Vec rot = mass.solve(h.W() * H.col(0));  // weak Hodge rotation
    Vec resid = rot - H * (H.transpose() * (h.M1() * rot));
    double rel = std::sqrt(resid.dot(h.M1() * resid) / rot.dot(h.M1() * rot));
    CHECK(rel < prev);
    prev = rel;
  }
}
