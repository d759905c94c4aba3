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

TEST_CASE("lagrangian verdicts in standard spaces") {
  SymplecticSpace R2{standard_j(1)};
  Mat e1 = Mat::Zero(2, 1);
  e1(0, 0) = 1;
  CHECK(is_lagrangian(R2, Subspace{e1}) == LagrangianVerdict::CompleteLagrangian);

  SymplecticSpace R4{standard_j(2)};
  Mat e12 = Mat::Zero(4, 2);
  e12(0, 0) = 1;
  e12(1, 1) = 1;  // span{e1,e2}: [e1,e3]=1 basis layout -> isotropic
  CHECK(is_lagrangian(R4, Subspace{e12}) == LagrangianVerdict::CompleteLagrangian);

  Mat e13 = Mat::Zero(4, 2);
  e13(0, 0) = 1;
  e13(2, 1) = 1;  // [e1,e3] = 1: not isotropic
  CHECK(is_lagrangian(R4, Subspace{e13}) == LagrangianVerdict::No);

  Mat e1only = Mat::Zero(4, 1);
  e1only(0, 0) = 1;
  CHECK(is_lagrangian(R4, Subspace{e1only}) == LagrangianVerdict::Lagrangian);

  Mat wrongrows = Mat::Zero(3, 1);
  CHECK_THROWS_AS(is_lagrangian(R4, Subspace{wrongrows}), DimensionMismatchError);
}

TEST_CASE("symplectic orthogonal dimensions and containment") {
  SymplecticSpace R4{standard_j(2)};
  Mat zero(4, 0);
  CHECK(symplectic_orthogonal(R4, Subspace{zero}).dim() == 4);
  CHECK(symplectic_orthogonal(R4, Subspace{Mat::Identity(4, 4)}).dim() == 0);

  Mat e1 = Mat::Zero(4, 1);
  e1(0, 0) = 1;
  auto sharp = symplectic_orthogonal(R4, Subspace{e1});
  CHECK(sharp.dim() == 3);
  // contains e1: principal angle of span{e1} against sharp subspace
  Mat proj = sharp.B * (sharp.B.transpose() * e1);
  CHECK((proj - e1).norm() < 1e-12);

  // L ⊆ (L^#)^#
  auto sharp2 = symplectic_orthogonal(R4, sharp);
  CHECK(sharp2.dim() == 1);
  CHECK(max_principal_angle(Subspace{e1}, sharp2) < 1e-10);
}

TEST_CASE("symplectic basis: canonical, random, and scaled 2x2") {
  SymplecticSpace R4{standard_j(2)};
  Mat U = symplectic_basis(R4);
  CHECK(inf_norm(Mat(U.transpose() * R4.J * U - standard_j(2))) < 1e-10);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = dist(rng);
  Mat Jr = A - A.transpose();
  SymplecticSpace Sr{Jr};
  Mat Ur = symplectic_basis(Sr);
  CHECK(inf_norm(Mat(Ur.transpose() * Jr * Ur - standard_j(2))) < 1e-10);

  double c = 3.7;
  Mat J2(2, 2);
  J2 << 0, c, -c, 0;
  SymplecticSpace S2{J2};
  Mat U2 = symplectic_basis(S2);
  CHECK(inf_norm(Mat(U2.transpose() * J2 * U2 - standard_j(1))) < 1e-12);
  CHECK(U2.col(0).norm() == Catch::Approx(1.0 / std::sqrt(c)).epsilon(1e-10));

  Mat Jdeg = Mat::Zero(2, 2);
  CHECK_THROWS_AS(symplectic_basis(SymplecticSpace{Jdeg}), DegeneratePairingError);
}

TEST_CASE("partition lagrangians are complete for every partition") {
  for (int g : {1, 2}) {
    SymplecticSpace S{standard_j(g)};
    Mat basis = Mat::Identity(2 * g, 2 * g);
    for (int mask = 0; mask < (1 << g); ++mask) {
      PartitionSpec part;
      part.g = g;
      for (int i = 1; i <= g; ++i)
        if (mask & (1 << (i - 1))) part.I.push_back(i);
      auto L = lagrangian_from_partition(basis, part);
      CHECK(L.dim() == g);
      CHECK(is_lagrangian(S, L) == LagrangianVerdict::CompleteLagrangian);
    }
  }
}

TEST_CASE("partition validation names the bound") {
  PartitionSpec bad{{2}, 1};
  try {
    bad.validate();
    FAIL("expected BadPartitionError");
  } catch (const BadPartitionError& e) {
    CHECK(std::string(e.what()).find("1..g") != std::string::npos);
  }
  PartitionSpec rep{{1, 1}, 2};
  CHECK_THROWS_AS(rep.validate(), BadPartitionError);
}
