#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgecurl;

namespace {

OperatorBundle& torus_bundle() {
  static auto C = meshgen::build(meshgen::solid_torus(2.0, 0.8, 10, 3, 3));
  static auto S = extract_boundary(C);
  static OperatorBundle B = build_operator_bundle(C, S);
  return B;
}

OperatorBundle& ball_bundle() {
  static auto C = meshgen::build(meshgen::ball(1.0, 6));
  static auto S = extract_boundary(C);
  static OperatorBundle B = build_operator_bundle(C, S);
  return B;
}

}  // namespace

TEST_CASE("constraint row structure") {
  auto& Bt = torus_bundle();
  BoundaryConditionSpec closed1;
  closed1.partition = PartitionSpec{{1}, 1};
  auto rows = constraint_rows(Bt, closed1);
  CHECK(rows.n_trace_rows == Bt.S->n_triangles() - 1);
  CHECK(rows.n_symplectic_rows == 1);

  BoundaryConditionSpec coclosed;
  coclosed.trace = TraceClass::Coclosed;
  coclosed.partition = PartitionSpec{{1}, 1};
  auto rows2 = constraint_rows(Bt, coclosed);
  CHECK(rows2.n_trace_rows == Bt.S->n_vertices() - 1);
  CHECK(rows2.n_symplectic_rows == 1);

  auto& Bb = ball_bundle();
  BoundaryConditionSpec ball_closed;
  auto rows3 = constraint_rows(Bb, ball_closed);
  CHECK(rows3.n_trace_rows == Bb.S->n_triangles() - 1);
  CHECK(rows3.n_symplectic_rows == 0);
}

TEST_CASE("gkn symmetry certificate: ball, torus partitions, negative control") {
  auto& Bb = ball_bundle();
  BoundaryConditionSpec spec;
  auto R = restricted_operator(Bb, constraint_rows(Bb, spec), false);
  CHECK(R.asymmetry_rel <= 1e-10);
  CHECK(R.max_constraint_residual <= 1e-11);

  auto& Bt = torus_bundle();
  for (auto I : {std::vector<int>{1}, std::vector<int>{}}) {
    BoundaryConditionSpec s;
    s.partition = PartitionSpec{I, 1};
    auto Rt = restricted_operator(Bt, constraint_rows(Bt, s), true);
    CHECK(Rt.asymmetry_rel <= 1e-10);
    CHECK(Rt.max_constraint_residual <= 1e-11);
  }

  BoundaryConditionSpec dropped;
  dropped.partition = PartitionSpec{{1}, 1};
  dropped.drop_symplectic_row = true;
  auto Rd = restricted_operator(Bt, constraint_rows(Bt, dropped), true);
  CHECK(Rd.asymmetry_rel >= 1e-3);
}

TEST_CASE("explicit lagrangian validation in constraint_rows") {
  auto& Bt = torus_bundle();
  BoundaryConditionSpec spec;
  spec.explicit_lagrangian = Mat(Bt.basis.K.col(0));
  auto rows = constraint_rows(Bt, spec);
  CHECK(rows.n_symplectic_rows == 1);

  BoundaryConditionSpec bad;
  Mat both = Bt.basis.K;  // span{kappa, kappa'}: not Lagrangian
  bad.explicit_lagrangian = both;
  CHECK_THROWS_AS(constraint_rows(Bt, bad), InvalidLagrangianError);
}

TEST_CASE("validate_gkn: complete, too-small, and non-lagrangian selections") {
  auto& Bt = torus_bundle();
  auto good = validate_gkn(Bt, Mat(Bt.basis.K.col(0)));
  CHECK(good.verdict == LagrangianVerdict::CompleteLagrangian);
  CHECK(good.asymmetry_rel <= 1e-10);

  // L_H = {0}: over-constrained domain, still symmetric
  auto zero = validate_gkn(Bt, Mat(Bt.basis.K.rows(), 0));
  CHECK(zero.verdict == LagrangianVerdict::Lagrangian);
  CHECK(zero.asymmetry_rel <= 1e-10);

  // genus 2: span{kappa_1, kappa'_1} pairs to 1: not Lagrangian, asymmetric
  static auto Cg = meshgen::build(meshgen::genus2_plate(1));
  static auto Sg = extract_boundary(Cg);
  static OperatorBundle Bg = build_operator_bundle(Cg, Sg);
  Mat badsel(Bg.basis.K.rows(), 2);
  badsel.col(0) = Bg.basis.K.col(0);
  badsel.col(1) = Bg.basis.K.col(2);
  auto bad = validate_gkn(Bg, badsel);
  CHECK(bad.verdict == LagrangianVerdict::No);
  CHECK(bad.asymmetry_rel >= 1e-3);
}

TEST_CASE("ball spectrum: beltrami eigenvalue, hygiene, kernel count") {
  auto& B = ball_bundle();
  BoundaryConditionSpec spec;
  SpectrumOptions opts;
  opts.k = 8;
  auto rep = solve_spectrum(B, spec, opts);

  const double oracle = oracle::tan_x_equals_x_root();
  REQUIRE(!rep.eigenvalues.empty());
  double smallest = std::numeric_limits<double>::infinity();
  for (double l : rep.eigenvalues) smallest = std::min(smallest, std::abs(l));
  CHECK(std::abs(smallest - oracle) / oracle < 0.03);  // n=6 is already within 3%

  for (double r : rep.residuals) CHECK(r <= 1e-8);
  Mat G = rep.eigenvectors.transpose() * (B.M1 * rep.eigenvectors);
  CHECK(inf_norm(Mat(G - Mat::Identity(G.rows(), G.cols()))) <= 1e-8);

  // kernel contains at least every gradient mode
  CHECK(rep.zero_mode_count >= B.C->n_vertices() - 1);
  CHECK(rep.gradient_mode_count == B.C->n_vertices() - 1);
}

TEST_CASE("torus spectra: partitions differ, cohomology kernel follows the selection") {
  auto& B = torus_bundle();
  SpectrumOptions opts;
  opts.k = 6;
  BoundaryConditionSpec s1, s2;
  s1.partition = PartitionSpec{{1}, 1};
  s2.partition = PartitionSpec{{}, 1};
  auto r1 = solve_spectrum(B, s1, opts);
  auto r2 = solve_spectrum(B, s2, opts);
  REQUIRE(!r1.eigenvalues.empty());
  REQUIRE(!r2.eigenvalues.empty());
  double d = 0;
  for (size_t i = 0; i < std::min(r1.eigenvalues.size(), r2.eigenvalues.size()); ++i)
    d = std::max(d, std::abs(r1.eigenvalues[i] - r2.eigenvalues[i]));
  CHECK(d > 1e-3);  // distinct self-adjoint extensions
  // the volume cohomology zero mode is admitted by I'={1} and excluded by I={1}
  CHECK(r2.zero_mode_count == r1.zero_mode_count + 1);

  BoundaryConditionSpec cocl;
  cocl.trace = TraceClass::Coclosed;
  cocl.partition = PartitionSpec{{1}, 1};
  auto r3 = solve_spectrum(B, cocl, opts);
  for (double r : r3.residuals) CHECK(r <= 1e-8);
}

TEST_CASE("dense and iterative paths agree") {
  auto& B = torus_bundle();
  BoundaryConditionSpec spec;
  spec.partition = PartitionSpec{{1}, 1};
  SpectrumOptions dense, iter;
  dense.k = iter.k = 5;
  iter.dense_threshold = 0;  // force the KKT/Lanczos path
  auto rd = solve_spectrum(B, spec, dense);
  auto ri = solve_spectrum(B, spec, iter);
  REQUIRE(rd.dense_path);
  REQUIRE(!ri.dense_path);
  REQUIRE(rd.eigenvalues.size() == ri.eigenvalues.size());
  for (size_t i = 0; i < rd.eigenvalues.size(); ++i)
    CHECK(rd.eigenvalues[i] == Catch::Approx(ri.eigenvalues[i]).epsilon(1e-8));
}

TEST_CASE("reflection-symmetric ball: spectrum pairs as ±lambda") {
  auto C = meshgen::build(meshgen::ball(1.0, 3, true));  // 24-tet symmetric split
  auto S = extract_boundary(C);
  auto B = build_operator_bundle(C, S);
  BoundaryConditionSpec spec;
  SpectrumOptions opts;
  opts.k = 6;
  auto rep = solve_spectrum(B, spec, opts);
  REQUIRE(rep.eigenvalues.size() >= 4);
  std::vector<double> pos, neg;
  for (double l : rep.eigenvalues) (l > 0 ? pos : neg).push_back(std::abs(l));
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  size_t m = std::min(pos.size(), neg.size());
  REQUIRE(m >= 2);
  for (size_t i = 0; i < m; ++i)
    CHECK(std::abs(pos[i] - neg[i]) <= 1e-6 * pos[i]);
}

TEST_CASE("spectrum determinism for a fixed seed") {
  auto& B = torus_bundle();
  BoundaryConditionSpec spec;
  spec.partition = PartitionSpec{{1}, 1};
  SpectrumOptions opts;
  opts.k = 4;
  auto a = solve_spectrum(B, spec, opts);
  auto b = solve_spectrum(B, spec, opts);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (size_t i = 0; i < a.eigenvalues.size(); ++i)
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);  // bitwise
}
