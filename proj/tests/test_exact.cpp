#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgecurl;
using exact::BigInt;
using exact::Rational;

TEST_CASE("rational arithmetic normalizes") {
  Rational a(BigInt(2), BigInt(4));
  CHECK(a.num == 1);
  CHECK(a.den == 2);
  Rational b(BigInt(-3), BigInt(-6));
  CHECK(b.num == 1);
  CHECK(b.den == 2);
  CHECK((a - b).is_zero());
  CHECK((a + b) == Rational(BigInt(1), BigInt(1)));
  CHECK((a * b) == Rational(BigInt(1), BigInt(4)));
  CHECK((a / b) == Rational(1));
}

static SpMatI make_sparse(int rows, int cols, std::vector<std::tuple<int, int, long long>> t) {
  std::vector<TripletI> trip;
  for (auto [r, c, v] : t) trip.emplace_back(r, c, v);
  SpMatI A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

TEST_CASE("sparse exact rank agrees with Bareiss") {
  auto A = make_sparse(3, 4, {{0, 0, 1}, {0, 1, 2}, {1, 1, 1}, {1, 2, -1}, {2, 0, 1}, {2, 1, 3}, {2, 2, -1}});
  // row2 = row0 + row1
  CHECK(exact::rank(A) == 2);
  CHECK(exact::bareiss_rank(oracle::to_bigint_rows(A)) == 2);

  auto C = meshgen::build(meshgen::cube(1));
  CHECK(exact::rank(C.d0) == C.n_vertices() - 1);
  CHECK(exact::bareiss_rank(oracle::to_bigint_rows(C.d0)) == C.n_vertices() - 1);
  CHECK(exact::rank(C.d1) == exact::bareiss_rank(oracle::to_bigint_rows(C.d1)));
}

TEST_CASE("solvability over Q") {
  // x + 2y = 1, 2x + 4y = 2 solvable; ... = 3 not
  auto A = make_sparse(2, 2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 4}});
  CHECK(exact::solvable(A, {{0, 1}, {1, 2}}));
  CHECK(!exact::solvable(A, {{0, 1}, {1, 3}}));
}

TEST_CASE("smith normal form and unimodular solves") {
  std::vector<std::vector<BigInt>> A{{BigInt(2), BigInt(4), BigInt(4)},
                                     {BigInt(-6), BigInt(6), BigInt(12)},
                                     {BigInt(10), BigInt(4), BigInt(16)}};
  auto s = exact::smith_normal_form(A);
  // U A V = S diagonal with divisibility
  for (int i = 0; i + 1 < 3; ++i) {
    if (s.S[i][i] != 0 && s.S[i + 1][i + 1] != 0) CHECK(s.S[i + 1][i + 1] % s.S[i][i] == 0);
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(s.S[i][j] == 0);
  }
  // reconstruct: U*A*V == S
  auto mul = [](const std::vector<std::vector<BigInt>>& X, const std::vector<std::vector<BigInt>>& Y) {
    int m = X.size(), n = Y[0].size(), k = Y.size();
    std::vector<std::vector<BigInt>> Z(m, std::vector<BigInt>(n, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < k; ++l) Z[i][j] += X[i][l] * Y[l][j];
    return Z;
  };
  auto UAV = mul(mul(s.U, A), s.V);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(UAV[i][j] == s.S[i][j]);
}

TEST_CASE("integer kernel is saturated") {
  std::vector<std::vector<BigInt>> A{{BigInt(2), BigInt(4)}};
  auto ker = exact::integer_kernel(A);
  REQUIRE(ker.size() == 1);
  // saturated generator of {2x + 4y = 0} is ±(2, -1)
  BigInt g = boost::multiprecision::gcd(ker[0][0] < 0 ? BigInt(-ker[0][0]) : ker[0][0],
                                        ker[0][1] < 0 ? BigInt(-ker[0][1]) : ker[0][1]);
  CHECK(g == 1);
  CHECK(2 * ker[0][0] + 4 * ker[0][1] == 0);
}

TEST_CASE("solve_identity produces integer duals") {
  std::vector<std::vector<BigInt>> A{{BigInt(1), BigInt(0), BigInt(2)},
                                     {BigInt(0), BigInt(1), BigInt(3)}};
  auto Y = exact::solve_identity(A);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      BigInt acc = 0;
      for (int k = 0; k < 3; ++k) acc += A[i][k] * Y[k][j];
      CHECK(acc == (i == j ? 1 : 0));
    }
  std::vector<std::vector<BigInt>> bad{{BigInt(2), BigInt(4)}};
  CHECK_THROWS_AS(exact::solve_identity(bad), SingularPairingError);
}
