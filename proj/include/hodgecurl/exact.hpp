#ifndef HODGECURL_EXACT_HPP
#define HODGECURL_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <climits>
#include <map>
#include <optional>

#include "hodgecurl/core.hpp"

namespace hodgecurl::exact {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, always normalized (den > 0, reduced).
struct Rational {
  BigInt num{0}, den{1};
  Rational() = default;
  Rational(long long n) : num(n) {}
  Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      den = 1;
      return;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool is_zero() const { return num == 0; }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

/// Sparse integer matrix in row-major triplet form for exact elimination.
struct SparseIntRows {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, Rational>>> row;  // sorted by column

  static SparseIntRows from(const SpMatI& A) {
    SparseIntRows R;
    R.rows = static_cast<int>(A.rows());
    R.cols = static_cast<int>(A.cols());
    R.row.resize(R.rows);
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMatI::InnerIterator it(A, k); it; ++it)
        R.row[it.row()].emplace_back(static_cast<int>(it.col()),
                                     Rational(static_cast<long long>(it.value())));
    for (auto& r : R.row) std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return R;
  }
};

namespace detail {

inline std::vector<std::pair<int, Rational>> axpy(const std::vector<std::pair<int, Rational>>& x,
                                                  const Rational& alpha,
                                                  const std::vector<std::pair<int, Rational>>& y) {
  // x + alpha * y, both sorted by column
  std::vector<std::pair<int, Rational>> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      Rational v = alpha * y[j].second;
      if (!v.is_zero()) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Rational v = x[i].second + alpha * y[j].second;
      if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

/// Result of exact sparse elimination on [A | B]: rank of A and the residual
/// B-block rows whose A-part vanished (the cokernel-projected right block).
struct EliminationResult {
  int rank_a = 0;
  std::vector<std::vector<Rational>> residual_b;  // dense rows over B's columns
};

/// Exact fraction-free-in-spirit sparse Gaussian elimination over Q.
/// Eliminates the A-columns of [A | B] with Markowitz-style pivoting; B may be
/// empty. Deterministic for fixed input.
inline EliminationResult eliminate(const SparseIntRows& A,
                                   const std::vector<std::vector<Rational>>& B = {}) {
  const int m = A.rows;
  std::vector<std::vector<std::pair<int, Rational>>> rows = A.row;
  std::vector<std::vector<Rational>> brows = B.empty()
                                                 ? std::vector<std::vector<Rational>>(m)
                                                 : B;
  if (!B.empty() && static_cast<int>(B.size()) != m)
    throw SizeMismatchError("eliminate: B row count mismatch");

  std::vector<char> active(m, 1);
  std::vector<int> colcount(A.cols, 0);
  for (int r = 0; r < m; ++r)
    for (auto& [c, v] : rows[r]) colcount[c]++;

  EliminationResult res;
  while (true) {
    // pivot: active row with fewest nonzeros, then its column with fewest uses
    int prow = -1;
    size_t best = SIZE_MAX;
    for (int r = 0; r < m; ++r)
      if (active[r] && !rows[r].empty() && rows[r].size() < best) {
        best = rows[r].size();
        prow = r;
      }
    if (prow < 0) break;
    int pcol = -1, bestc = INT_MAX;
    for (auto& [c, v] : rows[prow])
      if (colcount[c] < bestc) {
        bestc = colcount[c];
        pcol = c;
      }
    Rational pval;
    for (auto& [c, v] : rows[prow])
      if (c == pcol) pval = v;

    active[prow] = 0;
    res.rank_a++;
    for (auto& [c, v] : rows[prow]) colcount[c]--;

    for (int r = 0; r < m; ++r) {
      if (!active[r]) continue;
      Rational rv;
      bool hit = false;
      for (auto& [c, v] : rows[r])
        if (c == pcol) {
          rv = v;
          hit = true;
          break;
        }
      if (!hit) continue;
      Rational alpha = Rational(0) - rv / pval;
      for (auto& [c, v] : rows[r]) colcount[c]--;
      rows[r] = detail::axpy(rows[r], alpha, rows[prow]);
      for (auto& [c, v] : rows[r]) colcount[c]++;
      if (!brows[r].empty() || !brows[prow].empty()) {
        size_t nb = std::max(brows[r].size(), brows[prow].size());
        brows[r].resize(nb);
        std::vector<Rational> tmp = brows[prow];
        tmp.resize(nb);
        for (size_t c = 0; c < nb; ++c) brows[r][c] = brows[r][c] + alpha * tmp[c];
      }
    }
  }
  for (int r = 0; r < m; ++r)
    if (active[r] && rows[r].empty()) res.residual_b.push_back(brows[r]);
  return res;
}

/// Exact rank over Q.
inline int rank(const SpMatI& A) { return eliminate(SparseIntRows::from(A)).rank_a; }

/// Is the sparse integer system A x = b solvable over Q?
inline bool solvable(const SpMatI& A, const std::vector<std::pair<int, long long>>& b) {
  SparseIntRows R = SparseIntRows::from(A);
  std::vector<std::vector<Rational>> B(R.rows);
  for (auto& [r, v] : b) {
    B[r].resize(1);
    B[r][0] = Rational(v);
  }
  auto res = eliminate(R, B);
  for (auto& row : res.residual_b)
    if (!row.empty() && !row[0].is_zero()) return false;
  return true;
}

/// Dense fraction-free Bareiss rank of an integer matrix (test oracle).
inline int bareiss_rank(std::vector<std::vector<BigInt>> M) {
  int m = static_cast<int>(M.size());
  if (m == 0) return 0;
  int n = static_cast<int>(M[0].size());
  BigInt prev = 1;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    for (int r = rank; r < m; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    for (int r = rank + 1; r < m; ++r) {
      for (int c = col + 1; c < n; ++c)
        M[r][c] = (M[rank][col] * M[r][c] - M[r][col] * M[rank][c]) / prev;
      M[r][col] = 0;
    }
    prev = M[rank][col];
    rank++;
  }
  return rank;
}

/// Smith normal form of a small dense integer matrix: U*A*V = S diagonal,
/// U and V unimodular. Sizes are tiny here (homology rank 2g).
struct Smith {
  std::vector<std::vector<BigInt>> S, U, V;
};

inline Smith smith_normal_form(std::vector<std::vector<BigInt>> A) {
  int m = static_cast<int>(A.size());
  int n = m ? static_cast<int>(A[0].size()) : 0;
  Smith out;
  out.U.assign(m, std::vector<BigInt>(m, 0));
  out.V.assign(n, std::vector<BigInt>(n, 0));
  for (int i = 0; i < m; ++i) out.U[i][i] = 1;
  for (int i = 0; i < n; ++i) out.V[i][i] = 1;

  auto row_op = [&](int r1, int r2, const BigInt& q) {  // row r2 -= q * row r1
    for (int c = 0; c < n; ++c) A[r2][c] -= q * A[r1][c];
    for (int c = 0; c < m; ++c) out.U[r2][c] -= q * out.U[r1][c];
  };
  auto col_op = [&](int c1, int c2, const BigInt& q) {  // col c2 -= q * col c1
    for (int r = 0; r < m; ++r) A[r][c2] -= q * A[r][c1];
    for (int r = 0; r < n; ++r) out.V[r][c2] -= q * out.V[r][c1];
  };
  auto row_swap = [&](int r1, int r2) {
    std::swap(A[r1], A[r2]);
    std::swap(out.U[r1], out.U[r2]);
  };
  auto col_swap = [&](int c1, int c2) {
    for (int r = 0; r < m; ++r) std::swap(A[r][c1], A[r][c2]);
    for (int r = 0; r < n; ++r) std::swap(out.V[r][c1], out.V[r][c2]);
  };

  int k = 0;
  while (k < m && k < n) {
    // find smallest nonzero entry in the remaining block
    int pr = -1, pc = -1;
    BigInt bestAbs = 0;
    for (int r = k; r < m; ++r)
      for (int c = k; c < n; ++c) {
        if (A[r][c] == 0) continue;
        BigInt a = A[r][c] < 0 ? BigInt(-A[r][c]) : A[r][c];
        if (pr < 0 || a < bestAbs) {
          bestAbs = a;
          pr = r;
          pc = c;
        }
      }
    if (pr < 0) break;
    row_swap(k, pr);
    col_swap(k, pc);
    bool clean = true;
    for (int r = k + 1; r < m; ++r)
      if (A[r][k] != 0) {
        BigInt q = A[r][k] / A[k][k];
        row_op(k, r, q);
        if (A[r][k] != 0) clean = false;
      }
    for (int c = k + 1; c < n; ++c)
      if (A[k][c] != 0) {
        BigInt q = A[k][c] / A[k][k];
        col_op(k, c, q);
        if (A[k][c] != 0) clean = false;
      }
    if (!clean) continue;  // revisit with smaller pivot
    if (A[k][k] < 0) {
      for (int c = k; c < n; ++c) A[k][c] = -A[k][c];
      for (int c = 0; c < m; ++c) out.U[k][c] = -out.U[k][c];
    }
    ++k;
  }
  out.S = std::move(A);
  return out;
}

/// Saturated basis of the integer kernel {x in Z^n : A x = 0} of a small
/// integer matrix, via SNF (columns of V beyond the rank).
inline std::vector<std::vector<BigInt>> integer_kernel(const std::vector<std::vector<BigInt>>& A) {
  int m = static_cast<int>(A.size());
  int n = m ? static_cast<int>(A[0].size()) : 0;
  if (n == 0) return {};
  Smith s = smith_normal_form(A);
  int r = 0;
  for (int i = 0; i < std::min(m, n); ++i)
    if (s.S[i][i] != 0) ++r;
  std::vector<std::vector<BigInt>> ker;
  for (int c = r; c < n; ++c) {
    std::vector<BigInt> v(n);
    for (int i = 0; i < n; ++i) v[i] = s.V[i][c];
    ker.push_back(std::move(v));
  }
  return ker;
}

/// Solve A Y = I_g over Z for a g x n integer matrix of full row rank with
/// unimodular elementary divisors; returns n x g. Throws if no integer
/// solution exists.
inline std::vector<std::vector<BigInt>> solve_identity(const std::vector<std::vector<BigInt>>& A) {
  int g = static_cast<int>(A.size());
  int n = g ? static_cast<int>(A[0].size()) : 0;
  Smith s = smith_normal_form(A);
  for (int i = 0; i < g; ++i)
    if (i >= n || s.S[i][i] == 0 || (s.S[i][i] != 1 && s.S[i][i] != -1))
      throw SingularPairingError("integer system A Y = I has no unimodular solution");
  // A = U^-1 S V^-1  =>  Y = V * S^+ * U
  std::vector<std::vector<BigInt>> Y(n, std::vector<BigInt>(g, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < g; ++j) {
      BigInt acc = 0;
      for (int k = 0; k < g; ++k)
        if (k < n && s.S[k][k] != 0) acc += s.V[i][k] * (s.U[k][j] / s.S[k][k]);
      Y[i][j] = acc;
    }
  return Y;
}

}  // namespace hodgecurl::exact

#endif
