#ifndef HODGECURL_SYMPLECTIC_HPP
#define HODGECURL_SYMPLECTIC_HPP

#include <Eigen/SVD>

#include "hodgecurl/core.hpp"

namespace hodgecurl {

/// Finite-dimensional real symplectic space: a skew non-degenerate pairing.
struct SymplecticSpace {
  Mat J;
  int dim() const { return static_cast<int>(J.rows()); }
};

/// Subspace given by a (column-)spanning matrix.
struct Subspace {
  Mat B;
  int dim() const { return static_cast<int>(B.cols()); }
};

/// I and I' partition {1..g}; selects the eq-42 family of Lagrangians.
struct PartitionSpec {
  std::vector<int> I;  // 1-based indices
  int g = 0;

  std::vector<int> complement() const {
    std::vector<char> in(g + 1, 0);
    for (int i : I) in[i] = 1;
    std::vector<int> out;
    for (int i = 1; i <= g; ++i)
      if (!in[i]) out.push_back(i);
    return out;
  }
  void validate() const {
    std::vector<char> seen(g + 1, 0);
    for (int i : I) {
      if (i < 1 || i > g)
        throw BadPartitionError("partition index " + std::to_string(i) +
                                " outside 1..g with g = " + std::to_string(g));
      if (seen[i]++) throw BadPartitionError("repeated partition index " + std::to_string(i));
    }
  }
};

enum class LagrangianVerdict { No, Lagrangian, CompleteLagrangian };

inline const char* to_string(LagrangianVerdict v) {
  switch (v) {
    case LagrangianVerdict::No: return "No";
    case LagrangianVerdict::Lagrangian: return "Lagrangian";
    default: return "CompleteLagrangian";
  }
}

namespace detail {

/// Orthonormal column basis with rank decided by a relative singular-value gap.
inline Mat orthonormal_basis(const Mat& B, double rel_tol = 1e-10) {
  if (B.cols() == 0) return Mat(B.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > rel_tol * smax) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace detail

/// Test B^T J B = 0 (tolerance 1e-12 * ||J||); complete iff additionally
/// dim = n.
inline LagrangianVerdict is_lagrangian(const SymplecticSpace& S, const Subspace& L,
                                       double tol_scale = 1e-12) {
  if (L.B.rows() != S.J.rows()) throw DimensionMismatchError("subspace does not live in space");
  if (S.dim() % 2 != 0) throw DimensionMismatchError("symplectic dimension must be even");
  Mat Q = detail::orthonormal_basis(L.B);
  if (Q.cols() == 0) return S.dim() == 0 ? LagrangianVerdict::CompleteLagrangian
                                         : LagrangianVerdict::Lagrangian;
  double tol = tol_scale * std::max(1.0, inf_norm(S.J));
  double defect = inf_norm(Mat(Q.transpose() * S.J * Q));
  if (defect > tol) return LagrangianVerdict::No;
  return (2 * Q.cols() == S.dim()) ? LagrangianVerdict::CompleteLagrangian
                                   : LagrangianVerdict::Lagrangian;
}

/// L^# = null space of B^T J; dim L + dim L^# = dim S for non-degenerate J.
inline Subspace symplectic_orthogonal(const SymplecticSpace& S, const Subspace& L) {
  if (L.B.rows() != S.J.rows()) throw DimensionMismatchError("subspace does not live in space");
  if (L.B.cols() == 0) return Subspace{Mat::Identity(S.dim(), S.dim())};
  Mat A = L.B.transpose() * S.J;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * smax) ++r;
  return Subspace{svd.matrixV().rightCols(S.dim() - r)};
}

/// Skew Gram-Schmidt: U with U^T J U = [[0,I],[-I,0]]. Balanced scaling
/// 1/sqrt(p) on both members of each conjugate pair.
inline Mat symplectic_basis(const SymplecticSpace& S) {
  const int dim = S.dim();
  if (dim % 2 != 0) throw DegeneratePairingError("odd-dimensional pairing is degenerate");
  const int n = dim / 2;
  double scale = std::max(1.0, inf_norm(S.J));
  Mat W = Mat::Identity(dim, dim);  // working complement basis
  Mat Us(dim, n), Vs(dim, n);
  for (int k = 0; k < n; ++k) {
    // pick the largest-pairing pair of remaining basis vectors
    Mat P = W.transpose() * S.J * W;
    int bi = 0, bj = 0;
    double best = -1;
    for (int i = 0; i < P.rows(); ++i)
      for (int j = 0; j < P.cols(); ++j)
        if (std::abs(P(i, j)) > best) {
          best = std::abs(P(i, j));
          bi = i;
          bj = j;
        }
    if (best <= 1e-12 * scale) throw DegeneratePairingError("pairing is degenerate");
    Vec u = W.col(bi), v = W.col(bj);
    double p = u.dot(S.J * v);
    if (p < 0) {
      std::swap(u, v);
      p = -p;
    }
    double s = std::sqrt(p);
    u /= s;
    v /= s;  // [u,v] = 1
    Us.col(k) = u;
    Vs.col(k) = v;
    // project remaining vectors onto the symplectic complement of span{u,v}
    std::vector<int> keep;
    for (int i = 0; i < W.cols(); ++i)
      if (i != bi && i != bj) keep.push_back(i);
    Mat Wn(dim, static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
      Vec x = W.col(keep[i]);
      double xv = x.dot(S.J * v), xu = x.dot(S.J * u);
      Wn.col(static_cast<int>(i)) = x - xv * u + xu * v;
    }
    W = detail::orthonormal_basis(Wn);
  }
  Mat U(dim, dim);
  U.leftCols(n) = Us;
  U.rightCols(n) = Vs;
  return U;
}

/// span{u_i}_{i in I} + span{-v_i}_{i in I'} for a canonical basis
/// [u_1..u_g, v_1..v_g]; always a complete Lagrangian.
inline Subspace lagrangian_from_partition(const Mat& basis, const PartitionSpec& part) {
  if (basis.cols() % 2 != 0) throw BadPartitionError("basis must have 2g columns");
  const int g = static_cast<int>(basis.cols()) / 2;
  if (part.g != g) throw BadPartitionError("partition genus mismatch");
  part.validate();
  Mat B(basis.rows(), g);
  int k = 0;
  for (int i : part.I) B.col(k++) = basis.col(i - 1);
  for (int i : part.complement()) B.col(k++) = -basis.col(g + i - 1);
  return Subspace{B};
}

/// Largest principal angle between subspaces (basis-independent comparison).
inline double max_principal_angle(const Subspace& A, const Subspace& B) {
  Mat Qa = detail::orthonormal_basis(A.B), Qb = detail::orthonormal_basis(B.B);
  if (Qa.cols() != Qb.cols()) return M_PI / 2;
  if (Qa.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(Mat(Qa.transpose() * Qb));
  double smin = svd.singularValues().minCoeff();
  return std::acos(std::min(1.0, std::max(-1.0, smin)));
}

}  // namespace hodgecurl

#endif
