#ifndef HODGECURL_EIGSOLVE_HPP
#define HODGECURL_EIGSOLVE_HPP

#include <Eigen/SparseLU>

#include <functional>
#include <random>

#include "hodgecurl/core.hpp"

namespace hodgecurl::eig {

/// Dense generalized symmetric eigensolve A x = lambda B x, B SPD.
/// Eigenvalues ascending, eigenvectors B-orthonormal.
struct DenseResult {
  Vec values;
  Mat vectors;
};

inline DenseResult dense_sym_pencil(const Mat& A, const Mat& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()),
                                                   0.5 * (B + B.transpose()));
  if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolve failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Factorized KKT system [P, A^T; A, 0] for solves constrained to null(A).
/// A must have full row rank.
class ConstrainedSolver {
 public:
  void factorize(const SpMat& P, const SpMat& A) {
    n_ = static_cast<int>(P.rows());
    m_ = static_cast<int>(A.rows());
    std::vector<Triplet> trip;
    trip.reserve(P.nonZeros() + 2 * A.nonZeros());
    for (int k = 0; k < P.outerSize(); ++k)
      for (SpMat::InnerIterator it(P, k); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it) {
        trip.emplace_back(static_cast<int>(n_ + it.row()), static_cast<int>(it.col()), it.value());
        trip.emplace_back(static_cast<int>(it.col()), static_cast<int>(n_ + it.row()), it.value());
      }
    SpMat K(n_ + m_, n_ + m_);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    lu_.compute(K);
    if (lu_.info() != Eigen::Success)
      throw SolverError("KKT factorization failed (singular constraint system?)");
  }

  /// Solve P x + A^T y = rhs, A x = 0; returns x.
  Vec solve(const Vec& rhs) const {
    Vec full = Vec::Zero(n_ + m_);
    full.head(n_) = rhs;
    Vec sol = lu_.solve(full);
    if (lu_.info() != Eigen::Success) throw SolverError("KKT solve failed");
    return sol.head(n_);
  }

  int n() const { return n_; }

 private:
  Eigen::SparseLU<SpMat> lu_;
  int n_ = 0, m_ = 0;
};

struct LanczosOptions {
  int k = 6;               ///< wanted eigenpairs (largest Ritz values of Op)
  int max_iter = 300;
  double tol = 1e-10;
  std::uint64_t seed = 20080527;  ///< start-vector seed, recorded for determinism
};

struct LanczosResult {
  Vec values;   ///< Ritz values of Op, descending
  Mat vectors;  ///< B-orthonormal Ritz vectors
  int iterations = 0;
};

/// Lanczos with full reorthogonalization in the B-inner product for an
/// operator self-adjoint w.r.t. B. Returns the k largest Ritz values.
/// `project` (optional) re-imposes linear constraints on generated vectors.
inline LanczosResult lanczos_largest(int n, const std::function<Vec(const Vec&)>& op,
                                     const std::function<Vec(const Vec&)>& applyB,
                                     const LanczosOptions& opts,
                                     const std::function<Vec(const Vec&)>& project = nullptr) {
  const int m_max = std::min(n, std::max(opts.max_iter, 3 * opts.k + 10));
  Mat V(n, m_max);
  Mat BV(n, m_max);
  std::vector<double> alpha, beta;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = dist(rng);
  if (project) w = project(w);

  auto b_norm = [&](const Vec& x, const Vec& Bx) { return std::sqrt(std::max(0.0, x.dot(Bx))); };

  Vec Bw = applyB(w);
  double nb = b_norm(w, Bw);
  if (nb <= 0) throw SolverError("lanczos: degenerate start vector");
  V.col(0) = w / nb;
  BV.col(0) = Bw / nb;

  int m = 0;
  LanczosResult res;
  Eigen::SelfAdjointEigenSolver<Mat> es;
  for (m = 0; m < m_max; ++m) {
    w = op(V.col(m));
    Bw = applyB(w);
    double a = V.col(m).dot(Bw);
    alpha.push_back(a);
    // full reorthogonalization (two passes); Lanczos vectors stay inside the
    // constraint space spanned by the operator's range
    for (int pass = 0; pass < 2; ++pass) {
      Vec coef = BV.leftCols(m + 1).transpose() * w;
      w -= V.leftCols(m + 1) * coef;
    }
    Bw = applyB(w);
    double b = b_norm(w, Bw);
    beta.push_back(b);

    int dim = m + 1;
    bool last = (m == m_max - 1);
    if (dim >= opts.k && (last || dim % 5 == 0 || b <= 1e-14)) {
      Eigen::VectorXd diag(dim), sub(dim - 1);
      for (int i = 0; i < dim; ++i) diag[i] = alpha[i];
      for (int i = 0; i + 1 < dim; ++i) sub[i] = beta[i];
      es.computeFromTridiagonal(diag, sub);
      Vec th = es.eigenvalues();
      const Mat& Sv = es.eigenvectors();
      int k = std::min(opts.k, dim);
      double scale = th.cwiseAbs().maxCoeff();
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        int idx = dim - 1 - i;  // largest first
        double resid = std::abs(b * Sv(dim - 1, idx));
        if (resid > opts.tol * std::max(scale, 1e-30)) ok = false;
      }
      if (ok || last || b <= 1e-14 * std::max(1.0, scale)) {
        res.values.resize(k);
        res.vectors.resize(n, k);
        for (int i = 0; i < k; ++i) {
          int idx = dim - 1 - i;
          res.values[i] = th[idx];
          res.vectors.col(i) = V.leftCols(dim) * Sv.col(idx);
        }
        res.iterations = dim;
        return res;
      }
    }
    if (b <= 1e-300) throw SolverError("lanczos: breakdown");
    V.col(m + 1) = w / b;
    BV.col(m + 1) = Bw / b;
  }
  throw SolverError("lanczos: no convergence");
}

}  // namespace hodgecurl::eig

#endif
