#ifndef HODGECURL_CURLCURL_HPP
#define HODGECURL_CURLCURL_HPP

#include "hodgecurl/spectral.hpp"

namespace hodgecurl {

enum class CurlCurlBC { Dirichlet, Neumann };

inline const char* to_string(CurlCurlBC b) {
  return b == CurlCurlBC::Dirichlet ? "dirichlet" : "neumann";
}

/// Classical curl-curl operator: K = (curl)^T M2 (curl) with edge mass M.
/// Dirichlet restricts to interior edges (zero tangential trace), Neumann
/// keeps all edges.
struct CurlCurlOperator {
  SpMat K, M;
  CurlCurlBC bc = CurlCurlBC::Neumann;
  std::vector<int> edges;  ///< parent edge id per DOF
};

inline CurlCurlOperator assemble_curlcurl(const OrientedComplex3& C, const SurfaceComplex& S,
                                          CurlCurlBC bc) {
  CurlCurlOperator op;
  op.bc = bc;
  SpMat K = assemble_curl_stiffness(C);
  SpMat M = assemble_mass(C, 1);
  const int ne = C.n_edges();
  if (bc == CurlCurlBC::Neumann) {
    op.K = K;
    op.M = M;
    op.edges.resize(ne);
    std::iota(op.edges.begin(), op.edges.end(), 0);
    return op;
  }
  std::vector<char> isb(ne, 0);
  for (int e : S.bedge_parent) isb[e] = 1;
  for (int e = 0; e < ne; ++e)
    if (!isb[e]) op.edges.push_back(e);
  SpMat Sel(ne, static_cast<int>(op.edges.size()));
  std::vector<Triplet> trip;
  for (size_t i = 0; i < op.edges.size(); ++i)
    trip.emplace_back(op.edges[i], static_cast<int>(i), 1.0);
  Sel.setFromTriplets(trip.begin(), trip.end());
  op.K = SpMat(Sel.transpose() * K * Sel);
  op.M = SpMat(Sel.transpose() * M * Sel);
  return op;
}

/// Smallest eigenvalues mu of K x = mu M x (dense below the threshold,
/// otherwise shift-invert Lanczos on the SPD-shifted pencil).
inline Vec curlcurl_spectrum(const CurlCurlOperator& op, int k, std::uint64_t seed = 20080527,
                             int dense_threshold = 2600) {
  const int n = static_cast<int>(op.K.rows());
  if (n <= dense_threshold) {
    auto es = eig::dense_sym_pencil(Mat(op.K), Mat(op.M));
    return es.values;
  }
  Eigen::SimplicialLDLT<SpMat> mass(op.M);
  std::mt19937_64 rng(seed + 3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  v.normalize();
  double rho = 1.0;
  for (int it = 0; it < 10; ++it) {
    v = mass.solve(op.K * v);
    rho = v.norm();
    v /= rho;
  }
  double tau = 3e-5 * rho;
  Eigen::SimplicialLDLT<SpMat> shifted(SpMat(op.K + tau * op.M));
  if (shifted.info() != Eigen::Success) throw SolverError("curlcurl factorization failed");
  eig::LanczosOptions lopt;
  lopt.k = k;
  lopt.seed = seed;
  lopt.max_iter = 400;
  auto res = eig::lanczos_largest(
      n, [&](const Vec& x) { return Vec(shifted.solve(op.M * x)); },
      [&](const Vec& x) { return Vec(op.M * x); }, lopt);
  Vec mu(res.values.size());
  for (int i = 0; i < res.values.size(); ++i) mu[i] = 1.0 / res.values[i] - tau;
  std::sort(mu.begin(), mu.end());
  return mu;
}

/// Eigenvalues of the naive restricted pencil (C_L, M_L), symmetrized.
/// Used by the squared-spectrum matrix identity (desk scale, dense).
inline Vec naive_curl_pencil(const RestrictedOperator& R) {
  if (R.C_L.size() == 0) throw SolverError("naive pencil requires dense restricted matrices");
  auto es = eig::dense_sym_pencil(R.C_L, R.M_L);
  return es.values;
}

/// Squared-spectrum identity check: eigenvalues of the pencil
/// (C_L M_L^{-1} C_L, M_L) against {lambda^2} of (C_L, M_L).
struct SquareCheck {
  Vec lambda;          ///< naive pencil eigenvalues
  Vec squared;         ///< squared-pencil eigenvalues, ascending
  double max_rel_mismatch = 0.0;
};

inline SquareCheck square_check(const RestrictedOperator& R) {
  SquareCheck out;
  out.lambda = naive_curl_pencil(R);
  Mat Cs = 0.5 * (R.C_L + R.C_L.transpose());
  Eigen::LLT<Mat> llt(R.M_L);
  if (llt.info() != Eigen::Success) throw SolverError("mass LLT failed");
  Mat A2 = Cs * llt.solve(Cs);
  auto es = eig::dense_sym_pencil(A2, R.M_L);
  out.squared = es.values;
  Vec expect = out.lambda.array().square();
  std::sort(expect.begin(), expect.end());
  double scale = std::max(expect.cwiseAbs().maxCoeff(), 1e-300);
  out.max_rel_mismatch = (out.squared - expect).cwiseAbs().maxCoeff() / scale;
  return out;
}

/// One refinement level of the Dirichlet/Neumann mismatch illustration.
struct MismatchLevel {
  int n_tets = 0;
  std::vector<double> curlcurl_mu;      ///< lowest nonzero curl-curl eigenvalues
  std::vector<double> closed_sq;        ///< lambda^2 of the closed-trace curl_s
  std::vector<double> coclosed_sq;      ///< lambda^2 of the co-closed curl_s
  double hausdorff_closed = 0.0;        ///< between curlcurl_mu and closed_sq
  double hausdorff_coclosed = 0.0;
};

inline double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return 0.0;
  auto one_sided = [](const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0;
    for (double xv : x) {
      double best = std::abs(xv - y[0]);
      for (double yv : y) best = std::min(best, std::abs(xv - yv));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace hodgecurl

#endif
