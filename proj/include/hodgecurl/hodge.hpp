#ifndef HODGECURL_HODGE_HPP
#define HODGECURL_HODGE_HPP

#include <Eigen/SparseCholesky>

#include "hodgecurl/eigsolve.hpp"
#include "hodgecurl/homology.hpp"
#include "hodgecurl/whitney.hpp"

namespace hodgecurl {

/// Hodge decomposition of a boundary 1-cochain: omega = d0*alpha + coexact + harmonic,
/// with coexact = M1^{-1} d1^T beta. alpha has zero lumped-mean per component,
/// beta zero sum per component.
struct HodgeSplit {
  Vec alpha;     ///< boundary 0-cochain potential of the exact part
  Vec beta;      ///< boundary 2-cochain potential of the coexact part
  Vec exact;     ///< d0 * alpha
  Vec coexact;   ///< M1^{-1} d1^T beta
  Vec harmonic;  ///< harmonic part
};

/// Period-normalized symplectic harmonic basis (eq-38 style normalization):
/// columns 1..g are the kappa_H,i (unit periods over the interior-bounding
/// cycles), columns g+1..2g the kappa'_H,i.
struct SymplecticHarmonicBasis {
  Mat K;        ///< nbe x 2g harmonic cochains
  Mat P;        ///< period matrix over the canonical cycles (= I up to tol)
  Mat Gram;     ///< K^T C∂ K (= [[0,I],[-I,0]] up to tol)
  double tol_basis = 0.0;
  double tol_symp = 0.0;
  int genus() const { return static_cast<int>(K.cols()) / 2; }
};

/// Assembled boundary operators: masses, wedge pairing and the harmonic space.
class BoundaryHodge {
 public:
  explicit BoundaryHodge(const SurfaceComplex& S, int expected_harmonic_dim = -1,
                         std::uint64_t seed = 20080527)
      : S_(&S),
        M0_(assemble_mass(S, 0)),
        M1_(assemble_mass(S, 1)),
        M2_(assemble_mass(S, 2)),
        W_(wedge_pairing(S)),
        d0_(S.d0.cast<double>()),
        d1_(S.d1.cast<double>()) {
    if (expected_harmonic_dim < 0) expected_harmonic_dim = 2 * betti(S).genus;
    compute_harmonic_space(expected_harmonic_dim, seed);
    h_mesh_ = 0.0;
    for (const auto& e : S.bedges)
      h_mesh_ = std::max(h_mesh_,
                         (S.parent->vertices[e[0]] - S.parent->vertices[e[1]]).norm());
  }

  const SurfaceComplex& surface() const { return *S_; }
  const SpMat& M0() const { return M0_; }
  const SpMat& M1() const { return M1_; }
  const SpMat& M2() const { return M2_; }
  /// Skew wedge-pairing matrix C∂ (see wedge_pairing()).
  const SpMat& W() const { return W_; }
  /// M1-orthonormal basis of the discrete harmonic space, nbe x 2g.
  const Mat& harmonic_basis() const { return H_; }
  double max_edge_length() const { return h_mesh_; }

  /// [omega, eta] = omega^T C∂ eta. Bilinear and skew.
  double pairing(const Vec& omega, const Vec& eta) const {
    if (omega.size() != W_.rows() || eta.size() != W_.rows())
      throw SizeMismatchError("pairing: cochain length != boundary edge count");
    return omega.dot(W_ * eta);
  }

  /// L2-orthogonal discrete Hodge decomposition.
  HodgeSplit hodge_decompose(const Vec& omega) const {
    if (omega.size() != M1_.rows()) throw SizeMismatchError("hodge_decompose: bad cochain length");
    HodgeSplit out;
    out.alpha = solve_vertex_potential(d0_.transpose() * (M1_ * omega));
    out.exact = d0_ * out.alpha;
    out.harmonic = H_ * (H_.transpose() * (M1_ * omega));
    out.coexact = omega - out.exact - out.harmonic;
    out.beta = solve_face_potential(M1_ * out.coexact);
    return out;
  }

  /// Period-normalized symplectic basis over a canonical cycle basis.
  SymplecticHarmonicBasis symplectic_harmonic_basis(const CycleBasis& cycles) const {
    SymplecticHarmonicBasis B;
    const int twog = static_cast<int>(H_.cols());
    B.tol_basis = B.tol_symp = std::max(1e-8, h_mesh_ * h_mesh_);
    if (twog == 0) {
      B.K.resize(M1_.rows(), 0);
      B.P.resize(0, 0);
      B.Gram.resize(0, 0);
      return B;
    }
    if (static_cast<int>(cycles.cycles.size()) != twog)
      throw SingularPeriodsError("cycle count does not match harmonic dimension");
    Mat P0(twog, twog);
    for (int i = 0; i < twog; ++i)
      for (int j = 0; j < twog; ++j) P0(i, j) = period(cycles.cycles[i], H_.col(j));
    Eigen::FullPivLU<Mat> lu(P0);
    lu.setThreshold(1e-10);
    if (lu.rank() < twog) throw SingularPeriodsError("period matrix rank < 2g");
    B.K = H_ * lu.inverse();
    B.P.resize(twog, twog);
    for (int i = 0; i < twog; ++i)
      for (int j = 0; j < twog; ++j) B.P(i, j) = period(cycles.cycles[i], B.K.col(j));
    B.Gram = B.K.transpose() * (W_ * B.K);
    return B;
  }

  /// Discrete integral of a 1-cochain over an integer cycle (metric-free).
  static double period(const VecI& cycle, const Vec& cochain) {
    if (cycle.size() != cochain.size()) throw SizeMismatchError("period: length mismatch");
    double s = 0;
    for (int e = 0; e < cycle.size(); ++e)
      if (cycle[e] != 0) s += static_cast<double>(cycle[e]) * cochain[e];
    return s;
  }

 private:
  void compute_harmonic_space(int expected_dim, std::uint64_t seed) {
    const int nbe = static_cast<int>(M1_.rows());
    // S = d1^T M2 d1 + M1 d0 W0^{-1} d0^T M1, W0 = lumped vertex mass;
    // null(S) = {h : d1 h = 0, d0^T M1 h = 0} independent of the SPD weights
    Vec lump = Vec::Zero(M0_.rows());
    for (int k = 0; k < M0_.outerSize(); ++k)
      for (SpMat::InnerIterator it(M0_, k); it; ++it) lump[it.row()] += it.value();
    SpMat W0inv(M0_.rows(), M0_.rows());
    std::vector<Triplet> trip;
    for (int v = 0; v < lump.size(); ++v) trip.emplace_back(v, v, 1.0 / lump[v]);
    W0inv.setFromTriplets(trip.begin(), trip.end());
    SpMat Ssys = SpMat(d1_.transpose() * M2_ * d1_) +
                 SpMat(M1_ * d0_ * W0inv * SpMat(d0_.transpose() * M1_));

    const int probe = std::min(nbe, expected_dim + 3);
    Vec vals;
    Mat vecs;
    if (nbe <= 1200) {
      auto r = eig::dense_sym_pencil(Mat(Ssys), Mat(M1_));
      vals = r.values.head(probe);
      vecs = r.vectors.leftCols(probe);
    } else {
      double rho = estimate_pencil_scale(Ssys, seed);
      double tau = 1e-10 * std::max(rho, 1e-30);
      SpMat shifted = Ssys + tau * M1_;
      Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
      if (ldlt.info() != Eigen::Success) throw SolverError("harmonic space factorization failed");
      eig::LanczosOptions opts;
      opts.k = probe;
      opts.seed = seed;
      opts.max_iter = std::min(nbe, std::max(200, 6 * probe + 40));
      opts.tol = 1e-12;
      auto r = eig::lanczos_largest(
          nbe, [&](const Vec& v) { return Vec(ldlt.solve(M1_ * v)); },
          [&](const Vec& v) { return Vec(M1_ * v); }, opts);
      vals.resize(r.values.size());
      for (int i = 0; i < r.values.size(); ++i) vals[i] = 1.0 / r.values[i] - tau;
      vecs = r.vectors;
    }
    int dim = expected_dim;
    if (dim > vals.size()) throw DimensionMismatchError("harmonic probe returned too few values");
    if (dim < vals.size()) {
      double gap_hi = vals[dim];
      double zero_lo = dim > 0 ? std::abs(vals[dim - 1]) : 0.0;
      if (!(zero_lo <= 1e-8 * std::max(gap_hi, 1e-30)))
        throw DimensionMismatchError(
            "harmonic space dimension mismatch: no 1e-8 spectral gap at 2g = " +
            std::to_string(dim));
    }
    H_ = vecs.leftCols(dim);
    // refresh M1-orthonormality of the null cluster
    if (dim > 0) {
      Mat G = H_.transpose() * (M1_ * H_);
      Eigen::LLT<Mat> llt(G);
      H_ = H_ * llt.matrixL().toDenseMatrix().inverse().transpose();
    }
  }

  double estimate_pencil_scale(const SpMat& Ssys, std::uint64_t seed) const {
    Eigen::SimplicialLDLT<SpMat> mass(M1_);
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec v(Ssys.rows());
    for (int i = 0; i < v.size(); ++i) v[i] = dist(rng);
    v.normalize();
    double rho = 1.0;
    for (int it = 0; it < 8; ++it) {
      v = mass.solve(Ssys * v);
      rho = v.norm();
      v /= rho;
    }
    return rho;
  }

  /// Solve the vertex Laplacian with one pinned vertex per component, then
  /// shift to zero lumped mean per component.
  Vec solve_vertex_potential(const Vec& rhs) const {
    if (!vertex_solver_ready_) {
      SpMat L0 = SpMat(d0_.transpose() * M1_ * d0_);
      pinned_.assign(S_->n_components, -1);
      for (int v = 0; v < S_->n_vertices(); ++v)
        if (pinned_[S_->vert_component[v]] < 0) pinned_[S_->vert_component[v]] = v;
      std::vector<Triplet> trip;
      double scale = inf_norm(L0);
      for (int k = 0; k < L0.outerSize(); ++k)
        for (SpMat::InnerIterator it(L0, k); it; ++it)
          trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      for (int p : pinned_) trip.emplace_back(p, p, scale);
      SpMat Lp(L0.rows(), L0.cols());
      Lp.setFromTriplets(trip.begin(), trip.end());
      vertex_ldlt_.compute(Lp);
      if (vertex_ldlt_.info() != Eigen::Success)
        throw SolverError("vertex Laplacian factorization failed");
      vertex_solver_ready_ = true;
    }
    Vec alpha = vertex_ldlt_.solve(rhs);
    if (vertex_ldlt_.info() != Eigen::Success) throw SolverError("vertex potential solve failed");
    // zero lumped-mean gauge per component
    Vec lump = Vec::Zero(S_->n_vertices());
    for (int k = 0; k < M0_.outerSize(); ++k)
      for (SpMat::InnerIterator it(M0_, k); it; ++it) lump[it.row()] += it.value();
    std::vector<double> num(S_->n_components, 0.0), den(S_->n_components, 0.0);
    for (int v = 0; v < S_->n_vertices(); ++v) {
      num[S_->vert_component[v]] += lump[v] * alpha[v];
      den[S_->vert_component[v]] += lump[v];
    }
    for (int v = 0; v < S_->n_vertices(); ++v)
      alpha[v] -= num[S_->vert_component[v]] / den[S_->vert_component[v]];
    return alpha;
  }

  /// Solve d1^T beta = rhs (consistent by construction) through the pinned
  /// face Laplacian d1 d1^T, then shift to zero sum per component.
  Vec solve_face_potential(const Vec& rhs) const {
    const int nbt = S_->n_triangles();
    if (!face_solver_ready_) {
      SpMat L2 = SpMat(d1_ * d1_.transpose());
      // one pinned face per component (faces inherit the component of a vertex)
      std::vector<int> fpin(S_->n_components, -1);
      for (int f = 0; f < nbt; ++f) {
        int c = S_->vert_component[S_->vert_id(S_->btris[f][0])];
        if (fpin[c] < 0) fpin[c] = f;
      }
      std::vector<Triplet> trip;
      double scale = inf_norm(L2);
      for (int k = 0; k < L2.outerSize(); ++k)
        for (SpMat::InnerIterator it(L2, k); it; ++it)
          trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      for (int p : fpin)
        if (p >= 0) trip.emplace_back(p, p, scale);
      SpMat Lp(nbt, nbt);
      Lp.setFromTriplets(trip.begin(), trip.end());
      face_ldlt_.compute(Lp);
      if (face_ldlt_.info() != Eigen::Success)
        throw SolverError("face Laplacian factorization failed");
      face_solver_ready_ = true;
    }
    Vec beta = face_ldlt_.solve(d1_ * rhs);
    if (face_ldlt_.info() != Eigen::Success) throw SolverError("face potential solve failed");
    std::vector<double> sum(S_->n_components, 0.0);
    std::vector<int> cnt(S_->n_components, 0);
    for (int f = 0; f < nbt; ++f) {
      int c = S_->vert_component[S_->vert_id(S_->btris[f][0])];
      sum[c] += beta[f];
      cnt[c] += 1;
    }
    for (int f = 0; f < nbt; ++f) {
      int c = S_->vert_component[S_->vert_id(S_->btris[f][0])];
      beta[f] -= sum[c] / cnt[c];
    }
    return beta;
  }

  const SurfaceComplex* S_;
  SpMat M0_, M1_, M2_, W_, d0_, d1_;
  Mat H_;
  double h_mesh_ = 0.0;
  mutable Eigen::SimplicialLDLT<SpMat> vertex_ldlt_, face_ldlt_;
  mutable std::vector<int> pinned_;
  mutable bool vertex_solver_ready_ = false, face_solver_ready_ = false;
};

/// M1-orthonormal basis of {h : d1 h = 0, d0^T M1 h = 0}; dimension checked
/// against 2g from exact homology.
inline Mat harmonic_space(const BoundaryHodge& hodge) { return hodge.harmonic_basis(); }

}  // namespace hodgecurl

#endif
