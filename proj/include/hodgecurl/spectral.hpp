#ifndef HODGECURL_SPECTRAL_HPP
#define HODGECURL_SPECTRAL_HPP

#include <memory>
#include <optional>

#include "hodgecurl/hodge.hpp"
#include "hodgecurl/symplectic.hpp"

namespace hodgecurl {

enum class TraceClass { Closed, Coclosed };

inline const char* to_string(TraceClass t) {
  return t == TraceClass::Closed ? "closed" : "coclosed";
}

/// Boundary condition: trace class plus the Lagrangian harmonic selection,
/// either an eq-42 partition or an explicit harmonic subspace (edge-space
/// columns; must be a complete Lagrangian of (Ch1, C∂)).
struct BoundaryConditionSpec {
  TraceClass trace = TraceClass::Closed;
  std::optional<PartitionSpec> partition;  ///< default: I = {1..g}
  std::optional<Mat> explicit_lagrangian;
  bool drop_symplectic_row = false;  ///< test-only negative control
};

/// Everything assembled once per mesh: volume operators, boundary Hodge
/// data, canonical cycles and the period-normalized harmonic basis.
struct OperatorBundle {
  const OrientedComplex3* C = nullptr;
  const SurfaceComplex* S = nullptr;
  SpMat M1;     ///< volume edge mass
  SpMat C3;     ///< weak curl, int w_i . curl w_j
  SpMat C3sym;  ///< (C3 + C3^T)/2
  SpMat K;      ///< curl-curl stiffness D1^T M2 D1
  std::shared_ptr<BoundaryHodge> hodge;
  CycleBasis cycles;
  SymplecticHarmonicBasis basis;
  int volume_components = 1;

  int genus() const { return cycles.genus(); }
};

inline OperatorBundle build_operator_bundle(const OrientedComplex3& C, const SurfaceComplex& S,
                                            std::uint64_t seed = 20080527) {
  OperatorBundle B;
  B.C = &C;
  B.S = &S;
  B.M1 = assemble_mass(C, 1);
  B.C3 = assemble_weak_curl(C);
  B.C3sym = SpMat(0.5 * (B.C3 + SpMat(B.C3.transpose())));
  B.K = assemble_curl_stiffness(C);
  B.hodge = std::make_shared<BoundaryHodge>(S, -1, seed);
  B.cycles = canonical_basis(C, S);
  B.basis = B.hodge->symplectic_harmonic_basis(B.cycles);
  std::vector<int> uf(C.n_vertices());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : C.edges) {
    int a = find(e[0]), b = find(e[1]);
    if (a != b) uf[a] = b;
  }
  std::set<int> roots;
  for (int v = 0; v < C.n_vertices(); ++v) roots.insert(find(v));
  B.volume_components = static_cast<int>(roots.size());
  return B;
}

/// Constraint rows over boundary-edge cochains. Full row rank by
/// construction: one face (resp. vertex) row per component is dropped from
/// the exact-integer closed (resp. weak-divergence coclosed) block.
struct ConstraintRows {
  SpMat A;                ///< rows x boundary edges
  Mat lagrangian;         ///< edge-space columns of the enforced L_H
  int n_trace_rows = 0;
  int n_symplectic_rows = 0;
};

namespace detail {

inline void closed_trace_rows(const SurfaceComplex& S, std::vector<Triplet>& trip, int& row) {
  SpMatI d1t = S.d1.transpose();  // column f = boundary of face f
  std::vector<char> dropped(S.n_components, 0);
  for (int f = 0; f < S.n_triangles(); ++f) {
    int comp = S.vert_component[S.vert_id(S.btris[f][0])];
    if (!dropped[comp]) {
      dropped[comp] = 1;  // face rows of d1 sum to zero per component
      continue;
    }
    for (SpMatI::InnerIterator it(d1t, f); it; ++it)
      trip.emplace_back(row, static_cast<int>(it.row()), static_cast<double>(it.value()));
    ++row;
  }
}

inline void coclosed_trace_rows(const SurfaceComplex& S, const SpMat& M1b,
                                std::vector<Triplet>& trip, int& row) {
  SpMat Wt = SpMat(M1b * S.d0.cast<double>());  // column v = weak-divergence row v
  std::vector<char> dropped(S.n_components, 0);
  for (int v = 0; v < S.n_vertices(); ++v) {
    int comp = S.vert_component[v];
    if (!dropped[comp]) {
      dropped[comp] = 1;  // weak-divergence rows lose one rank per component
      continue;
    }
    for (SpMat::InnerIterator it(Wt, v); it; ++it)
      trip.emplace_back(row, static_cast<int>(it.row()), it.value());
    ++row;
  }
}

inline void symplectic_rows(const BoundaryHodge& hodge, const Mat& L, std::vector<Triplet>& trip,
                            int& row) {
  for (int k = 0; k < L.cols(); ++k) {
    Vec r = hodge.W().transpose() * L.col(k);  // row kappa^T C∂
    for (int e = 0; e < r.size(); ++e)
      if (r[e] != 0.0) trip.emplace_back(row, static_cast<int>(e), r[e]);
    ++row;
  }
}

inline Mat lagrangian_columns(const OperatorBundle& B, const BoundaryConditionSpec& spec) {
  const int g = B.genus();
  const int nbe = static_cast<int>(B.hodge->M1().rows());
  if (spec.explicit_lagrangian) {
    const Mat& L = *spec.explicit_lagrangian;
    if (L.rows() != nbe)
      throw SizeMismatchError("explicit Lagrangian must be given by boundary edge cochains");
    const Mat& H = B.hodge->harmonic_basis();
    Mat coords = H.transpose() * (B.hodge->M1() * L);
    Mat gram = H.transpose() * (B.hodge->W() * H);
    if (is_lagrangian(SymplecticSpace{gram}, Subspace{coords}) !=
        LagrangianVerdict::CompleteLagrangian)
      throw InvalidLagrangianError("explicit harmonic subspace is not a complete Lagrangian");
    return H * orthonormal_basis(coords);
  }
  if (g == 0) return Mat(nbe, 0);
  PartitionSpec part;
  if (spec.partition) {
    part = *spec.partition;
    if (part.g == 0) part.g = g;
  } else {
    part.g = g;
    for (int i = 1; i <= g; ++i) part.I.push_back(i);  // I = {1..g}
  }
  if (part.g != g) throw BadPartitionError("partition genus mismatch");
  part.validate();
  return lagrangian_from_partition(B.basis.K, part).B;
}

}  // namespace detail

/// Rows: (a) closed: d1∂ (exact integers); coclosed: d0∂^T M1∂; one
/// dependent row per component dropped. (b) one row kappa^T C∂ per basis
/// vector of L_H (symplectic orthogonality; L_H^# = L_H for complete
/// Lagrangians).
inline ConstraintRows constraint_rows(const OperatorBundle& B, const BoundaryConditionSpec& spec) {
  const SurfaceComplex& S = *B.S;
  ConstraintRows out;
  std::vector<Triplet> trip;
  int row = 0;
  if (spec.trace == TraceClass::Closed)
    detail::closed_trace_rows(S, trip, row);
  else
    detail::coclosed_trace_rows(S, B.hodge->M1(), trip, row);
  out.n_trace_rows = row;

  out.lagrangian = detail::lagrangian_columns(B, spec);
  Mat L = out.lagrangian;
  if (spec.drop_symplectic_row && L.cols() > 0) L = L.leftCols(L.cols() - 1);
  detail::symplectic_rows(*B.hodge, L, trip, row);
  out.n_symplectic_rows = static_cast<int>(L.cols());

  out.A.resize(row, S.n_edges());
  out.A.setFromTriplets(trip.begin(), trip.end());
  return out;
}

/// Basis of the BC-admissible gradient potentials (volume 0-cochains):
/// closed traces admit every gradient; coclosed traces admit potentials
/// constant on each boundary component.
inline SpMat admissible_gradient_potentials(const OperatorBundle& B, TraceClass trace) {
  const OrientedComplex3& C = *B.C;
  const SurfaceComplex& S = *B.S;
  std::vector<Triplet> trip;
  int col = 0;
  if (trace == TraceClass::Closed) {
    for (int v = 1; v < C.n_vertices(); ++v) trip.emplace_back(v, col++, 1.0);
  } else {
    std::vector<char> onb(C.n_vertices(), 0);
    for (int v : S.bverts) onb[v] = 1;
    for (int v = 1; v < C.n_vertices(); ++v)
      if (!onb[v]) trip.emplace_back(v, col++, 1.0);
    bool comp0_has_v0 = false;
    for (int v = 0; v < S.n_vertices(); ++v)
      if (S.bverts[v] == 0 && S.vert_component[v] == 0) comp0_has_v0 = true;
    for (int c = 0; c < S.n_components; ++c) {
      if (c == 0 && comp0_has_v0) continue;  // gauge fixed at volume vertex 0
      for (int v = 0; v < S.n_vertices(); ++v)
        if (S.vert_component[v] == c) trip.emplace_back(S.bverts[v], col, 1.0);
      ++col;
    }
  }
  SpMat P(C.n_vertices(), col);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

/// Restriction data: a null basis of the boundary constraint block
/// (constraints touch only boundary-edge columns) embedded as
/// N = [Nb on boundary edges] ⊕ [identity on interior edges], plus the
/// measured GKN asymmetry certificate ||C_L - C_L^T||_inf / ||C_L||_inf.
/// Small problems use an orthonormal SVD basis; large closed-trace problems
/// use the exact integer basis [boundary gradients | corrected tree-cotree
/// cocycles] of the closed cochain space.
struct RestrictedOperator {
  SpMat Nb;
  SpMat N;  ///< ne x n_constrained
  std::vector<int> interior_edges;
  int n_constrained = 0;
  double asymmetry_abs = 0.0;
  double asymmetry_rel = 0.0;
  bool asymmetry_certified = true;
  double cl_norm = 0.0;
  double max_constraint_residual = 0.0;
  Mat C_L, M_L, K_L;  ///< dense restricted matrices (desk scale only)
};

namespace detail {

/// 2g integer cocycles (d1 z = 0, classes spanning H^1) from the tree-cotree
/// decomposition: unknowns on cotree edges are resolved child-to-root.
inline std::vector<VecI> tree_cotree_cocycles(const SurfaceComplex& S) {
  const int nbv = S.n_vertices(), nbe = S.n_edges(), nbt = S.n_triangles();
  std::vector<std::vector<std::pair<int, int>>> vadj(nbv);
  for (int e = 0; e < nbe; ++e) {
    int a = S.vert_id(S.bedges[e][0]), b = S.vert_id(S.bedges[e][1]);
    vadj[a].emplace_back(b, e);
    vadj[b].emplace_back(a, e);
  }
  std::vector<char> intree(nbe, 0), seen(nbv, 0);
  for (int root = 0; root < nbv; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::deque<int> q{root};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (auto [w, e] : vadj[u])
        if (!seen[w]) {
          seen[w] = 1;
          intree[e] = 1;
          q.push_back(w);
        }
    }
  }
  std::vector<std::array<int, 2>> eface(nbe, {-1, -1});
  for (int f = 0; f < nbt; ++f)
    for (int i = 0; i < 3; ++i) {
      int e = S.edge_id(S.btris[f][i], S.btris[f][(i + 1) % 3]);
      if (eface[e][0] < 0)
        eface[e][0] = f;
      else
        eface[e][1] = f;
    }
  std::vector<char> incot(nbe, 0), fseen(nbt, 0);
  std::vector<int> fparent_edge(nbt, -1), order;
  order.reserve(nbt);
  for (int froot = 0; froot < nbt; ++froot) {
    if (fseen[froot]) continue;
    fseen[froot] = 1;
    std::deque<int> q{froot};
    order.push_back(froot);
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (int i = 0; i < 3; ++i) {
        int e = S.edge_id(S.btris[f][i], S.btris[f][(i + 1) % 3]);
        if (intree[e] || incot[e]) continue;
        int g2 = eface[e][0] == f ? eface[e][1] : eface[e][0];
        if (g2 >= 0 && !fseen[g2]) {
          fseen[g2] = 1;
          incot[e] = 1;
          fparent_edge[g2] = e;
          order.push_back(g2);
          q.push_back(g2);
        }
      }
    }
  }
  std::vector<int> leftover;
  for (int e = 0; e < nbe; ++e)
    if (!intree[e] && !incot[e]) leftover.push_back(e);

  // face boundary as signed edge list
  SpMatI d1t = S.d1.transpose();
  std::vector<VecI> cocycles;
  for (int le : leftover) {
    VecI z = VecI::Zero(nbe);
    z[le] = 1;
    for (int oi = static_cast<int>(order.size()) - 1; oi >= 0; --oi) {
      int f = order[oi];
      int pe = fparent_edge[f];
      if (pe < 0) continue;  // root face: its equation holds automatically
      std::int64_t sum = 0, coeff = 0;
      for (SpMatI::InnerIterator it(d1t, f); it; ++it) {
        if (static_cast<int>(it.row()) == pe)
          coeff = it.value();
        else
          sum += it.value() * z[it.row()];
      }
      z[pe] = -sum / coeff;  // coeff = ±1
    }
    cocycles.push_back(std::move(z));
  }
  return cocycles;
}

}  // namespace detail

inline RestrictedOperator restricted_operator(const OperatorBundle& B, const ConstraintRows& rows,
                                              bool form_dense = true) {
  const SurfaceComplex& S = *B.S;
  const int nbe = S.n_edges();
  const int ne = B.C->n_edges();
  RestrictedOperator R;

  const bool sparse_path = !form_dense && rows.n_trace_rows > 0 &&
                           rows.n_trace_rows == S.n_triangles() - S.n_components;
  if (!sparse_path) {
    Mat Ad = Mat(rows.A);
    Mat NbD;
    if (Ad.rows() > 0) {
      Eigen::BDCSVD<Mat> svd(Ad, Eigen::ComputeFullV);
      double smax = svd.singularValues()[0];
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-11 * std::max(smax, 1.0)) ++rank;
      NbD = svd.matrixV().rightCols(nbe - rank);
      if (NbD.cols() > 0)
        R.max_constraint_residual =
            (Ad * NbD).cwiseAbs().maxCoeff() / std::max(1.0, Ad.cwiseAbs().maxCoeff());
    } else {
      NbD = Mat::Identity(nbe, nbe);
    }
    R.Nb = NbD.sparseView();
  } else {
    // closed traces at scale: null(A∂) = span{d0∂ p} ⊕ {cocycles with
    // [z, kappa] = 0}; both blocks are integer-exact in the trace rows
    std::vector<Triplet> trip;
    int col = 0;
    std::vector<char> vdrop(S.n_components, 0);
    for (int v = 0; v < S.n_vertices(); ++v) {
      if (!vdrop[S.vert_component[v]]) {
        vdrop[S.vert_component[v]] = 1;
        continue;
      }
      for (SpMatI::InnerIterator it(S.d0, v); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), col, static_cast<double>(it.value()));
      ++col;
    }
    auto cocs = detail::tree_cotree_cocycles(S);
    const int twog = static_cast<int>(cocs.size());
    const Mat& L = rows.lagrangian;
    Mat Msmall(L.cols(), twog);
    for (int j = 0; j < twog; ++j) {
      Vec zj(nbe);
      for (int e = 0; e < nbe; ++e) zj[e] = static_cast<double>(cocs[j][e]);
      Msmall.col(j) = L.transpose() * (B.hodge->W() * zj);
    }
    int actual_rows = rows.n_symplectic_rows;
    Mat hbasis;
    if (twog > 0) {
      Mat Mused = Msmall.topRows(actual_rows);
      if (actual_rows > 0) {
        Eigen::BDCSVD<Mat> svd(Mused, Eigen::ComputeFullV);
        double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        int rk = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
          if (svd.singularValues()[i] > 1e-11 * std::max(smax, 1.0)) ++rk;
        hbasis = svd.matrixV().rightCols(twog - rk);
      } else {
        hbasis = Mat::Identity(twog, twog);
      }
      for (int h = 0; h < hbasis.cols(); ++h) {
        for (int j = 0; j < twog; ++j) {
          if (hbasis(j, h) == 0.0) continue;
          for (int e = 0; e < nbe; ++e)
            if (cocs[j][e] != 0)
              trip.emplace_back(e, col + h, hbasis(j, h) * static_cast<double>(cocs[j][e]));
        }
      }
      col += static_cast<int>(hbasis.cols());
    }
    R.Nb.resize(nbe, col);
    R.Nb.setFromTriplets(trip.begin(), trip.end());
    {
      SpMat AN = SpMat(rows.A * R.Nb);
      R.max_constraint_residual = inf_norm(AN) / std::max(1.0, inf_norm(rows.A));
    }
  }

  std::vector<char> isb(ne, 0);
  for (int e = 0; e < nbe; ++e) isb[S.bedge_parent[e]] = 1;
  for (int e = 0; e < ne; ++e)
    if (!isb[e]) R.interior_edges.push_back(e);
  R.n_constrained = static_cast<int>(R.Nb.cols() + R.interior_edges.size());

  {
    std::vector<Triplet> trip;
    for (int k = 0; k < R.Nb.outerSize(); ++k)
      for (SpMat::InnerIterator it(R.Nb, k); it; ++it)
        trip.emplace_back(S.bedge_parent[it.row()], static_cast<int>(it.col()), it.value());
    for (size_t i = 0; i < R.interior_edges.size(); ++i)
      trip.emplace_back(R.interior_edges[i], static_cast<int>(R.Nb.cols() + i), 1.0);
    R.N.resize(ne, R.n_constrained);
    R.N.setFromTriplets(trip.begin(), trip.end());
  }

  // C_L - C_L^T = (T1 N)^T C∂ (T1 N): supported on the boundary block
  SpMat asym = SpMat(SpMat(R.Nb.transpose()) * B.hodge->W() * R.Nb);
  R.asymmetry_abs = inf_norm(asym);

  if (form_dense) {
    R.C_L = Mat(SpMat(R.N.transpose() * B.C3 * R.N));
    R.M_L = Mat(SpMat(R.N.transpose() * B.M1 * R.N));
    R.K_L = Mat(SpMat(R.N.transpose() * B.K * R.N));
    R.cl_norm = inf_norm(R.C_L);
  } else {
    SpMat CL = SpMat(R.N.transpose() * B.C3 * R.N);
    R.cl_norm = inf_norm(CL);
  }
  R.asymmetry_rel = R.asymmetry_abs / std::max(R.cl_norm, 1e-300);
  return R;
}

struct SpectrumOptions {
  int k = 12;              ///< nonzero eigenpairs wanted (smallest |lambda|)
  double zero_tol = 1e-6;  ///< |lambda| <= zero_tol * rho counts as kernel
  int dense_threshold = 2600;
  std::uint64_t seed = 20080527;
  double lanczos_tol = 1e-11;
  int max_iter = 400;
};

/// Spectrum of the self-adjoint curl, computed through the curl-curl pencil
/// (K_L, M_L) on the divergence-free subspace (the quadratic form of
/// curl_s^2 on the GKN domain); signs recovered from the C_L-form per
/// eigenvalue cluster. Eigenvectors are M-orthonormal.
struct SpectrumReport {
  std::vector<double> eigenvalues;  ///< reported window, ascending (units 1/length)
  Mat eigenvectors;                 ///< full edge-space columns
  std::vector<double> residuals;    ///< algebraic (K_L,M_L) residuals, relative
  std::vector<double> whitney_residuals;  ///< ||C_L x - lambda M_L x|| consistency, relative
  int zero_mode_count = 0;  ///< deflated gradient modes + computed kernel modes
  int gradient_mode_count = 0;
  double asymmetry_abs = 0.0;
  double asymmetry_rel = 0.0;
  double rho = 0.0;  ///< spectral scale used by zero_tol
  double mesh_scale = 0.0;
  std::uint64_t seed = 0;
  bool dense_path = true;
};

namespace detail {

struct ClusteredSigns {
  std::vector<double> lambdas;
  Mat vectors;
};

/// Split sqrt(mu) clusters into ±lambda by diagonalizing the C-form inside
/// each cluster (orthogonal rotations, so B-orthonormality is preserved).
inline ClusteredSigns sign_split(const Vec& mu, const Mat& X,
                                 const std::function<Mat(const Mat&)>& applyC, double rel_tol) {
  ClusteredSigns out;
  const int n = static_cast<int>(mu.size());
  out.vectors = X;
  out.lambdas.resize(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && std::abs(mu[j + 1] - mu[i]) <= rel_tol * std::max(1.0, std::abs(mu[i])))
      ++j;
    int m = j - i + 1;
    Mat Xc = X.middleCols(i, m);
    Mat Bc = Xc.transpose() * applyC(Xc);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Bc + Bc.transpose()));
    out.vectors.middleCols(i, m) = Xc * es.eigenvectors();
    double mu_bar = mu.segment(i, m).mean();
    for (int t = 0; t < m; ++t) {
      double sgn = es.eigenvalues()[t] >= 0 ? 1.0 : -1.0;
      out.lambdas[i + t] = sgn * std::sqrt(std::max(0.0, mu_bar));
    }
    i = j + 1;
  }
  return out;
}

struct PickedWindow {
  std::vector<int> picked;
  int zero_count = 0;
};

inline PickedWindow pick_window(const Vec& mu, const std::vector<double>& lambdas, int k,
                                double zero_tol, double rho) {
  PickedWindow w;
  std::vector<std::pair<double, int>> nonzero;
  for (int i = 0; i < mu.size(); ++i) {
    double labs = std::sqrt(std::max(0.0, mu[i]));
    if (labs <= zero_tol * std::max(rho, 1e-300))
      ++w.zero_count;
    else
      nonzero.emplace_back(labs, i);
  }
  std::sort(nonzero.begin(), nonzero.end());
  int kw = std::min<int>(k, static_cast<int>(nonzero.size()));
  for (int i = 0; i < kw; ++i) w.picked.push_back(nonzero[i].second);
  std::sort(w.picked.begin(), w.picked.end(),
            [&](int a, int b) { return lambdas[a] < lambdas[b]; });
  return w;
}

}  // namespace detail

inline SpectrumReport solve_spectrum(const OperatorBundle& B, const BoundaryConditionSpec& spec,
                                     const SpectrumOptions& opts = {}) {
  const OrientedComplex3& C = *B.C;
  SpectrumReport rep;
  rep.seed = opts.seed;
  rep.mesh_scale = C.bbox_scale;

  ConstraintRows rows = constraint_rows(B, spec);
  SpMat Pgrad = admissible_gradient_potentials(B, spec.trace);
  SpMat Gadm = SpMat(C.d0.cast<double>() * Pgrad);
  SpMat defl = SpMat(Gadm.transpose() * B.M1);
  rep.gradient_mode_count = static_cast<int>(Gadm.cols());

  const int ne = C.n_edges();
  const int ncon_guess = ne - static_cast<int>(rows.A.rows());
  rep.dense_path = ncon_guess <= opts.dense_threshold;

  if (rep.dense_path) {
    RestrictedOperator R = restricted_operator(B, rows, true);
    rep.asymmetry_abs = R.asymmetry_abs;
    rep.asymmetry_rel = R.asymmetry_rel;

    Mat D = Mat(SpMat(defl * R.N));  // q x n_constrained deflation rows
    Mat Q;
    int rk = 0;
    if (D.rows() > 0) {
      Eigen::BDCSVD<Mat> svd(D, Eigen::ComputeFullV);
      double smax = svd.singularValues()[0];
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-11 * std::max(smax, 1.0)) ++rk;
      Q = svd.matrixV().rightCols(R.n_constrained - rk);
    } else {
      Q = Mat::Identity(R.n_constrained, R.n_constrained);
    }
    rep.gradient_mode_count = rk;

    Mat Kq = Q.transpose() * R.K_L * Q;
    Mat Mq = Q.transpose() * R.M_L * Q;
    Mat Cq = Q.transpose() * (0.5 * (R.C_L + R.C_L.transpose())) * Q;
    auto es = eig::dense_sym_pencil(Kq, Mq);
    Vec mu = es.values.cwiseMax(0.0);
    rep.rho = mu.size() ? std::sqrt(mu.maxCoeff()) : 0.0;

    auto split =
        detail::sign_split(mu, es.vectors, [&](const Mat& X) { return Mat(Cq * X); }, 1e-8);
    auto w = detail::pick_window(mu, split.lambdas, opts.k, opts.zero_tol, rep.rho);
    rep.zero_mode_count = rk + w.zero_count;

    const int kw = static_cast<int>(w.picked.size());
    rep.eigenvectors.resize(ne, kw);
    double knorm = std::max(inf_norm(Kq), 1e-300);
    double cnorm = std::max(inf_norm(Cq), 1e-300);
    for (int t = 0; t < kw; ++t) {
      int i = w.picked[t];
      double lam = split.lambdas[i];
      Vec y = split.vectors.col(i);
      rep.eigenvalues.push_back(lam);
      rep.eigenvectors.col(t) = R.N * (Q * y);
      rep.residuals.push_back((Kq * y - lam * lam * (Mq * y)).norm() / knorm);
      rep.whitney_residuals.push_back((Cq * y - lam * (Mq * y)).norm() / cnorm);
    }
    return rep;
  }

  // iterative path: shift-invert Lanczos on the constrained (K + tau M, M)
  // pencil through sparse KKT systems; vectors live in the full edge space
  {
    RestrictedOperator r = restricted_operator(B, rows, false);
    rep.asymmetry_abs = r.asymmetry_abs;
    rep.asymmetry_rel = r.asymmetry_rel;
  }
  const SurfaceComplex& S = *B.S;
  SpMat Avol;
  {
    std::vector<Triplet> trip;
    for (int k = 0; k < rows.A.outerSize(); ++k)
      for (SpMat::InnerIterator it(rows.A, k); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), S.bedge_parent[it.col()], it.value());
    int r = static_cast<int>(rows.A.rows());
    for (int k = 0; k < defl.outerSize(); ++k)
      for (SpMat::InnerIterator it(defl, k); it; ++it)
        trip.emplace_back(static_cast<int>(r + it.row()), static_cast<int>(it.col()), it.value());
    r += static_cast<int>(defl.rows());
    Avol.resize(r, ne);
    Avol.setFromTriplets(trip.begin(), trip.end());
  }

  double rho_sq;
  {
    Eigen::SimplicialLDLT<SpMat> mass(B.M1);
    if (mass.info() != Eigen::Success) throw SolverError("mass factorization failed");
    std::mt19937_64 rng(opts.seed + 7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec v(ne);
    for (int i = 0; i < ne; ++i) v[i] = dist(rng);
    v.normalize();
    rho_sq = 1.0;
    for (int it = 0; it < 10; ++it) {
      v = mass.solve(B.K * v);
      rho_sq = v.norm();
      v /= rho_sq;
    }
  }
  rep.rho = std::sqrt(rho_sq);
  double tau = 3e-5 * rho_sq;

  eig::ConstrainedSolver kkt;
  kkt.factorize(SpMat(B.K + tau * B.M1), Avol);
  // Euclidean projector onto null(Avol) through the small Gram A A^T: used
  // only for the start vector and the a-posteriori constrained residuals
  Eigen::SimplicialLDLT<SpMat> gram_ldlt(SpMat(Avol * SpMat(Avol.transpose())));
  if (gram_ldlt.info() != Eigen::Success)
    throw SolverError("constraint Gram factorization failed (redundant rows?)");
  auto project_euclid = [&](const Vec& v) {
    return Vec(v - SpMat(Avol.transpose()) * gram_ldlt.solve(Avol * v));
  };

  eig::LanczosOptions lopt;
  lopt.k = opts.k + 8;
  lopt.seed = opts.seed;
  lopt.max_iter = opts.max_iter;
  lopt.tol = opts.lanczos_tol;
  auto res = eig::lanczos_largest(
      ne, [&](const Vec& v) { return kkt.solve(B.M1 * v); },
      [&](const Vec& v) { return Vec(B.M1 * v); }, lopt, project_euclid);

  const int got = static_cast<int>(res.values.size());
  Vec mu(got);
  for (int i = 0; i < got; ++i) mu[i] = std::max(0.0, 1.0 / res.values[i] - tau);
  std::vector<int> ord(got);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return mu[a] < mu[b]; });
  Vec mus(got);
  Mat X(ne, got);
  for (int i = 0; i < got; ++i) {
    mus[i] = mu[ord[i]];
    X.col(i) = res.vectors.col(ord[i]);
  }
  auto split =
      detail::sign_split(mus, X, [&](const Mat& Y) { return Mat(B.C3sym * Y); }, 1e-8);
  auto w = detail::pick_window(mus, split.lambdas, opts.k, opts.zero_tol, rep.rho);
  rep.zero_mode_count = rep.gradient_mode_count + w.zero_count;

  const int kw = static_cast<int>(w.picked.size());
  rep.eigenvectors.resize(ne, kw);
  double knorm = std::max(inf_norm(B.K), 1e-300);
  double cnorm = std::max(inf_norm(B.C3sym), 1e-300);
  for (int t = 0; t < kw; ++t) {
    int i = w.picked[t];
    double lam = split.lambdas[i];
    Vec x = split.vectors.col(i);
    rep.eigenvalues.push_back(lam);
    rep.eigenvectors.col(t) = x;
    Vec r = project_euclid(Vec(B.K * x - lam * lam * (B.M1 * x)));
    rep.residuals.push_back(r.norm() / knorm);
    Vec rw = project_euclid(Vec(B.C3sym * x - lam * (B.M1 * x)));
    rep.whitney_residuals.push_back(rw.norm() / cnorm);
  }
  return rep;
}

/// GKN validation for an arbitrary harmonic selection: the domain condition
/// "harmonic part of the trace lies in L_H" is enforced through rows from a
/// basis of L_H^# (equal to L_H itself when L_H is a complete Lagrangian).
/// Returns the symplectic verdict with the measured operator asymmetry.
struct GknReport {
  LagrangianVerdict verdict = LagrangianVerdict::No;
  double asymmetry_abs = 0.0;
  double asymmetry_rel = 0.0;
};

inline GknReport validate_gkn(const OperatorBundle& B, const Mat& harmonic_selection) {
  GknReport out;
  const Mat& H = B.hodge->harmonic_basis();
  Mat gram = H.transpose() * (B.hodge->W() * H);
  Mat coords = H.transpose() * (B.hodge->M1() * harmonic_selection);
  SymplecticSpace HS{gram};
  out.verdict = is_lagrangian(HS, Subspace{coords});

  Subspace sharp = symplectic_orthogonal(HS, Subspace{coords});
  Mat rowsL = H * sharp.B;

  ConstraintRows rows;
  std::vector<Triplet> trip;
  int row = 0;
  detail::closed_trace_rows(*B.S, trip, row);
  detail::symplectic_rows(*B.hodge, rowsL, trip, row);
  rows.A.resize(row, B.S->n_edges());
  rows.A.setFromTriplets(trip.begin(), trip.end());

  RestrictedOperator R = restricted_operator(B, rows, false);
  out.asymmetry_abs = R.asymmetry_abs;
  out.asymmetry_rel = R.asymmetry_rel;
  return out;
}

}  // namespace hodgecurl

#endif
