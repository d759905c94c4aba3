#ifndef HODGECURL_HOMOLOGY_HPP
#define HODGECURL_HOMOLOGY_HPP

#include <deque>

#include "hodgecurl/exact.hpp"
#include "hodgecurl/mesh.hpp"

namespace hodgecurl {

using VecI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct SurfaceTopology {
  int b0 = 0;
  int b1 = 0;
  int genus = 0;
};

/// Betti numbers and genus of the closed oriented boundary surface.
/// rank(d0) = nbv - b0 comes from the spanning forest, rank(d1) = nbt - b0
/// from orientation-consistent face gluing; both are exact integer
/// computations, so b1 = nbe - rank(d0) - rank(d1) = 2*b0 - chi.
inline SurfaceTopology betti(const SurfaceComplex& S) {
  std::vector<int> uses(S.n_edges(), 0), net(S.n_edges(), 0);
  for (int k = 0; k < S.d1.outerSize(); ++k)
    for (SpMatI::InnerIterator it(S.d1, k); it; ++it) {
      uses[it.col()] += 1;
      net[it.col()] += static_cast<int>(it.value());
    }
  for (int e = 0; e < S.n_edges(); ++e)
    if (uses[e] != 2 || net[e] != 0)
      throw NotClosedSurfaceError("edge " + std::to_string(e) +
                                  " breaks the closed oriented surface structure");
  SurfaceTopology T;
  T.b0 = S.n_components;
  int chi = S.euler_characteristic;
  T.b1 = 2 * T.b0 - chi;
  if (T.b1 < 0 || T.b1 % 2 != 0)
    throw NotClosedSurfaceError("surface is not a closed orientable 2-manifold");
  T.genus = T.b1 / 2;
  return T;
}

namespace detail {

/// CCW-rotation system of the oriented surface: at each vertex, successor of
/// the outgoing dart (v->x) inside the oriented triangle (v,x,y) is (v->y).
struct RotationSystem {
  // per boundary vertex id: neighbor -> cyclic slot, and slot count
  std::vector<std::map<int, int>> slot;
  std::vector<int> degree;

  static RotationSystem build(const SurfaceComplex& S) {
    RotationSystem R;
    int nbv = S.n_vertices();
    std::vector<std::map<int, int>> succ(nbv);
    for (const auto& tri : S.btris)
      for (int i = 0; i < 3; ++i) {
        int v = tri[i], x = tri[(i + 1) % 3], y = tri[(i + 2) % 3];
        succ[S.vert_id(v)][x] = y;
      }
    R.slot.resize(nbv);
    R.degree.resize(nbv);
    for (int v = 0; v < nbv; ++v) {
      if (succ[v].empty()) continue;
      int start = succ[v].begin()->first;
      int cur = start, k = 0;
      do {
        R.slot[v][cur] = k++;
        auto it = succ[v].find(cur);
        if (it == succ[v].end()) throw NonManifoldError("broken vertex link in rotation system");
        cur = it->second;
      } while (cur != start);
      R.degree[v] = k;
      if (k != static_cast<int>(succ[v].size()))
        throw NonManifoldError("vertex link is not a single cycle");
    }
    return R;
  }
};

struct Transit {
  double in_pos, out_pos;
};

/// Chain -> per-vertex dart multisets and a deterministic transit matching.
struct ChainDarts {
  // per boundary vertex: slots of incoming and outgoing darts (with multiplicity)
  std::map<int, std::vector<double>> ins, outs;

  static ChainDarts build(const SurfaceComplex& S, const RotationSystem& R, const VecI& chain,
                          double offset) {
    if (chain.size() != S.n_edges()) throw SizeMismatchError("chain length != boundary edges");
    ChainDarts D;
    for (int e = 0; e < S.n_edges(); ++e) {
      std::int64_t c = chain[e];
      if (c == 0) continue;
      int u = S.bedges[e][0], v = S.bedges[e][1];
      if (c < 0) std::swap(u, v);
      int ui = S.vert_id(u), vi = S.vert_id(v);
      for (std::int64_t m = 0; m < std::abs(c); ++m) {
        // dart u -> v: outgoing at u (slot of neighbor v), incoming at v (slot of neighbor u)
        D.outs[ui].push_back(R.slot[ui].at(v) + offset);
        D.ins[vi].push_back(R.slot[vi].at(u) - offset);
      }
    }
    return D;
  }
};

inline bool in_ccw_arc(double x, double a, double b, int n) {
  // x strictly inside the CCW arc from a to b on a circle of circumference n
  auto wrap = [n](double t) {
    while (t < 0) t += n;
    while (t >= n) t -= n;
    return t;
  };
  double xa = wrap(x - a), ba = wrap(b - a);
  return xa > 1e-9 && xa < ba - 1e-9;
}

}  // namespace detail

/// Signed intersection number of two closed integer 1-chains on the oriented
/// boundary surface, computed from the rotation system with the second chain
/// pushed off to its left (so shared edges never cross). Depends only on the
/// homology classes.
inline std::int64_t intersection_number(const SurfaceComplex& S, const VecI& c1, const VecI& c2) {
  if ((S.d0.transpose().cast<std::int64_t>() * c1).cwiseAbs().sum() != 0 ||
      (S.d0.transpose().cast<std::int64_t>() * c2).cwiseAbs().sum() != 0)
    throw OpenChainError("intersection_number: input chain is not a cycle");
  auto R = detail::RotationSystem::build(S);
  auto A = detail::ChainDarts::build(S, R, c1, 0.0);
  auto B = detail::ChainDarts::build(S, R, c2, 0.25);

  std::int64_t total = 0;
  for (auto& [v, a_ins] : A.ins) {
    auto ao = A.outs.find(v);
    if (ao == A.outs.end()) throw OpenChainError("unbalanced transits");
    std::vector<double> ains = a_ins, aouts = ao->second;
    std::sort(ains.begin(), ains.end());
    std::sort(aouts.begin(), aouts.end());
    // deterministic matching: pair sorted in/out darts; the signed total is
    // matching-independent because a matching change shifts whole loops
    // around the vertex, which cover both darts of every chord
    const int n = R.degree[v];
    auto bi = B.ins.find(v);
    auto bo = B.outs.find(v);
    for (size_t k = 0; k < ains.size(); ++k) {
      double a = ains[k], b = aouts[k];
      if (bi != B.ins.end())
        for (double c : bi->second)
          if (detail::in_ccw_arc(c, a, b, n)) total += 1;
      if (bo != B.outs.end())
        for (double d : bo->second)
          if (detail::in_ccw_arc(d, a, b, n)) total -= 1;
    }
  }
  return -total;  // sign fixed so the canonical torus basis gives Gram = +J downstream
}

/// 2g independent fundamental 1-cycles via tree-cotree, per component.
/// Every returned chain is an exact integer cycle with coefficients in
/// {-1,0,1}.
inline std::vector<VecI> fundamental_cycles(const SurfaceComplex& S) {
  const int nbv = S.n_vertices(), nbe = S.n_edges(), nbt = S.n_triangles();
  std::vector<std::vector<std::pair<int, int>>> vadj(nbv);  // (neighbor vert, edge)
  for (int e = 0; e < nbe; ++e) {
    int a = S.vert_id(S.bedges[e][0]), b = S.vert_id(S.bedges[e][1]);
    vadj[a].emplace_back(b, e);
    vadj[b].emplace_back(a, e);
  }
  std::vector<int> parent_v(nbv, -1), parent_e(nbv, -1);
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
          parent_v[w] = u;
          parent_e[w] = e;
          q.push_back(w);
        }
    }
  }
  // cotree over faces across non-tree edges
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
  for (int froot = 0; froot < nbt; ++froot) {
    if (fseen[froot]) continue;
    fseen[froot] = 1;
    std::deque<int> q{froot};
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (int i = 0; i < 3; ++i) {
        int e = S.edge_id(S.btris[f][i], S.btris[f][(i + 1) % 3]);
        if (intree[e] || incot[e]) continue;
        int g = eface[e][0] == f ? eface[e][1] : eface[e][0];
        if (g >= 0 && !fseen[g]) {
          fseen[g] = 1;
          incot[e] = 1;
          q.push_back(g);
        }
      }
    }
  }
  std::vector<VecI> cycles;
  for (int e = 0; e < nbe; ++e) {
    if (intree[e] || incot[e]) continue;
    VecI c = VecI::Zero(nbe);
    c[e] = 1;  // oriented low -> high vertex id
    int u = S.vert_id(S.bedges[e][0]), v = S.vert_id(S.bedges[e][1]);
    for (int w : {v, u}) {
      std::int64_t s = (w == v) ? 1 : -1;  // close v -> root, then root -> u
      int x = w;
      while (parent_v[x] >= 0) {
        int pe = parent_e[x];
        int lo = S.vert_id(S.bedges[pe][0]);
        c[pe] += (x == lo) ? s : -s;  // traverse x -> parent, canonical is low -> high
        x = parent_v[x];
      }
    }
    cycles.push_back(std::move(c));
  }
  return cycles;
}

enum class CycleClass { InteriorBounding, ExteriorBounding, Neither };

/// Canonical homology basis: g interior-bounding cycles followed by their g
/// duals, intersection matrix exactly [[0,I],[-I,0]].
struct CycleBasis {
  std::vector<VecI> cycles;        // 2g chains, interior-bounding first
  std::vector<CycleClass> labels;  // InteriorBounding x g, ExteriorBounding x g
  std::vector<int> pair_index;     // 1..g, 1..g
  Eigen::MatrixX<std::int64_t> intersection;
  int genus() const { return static_cast<int>(cycles.size()) / 2; }
};

namespace detail {

/// Map a boundary chain to a volume edge chain (trace is an unsigned selector).
inline std::vector<std::pair<int, long long>> to_volume_chain(const SurfaceComplex& S,
                                                              const VecI& c) {
  std::vector<std::pair<int, long long>> out;
  for (int e = 0; e < c.size(); ++e)
    if (c[e] != 0) out.emplace_back(S.bedge_parent[e], static_cast<long long>(c[e]));
  return out;
}

}  // namespace detail

/// Does the boundary cycle bound a 2-chain in the volume? Exact rational
/// solvability of (face boundary operator) x = c.
inline bool bounds_in_volume(const OrientedComplex3& C, const SurfaceComplex& S, const VecI& c) {
  if ((S.d0.transpose().cast<std::int64_t>() * c).cwiseAbs().sum() != 0)
    throw OpenChainError("classify_cycle: input chain is not a cycle");
  SpMatI del2 = C.d1.transpose();  // volume 2-chain boundary: edges x faces
  return exact::solvable(del2, detail::to_volume_chain(S, c));
}

/// Integer symplectic canonicalization of a full-rank cycle set, adapting the
/// basis to the interior-bounding Lagrangian sublattice.
inline CycleBasis canonical_dual_pairs(const OrientedComplex3& C, const SurfaceComplex& S,
                                       const std::vector<VecI>& cycles) {
  using exact::BigInt;
  const int m = static_cast<int>(cycles.size());
  CycleBasis B;
  B.intersection.resize(0, 0);
  if (m == 0) return B;
  if (m % 2 != 0) throw SingularPairingError("cycle count must be even");
  const int g = m / 2;

  Eigen::MatrixX<std::int64_t> Om(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Om(i, j) = intersection_number(S, cycles[i], cycles[j]);
  {
    std::vector<std::vector<BigInt>> om(m, std::vector<BigInt>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) om[i][j] = Om(i, j);
    if (exact::bareiss_rank(om) != m)
      throw SingularPairingError("intersection matrix rank < 2g");
  }

  // bounding sublattice: integer combos c with sum_k c_k cycles_k in im(del2)
  SpMatI del2 = C.d1.transpose();
  auto rows = exact::SparseIntRows::from(del2);
  std::vector<std::vector<exact::Rational>> Bblock(rows.rows);
  for (int k = 0; k < m; ++k)
    for (auto& [e, v] : detail::to_volume_chain(S, cycles[k])) {
      Bblock[e].resize(m);
      Bblock[e][k] = exact::Rational(v);
    }
  for (auto& r : Bblock) r.resize(m);
  auto elim = exact::eliminate(rows, Bblock);
  // integer matrix of residual rows (cleared denominators)
  std::vector<std::vector<BigInt>> Rres;
  for (auto& r : elim.residual_b) {
    BigInt l = 1;
    for (auto& q : r) l = boost::multiprecision::lcm(l, q.den);
    std::vector<BigInt> row(m);
    bool nz = false;
    for (int k = 0; k < m; ++k) {
      row[k] = r[k].num * (l / r[k].den);
      nz |= row[k] != 0;
    }
    if (nz) Rres.push_back(std::move(row));
  }
  std::vector<std::vector<BigInt>> Kbasis;
  if (Rres.empty()) {
    Kbasis.assign(m, std::vector<BigInt>(m, 0));
    for (int i = 0; i < m; ++i) Kbasis[i][i] = 1;
  } else {
    Kbasis = exact::integer_kernel(Rres);
  }
  if (static_cast<int>(Kbasis.size()) != g)
    throw SingularPairingError("interior-bounding sublattice has rank " +
                               std::to_string(Kbasis.size()) + ", expected genus " +
                               std::to_string(g));

  auto to_i64 = [](const BigInt& x) { return static_cast<std::int64_t>(x); };
  // Lambda[i][j] = Int(k_i, cycle_j) = (K Om)[i][j]
  std::vector<std::vector<BigInt>> Lam(g, std::vector<BigInt>(m, 0));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < m; ++j) {
      BigInt acc = 0;
      for (int k = 0; k < m; ++k) acc += Kbasis[i][k] * Om(k, j);
      Lam[i][j] = acc;
    }
  // K must be isotropic: Lam * K^T = 0
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      BigInt acc = 0;
      for (int k = 0; k < m; ++k) acc += Lam[i][k] * Kbasis[j][k];
      if (acc != 0) throw SingularPairingError("bounding sublattice is not isotropic");
    }
  auto Y = exact::solve_identity(Lam);  // duals: Int(k_i, b_j) = delta_ij

  // correct dual pairings: b_i <- b_i - B_ij k_j (i<j), B = Y^T Om Y
  std::vector<std::vector<BigInt>> duals(g, std::vector<BigInt>(m, 0));
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < m; ++k) duals[j][k] = Y[k][j];
  std::vector<std::vector<BigInt>> Bp(g, std::vector<BigInt>(g, 0));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      BigInt acc = 0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) acc += duals[i][a] * Om(a, b) * duals[j][b];
      Bp[i][j] = acc;
    }
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j)
      if (Bp[i][j] != 0)
        for (int k = 0; k < m; ++k) duals[i][k] -= Bp[i][j] * Kbasis[j][k];

  const int nbe = S.n_edges();
  auto combine = [&](const std::vector<BigInt>& combo) {
    VecI c = VecI::Zero(nbe);
    for (int k = 0; k < m; ++k)
      if (combo[k] != 0) c += to_i64(combo[k]) * cycles[k];
    return c;
  };
  for (int i = 0; i < g; ++i) {
    B.cycles.push_back(combine(Kbasis[i]));
    B.labels.push_back(CycleClass::InteriorBounding);
    B.pair_index.push_back(i + 1);
  }
  for (int i = 0; i < g; ++i) {
    B.cycles.push_back(combine(duals[i]));
    B.labels.push_back(CycleClass::ExteriorBounding);
    B.pair_index.push_back(i + 1);
  }
  B.intersection.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      B.intersection(i, j) = intersection_number(S, B.cycles[i], B.cycles[j]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::int64_t want = 0;
      if (i < g && j == i + g) want = 1;
      if (i >= g && j == i - g) want = -1;
      if (B.intersection(i, j) != want)
        throw SingularPairingError("canonicalization failed to reach the standard form");
    }
  return B;
}

/// Canonical basis straight from the mesh: tree-cotree cycles, then
/// symplectic canonicalization.
inline CycleBasis canonical_basis(const OrientedComplex3& C, const SurfaceComplex& S) {
  return canonical_dual_pairs(C, S, fundamental_cycles(S));
}

/// Classify one boundary cycle: bounds in the volume, lies in the canonical
/// exterior complement, or neither.
inline CycleClass classify_cycle(const OrientedComplex3& C, const SurfaceComplex& S, const VecI& c,
                                 const CycleBasis* basis = nullptr) {
  if (bounds_in_volume(C, S, c)) return CycleClass::InteriorBounding;
  CycleBasis local;
  if (!basis) {
    local = canonical_basis(C, S);
    basis = &local;
  }
  const int g = basis->genus();
  for (int j = 0; j < g; ++j)
    if (intersection_number(S, c, basis->cycles[g + j]) != 0) return CycleClass::Neither;
  return CycleClass::ExteriorBounding;
}

}  // namespace hodgecurl

#endif
