#ifndef HODGECURL_MESH_HPP
#define HODGECURL_MESH_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "hodgecurl/core.hpp"

namespace hodgecurl {

/// Oriented tetrahedral complex with canonical simplex enumerations and
/// integer exterior-derivative (incidence) matrices.
///
/// Edges are sorted vertex pairs oriented low id -> high id; faces are sorted
/// triples; both are enumerated in lexicographic order, so ids are dense and
/// deterministic given the vertex ids. Tets are stored positively oriented.
struct OrientedComplex3 {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;

  SpMatI d0;  ///< vertex -> edge, ne x nv
  SpMatI d1;  ///< edge -> face, nf x ne
  SpMatI d2;  ///< face -> tet,  nt x nf

  double bbox_scale = 0.0;  ///< bounding-box diagonal

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_tets() const { return static_cast<int>(tets.size()); }

  /// Dense deterministic id of the edge {u,v}; -1 if absent.
  int edge_id(int u, int v) const {
    std::array<int, 2> key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    return (it != edges.end() && *it == key) ? static_cast<int>(it - edges.begin()) : -1;
  }
  int face_id(std::array<int, 3> f) const {
    std::sort(f.begin(), f.end());
    auto it = std::lower_bound(faces.begin(), faces.end(), f);
    return (it != faces.end() && *it == f) ? static_cast<int>(it - faces.begin()) : -1;
  }

  double tet_volume(int t) const {
    const auto& T = tets[t];
    Eigen::Matrix3d J;
    J.col(0) = vertices[T[1]] - vertices[T[0]];
    J.col(1) = vertices[T[2]] - vertices[T[0]];
    J.col(2) = vertices[T[3]] - vertices[T[0]];
    return J.determinant() / 6.0;
  }
};

/// Induced oriented boundary surface of an OrientedComplex3.
///
/// Boundary triangles are stored as oriented triples matching the outward
/// normal. Boundary vertices/edges keep the parent's canonical (global-id)
/// ordering, so the trace matrices are unsigned selectors and the commutation
/// T1*D0 = d0*T0 holds as an exact integer identity.
struct SurfaceComplex {
  const OrientedComplex3* parent = nullptr;
  std::vector<int> bverts;                  ///< parent vertex ids, ascending
  std::vector<std::array<int, 2>> bedges;   ///< parent vertex pairs, sorted
  std::vector<std::array<int, 3>> btris;    ///< outward-oriented triples (parent ids)
  std::vector<int> bedge_parent;            ///< boundary edge -> parent edge id

  SpMatI d0;  ///< boundary vertex -> boundary edge
  SpMatI d1;  ///< boundary edge -> boundary triangle
  SpMatI T0;  ///< volume 0-cochain -> boundary 0-cochain
  SpMatI T1;  ///< volume edge-cochain -> boundary edge-cochain

  std::vector<int> vert_component;  ///< component id per boundary vertex
  int n_components = 0;
  int euler_characteristic = 0;

  int n_vertices() const { return static_cast<int>(bverts.size()); }
  int n_edges() const { return static_cast<int>(bedges.size()); }
  int n_triangles() const { return static_cast<int>(btris.size()); }

  int vert_id(int parent_vertex) const {
    auto it = std::lower_bound(bverts.begin(), bverts.end(), parent_vertex);
    return (it != bverts.end() && *it == parent_vertex) ? static_cast<int>(it - bverts.begin())
                                                        : -1;
  }
  int edge_id(int u, int v) const {
    std::array<int, 2> key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(bedges.begin(), bedges.end(), key);
    return (it != bedges.end() && *it == key) ? static_cast<int>(it - bedges.begin()) : -1;
  }

  double triangle_area(int f) const {
    const auto& tri = btris[f];
    const auto& V = parent->vertices;
    return 0.5 * (V[tri[1]] - V[tri[0]]).cross(V[tri[2]] - V[tri[0]]).norm();
  }
};

/// Real coefficient vector over the simplices of one degree, on the volume
/// complex or its boundary. The discrete proxy of a differential form.
struct Cochain {
  enum class Support { Volume, Boundary };
  int degree = 0;
  Support support = Support::Volume;
  Vec values;
};

namespace detail {

inline int sort_parity3(std::array<int, 3>& a) {
  int par = 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2 - i; ++j)
      if (a[j] > a[j + 1]) {
        std::swap(a[j], a[j + 1]);
        par = -par;
      }
  return par;
}

}  // namespace detail

/// Build the canonical oriented complex from vertex coordinates and tet
/// connectivity. Inverted tets are reoriented by swapping two vertices;
/// degenerate tets and non-manifold face incidence are rejected.
inline OrientedComplex3 build_complex(std::vector<Vec3> vertices,
                                      std::vector<std::array<int, 4>> tets) {
  OrientedComplex3 C;
  C.vertices = std::move(vertices);
  const int nv = C.n_vertices();
  if (nv == 0 || tets.empty()) throw MeshError("empty mesh");

  Vec3 lo = C.vertices[0], hi = C.vertices[0];
  for (const auto& p : C.vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  C.bbox_scale = (hi - lo).norm();
  const double vol_tol = 1e-14 * C.bbox_scale * C.bbox_scale * C.bbox_scale;

  std::set<std::array<int, 4>> dedup;
  for (auto& T : tets) {
    for (int v : T)
      if (v < 0 || v >= nv) throw MeshError("tet references invalid vertex " + std::to_string(v));
    std::array<int, 4> key = T;
    std::sort(key.begin(), key.end());
    if (key[0] == key[1] || key[1] == key[2] || key[2] == key[3])
      throw MeshError("tet with repeated vertex");
    if (!dedup.insert(key).second) throw MeshError("duplicate tet");
    Eigen::Matrix3d J;
    J.col(0) = C.vertices[T[1]] - C.vertices[T[0]];
    J.col(1) = C.vertices[T[2]] - C.vertices[T[0]];
    J.col(2) = C.vertices[T[3]] - C.vertices[T[0]];
    double vol6 = J.determinant();
    if (std::abs(vol6) / 6.0 <= vol_tol)
      throw DegenerateTetError("degenerate tet (|volume| <= 1e-14 of bounding-box scale)");
    if (vol6 < 0) std::swap(T[2], T[3]);
  }
  C.tets = std::move(tets);

  std::set<std::array<int, 2>> eset;
  std::set<std::array<int, 3>> fset;
  for (const auto& T : C.tets) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        eset.insert({std::min(T[i], T[j]), std::max(T[i], T[j])});
    for (int m = 0; m < 4; ++m) {
      std::array<int, 3> f;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != m) f[k++] = T[i];
      std::sort(f.begin(), f.end());
      fset.insert(f);
    }
  }
  C.edges.assign(eset.begin(), eset.end());
  C.faces.assign(fset.begin(), fset.end());

  const int ne = C.n_edges(), nf = C.n_faces(), nt = C.n_tets();

  std::vector<TripletI> t0, t1, t2;
  t0.reserve(2 * ne);
  for (int e = 0; e < ne; ++e) {
    t0.emplace_back(e, C.edges[e][0], -1);
    t0.emplace_back(e, C.edges[e][1], +1);
  }
  C.d0.resize(ne, nv);
  C.d0.setFromTriplets(t0.begin(), t0.end());

  t1.reserve(3 * nf);
  for (int f = 0; f < nf; ++f) {
    const auto& F = C.faces[f];  // a < b < c: boundary = (a,b) + (b,c) - (a,c)
    t1.emplace_back(f, C.edge_id(F[0], F[1]), +1);
    t1.emplace_back(f, C.edge_id(F[1], F[2]), +1);
    t1.emplace_back(f, C.edge_id(F[0], F[2]), -1);
  }
  C.d1.resize(nf, ne);
  C.d1.setFromTriplets(t1.begin(), t1.end());

  t2.reserve(4 * nt);
  for (int t = 0; t < nt; ++t) {
    const auto& T = C.tets[t];
    for (int m = 0; m < 4; ++m) {
      std::array<int, 3> f;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != m) f[k++] = T[i];
      int sign = (m % 2 == 0) ? 1 : -1;
      sign *= detail::sort_parity3(f);
      t2.emplace_back(t, C.face_id(f), sign);
    }
  }
  C.d2.resize(nt, nf);
  C.d2.setFromTriplets(t2.begin(), t2.end());

  // manifold-with-boundary: every face in one tet (boundary) or two tets with
  // opposite induced orientations
  std::vector<int> cnt(nf, 0), sum(nf, 0);
  for (int k = 0; k < C.d2.outerSize(); ++k)
    for (SpMatI::InnerIterator it(C.d2, k); it; ++it) {
      cnt[it.col()] += 1;
      sum[it.col()] += static_cast<int>(it.value());
    }
  for (int f = 0; f < nf; ++f) {
    if (cnt[f] > 2 || (cnt[f] == 2 && sum[f] != 0))
      throw NonManifoldError("face " + std::to_string(f) +
                             " shared by " + std::to_string(cnt[f]) +
                             " tets with net orientation " + std::to_string(sum[f]));
  }
  return C;
}

/// Extract the oriented boundary surface. Triangle orientation is induced by
/// the owning tet (outward normal); fails if the result is not a closed
/// oriented 2-manifold.
inline SurfaceComplex extract_boundary(const OrientedComplex3& C) {
  SurfaceComplex S;
  S.parent = &C;
  const int nf = C.n_faces();
  std::vector<int> owner(nf, -1), osign(nf, 0), cnt(nf, 0);
  for (int k = 0; k < C.d2.outerSize(); ++k)
    for (SpMatI::InnerIterator it(C.d2, k); it; ++it) {
      cnt[it.col()] += 1;
      owner[it.col()] = static_cast<int>(it.row());
      osign[it.col()] = static_cast<int>(it.value());
    }

  std::set<int> bvset;
  for (int f = 0; f < nf; ++f) {
    if (cnt[f] != 1) continue;
    std::array<int, 3> tri = C.faces[f];
    if (osign[f] < 0) std::swap(tri[1], tri[2]);
    S.btris.push_back(tri);
    for (int v : tri) bvset.insert(v);
  }
  if (S.btris.empty()) throw NotClosedSurfaceError("complex has empty boundary");
  S.bverts.assign(bvset.begin(), bvset.end());

  std::set<std::array<int, 2>> beset;
  for (const auto& tri : S.btris)
    for (int i = 0; i < 3; ++i) {
      int u = tri[i], v = tri[(i + 1) % 3];
      beset.insert({std::min(u, v), std::max(u, v)});
    }
  S.bedges.assign(beset.begin(), beset.end());

  const int nbv = S.n_vertices(), nbe = S.n_edges(), nbt = S.n_triangles();
  S.bedge_parent.resize(nbe);
  for (int e = 0; e < nbe; ++e) S.bedge_parent[e] = C.edge_id(S.bedges[e][0], S.bedges[e][1]);

  std::vector<TripletI> t0, t1, tt0, tt1;
  for (int e = 0; e < nbe; ++e) {
    t0.emplace_back(e, S.vert_id(S.bedges[e][0]), -1);
    t0.emplace_back(e, S.vert_id(S.bedges[e][1]), +1);
  }
  S.d0.resize(nbe, nbv);
  S.d0.setFromTriplets(t0.begin(), t0.end());

  std::vector<int> edge_use(nbe, 0), edge_net(nbe, 0);
  for (int f = 0; f < nbt; ++f) {
    const auto& tri = S.btris[f];
    for (int i = 0; i < 3; ++i) {
      int u = tri[i], v = tri[(i + 1) % 3];
      int e = S.edge_id(u, v);
      int s = (u < v) ? +1 : -1;
      t1.emplace_back(f, e, s);
      edge_use[e] += 1;
      edge_net[e] += s;
    }
  }
  S.d1.resize(nbt, nbe);
  S.d1.setFromTriplets(t1.begin(), t1.end());
  for (int e = 0; e < nbe; ++e)
    if (edge_use[e] != 2 || edge_net[e] != 0)
      throw NotClosedSurfaceError("boundary edge " + std::to_string(e) +
                                  " not shared by two consistently oriented triangles");

  for (int v = 0; v < nbv; ++v) tt0.emplace_back(v, S.bverts[v], 1);
  S.T0.resize(nbv, C.n_vertices());
  S.T0.setFromTriplets(tt0.begin(), tt0.end());
  for (int e = 0; e < nbe; ++e) tt1.emplace_back(e, S.bedge_parent[e], 1);
  S.T1.resize(nbe, C.n_edges());
  S.T1.setFromTriplets(tt1.begin(), tt1.end());

  // connected components of the surface graph
  std::vector<int> uf(nbv);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : S.bedges) {
    int a = find(S.vert_id(e[0])), b = find(S.vert_id(e[1]));
    if (a != b) uf[a] = b;
  }
  std::map<int, int> root_to_comp;
  S.vert_component.resize(nbv);
  for (int v = 0; v < nbv; ++v) {
    int r = find(v);
    auto [it, fresh] = root_to_comp.emplace(r, static_cast<int>(root_to_comp.size()));
    S.vert_component[v] = it->second;
  }
  S.n_components = static_cast<int>(root_to_comp.size());
  S.euler_characteristic = nbv - nbe + nbt;
  return S;
}

}  // namespace hodgecurl

#endif
