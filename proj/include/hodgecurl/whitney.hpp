#ifndef HODGECURL_WHITNEY_HPP
#define HODGECURL_WHITNEY_HPP

#include "hodgecurl/mesh.hpp"

namespace hodgecurl {

// Lowest-order Whitney forms. All integrands are polynomials in barycentric
// coordinates and are integrated exactly:
//   tet:      int l_a l_b dV = V (1+delta_ab)/20
//   triangle: int l_a l_b dS = A (1+delta_ab)/12
// Local edges/faces are listed in the parent's canonical order (sorted global
// vertex ids) so assembly is deterministic for a fixed tet enumeration.

namespace detail {

struct TetFrame {
  double vol;
  std::array<Vec3, 4> grad;      // grad lambda_i
  std::array<std::array<int, 2>, 6> ledges;   // local vertex positions, global-sorted
  std::array<int, 6> eids;
  std::array<std::array<int, 3>, 4> lfaces;
  std::array<int, 4> fids;
};

inline TetFrame tet_frame(const OrientedComplex3& C, int t) {
  TetFrame fr;
  const auto& T = C.tets[t];
  const auto& V = C.vertices;
  Eigen::Matrix3d J;
  J.col(0) = V[T[1]] - V[T[0]];
  J.col(1) = V[T[2]] - V[T[0]];
  J.col(2) = V[T[3]] - V[T[0]];
  fr.vol = J.determinant() / 6.0;
  Eigen::Matrix3d Jit = J.inverse().transpose();
  for (int i = 0; i < 3; ++i) fr.grad[i + 1] = Jit.col(i);
  fr.grad[0] = -(fr.grad[1] + fr.grad[2] + fr.grad[3]);

  std::array<int, 4> loc{0, 1, 2, 3};
  std::sort(loc.begin(), loc.end(), [&](int a, int b) { return T[a] < T[b]; });
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      fr.ledges[k] = {loc[i], loc[j]};
      fr.eids[k] = C.edge_id(T[loc[i]], T[loc[j]]);
      ++k;
    }
  k = 0;
  for (int m = 3; m >= 0; --m) {
    std::array<int, 3> f;
    int p = 0;
    for (int i = 0; i < 4; ++i)
      if (i != m) f[p++] = loc[i];
    fr.lfaces[k] = f;  // positions already in ascending global order
    fr.fids[k] = C.face_id({T[f[0]], T[f[1]], T[f[2]]});
    ++k;
  }
  return fr;
}

struct TriFrame {
  double area;
  std::array<Vec3, 3> grad;      // tangential grad lambda_i
  std::array<std::array<int, 2>, 3> ledges;
  std::array<int, 3> eids;
};

inline TriFrame tri_frame(const SurfaceComplex& S, int f) {
  TriFrame fr;
  const auto& tri = S.btris[f];
  const auto& V = S.parent->vertices;
  Vec3 p0 = V[tri[0]], p1 = V[tri[1]], p2 = V[tri[2]];
  Vec3 N = (p1 - p0).cross(p2 - p0);
  double twoA = N.norm();
  fr.area = 0.5 * twoA;
  Vec3 n = N / twoA;
  fr.grad[0] = n.cross(p2 - p1) / twoA;
  fr.grad[1] = n.cross(p0 - p2) / twoA;
  fr.grad[2] = n.cross(p1 - p0) / twoA;

  std::array<int, 3> loc{0, 1, 2};
  std::sort(loc.begin(), loc.end(), [&](int a, int b) { return tri[a] < tri[b]; });
  int k = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      fr.ledges[k] = {loc[i], loc[j]};
      fr.eids[k] = S.edge_id(tri[loc[i]], tri[loc[j]]);
      ++k;
    }
  return fr;
}

}  // namespace detail

/// Mass matrix of Whitney k-forms on the volume complex, k = 0..3.
inline SpMat assemble_mass(const OrientedComplex3& C, int degree) {
  std::vector<Triplet> trip;
  auto lam2 = [](double vol, int a, int b) { return vol * (a == b ? 2.0 : 1.0) / 20.0; };
  switch (degree) {
    case 0: {
      for (int t = 0; t < C.n_tets(); ++t) {
        double vol = C.tet_volume(t);
        const auto& T = C.tets[t];
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) trip.emplace_back(T[a], T[b], lam2(vol, a, b));
      }
      SpMat M(C.n_vertices(), C.n_vertices());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    case 1: {
      for (int t = 0; t < C.n_tets(); ++t) {
        auto fr = detail::tet_frame(C, t);
        for (int E = 0; E < 6; ++E) {
          auto [i, j] = fr.ledges[E];
          for (int F = E; F < 6; ++F) {
            auto [k, l] = fr.ledges[F];
            double v = lam2(fr.vol, i, k) * fr.grad[j].dot(fr.grad[l]) -
                       lam2(fr.vol, i, l) * fr.grad[j].dot(fr.grad[k]) -
                       lam2(fr.vol, j, k) * fr.grad[i].dot(fr.grad[l]) +
                       lam2(fr.vol, j, l) * fr.grad[i].dot(fr.grad[k]);
            trip.emplace_back(fr.eids[E], fr.eids[F], v);
            if (F != E) trip.emplace_back(fr.eids[F], fr.eids[E], v);
          }
        }
      }
      SpMat M(C.n_edges(), C.n_edges());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    case 2: {
      for (int t = 0; t < C.n_tets(); ++t) {
        auto fr = detail::tet_frame(C, t);
        for (int F1 = 0; F1 < 4; ++F1) {
          auto [a, b, c] = fr.lfaces[F1];
          for (int F2 = F1; F2 < 4; ++F2) {
            auto [d, e, f] = fr.lfaces[F2];
            double v = 0;
            const std::array<std::array<int, 3>, 3> cyc1{{{a, b, c}, {b, c, a}, {c, a, b}}};
            const std::array<std::array<int, 3>, 3> cyc2{{{d, e, f}, {e, f, d}, {f, d, e}}};
            for (const auto& [m, x, y] : cyc1)
              for (const auto& [n, u, w] : cyc2)
                v += 4.0 * lam2(fr.vol, m, n) *
                     fr.grad[x].cross(fr.grad[y]).dot(fr.grad[u].cross(fr.grad[w]));
            trip.emplace_back(fr.fids[F1], fr.fids[F2], v);
            if (F2 != F1) trip.emplace_back(fr.fids[F2], fr.fids[F1], v);
          }
        }
      }
      SpMat M(C.n_faces(), C.n_faces());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    case 3: {
      for (int t = 0; t < C.n_tets(); ++t)
        trip.emplace_back(t, t, 1.0 / C.tet_volume(t));
      SpMat M(C.n_tets(), C.n_tets());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    default:
      throw DimensionMismatchError("volume mass degree must be 0..3");
  }
}

/// Mass matrix of Whitney k-forms on the boundary surface, k = 0..2.
inline SpMat assemble_mass(const SurfaceComplex& S, int degree) {
  std::vector<Triplet> trip;
  auto lam2 = [](double area, int a, int b) { return area * (a == b ? 2.0 : 1.0) / 12.0; };
  switch (degree) {
    case 0: {
      for (int f = 0; f < S.n_triangles(); ++f) {
        auto fr = detail::tri_frame(S, f);
        const auto& tri = S.btris[f];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            trip.emplace_back(S.vert_id(tri[a]), S.vert_id(tri[b]), lam2(fr.area, a, b));
      }
      SpMat M(S.n_vertices(), S.n_vertices());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    case 1: {
      for (int f = 0; f < S.n_triangles(); ++f) {
        auto fr = detail::tri_frame(S, f);
        for (int E = 0; E < 3; ++E) {
          auto [i, j] = fr.ledges[E];
          for (int F = E; F < 3; ++F) {
            auto [k, l] = fr.ledges[F];
            double v = lam2(fr.area, i, k) * fr.grad[j].dot(fr.grad[l]) -
                       lam2(fr.area, i, l) * fr.grad[j].dot(fr.grad[k]) -
                       lam2(fr.area, j, k) * fr.grad[i].dot(fr.grad[l]) +
                       lam2(fr.area, j, l) * fr.grad[i].dot(fr.grad[k]);
            trip.emplace_back(fr.eids[E], fr.eids[F], v);
            if (F != E) trip.emplace_back(fr.eids[F], fr.eids[E], v);
          }
        }
      }
      SpMat M(S.n_edges(), S.n_edges());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    case 2: {
      for (int f = 0; f < S.n_triangles(); ++f)
        trip.emplace_back(f, f, 1.0 / detail::tri_frame(S, f).area);
      SpMat M(S.n_triangles(), S.n_triangles());
      M.setFromTriplets(trip.begin(), trip.end());
      return M;
    }
    default:
      throw DimensionMismatchError("surface mass degree must be 0..2");
  }
}

/// Mixed mass pairing int w_e . w_f between edge and face Whitney forms.
inline SpMat assemble_edge_face_mass(const OrientedComplex3& C) {
  std::vector<Triplet> trip;
  auto lam2 = [](double vol, int a, int b) { return vol * (a == b ? 2.0 : 1.0) / 20.0; };
  for (int t = 0; t < C.n_tets(); ++t) {
    auto fr = detail::tet_frame(C, t);
    for (int E = 0; E < 6; ++E) {
      auto [i, j] = fr.ledges[E];
      for (int F = 0; F < 4; ++F) {
        auto [a, b, c] = fr.lfaces[F];
        double v = 0;
        const std::array<std::array<int, 3>, 3> cyc{{{a, b, c}, {b, c, a}, {c, a, b}}};
        for (const auto& [m, x, y] : cyc) {
          Vec3 cr = fr.grad[x].cross(fr.grad[y]);
          v += 2.0 * (lam2(fr.vol, i, m) * fr.grad[j].dot(cr) -
                      lam2(fr.vol, j, m) * fr.grad[i].dot(cr));
        }
        trip.emplace_back(fr.eids[E], fr.fids[F], v);
      }
    }
  }
  SpMat M(C.n_edges(), C.n_faces());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

/// Weak curl matrix C3[i,j] = int_D w_i . curl w_j. Columns carry the curl,
/// so C3 * d0 = 0 holds to round-off and the Green identity reads
/// C3 - C3^T = T1^T C∂ T1 with the wedge matrix of wedge_pairing().
inline SpMat assemble_weak_curl(const OrientedComplex3& C) {
  SpMat M12 = assemble_edge_face_mass(C);
  return SpMat(M12 * C.d1.cast<double>());
}

/// Curl-curl stiffness K = D1^T M2 D1 (= int curl w_i . curl w_j).
inline SpMat assemble_curl_stiffness(const OrientedComplex3& C) {
  SpMat M2 = assemble_mass(C, 2);
  SpMat D1 = C.d1.cast<double>();
  SpMat K = SpMat(D1.transpose() * M2 * D1);
  return SpMat(0.5 * (K + SpMat(K.transpose())));
}

/// Metric-free symplectic pairing matrix on boundary edge cochains,
/// C∂[a,b] = int_{∂D} w_b ∧ w_a over the outward-oriented surface, so that
/// [omega,eta] = omega^T C∂ eta satisfies the discrete Green identity
/// C3 - C3^T = T1^T C∂ T1. Entries are sums of ±1/6, independent of vertex
/// coordinates.
inline SpMat wedge_pairing(const SurfaceComplex& S) {
  std::vector<Triplet> trip;
  auto eps = [](int a, int b) {
    if (a == b) return 0;
    if ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) return 1;
    return -1;
  };
  auto I2 = [](int a, int b) { return (a == b ? 2.0 : 1.0) / 24.0; };
  for (int f = 0; f < S.n_triangles(); ++f) {
    auto fr = detail::tri_frame(S, f);
    for (int E = 0; E < 3; ++E) {
      auto [i, j] = fr.ledges[E];
      for (int F = 0; F < 3; ++F) {
        auto [k, l] = fr.ledges[F];
        // int w_E ∧ w_F on the stored (outward) orientation
        double wEF = I2(i, k) * eps(j, l) - I2(i, l) * eps(j, k) -
                     I2(j, k) * eps(i, l) + I2(j, l) * eps(i, k);
        trip.emplace_back(fr.eids[F], fr.eids[E], wEF);  // C∂[F,E] = int w_E ∧ w_F
      }
    }
  }
  SpMat W(S.n_edges(), S.n_edges());
  W.setFromTriplets(trip.begin(), trip.end());
  return W;
}

/// Triangle-vertex incidence (unsigned), used by the exact identity
/// d0^T C∂ = 1/3 V^T d1 that makes closed cochains pair to zero with exact
/// ones at round-off level.
inline SpMatI triangle_vertex_incidence(const SurfaceComplex& S) {
  std::vector<TripletI> trip;
  for (int f = 0; f < S.n_triangles(); ++f)
    for (int v : S.btris[f]) trip.emplace_back(f, S.vert_id(v), 1);
  SpMatI V(S.n_triangles(), S.n_vertices());
  V.setFromTriplets(trip.begin(), trip.end());
  return V;
}

}  // namespace hodgecurl

#endif
