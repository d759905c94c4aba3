#ifndef HODGECURL_MESHGEN_HPP
#define HODGECURL_MESHGEN_HPP

#include <cmath>

#include "hodgecurl/mesh.hpp"

namespace hodgecurl::meshgen {

struct RawMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
};

namespace detail {

// Kuhn split of a hex given its 8 corner ids in (x,y,z)-bit order; the uniform
// split is face-consistent across a structured grid (also across periodic
// wraps).
inline void kuhn_split(const std::array<int, 8>& ids, std::vector<std::array<int, 4>>& tets) {
  static constexpr std::array<std::array<int, 4>, 6> K{{{0, 1, 3, 7},
                                                        {0, 1, 5, 7},
                                                        {0, 2, 3, 7},
                                                        {0, 2, 6, 7},
                                                        {0, 4, 5, 7},
                                                        {0, 4, 6, 7}}};
  for (const auto& t : K) tets.push_back({ids[t[0]], ids[t[1]], ids[t[2]], ids[t[3]]});
}

// 24-tet split: cones from hex center over face-center fans. Invariant under
// all reflections of the hex, used for mirror-symmetric meshes.
inline void symmetric_split(const std::array<int, 8>& ids, std::vector<Vec3>& verts,
                            std::vector<std::array<int, 4>>& tets) {
  auto centroid = [&](std::initializer_list<int> vs) {
    Vec3 c = Vec3::Zero();
    for (int v : vs) c += verts[v];
    return Vec3(c / static_cast<double>(vs.size()));
  };
  int c = static_cast<int>(verts.size());
  verts.push_back(centroid({ids[0], ids[1], ids[2], ids[3], ids[4], ids[5], ids[6], ids[7]}));
  // faces as corner quads (cyclic)
  static constexpr std::array<std::array<int, 4>, 6> F{{{0, 1, 3, 2},
                                                        {4, 6, 7, 5},
                                                        {0, 4, 5, 1},
                                                        {2, 3, 7, 6},
                                                        {0, 2, 6, 4},
                                                        {1, 5, 7, 3}}};
  for (const auto& q : F) {
    int fc = static_cast<int>(verts.size());
    verts.push_back(centroid({ids[q[0]], ids[q[1]], ids[q[2]], ids[q[3]]}));
    for (int k = 0; k < 4; ++k)
      tets.push_back({c, fc, ids[q[k]], ids[q[(k + 1) % 4]]});
  }
}

}  // namespace detail

/// Structured cube [lo,hi]^3, n^3 hexes, 6 tets each (24 with symmetric=true).
inline RawMesh cube(int n, double lo = -1.0, double hi = 1.0, bool symmetric = false) {
  if (n < 1) throw MeshError("cube: n must be >= 1");
  RawMesh M;
  auto vid = [&](int i, int j, int k) { return (i * (n + 1) + j) * (n + 1) + k; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        double s = (hi - lo) / n;
        M.vertices.emplace_back(lo + s * i, lo + s * j, lo + s * k);
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::array<int, 8> ids;
        for (int b = 0; b < 8; ++b)
          ids[b] = vid(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        if (symmetric)
          detail::symmetric_split(ids, M.vertices, M.tets);
        else
          detail::kuhn_split(ids, M.tets);
      }
  return M;
}

/// Ball of given radius: cube mesh mapped radially, cube shells -> spheres.
/// n is the cube resolution; refine r means n = 4 * 2^r.
inline RawMesh ball(double radius = 1.0, int n = 8, bool symmetric = false) {
  RawMesh M = cube(n, -1.0, 1.0, symmetric);
  for (auto& p : M.vertices) {
    double m = p.cwiseAbs().maxCoeff();
    double r = p.norm();
    if (r > 0) p *= radius * m / r;
  }
  return M;
}

/// Solid torus: square cross-section grid mapped to a disk of radius r, swept
/// nu steps around a major circle of radius R. Boundary has genus 1.
inline RawMesh solid_torus(double R = 2.0, double r = 1.0, int nu = 8, int nv = 8, int nw = 4) {
  if (nu < 3 || nv < 1 || nw < 1) throw MeshError("solid_torus: need nu >= 3, nv,nw >= 1");
  if (r <= 0 || R <= r) throw MeshError("solid_torus: need 0 < r < R");
  RawMesh M;
  auto vid = [&](int iu, int iv, int iw) {
    return ((iu % nu) * (nv + 1) + iv) * (nw + 1) + iw;
  };
  for (int iu = 0; iu < nu; ++iu) {
    double th = 2.0 * M_PI * iu / nu;
    for (int iv = 0; iv <= nv; ++iv)
      for (int iw = 0; iw <= nw; ++iw) {
        double a = -1.0 + 2.0 * iv / nv, b = -1.0 + 2.0 * iw / nw;
        Eigen::Vector2d q(a, b);
        double m = q.cwiseAbs().maxCoeff();
        if (m > 0) q *= m / q.norm();
        q *= r;
        M.vertices.emplace_back((R + q.x()) * std::cos(th), (R + q.x()) * std::sin(th), q.y());
      }
  }
  for (int iu = 0; iu < nu; ++iu)
    for (int iv = 0; iv < nv; ++iv)
      for (int iw = 0; iw < nw; ++iw) {
        std::array<int, 8> ids;
        for (int b = 0; b < 8; ++b)
          ids[b] = vid(iu + (b & 1), iv + ((b >> 1) & 1), iw + ((b >> 2) & 1));
        detail::kuhn_split(ids, M.tets);
      }
  return M;
}

/// Voxel solid on an nx x ny x nz grid with unit spacing scaled by h; keep[v]
/// decides voxel membership. Used by tests to build higher-genus domains.
template <class Keep>
inline RawMesh voxel_solid(int nx, int ny, int nz, double h, Keep keep) {
  RawMesh M;
  std::map<std::array<int, 3>, int> vid;
  auto getv = [&](int i, int j, int k) {
    auto [it, fresh] = vid.emplace(std::array<int, 3>{i, j, k}, static_cast<int>(M.vertices.size()));
    if (fresh) M.vertices.emplace_back(h * i, h * j, h * k);
    return it->second;
  };
  bool any = false;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        if (!keep(i, j, k)) continue;
        any = true;
        std::array<int, 8> ids;
        for (int b = 0; b < 8; ++b)
          ids[b] = getv(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        detail::kuhn_split(ids, M.tets);
      }
  if (!any) throw MeshError("voxel_solid: empty solid");
  return M;
}

/// Plate with two square through-holes: boundary is a closed genus-2 surface.
/// scale multiplies the voxel count in every direction.
inline RawMesh genus2_plate(int scale = 1, double h = 0.5) {
  int s = std::max(1, scale);
  int nx = 7 * s, ny = 3 * s, nz = s;
  auto keep = [s](int i, int j, int k) {
    (void)k;
    bool hole1 = (i >= s && i < 2 * s) && (j >= s && j < 2 * s);
    bool hole2 = (i >= 3 * s && i < 4 * s) && (j >= s && j < 2 * s);
    return !(hole1 || hole2);
  };
  return voxel_solid(nx, ny, nz, h / s, keep);
}

/// Single positively oriented reference tetrahedron.
inline RawMesh single_tet() {
  RawMesh M;
  M.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  M.tets = {{0, 1, 2, 3}};
  return M;
}

inline OrientedComplex3 build(const RawMesh& M) { return build_complex(M.vertices, M.tets); }

}  // namespace hodgecurl::meshgen

#endif
