#ifndef HODGECURL_TESTS_SUPPORT_HPP
#define HODGECURL_TESTS_SUPPORT_HPP

// Independent oracles used by the tests: numerical quadrature of Whitney
// wedge/curl pairings that never touches the library's local formulas, the
// tan x = x root by bisection, and convenience mesh builders.

#include <hodgecurl/hodgecurl.hpp>

#include <random>

namespace oracle {

using hodgecurl::Mat;
using hodgecurl::SpMat;
using hodgecurl::Vec;
using hodgecurl::Vec3;

/// Midpoint-subdivision quadrature of a function over a triangle (p0,p1,p2).
/// Exact enough for the quadratic integrands here at depth 6.
template <class F>
double triangle_quadrature(const Vec3& p0, const Vec3& p1, const Vec3& p2, F f, int depth = 6) {
  struct Tri {
    Vec3 a, b, c;
  };
  std::vector<Tri> tris{{p0, p1, p2}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      Vec3 ab = 0.5 * (t.a + t.b), bc = 0.5 * (t.b + t.c), ca = 0.5 * (t.c + t.a);
      next.push_back({t.a, ab, ca});
      next.push_back({ab, t.b, bc});
      next.push_back({ca, bc, t.c});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  double total = 0;
  for (const auto& t : tris) {
    Vec3 centroid = (t.a + t.b + t.c) / 3.0;
    double area = 0.5 * (t.b - t.a).cross(t.c - t.a).norm();
    total += area * f(centroid);
  }
  return total;
}

/// Barycentric coordinates of x in triangle (p0,p1,p2), in-plane.
inline Vec3 barycentric(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& x) {
  Vec3 n = (p1 - p0).cross(p2 - p0);
  double a2 = n.squaredNorm();
  double l1 = (x - p0).cross(p2 - p0).dot(n) / a2;
  double l2 = (p1 - p0).cross(x - p0).dot(n) / a2;
  return Vec3(1.0 - l1 - l2, l1, l2);
}

/// Euclidean-proxy value of the volume Whitney 1-form of the tet edge
/// (va -> vb) at a point x inside tet t.
inline Vec3 volume_whitney1(const hodgecurl::OrientedComplex3& C, int t, int va, int vb,
                            const Vec3& x) {
  const auto& T = C.tets[t];
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i) {
    M(i, 0) = C.vertices[T[i]].x();
    M(i, 1) = C.vertices[T[i]].y();
    M(i, 2) = C.vertices[T[i]].z();
    M(i, 3) = 1.0;
  }
  Eigen::Matrix4d Minv = M.inverse();
  auto lam = [&](int local) {
    return Minv(0, local) * x.x() + Minv(1, local) * x.y() + Minv(2, local) * x.z() +
           Minv(3, local);
  };
  auto grad = [&](int local) { return Vec3(Minv(0, local), Minv(1, local), Minv(2, local)); };
  int la = -1, lb = -1;
  for (int i = 0; i < 4; ++i) {
    if (T[i] == va) la = i;
    if (T[i] == vb) lb = i;
  }
  return lam(la) * grad(lb) - lam(lb) * grad(la);
}

/// Boundary wedge matrix by brute-force quadrature of (w_a x w_b) . n over
/// every boundary triangle, with the global Whitney fields evaluated from the
/// owning tet. Returns the matrix with W[a,b] = ∮ (w_b x w_a) . n dS, the
/// library's C∂ convention.
inline Mat wedge_by_quadrature(const hodgecurl::OrientedComplex3& C,
                               const hodgecurl::SurfaceComplex& S, int depth = 5) {
  const int nbe = S.n_edges();
  Mat W = Mat::Zero(nbe, nbe);
  // owning tet per boundary face
  for (int f = 0; f < S.n_triangles(); ++f) {
    const auto& tri = S.btris[f];
    int tet = -1;
    for (int t = 0; t < C.n_tets() && tet < 0; ++t) {
      int hit = 0;
      for (int v : tri)
        for (int tv : C.tets[t])
          if (tv == v) ++hit;
      if (hit == 3) {
        // face of this tet?
        std::array<int, 3> sorted{tri[0], tri[1], tri[2]};
        std::sort(sorted.begin(), sorted.end());
        if (C.face_id(sorted) >= 0) tet = t;
      }
    }
    Vec3 p0 = C.vertices[tri[0]], p1 = C.vertices[tri[1]], p2 = C.vertices[tri[2]];
    Vec3 n = (p1 - p0).cross(p2 - p0).normalized();  // outward by construction
    std::array<std::array<int, 2>, 3> edges{{{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[0], tri[2]}}};
    for (auto [ua, va] : edges) {
      int a = S.edge_id(ua, va);
      int sa = ua < va ? 1 : -1;
      if (ua > va) std::swap(ua, va);
      for (auto [ub, vb] : edges) {
        int b = S.edge_id(ub, vb);
        int sb = ub < vb ? 1 : -1;
        if (ub > vb) std::swap(ub, vb);
        double val = triangle_quadrature(
            p0, p1, p2,
            [&](const Vec3& x) {
              Vec3 wa = volume_whitney1(C, tet, ua, va, x);
              Vec3 wb = volume_whitney1(C, tet, ub, vb, x);
              return wb.cross(wa).dot(n);  // C∂[a,b] = int w_b ∧ w_a
            },
            depth);
        W(a, b) += sa * sb * val;
      }
    }
  }
  return W;
}

/// Smallest positive root of tan x = x (in (pi, 3pi/2)) by bisection on
/// f(x) = sin x - x cos x, independent of any library code.
inline double tan_x_equals_x_root(double tol = 1e-12) {
  double lo = M_PI + 1e-9, hi = 1.5 * M_PI - 1e-9;
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == (flo > 0)) {
      lo = mid;
      flo = f(mid);
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<std::vector<hodgecurl::exact::BigInt>> to_bigint_rows(const hodgecurl::SpMatI& A) {
  std::vector<std::vector<hodgecurl::exact::BigInt>> M(
      A.rows(), std::vector<hodgecurl::exact::BigInt>(A.cols(), 0));
  for (int k = 0; k < A.outerSize(); ++k)
    for (hodgecurl::SpMatI::InnerIterator it(A, k); it; ++it)
      M[it.row()][it.col()] = static_cast<long long>(it.value());
  return M;
}

}  // namespace oracle

#endif
