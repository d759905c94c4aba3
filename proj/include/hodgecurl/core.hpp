#ifndef HODGECURL_CORE_HPP
#define HODGECURL_CORE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hodgecurl {

using Vec3 = Eigen::Vector3d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatI = Eigen::SparseMatrix<std::int64_t>;
using Triplet = Eigen::Triplet<double>;
using TripletI = Eigen::Triplet<std::int64_t>;
using Index = std::int64_t;

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonManifoldError : MeshError {
  using MeshError::MeshError;
};
struct DegenerateTetError : MeshError {
  using MeshError::MeshError;
};
struct NotClosedSurfaceError : MeshError {
  using MeshError::MeshError;
};
struct OpenChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularPairingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularPeriodsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegeneratePairingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadPartitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidLagrangianError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Mesh file syntax error; `line` is 1-based.
struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& msg, int line_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

inline double inf_norm(const SpMat& A) {
  Vec rowsum = Vec::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) rowsum[it.row()] += std::abs(it.value());
  return A.rows() ? rowsum.maxCoeff() : 0.0;
}

inline double inf_norm(const Mat& A) {
  return A.size() ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
}

inline std::int64_t max_abs(const SpMatI& A) {
  std::int64_t m = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMatI::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace hodgecurl

#endif
