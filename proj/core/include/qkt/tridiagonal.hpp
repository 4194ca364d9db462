#pragma once

#include <Eigen/Dense>

namespace qkt {

/// Spectral decomposition of a real symmetric tridiagonal matrix.
struct TridiagonalEigen {
    Eigen::VectorXd eigenvalues;   ///< ascending
    Eigen::MatrixXd eigenvectors;  ///< orthonormal, column k pairs with eigenvalue k
};

/// Full eigendecomposition of the symmetric tridiagonal matrix with main
/// diagonal `diag` and off-diagonal `offdiag` (size diag.size() - 1).
///
/// Implicit-shift QL with Wilkinson-type shift, rotations accumulated into
/// the eigenvector matrix; deterministic, no external solver. Iteration
/// budget is 50 * n; exceeding it throws NumericalError.
///
/// Throws std::invalid_argument on empty input or mismatched sizes.
TridiagonalEigen eig_symmetric_tridiagonal(const Eigen::VectorXd& diag,
                                           const Eigen::VectorXd& offdiag);

} // namespace qkt
