#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace switchbound {

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

inline double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const Eigen::MatrixXd& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return max_abs(M - M.transpose()) <= tol;
}

// Largest / smallest eigenvalue of a symmetric matrix.
inline double eig_max(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double eig_min(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double spectral_radius(const Eigen::MatrixXd& A) {
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

// Symmetric square-root-like factor L with L*L^T = S. Cholesky when S is
// positive definite, eigendecomposition with negative eigenvalues clamped at
// zero otherwise (tolerance for the clamp is the caller's concern; anything
// below -clamp_tol is rejected).
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& S, double clamp_tol);

}  // namespace switchbound
