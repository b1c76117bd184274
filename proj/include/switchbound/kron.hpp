#pragma once

#include <Eigen/Dense>
#include <vector>

#include "switchbound/system.hpp"

namespace switchbound {

// ---------------------------------------------------------------------------
// Vectorization primitives (column-major vec, unscaled lower-triangular vech)
// ---------------------------------------------------------------------------

/// Column-major stacking of M into a vector of length rows*cols.
Eigen::VectorXd vec(const Eigen::MatrixXd& M);

/// Inverse of vec for square matrices. Throws if v.size() != n*n.
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, int n);

/// Half-vectorization: lower-triangular entries, column-major, unscaled.
/// S must be symmetric within `tol` (it is symmetrized on entry).
Eigen::VectorXd vech(const Eigen::MatrixXd& S, double tol = 1e-10);

/// Rebuild the full symmetric matrix from its half-vectorization.
Eigen::MatrixXd unvech(const Eigen::VectorXd& v);

/// n(n+1)/2.
int vech_dim(int n);

/// State dimension n recovered from a vech length; throws if d is not
/// triangular.
int vech_state_dim(int d);

/// Dense Kronecker product A (x) B.
Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Duplication matrix D_n (n^2 x d): D * vech(S) = vec(S) for symmetric S.
/// Built once per dimension and cached.
const Eigen::MatrixXd& duplication_matrix(int n);

/// Elimination matrix L_n (d x n^2): plain selection of the lower triangle,
/// L * vec(S) = vech(S) for symmetric S, and L * D = I_d.
const Eigen::MatrixXd& elimination_matrix(int n);

// ---------------------------------------------------------------------------
// Covariance recursion and its lifting
// ---------------------------------------------------------------------------

/// One covariance step A P A^T + Q, symmetrized to machine precision.
Eigen::MatrixXd cov_step(const Mode& mode, const Eigen::MatrixXd& P);

enum class Reduction { FullVec, SymVech };

/// The covariance recursion written as a switched affine system in vec or
/// vech coordinates: p+ = Acal_i p + Qcal_i.
struct LiftedSystem {
  struct LiftedMode {
    Eigen::MatrixXd Acal;
    Eigen::VectorXd Qcal;
  };
  std::vector<LiftedMode> modes;
  int n = 0;  // original state dimension
  int d = 0;  // lifted dimension: n(n+1)/2 or n^2
  Reduction reduction = Reduction::SymVech;

  int num_modes() const { return static_cast<int>(modes.size()); }
};

/// Lift a noisy switched system. sym-vech: Acal = L (A (x) A) D, Qcal =
/// vech(Q); full-vec: Acal = A (x) A, Qcal = vec(Q). The construction is
/// self-checked against cov_step on probe matrices.
LiftedSystem lift(const SwitchedSystem& sys, Reduction reduction = Reduction::SymVech);

/// Acal_i * p + Qcal_i.
Eigen::VectorXd lifted_step(const LiftedSystem& ls, int i, const Eigen::VectorXd& p);

/// Fixed point (I - Acal_i)^{-1} Qcal_i of the lifted affine map. For a
/// Schur-stable mode this is the solution of the discrete Lyapunov equation
/// P = A P A^T + Q in lifted coordinates.
Eigen::VectorXd lifted_fixed_point(const LiftedSystem& ls, int i);

/// View the lifted system as a plain affine switched system (for invariance
/// verification and bound solving, which operate on (A, b) pairs).
SwitchedSystem as_switched_affine(const LiftedSystem& ls);

}  // namespace switchbound
