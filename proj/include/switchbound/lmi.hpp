#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace switchbound {

enum class ConstraintSense { NegativeSemidefinite, PositiveSemidefinite };

/// One matrix-valued constraint, affine in the free (vech) entries of the
/// unknown shape matrix P. `assemble` is the authoritative definition; the
/// extracted (constant, linear) form is what the solver iterates on.
struct LmiConstraint {
  std::string name;
  ConstraintSense sense = ConstraintSense::NegativeSemidefinite;
  int block_size = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> assemble;

  Eigen::VectorXd constant;  // vec(assemble(0)), length block_size^2
  Eigen::MatrixXd linear;    // d columns: vec(assemble(e_k)) - constant

  /// Signed violation: max eigenvalue for NSD constraints, -(min eigenvalue)
  /// for PSD constraints. <= 0 means satisfied.
  double violation(const Eigen::VectorXd& p) const;

  /// Signed residual in the reporting convention: max eigenvalue for NSD
  /// (should be <= tol), min eigenvalue for PSD (should be >= -tol).
  double residual(const Eigen::VectorXd& p) const;
};

/// maximize trace(P) subject to matrix constraints affine in P and
/// P >= psd_floor * I, over symmetric q x q matrices P.
class LmiProblem {
 public:
  LmiProblem(int q, double psd_floor);

  /// Registers a constraint. The map is probed for affinity in the free
  /// entries of P; a non-affine map throws std::invalid_argument.
  void add_constraint(std::string name, ConstraintSense sense,
                      std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> assemble);

  int q() const { return q_; }
  int free_dim() const { return d_; }
  double psd_floor() const { return psd_floor_; }
  const std::vector<LmiConstraint>& constraints() const { return constraints_; }

  /// Linear objective over vech(P); defaults to trace(P).
  const Eigen::VectorXd& objective() const { return objective_; }
  double objective_value(const Eigen::VectorXd& p) const { return objective_.dot(p); }

 private:
  int q_;
  int d_;
  double psd_floor_;
  Eigen::VectorXd objective_;
  std::vector<LmiConstraint> constraints_;
};

/// Builds the invariance LMI for a switched affine family (A_i, b_i) with a
/// fixed ellipsoid center and S-procedure multiplier: one NSD S-procedure
/// block per mode, the PSD floor P >= eps*I, and optionally the affine
/// membership constraint 1 - (x0-c)^T P (x0-c) >= 0 for an initial point.
LmiProblem make_invariance_problem(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& affine_modes,
    const Eigen::VectorXd& center, double lambda, double psd_floor,
    const std::optional<Eigen::VectorXd>& x0 = std::nullopt);

}  // namespace switchbound
