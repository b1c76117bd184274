#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "switchbound/system.hpp"

namespace switchbound {

/// {x : (x - center)^T P (x - center) <= 1} with P symmetric positive
/// definite.
class Ellipsoid {
 public:
  Ellipsoid(Eigen::MatrixXd P, Eigen::VectorXd center, double psd_floor = 1e-9);

  const Eigen::MatrixXd& P() const { return P_; }
  const Eigen::VectorXd& center() const { return center_; }
  int dim() const { return static_cast<int>(center_.size()); }

  /// V(x) = (x - c)^T P (x - c).
  double quadratic_form(const Eigen::VectorXd& x) const;

  /// V(x) <= 1 + slack.
  bool contains(const Eigen::VectorXd& x, double slack = 1e-9) const;

  /// P^{-1/2}; maps the unit sphere onto the ellipsoid boundary.
  Eigen::MatrixXd inverse_sqrt_shape() const;

  /// Semi-axis lengths 1/sqrt(eig) in descending length order, paired with
  /// the axis directions (columns).
  void principal_axes(Eigen::VectorXd& lengths, Eigen::MatrixXd& directions) const;

 private:
  Eigen::MatrixXd P_;
  Eigen::VectorXd center_;
};

/// One S-procedure matrix inequality block for a mode of a switched affine
/// system: negative semidefiniteness of M certifies that the mode maps the
/// ellipsoid into itself whenever all modes' blocks are NSD.
struct SProcBlock {
  Eigen::MatrixXd M;
  int mode_index = -1;
  double lambda = 0.0;
};

/// Raw block assembly from the shape matrix P (not required to be PD here:
/// the SDP path evaluates the same expression at intermediate iterates).
///
///   [ (1+l) A^T P A - l P              (1+l) A^T P (b-c) + l P c          ]
///   [ sym.                             (1+l)(b-c)^T P (b-c) - l c^T P c - 1 ]
Eigen::MatrixXd s_proc_block_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                    const Eigen::MatrixXd& P, const Eigen::VectorXd& c,
                                    double lambda);

SProcBlock s_proc_block(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Ellipsoid& E,
                        double lambda, int mode_index = -1);

/// Membership block for the initial condition:
///   [ 1        (x0-c)^T ]
///   [ x0-c     P^{-1}   ]
/// PSD of this block is equivalent to contains(E, x0) by the Schur
/// complement: P^{-1} - v v^T >= 0 iff v^T P v <= 1.
Eigen::MatrixXd initial_condition_block(const Ellipsoid& E, const Eigen::VectorXd& x0);

struct InvarianceReport {
  long boundary_samples = 0;
  long interior_samples = 0;
  long violations = 0;
  double worst_value = 0.0;  // max quadratic form observed over all images
  double slack = 0.0;
  bool pass() const { return violations == 0; }
};

/// Sample n_samples points on the boundary shell (quadratic form in
/// [0.99, 1]) and n_samples interior points, push each through every mode,
/// and count images that land outside the ellipsoid beyond `slack`.
/// The system must be affine (lifted noisy systems are affine in vech
/// coordinates and use this same path).
InvarianceReport verify_invariance(const Ellipsoid& E, const SwitchedSystem& sys,
                                   long n_samples, std::uint64_t seed, double slack = 1e-8);

}  // namespace switchbound
