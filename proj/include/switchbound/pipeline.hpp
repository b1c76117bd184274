#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "switchbound/ellipsoid.hpp"
#include "switchbound/kron.hpp"
#include "switchbound/sdp.hpp"
#include "switchbound/system.hpp"

namespace switchbound {

struct BoundOptions {
  std::optional<double> fixed_lambda;       // skip the line search when set
  std::vector<double> lambda_grid;          // empty -> default grid
  bool refine = true;
  double psd_floor = 1e-6;
  SolveOptions solver;
  std::optional<Eigen::VectorXd> center;    // overrides the heuristics
  std::optional<Eigen::VectorXd> x0;        // initial-condition membership
  Reduction reduction = Reduction::SymVech; // noisy pipeline only
  long centroid_samples = 100000;           // affine center heuristic
  long verify_samples = 10000;
  std::uint64_t verify_seed = 0x5eedULL;
  double verify_slack = 1e-8;
};

struct BoundOutcome {
  bool feasible = false;
  std::optional<Ellipsoid> ellipsoid;
  Eigen::VectorXd center;
  double lambda_star = 0.0;
  SolveResult solve;
  std::vector<LambdaTrial> trials;
  InvarianceReport verification;
  double solve_seconds = 0.0;
  double verify_seconds = 0.0;
};

/// Invariant-ellipsoid bound for a switched affine system (the state-space
/// pipeline). The center defaults to the simulated attractor centroid.
BoundOutcome bound_affine(const SwitchedSystem& sys, const SwitchPolicy& policy,
                          const BoundOptions& opts);

/// Covariance bound for a noisy switched system: lift to vech coordinates,
/// choose the center by the weighted fixed-point heuristic, solve the lifted
/// inequalities, and verify invariance in the lifted space.
BoundOutcome bound_covariance(const SwitchedSystem& sys, const BoundOptions& opts);

/// Shared tail of both pipelines: solve (fixed lambda or line search) over
/// the affine family, then sample-verify the winning ellipsoid.
BoundOutcome bound_affine_family(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& family,
    const Eigen::VectorXd& center, const BoundOptions& opts);

}  // namespace switchbound
