#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "switchbound/kron.hpp"
#include "switchbound/lmi.hpp"
#include "switchbound/simulate.hpp"
#include "switchbound/system.hpp"

namespace switchbound {

struct SolveOptions {
  int max_iterations = 30000;     // projection iterations per feasibility query
  double feasibility_tol = 1e-9;  // max constraint eigenvalue at acceptance
  double stagnation_tol = 1e-3;   // relative objective gap closing the bisection
  double cone_margin = 1e-7;      // shift applied to the cones while solving
  double objective_cap = 1e8;     // trace ceiling for unbounded problems
  int stall_window = 3000;        // no-improvement window before giving up a query
  bool verbose = false;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, IterationLimit };

std::string to_string(SolveStatus status);

struct ConstraintResidual {
  std::string name;
  ConstraintSense sense = ConstraintSense::NegativeSemidefinite;
  // Max eigenvalue for NSD constraints (must be <= tol), min eigenvalue for
  // PSD constraints (must be >= -tol).
  double value = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::MatrixXd P;  // best shape matrix found (empty when none)
  double objective = 0.0;
  std::vector<ConstraintResidual> residuals;
  std::vector<double> objective_history;  // non-decreasing feasible traces
  long iterations = 0;
  bool objective_capped = false;
  std::string diagnostics;

  bool feasible() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
};

/// Maximize trace(P) for a fixed S-procedure multiplier by bisecting a trace
/// lower bound over projection-based feasibility queries (alternating
/// projections between the affine constraint subspace and the product of
/// semidefinite cones, with reflections).
SolveResult solve_fixed_lambda(const LmiProblem& problem, const SolveOptions& opts = {});

struct LambdaTrial {
  double lambda = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
};

struct LineSearchResult {
  bool feasible = false;
  double lambda_star = 0.0;
  SolveResult best;
  std::vector<LambdaTrial> trials;
};

/// Default grid: 25 points log-spaced in [1e-2, 1e2].
std::vector<double> default_lambda_grid();

/// Solve every grid point and keep the feasible lambda of maximum objective
/// (ties toward smaller lambda). With `refine`, golden-section refinement in
/// log-lambda on the bracketing interval, at most 10 extra solves.
LineSearchResult line_search_lambda(const std::function<LmiProblem(double)>& make_problem,
                                    const std::vector<double>& grid, bool refine,
                                    const SolveOptions& opts = {});

/// Weighted average of the lifted fixed points, weights proportional to
/// 1/(1 - rho(Acal_i)). Throws std::invalid_argument on a non-stable mode.
Eigen::VectorXd center_heuristic(const LiftedSystem& ls);

/// Centroid of the explored states (attractor sample started at the origin).
Eigen::VectorXd affine_center_heuristic(const SwitchedSystem& sys, const SwitchPolicy& policy,
                                        long samples);

}  // namespace switchbound
