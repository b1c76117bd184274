#include "switchbound/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace switchbound {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> affine_family_of(
    const SwitchedSystem& sys) {
  std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> family;
  family.reserve(sys.modes.size());
  for (const Mode& m : sys.modes) family.emplace_back(m.A, m.w);
  return family;
}

}  // namespace

BoundOutcome bound_affine_family(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& family,
    const Eigen::VectorXd& center, const BoundOptions& opts) {
  BoundOutcome out;
  out.center = center;

  auto make_problem = [&](double lambda) {
    return make_invariance_problem(family, center, lambda, opts.psd_floor, opts.x0);
  };

  const auto t0 = std::chrono::steady_clock::now();
  if (opts.fixed_lambda.has_value()) {
    out.lambda_star = *opts.fixed_lambda;
    out.solve = solve_fixed_lambda(make_problem(*opts.fixed_lambda), opts.solver);
    out.trials.push_back({out.lambda_star, out.solve.status, out.solve.objective});
    out.feasible = out.solve.feasible();
  } else {
    const std::vector<double> grid =
        opts.lambda_grid.empty() ? default_lambda_grid() : opts.lambda_grid;
    LineSearchResult ls = line_search_lambda(make_problem, grid, opts.refine, opts.solver);
    out.feasible = ls.feasible;
    out.lambda_star = ls.lambda_star;
    out.solve = std::move(ls.best);
    out.trials = std::move(ls.trials);
  }
  out.solve_seconds = seconds_since(t0);

  if (!out.feasible) return out;

  out.ellipsoid.emplace(out.solve.P, center, 0.0);

  const auto t1 = std::chrono::steady_clock::now();
  std::vector<Mode> modes;
  modes.reserve(family.size());
  for (const auto& [A, b] : family) modes.push_back(Mode::affine(A, b));
  const SwitchedSystem verification_system = SwitchedSystem::create_unchecked(std::move(modes));
  out.verification = verify_invariance(*out.ellipsoid, verification_system, opts.verify_samples,
                                       opts.verify_seed, opts.verify_slack);
  out.verify_seconds = seconds_since(t1);
  return out;
}

BoundOutcome bound_affine(const SwitchedSystem& sys, const SwitchPolicy& policy,
                          const BoundOptions& opts) {
  if (sys.kind != SystemKind::Affine) {
    throw std::invalid_argument("bound_affine: system must be affine");
  }
  const Eigen::VectorXd center = opts.center.has_value()
                                     ? *opts.center
                                     : affine_center_heuristic(sys, policy, opts.centroid_samples);
  if (center.size() != sys.n) throw std::invalid_argument("bound_affine: center dimension");
  return bound_affine_family(affine_family_of(sys), center, opts);
}

BoundOutcome bound_covariance(const SwitchedSystem& sys, const BoundOptions& opts) {
  if (sys.kind != SystemKind::Noisy) {
    throw std::invalid_argument("bound_covariance: system must be noisy");
  }
  const LiftedSystem ls = lift(sys, opts.reduction);
  const Eigen::VectorXd center = opts.center.has_value() ? *opts.center : center_heuristic(ls);
  if (center.size() != ls.d) throw std::invalid_argument("bound_covariance: center dimension");

  std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> family;
  family.reserve(ls.modes.size());
  for (const auto& m : ls.modes) family.emplace_back(m.Acal, m.Qcal);
  return bound_affine_family(family, center, opts);
}

}  // namespace switchbound
