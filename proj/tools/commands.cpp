#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <vector>

#include "switchbound/config.hpp"
#include "switchbound/csv.hpp"
#include "switchbound/errors.hpp"
#include "switchbound/kron.hpp"
#include "switchbound/report.hpp"
#include "switchbound/simulate.hpp"

namespace switchbound::cli {

namespace {

Eigen::VectorXd initial_state(const SystemConfig& cfg, int expected_dim) {
  if (cfg.x0.has_value()) {
    if (cfg.x0->size() != expected_dim) {
      throw std::invalid_argument("x0 has length " + std::to_string(cfg.x0->size()) +
                                  ", expected " + std::to_string(expected_dim));
    }
    return *cfg.x0;
  }
  return Eigen::VectorXd::Zero(expected_dim);
}

void print_warnings(const SwitchedSystem& sys) {
  for (const auto& w : sys.warnings) std::cerr << "warning: " << w << "\n";
}

// Deterministic "fresh" seed for re-verification, distinct from the solve
// seed unless the user pins one.
std::uint64_t fresh_seed(std::uint64_t base) { return substream_seed(base ^ 0xF5E5ULL, 42); }

}  // namespace

int run_simulate(const SimulateArgs& args) {
  try {
    const SystemConfig cfg = SystemConfig::load(args.config_path);
    const SwitchedSystem sys = cfg.to_system();
    print_warnings(sys);
    const SwitchPolicy policy = cfg.to_policy(args.common.seed, args.common.env_seed);

    if (args.burn_in < 0 || args.steps < 0) {
      throw std::invalid_argument("steps and burn-in must be non-negative");
    }
    if (args.burn_in > args.steps) {
      throw std::invalid_argument("burn-in exceeds the number of recorded states");
    }

    std::vector<Eigen::VectorXd> rows;
    std::vector<std::string> header;
    if (args.covariances) {
      if (cfg.kind != "noisy") {
        throw std::invalid_argument("--covariances requires a noisy system");
      }
      // Noise-free covariance recursion in vech coordinates; the switching
      // sequence still comes from the policy.
      const LiftedSystem ls = lift(sys, Reduction::SymVech);
      header = vech_header(sys.n);
      ModeSelector selector(policy, sys.num_modes());
      Eigen::VectorXd p = initial_state(cfg, ls.d);
      rows.push_back(p);
      for (long k = 0; k < args.steps; ++k) {
        p = lifted_step(ls, selector.next(), p);
        rows.push_back(p);
      }
    } else {
      header = state_header(sys.n);
      const Eigen::VectorXd x0 = initial_state(cfg, sys.n);
      const Trajectory traj = simulate(sys, x0, args.steps, policy);
      rows = traj.points;
    }

    rows.erase(rows.begin(), rows.begin() + args.burn_in);
    write_csv_file(args.out_path, header, rows);
    if (args.common.verbose) {
      std::cerr << "wrote " << rows.size() << " rows to " << args.out_path << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kExitError;
  }
}

int run_bound(const BoundArgs& args) {
  try {
    const SystemConfig cfg = SystemConfig::load(args.config_path);
    const SwitchedSystem sys = cfg.to_system();
    print_warnings(sys);
    const SwitchPolicy policy = cfg.to_policy(args.common.seed, args.common.env_seed);

    BoundOptions opts = cfg.to_bound_options();
    opts.verify_samples = args.samples;
    opts.verify_seed = substream_seed(policy.seed, 7);
    opts.reduction = args.no_reduce ? Reduction::FullVec : Reduction::SymVech;
    opts.solver.verbose = args.common.verbose;

    std::string reduction_name;
    if (cfg.kind == "noisy") {
      reduction_name = args.no_reduce ? "full-vec" : "sym-vech";
      // center / x0 are written in vech coordinates; widen them for the
      // unreduced pipeline.
      if (args.no_reduce) {
        const Eigen::MatrixXd& D = duplication_matrix(sys.n);
        if (opts.center.has_value()) opts.center = D * (*opts.center);
        if (opts.x0.has_value()) opts.x0 = D * (*opts.x0);
      }
    }

    const BoundOutcome outcome = cfg.kind == "affine" ? bound_affine(sys, policy, opts)
                                                      : bound_covariance(sys, opts);

    if (!outcome.feasible) {
      std::cerr << "bound: infeasible (" << outcome.solve.diagnostics << ")\n";
      for (const auto& trial : outcome.trials) {
        std::cerr << "  lambda " << trial.lambda << ": " << to_string(trial.status) << "\n";
      }
      return kExitInfeasible;
    }

    const BoundReport report = BoundReport::from_outcome(outcome, cfg.kind, reduction_name,
                                                         policy.seed, opts.verify_seed);
    report.save(args.out_path);

    if (args.common.verbose) {
      std::cerr << "lambda* = " << outcome.lambda_star << ", objective = "
                << outcome.solve.objective << ", verification violations = "
                << outcome.verification.violations << "\n";
    }
    if (outcome.verification.violations > 0) {
      std::cerr << "bound: solved ellipsoid failed invariance sampling ("
                << outcome.verification.violations << " violations, worst value "
                << outcome.verification.worst_value << ")\n";
      return kExitVerificationFailed;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "bound: " << e.what() << "\n";
    return kExitError;
  }
}

int run_verify(const VerifyArgs& args) {
  try {
    const BoundReport report = BoundReport::load(args.report_path);
    const SystemConfig cfg = SystemConfig::load(args.config_path);
    const SwitchedSystem sys = cfg.to_system();
    const Ellipsoid E = report.ellipsoid();

    const bool noisy = cfg.kind == "noisy";
    const bool full_vec = report.reduction == "full-vec";
    const int expected_dim =
        noisy ? (full_vec ? sys.n * sys.n : vech_dim(sys.n)) : sys.n;
    if (E.dim() != expected_dim) {
      throw std::invalid_argument("report dimension " + std::to_string(E.dim()) +
                                  " does not match the config (expected " +
                                  std::to_string(expected_dim) + ")");
    }
    if (report.kind != cfg.kind) {
      throw std::invalid_argument("report kind '" + report.kind + "' != config kind '" +
                                  cfg.kind + "'");
    }

    const std::uint64_t seed =
        args.common.seed.has_value() ? *args.common.seed : fresh_seed(report.policy_seed);

    // Phase 1: containment of a fresh trajectory (post burn-in).
    SwitchPolicy policy = cfg.to_policy(seed, args.common.env_seed);
    policy.seed = seed;
    const long steps = std::max<long>(args.samples, 1000);
    const long burn = default_burn_in(steps);
    long containment_violations = 0;
    double containment_worst = 0.0;

    if (!noisy) {
      const Trajectory traj = simulate(sys, initial_state(cfg, sys.n), steps, policy);
      for (std::size_t k = static_cast<std::size_t>(burn); k < traj.points.size(); ++k) {
        const double v = E.quadratic_form(traj.points[k]);
        containment_worst = std::max(containment_worst, v);
        if (v > 1.0 + 1e-9) ++containment_violations;
      }
    } else {
      const LiftedSystem ls = lift(sys, full_vec ? Reduction::FullVec : Reduction::SymVech);
      ModeSelector selector(policy, sys.num_modes());
      Eigen::VectorXd p = noisy && cfg.x0.has_value() && full_vec
                              ? Eigen::VectorXd(duplication_matrix(sys.n) * (*cfg.x0))
                              : initial_state(cfg, ls.d);
      for (long k = 0; k <= steps; ++k) {
        if (k >= burn) {
          const double v = E.quadratic_form(p);
          containment_worst = std::max(containment_worst, v);
          if (v > 1.0 + 1e-9) ++containment_violations;
        }
        if (k < steps) p = lifted_step(ls, selector.next(), p);
      }
    }

    // Phase 2: boundary invariance sampling.
    SwitchedSystem family = noisy ? as_switched_affine(lift(sys, full_vec ? Reduction::FullVec
                                                                          : Reduction::SymVech))
                                  : sys;
    const InvarianceReport inv =
        verify_invariance(E, family, args.samples, substream_seed(seed, 11));

    if (args.common.verbose) {
      std::cerr << "containment violations: " << containment_violations << " (worst "
                << containment_worst << "), invariance violations: " << inv.violations
                << " (worst " << inv.worst_value << ")\n";
    }
    if (containment_violations > 0 || inv.violations > 0) {
      std::cerr << "verify: FAILED (containment " << containment_violations << ", invariance "
                << inv.violations << ")\n";
      return kExitVerificationFailed;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kExitError;
  }
}

int run_ellipse_points(const EllipsePointsArgs& args) {
  try {
    const BoundReport report = BoundReport::load(args.report_path);
    const Ellipsoid E = report.ellipsoid();
    const int q = E.dim();
    if (args.resolution < 1) throw std::invalid_argument("resolution must be >= 1");

    std::vector<Eigen::VectorXd> rows;
    std::vector<std::string> header;

    if (q == 2) {
      const Eigen::MatrixXd S = E.inverse_sqrt_shape();
      header = {"x1", "x2"};
      for (int k = 0; k < args.resolution; ++k) {
        const double t = 2.0 * std::numbers::pi * k / args.resolution;
        Eigen::Vector2d u(std::cos(t), std::sin(t));
        rows.push_back(E.center() + S * u);
      }
    } else if (q == 3) {
      const Eigen::MatrixXd S = E.inverse_sqrt_shape();
      header = {"x1", "x2", "x3"};
      for (int a = 0; a < args.resolution; ++a) {
        const double theta = std::numbers::pi * a / std::max(1, args.resolution - 1);
        for (int b = 0; b < args.resolution; ++b) {
          const double phi = 2.0 * std::numbers::pi * b / args.resolution;
          Eigen::Vector3d u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta));
          rows.push_back(E.center() + S * u);
        }
      }
    } else {
      // Too many dimensions to mesh; emit the principal-axes summary.
      Eigen::VectorXd lengths;
      Eigen::MatrixXd dirs;
      E.principal_axes(lengths, dirs);
      header.push_back("semi_axis_length");
      for (int i = 1; i <= q; ++i) header.push_back("v" + std::to_string(i));
      for (int a = 0; a < q; ++a) {
        Eigen::VectorXd row(q + 1);
        row[0] = lengths[a];
        row.tail(q) = dirs.col(a);
        rows.push_back(row);
      }
    }

    write_csv_file(args.out_path, header, rows);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "ellipse-points: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace switchbound::cli
