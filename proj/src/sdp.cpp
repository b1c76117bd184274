#include "switchbound/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "switchbound/errors.hpp"
#include "switchbound/matrix_utils.hpp"

namespace switchbound {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

// Stacked representation of all blocks (including the synthetic trace bound
// tr(P) >= t, whose linear part is fixed so the normal matrix can be
// factored once per problem).
struct Stacked {
  struct Entry {
    int offset = 0;
    int size = 0;
    ConstraintSense sense = ConstraintSense::NegativeSemidefinite;
  };
  std::vector<Entry> entries;
  Eigen::MatrixXd linear;    // total x d
  Eigen::VectorXd constant;  // total; the trace entry is patched per query
  int trace_row = -1;
  Eigen::LLT<Eigen::MatrixXd> normal;

  explicit Stacked(const LmiProblem& problem) {
    const int d = problem.free_dim();
    int total = 0;
    for (const auto& con : problem.constraints()) total += con.block_size * con.block_size;
    total += 1;  // trace bound

    linear.resize(total, d);
    constant.resize(total);
    int off = 0;
    for (const auto& con : problem.constraints()) {
      const int s2 = con.block_size * con.block_size;
      entries.push_back({off, con.block_size, con.sense});
      linear.middleRows(off, s2) = con.linear;
      constant.segment(off, s2) = con.constant;
      off += s2;
    }
    trace_row = off;
    entries.push_back({off, 1, ConstraintSense::PositiveSemidefinite});
    linear.row(off) = problem.objective().transpose();
    constant[off] = 0.0;  // patched with -t per query

    const Eigen::MatrixXd N = linear.transpose() * linear;
    normal.compute(N);
    if (normal.info() != Eigen::Success) {
      throw SolverFailure("solve_fixed_lambda: constraint normal matrix is rank deficient");
    }
  }

  void set_trace_bound(double t) { constant[trace_row] = -t; }

  // Violation of the true (unshifted) cones at the subspace point p.
  double violation(const Eigen::VectorXd& p) const {
    const Eigen::VectorXd blocks = constant + linear * p;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
      if (e.size == 1) {
        const double v = blocks[e.offset];
        worst = std::max(worst, e.sense == ConstraintSense::NegativeSemidefinite ? v : -v);
        continue;
      }
      const Eigen::MatrixXd M =
          Eigen::Map<const Eigen::MatrixXd>(blocks.data() + e.offset, e.size, e.size);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M), Eigen::EigenvaluesOnly);
      const double v = e.sense == ConstraintSense::NegativeSemidefinite
                           ? es.eigenvalues().maxCoeff()
                           : -es.eigenvalues().minCoeff();
      worst = std::max(worst, v);
    }
    return worst;
  }

  int most_violated(const Eigen::VectorXd& p) const {
    const Eigen::VectorXd blocks = constant + linear * p;
    double worst = -std::numeric_limits<double>::infinity();
    int idx = 0;
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const auto& e = entries[j];
      double v;
      if (e.size == 1) {
        v = blocks[e.offset];
        v = e.sense == ConstraintSense::NegativeSemidefinite ? v : -v;
      } else {
        const Eigen::MatrixXd M =
            Eigen::Map<const Eigen::MatrixXd>(blocks.data() + e.offset, e.size, e.size);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M), Eigen::EigenvaluesOnly);
        v = e.sense == ConstraintSense::NegativeSemidefinite ? es.eigenvalues().maxCoeff()
                                                             : -es.eigenvalues().minCoeff();
      }
      if (v > worst) {
        worst = v;
        idx = static_cast<int>(j);
      }
    }
    return idx;
  }

  // Project a stacked vector onto the product of (margin-shifted) cones.
  void cone_project(const Eigen::VectorXd& in, Eigen::VectorXd& out, double margin) const {
    out.resize(in.size());
    for (const auto& e : entries) {
      if (e.size == 1) {
        const double v = in[e.offset];
        out[e.offset] = e.sense == ConstraintSense::NegativeSemidefinite
                            ? std::min(v, -margin)
                            : std::max(v, margin);
        continue;
      }
      const Eigen::MatrixXd M =
          Eigen::Map<const Eigen::MatrixXd>(in.data() + e.offset, e.size, e.size);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M));
      Eigen::VectorXd ev = es.eigenvalues();
      for (int i = 0; i < ev.size(); ++i) {
        ev[i] = e.sense == ConstraintSense::NegativeSemidefinite ? std::min(ev[i], -margin)
                                                                 : std::max(ev[i], margin);
      }
      const Eigen::MatrixXd proj =
          es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      Eigen::Map<Eigen::MatrixXd>(out.data() + e.offset, e.size, e.size) = proj;
    }
  }

  // Least-squares pull-back of a stacked target onto the affine subspace.
  Eigen::VectorXd subspace_coords(const Eigen::VectorXd& z) const {
    return normal.solve(linear.transpose() * (z - constant));
  }
};

struct QueryOutcome {
  bool feasible = false;
  Eigen::VectorXd p;
  double violation = 0.0;
  long iterations = 0;
};

// One feasibility query: reflect-reflect-average (Douglas-Rachford) between
// the constraint subspace and the shifted cones, declared stalled when the
// best violation stops improving.
QueryOutcome feasibility_query(const Stacked& st, const Eigen::VectorXd& start,
                               const SolveOptions& opts) {
  QueryOutcome out;
  Eigen::VectorXd z = st.constant + st.linear * start;
  Eigen::VectorXd refl, coned;

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_p = start;
  int since_improvement = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd p = st.subspace_coords(z);
    const Eigen::VectorXd on_subspace = st.constant + st.linear * p;

    const double viol = st.violation(p);
    ++out.iterations;
    if (viol <= opts.feasibility_tol) {
      out.feasible = true;
      out.p = p;
      out.violation = viol;
      return out;
    }
    const bool improved =
        !std::isfinite(best) || viol < best - 1e-4 * std::max(std::abs(best), opts.feasibility_tol);
    if (improved) {
      best = viol;
      best_p = p;
      since_improvement = 0;
    } else if (++since_improvement >= opts.stall_window) {
      break;
    }

    refl = 2.0 * on_subspace - z;
    st.cone_project(refl, coned, opts.cone_margin);
    z += coned - on_subspace;
  }
  out.feasible = false;
  out.p = best_p;
  out.violation = best;
  return out;
}

std::vector<ConstraintResidual> fresh_residuals(const LmiProblem& problem,
                                                const Eigen::VectorXd& p) {
  std::vector<ConstraintResidual> res;
  res.reserve(problem.constraints().size());
  for (const auto& con : problem.constraints()) {
    res.push_back({con.name, con.sense, con.residual(p)});
  }
  return res;
}

}  // namespace

SolveResult solve_fixed_lambda(const LmiProblem& problem, const SolveOptions& opts) {
  Stacked st(problem);
  const int q = problem.q();

  SolveResult result;

  // Base feasibility: any point satisfying the matrix constraints.
  st.set_trace_bound(q * problem.psd_floor() * 0.5);  // implied by the floor, never binding
  Eigen::VectorXd start = vech(problem.psd_floor() * Eigen::MatrixXd::Identity(q, q));
  QueryOutcome base = feasibility_query(st, start, opts);
  result.iterations += base.iterations;

  if (!base.feasible) {
    const auto& blocker = problem.constraints()[static_cast<std::size_t>(
        std::min<int>(st.most_violated(base.p),
                      static_cast<int>(problem.constraints().size()) - 1))];
    std::ostringstream os;
    os << "no feasible point found; best max violation " << base.violation
       << " blocked by constraint '" << blocker.name << "'";
    result.diagnostics = os.str();
    result.status = base.iterations >= opts.max_iterations &&
                            base.violation <= 10.0 * opts.feasibility_tol
                        ? SolveStatus::IterationLimit
                        : SolveStatus::Infeasible;
    result.P = unvech(base.p);  // best attempt, for diagnostics only
    result.objective = problem.objective_value(base.p);
    result.residuals = fresh_residuals(problem, base.p);
    return result;
  }

  Eigen::VectorXd p = base.p;
  double trace_lo = problem.objective_value(p);
  result.objective_history.push_back(trace_lo);

  // Expand a trace lower bound until infeasible or capped, then bisect.
  double step = std::max(std::abs(trace_lo), 1.0);
  bool capped = false;
  while (true) {
    const double target = trace_lo + step;
    if (target > opts.objective_cap) {
      capped = true;
      break;
    }
    st.set_trace_bound(target);
    QueryOutcome trial = feasibility_query(st, p, opts);
    result.iterations += trial.iterations;
    if (!trial.feasible) break;
    p = trial.p;
    trace_lo = problem.objective_value(p);
    result.objective_history.push_back(trace_lo);
    step *= 2.0;
  }

  double trace_hi = std::min(trace_lo + step, opts.objective_cap);
  while (trace_hi - trace_lo > opts.stagnation_tol * std::max(1.0, std::abs(trace_lo))) {
    const double mid = 0.5 * (trace_lo + trace_hi);
    st.set_trace_bound(mid);
    QueryOutcome trial = feasibility_query(st, p, opts);
    result.iterations += trial.iterations;
    if (trial.feasible) {
      p = trial.p;
      trace_lo = std::max(trace_lo, problem.objective_value(p));
      result.objective_history.push_back(problem.objective_value(p));
    } else {
      trace_hi = mid;
    }
  }

  result.P = unvech(p);
  result.objective = problem.objective_value(p);
  result.residuals = fresh_residuals(problem, p);
  result.objective_capped = capped;
  result.status = capped ? SolveStatus::Feasible : SolveStatus::Optimal;
  if (capped) {
    result.diagnostics = "objective reached the configured cap; trace appears unbounded";
  }
  return result;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  const int count = 25;
  for (int i = 0; i < count; ++i) {
    const double e = -2.0 + 4.0 * static_cast<double>(i) / (count - 1);
    grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

LineSearchResult line_search_lambda(const std::function<LmiProblem(double)>& make_problem,
                                    const std::vector<double>& grid, bool refine,
                                    const SolveOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("line_search_lambda: empty grid");
  std::vector<double> lambdas = grid;
  std::sort(lambdas.begin(), lambdas.end());
  for (double l : lambdas) {
    if (l <= 0.0) throw std::invalid_argument("line_search_lambda: lambda must be positive");
  }

  LineSearchResult out;
  int best_index = -1;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    SolveResult r = solve_fixed_lambda(make_problem(lambdas[i]), opts);
    if (opts.verbose) {
      std::cerr << "lambda " << lambdas[i] << ": " << to_string(r.status) << ", objective "
                << r.objective << ", " << r.iterations << " iterations\n";
    }
    out.trials.push_back({lambdas[i], r.status, r.feasible() ? r.objective : 0.0});
    if (r.feasible() && (!out.feasible || r.objective > out.best.objective)) {
      out.feasible = true;
      out.lambda_star = lambdas[i];
      out.best = std::move(r);
      best_index = static_cast<int>(i);
    }
  }
  if (!out.feasible) {
    out.best.status = SolveStatus::Infeasible;
    out.best.diagnostics = "all lambda grid points infeasible";
    return out;
  }

  if (refine && lambdas.size() > 1) {
    // Golden-section in log-lambda on the bracketing interval.
    const double lo =
        best_index > 0 ? lambdas[static_cast<std::size_t>(best_index - 1)] : lambdas.front();
    const double hi = best_index + 1 < static_cast<int>(lambdas.size())
                          ? lambdas[static_cast<std::size_t>(best_index + 1)]
                          : lambdas.back();
    double a = std::log(lo), b = std::log(hi);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    int solves = 0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    auto eval = [&](double logl) {
      const double l = std::exp(logl);
      SolveResult r = solve_fixed_lambda(make_problem(l), opts);
      ++solves;
      out.trials.push_back({l, r.status, r.feasible() ? r.objective : 0.0});
      const double score = r.feasible() ? r.objective : -std::numeric_limits<double>::infinity();
      if (r.feasible() && r.objective > out.best.objective) {
        out.lambda_star = l;
        out.best = std::move(r);
      }
      return score;
    };
    double f1 = eval(x1), f2 = eval(x2);
    while (solves < 10) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = eval(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = eval(x1);
      }
    }
  }
  return out;
}

Eigen::VectorXd center_heuristic(const LiftedSystem& ls) {
  if (ls.modes.empty()) throw std::invalid_argument("center_heuristic: no modes");
  double weight_sum = 0.0;
  Eigen::VectorXd center = Eigen::VectorXd::Zero(ls.d);
  for (int i = 0; i < ls.num_modes(); ++i) {
    const double rho = spectral_radius(ls.modes[static_cast<std::size_t>(i)].Acal);
    if (rho >= 1.0) {
      throw std::invalid_argument("center_heuristic: lifted mode " + std::to_string(i) +
                                  " is not Schur stable");
    }
    const double w = 1.0 / (1.0 - rho);
    center += w * lifted_fixed_point(ls, i);
    weight_sum += w;
  }
  return center / weight_sum;
}

Eigen::VectorXd affine_center_heuristic(const SwitchedSystem& sys, const SwitchPolicy& policy,
                                        long samples) {
  if (sys.kind != SystemKind::Affine) {
    throw std::invalid_argument("affine_center_heuristic: system must be affine");
  }
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.n);
  return sample_attractor(sys, x0, samples, default_burn_in(samples), policy).centroid;
}

}  // namespace switchbound
