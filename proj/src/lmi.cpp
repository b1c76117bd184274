#include "switchbound/lmi.hpp"

#include <stdexcept>

#include "switchbound/ellipsoid.hpp"
#include "switchbound/kron.hpp"
#include "switchbound/matrix_utils.hpp"

namespace switchbound {

double LmiConstraint::violation(const Eigen::VectorXd& p) const {
  const Eigen::MatrixXd M = unvec(constant + linear * p, block_size);
  return sense == ConstraintSense::NegativeSemidefinite ? eig_max(M) : -eig_min(M);
}

double LmiConstraint::residual(const Eigen::VectorXd& p) const {
  const Eigen::MatrixXd M = assemble(p);  // fresh assembly, not the cached linearization
  return sense == ConstraintSense::NegativeSemidefinite ? eig_max(M) : eig_min(M);
}

LmiProblem::LmiProblem(int q, double psd_floor) : q_(q), d_(vech_dim(q)), psd_floor_(psd_floor) {
  if (q < 1) throw std::invalid_argument("LmiProblem: dimension must be >= 1");
  if (psd_floor < 0.0) throw std::invalid_argument("LmiProblem: psd_floor must be >= 0");
  // trace(P) as a functional of vech(P): picks the diagonal entries.
  objective_ = Eigen::VectorXd::Zero(d_);
  int k = 0;
  for (int j = 0; j < q; ++j) {
    for (int i = j; i < q; ++i) {
      if (i == j) objective_[k] = 1.0;
      ++k;
    }
  }
}

void LmiProblem::add_constraint(std::string name, ConstraintSense sense,
                                std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> assemble) {
  LmiConstraint con;
  con.name = std::move(name);
  con.sense = sense;
  con.assemble = std::move(assemble);

  const Eigen::MatrixXd at_zero = con.assemble(Eigen::VectorXd::Zero(d_));
  if (at_zero.rows() != at_zero.cols()) {
    throw std::invalid_argument("LmiProblem: constraint block is not square");
  }
  if (!is_symmetric(at_zero, 1e-9 * std::max(1.0, max_abs(at_zero)))) {
    throw std::invalid_argument("LmiProblem: constraint block is not symmetric");
  }
  con.block_size = static_cast<int>(at_zero.rows());
  con.constant = vec(at_zero);
  con.linear.resize(at_zero.size(), d_);
  for (int k = 0; k < d_; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d_);
    e[k] = 1.0;
    con.linear.col(k) = vec(con.assemble(e)) - con.constant;
  }

  // Affinity probe: an affine map satisfies f(a+b) - f(a) - f(b) + f(0) = 0.
  // Two fixed non-trivial directions catch quadratic terms in P.
  Eigen::VectorXd pa(d_), pb(d_);
  for (int k = 0; k < d_; ++k) {
    pa[k] = 0.5 + 0.25 * static_cast<double>(k % 3);
    pb[k] = -0.75 + 0.5 * static_cast<double>(k % 2);
  }
  const Eigen::MatrixXd probe = con.assemble(pa + pb) - con.assemble(pa) - con.assemble(pb) +
                                unvec(con.constant, con.block_size);
  const double scale = std::max(1.0, max_abs(con.assemble(pa)));
  if (max_abs(probe) > 1e-8 * scale) {
    throw std::invalid_argument("LmiProblem: constraint '" + con.name +
                                "' is not affine in the free entries of P");
  }
  constraints_.push_back(std::move(con));
}

LmiProblem make_invariance_problem(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& affine_modes,
    const Eigen::VectorXd& center, double lambda, double psd_floor,
    const std::optional<Eigen::VectorXd>& x0) {
  if (affine_modes.empty()) throw std::invalid_argument("make_invariance_problem: no modes");
  const int q = static_cast<int>(center.size());

  LmiProblem problem(q, psd_floor);
  for (std::size_t i = 0; i < affine_modes.size(); ++i) {
    const Eigen::MatrixXd& A = affine_modes[i].first;
    const Eigen::VectorXd& b = affine_modes[i].second;
    if (A.rows() != q || A.cols() != q || b.size() != q) {
      throw std::invalid_argument("make_invariance_problem: mode dimension mismatch");
    }
    problem.add_constraint(
        "sproc_mode_" + std::to_string(i), ConstraintSense::NegativeSemidefinite,
        [A, b, center, lambda](const Eigen::VectorXd& p) {
          return s_proc_block_matrix(A, b, unvech(p), center, lambda);
        });
  }

  problem.add_constraint("psd_floor", ConstraintSense::PositiveSemidefinite,
                         [q, psd_floor](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
                           return unvech(p) - psd_floor * Eigen::MatrixXd::Identity(q, q);
                         });

  if (x0.has_value()) {
    if (x0->size() != q) {
      throw std::invalid_argument("make_invariance_problem: x0 dimension mismatch");
    }
    const Eigen::VectorXd v = *x0 - center;
    problem.add_constraint("x0_membership", ConstraintSense::PositiveSemidefinite,
                           [v](const Eigen::VectorXd& p) {
                             Eigen::MatrixXd M(1, 1);
                             M(0, 0) = 1.0 - v.dot(unvech(p) * v);
                             return M;
                           });
  }
  return problem;
}

}  // namespace switchbound
