#include "switchbound/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "switchbound/matrix_utils.hpp"
#include "switchbound/rng.hpp"

namespace switchbound {

Ellipsoid::Ellipsoid(Eigen::MatrixXd P, Eigen::VectorXd center, double psd_floor)
    : P_(std::move(P)), center_(std::move(center)) {
  if (P_.rows() != P_.cols()) throw std::invalid_argument("Ellipsoid: P must be square");
  if (center_.size() != P_.rows()) throw std::invalid_argument("Ellipsoid: center dimension");
  if (!is_symmetric(P_, 1e-12 * std::max(1.0, max_abs(P_)))) {
    throw std::invalid_argument("Ellipsoid: P must be symmetric");
  }
  P_ = symmetrize(P_);
  if (eig_min(P_) < psd_floor) {
    throw std::invalid_argument("Ellipsoid: P is not positive definite (min eigenvalue below floor)");
  }
}

double Ellipsoid::quadratic_form(const Eigen::VectorXd& x) const {
  if (x.size() != center_.size()) throw std::invalid_argument("quadratic_form: dimension");
  const Eigen::VectorXd v = x - center_;
  return v.dot(P_ * v);
}

bool Ellipsoid::contains(const Eigen::VectorXd& x, double slack) const {
  return quadratic_form(x) <= 1.0 + slack;
}

Eigen::MatrixXd Ellipsoid::inverse_sqrt_shape() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P_);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

void Ellipsoid::principal_axes(Eigen::VectorXd& lengths, Eigen::MatrixXd& directions) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P_);
  // Ascending eigenvalues means descending semi-axis lengths already.
  lengths = es.eigenvalues().cwiseSqrt().cwiseInverse();
  directions = es.eigenvectors();
}

Eigen::MatrixXd s_proc_block_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                    const Eigen::MatrixXd& P, const Eigen::VectorXd& c,
                                    double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("s_proc_block: lambda must be positive");
  const Eigen::Index q = A.rows();
  if (A.cols() != q || b.size() != q || P.rows() != q || P.cols() != q || c.size() != q) {
    throw std::invalid_argument("s_proc_block: dimension mismatch");
  }
  const double lp1 = 1.0 + lambda;
  const Eigen::VectorXd r = b - c;

  Eigen::MatrixXd M(q + 1, q + 1);
  M.topLeftCorner(q, q) = symmetrize(lp1 * A.transpose() * P * A) - lambda * symmetrize(P);
  const Eigen::VectorXd corner = lp1 * A.transpose() * P * r + lambda * P * c;
  M.topRightCorner(q, 1) = corner;
  M.bottomLeftCorner(1, q) = corner.transpose();
  M(q, q) = lp1 * r.dot(P * r) - lambda * c.dot(P * c) - 1.0;
  return M;
}

SProcBlock s_proc_block(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Ellipsoid& E,
                        double lambda, int mode_index) {
  SProcBlock blk;
  blk.M = s_proc_block_matrix(A, b, E.P(), E.center(), lambda);
  blk.mode_index = mode_index;
  blk.lambda = lambda;
  return blk;
}

Eigen::MatrixXd initial_condition_block(const Ellipsoid& E, const Eigen::VectorXd& x0) {
  const Eigen::Index q = E.dim();
  if (x0.size() != q) throw std::invalid_argument("initial_condition_block: dimension");
  const Eigen::VectorXd v = x0 - E.center();
  Eigen::MatrixXd M(q + 1, q + 1);
  M(0, 0) = 1.0;
  M.block(0, 1, 1, q) = v.transpose();
  M.block(1, 0, q, 1) = v;
  M.block(1, 1, q, q) = symmetrize(E.P().llt().solve(Eigen::MatrixXd::Identity(q, q)));
  return M;
}

namespace {

struct BatchStats {
  long violations = 0;
  double worst = 0.0;
};

BatchStats invariance_batch(const Ellipsoid& E, const SwitchedSystem& sys,
                            const Eigen::MatrixXd& shape_sqrt_inv, long boundary, long interior,
                            std::uint64_t seed, double slack) {
  GaussianSampler gauss(seed);
  Xoshiro256StarStar& uni = gauss.uniform_source();
  BatchStats stats;
  const int q = E.dim();

  auto check_point = [&](const Eigen::VectorXd& x) {
    for (const Mode& m : sys.modes) {
      const double val = E.quadratic_form(m.A * x + m.w);
      stats.worst = std::max(stats.worst, val);
      if (val > 1.0 + slack) ++stats.violations;
    }
  };

  for (long s = 0; s < boundary + interior; ++s) {
    Eigen::VectorXd u = gauss.vector(q);
    const double norm = u.norm();
    if (norm == 0.0) continue;
    u /= norm;
    // Boundary shell: quadratic form uniform in [0.99, 1]; interior: uniform
    // in (0, 1).
    const double level = s < boundary ? uni.uniform(0.99, 1.0) : uni.uniform01();
    const Eigen::VectorXd x = E.center() + std::sqrt(level) * (shape_sqrt_inv * u);
    check_point(x);
  }
  return stats;
}

}  // namespace

InvarianceReport verify_invariance(const Ellipsoid& E, const SwitchedSystem& sys,
                                   long n_samples, std::uint64_t seed, double slack) {
  if (sys.kind != SystemKind::Affine) {
    throw std::invalid_argument("verify_invariance: system must be affine");
  }
  if (sys.n != E.dim()) throw std::invalid_argument("verify_invariance: dimension mismatch");

  const Eigen::MatrixXd shape_sqrt_inv = E.inverse_sqrt_shape();

  InvarianceReport report;
  report.boundary_samples = n_samples;
  report.interior_samples = n_samples;
  report.slack = slack;

  // Deterministic per-batch seeds; batches merge in fixed order, so the
  // result does not depend on scheduling.
  const long batch = 2048;
  const long total = 2 * n_samples;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<BatchStats>> futures;

  long boundary_left = n_samples;
  long interior_left = n_samples;
  std::uint64_t batch_index = 0;
  while (boundary_left + interior_left > 0) {
    const long nb = std::min(boundary_left, batch);
    const long ni = std::min(interior_left, batch - nb);
    boundary_left -= nb;
    interior_left -= ni;
    const std::uint64_t bseed = substream_seed(seed, 100 + batch_index++);
    if (hw > 1 && total > 4 * batch) {
      futures.push_back(std::async(std::launch::async, invariance_batch, std::cref(E),
                                   std::cref(sys), std::cref(shape_sqrt_inv), nb, ni, bseed,
                                   slack));
    } else {
      std::promise<BatchStats> p;
      p.set_value(invariance_batch(E, sys, shape_sqrt_inv, nb, ni, bseed, slack));
      futures.push_back(p.get_future());
    }
  }
  for (auto& f : futures) {
    const BatchStats s = f.get();
    report.violations += s.violations;
    report.worst_value = std::max(report.worst_value, s.worst);
  }
  return report;
}

}  // namespace switchbound
