#include "switchbound/simulate.hpp"

#include <algorithm>
#include <stdexcept>

namespace switchbound {

long default_burn_in(long total) {
  const long one_percent = total / 100;
  return std::min(std::max(one_percent, 100L), std::max(total - 1, 0L));
}

Trajectory simulate(const SwitchedSystem& sys, const Eigen::VectorXd& x0, long steps,
                    const SwitchPolicy& policy) {
  if (steps < 0) throw std::invalid_argument("simulate: steps must be >= 0");
  if (x0.size() != sys.n) throw std::invalid_argument("simulate: x0 dimension mismatch");

  ModeSelector selector(policy, sys.num_modes());
  GaussianSampler noise(substream_seed(policy.seed, 1));

  Trajectory traj;
  traj.seed = policy.seed;
  traj.points.reserve(static_cast<std::size_t>(steps) + 1);
  traj.mode_sequence.reserve(static_cast<std::size_t>(steps));
  traj.points.push_back(x0);

  Eigen::VectorXd x = x0;
  for (long k = 0; k < steps; ++k) {
    const int i = selector.next();
    const Mode& mode = sys.modes[static_cast<std::size_t>(i)];
    x = (sys.kind == SystemKind::Affine) ? step_affine(mode, x) : step_noisy(mode, x, noise);
    traj.points.push_back(x);
    traj.mode_sequence.push_back(i);
  }
  return traj;
}

AttractorSample sample_attractor(const SwitchedSystem& sys, const Eigen::VectorXd& x0,
                                 long total, long burn_in, const SwitchPolicy& policy) {
  if (total <= burn_in) throw std::invalid_argument("sample_attractor: total must exceed burn_in");

  // `total` counts retained-or-discarded states, so total-1 transitions.
  const Trajectory traj = simulate(sys, x0, total - 1, policy);
  AttractorSample out;
  out.points.assign(traj.points.begin() + burn_in, traj.points.end());

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(sys.n);
  for (const auto& p : out.points) sum += p;
  out.centroid = sum / static_cast<double>(out.points.size());
  return out;
}

}  // namespace switchbound
