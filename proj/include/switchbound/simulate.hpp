#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "switchbound/system.hpp"

namespace switchbound {

/// A simulated state history. points has steps+1 entries (x0 included);
/// mode_sequence has one entry per transition.
struct Trajectory {
  std::vector<Eigen::VectorXd> points;
  std::vector<int> mode_sequence;
  std::uint64_t seed = 0;
};

struct AttractorSample {
  std::vector<Eigen::VectorXd> points;  // post burn-in states
  Eigen::VectorXd centroid;             // arithmetic mean of the retained points
};

/// Default burn-in: 1% of the total sample count, at least 100 (but never
/// more than total-1 so at least one point is retained).
long default_burn_in(long total);

/// Iterate the switched system for `steps` transitions from x0. The same
/// (sys, x0, steps, policy) always produces an identical trajectory; the
/// switching stream and the noise stream are independent substreams of
/// policy.seed.
Trajectory simulate(const SwitchedSystem& sys, const Eigen::VectorXd& x0, long steps,
                    const SwitchPolicy& policy);

/// Simulate `total` transitions from x0 and discard the first `burn_in`
/// states. Requires total > burn_in.
AttractorSample sample_attractor(const SwitchedSystem& sys, const Eigen::VectorXd& x0,
                                 long total, long burn_in, const SwitchPolicy& policy);

}  // namespace switchbound
