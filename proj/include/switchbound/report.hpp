#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "switchbound/pipeline.hpp"

namespace switchbound {

/// Output schema of the bound pipeline. verification.violations must be zero
/// for a process exit code of 0.
struct BoundReport {
  Eigen::MatrixXd P;
  Eigen::VectorXd center;
  double lambda_star = 0.0;
  double objective = 0.0;
  std::vector<ConstraintResidual> residuals;

  long verification_samples = 0;
  long verification_violations = 0;
  double verification_worst_value = 0.0;

  double solve_seconds = 0.0;
  double verify_seconds = 0.0;

  std::string tool_version;
  std::string rng_id;
  std::uint64_t policy_seed = 0;
  std::uint64_t verify_seed = 0;

  std::string kind;       // "affine" | "noisy"
  std::string reduction;  // "sym-vech" | "full-vec" (noisy only)

  static BoundReport from_outcome(const BoundOutcome& outcome, const std::string& kind,
                                  const std::string& reduction, std::uint64_t policy_seed,
                                  std::uint64_t verify_seed);

  static BoundReport from_json_text(const std::string& text);
  static BoundReport load(const std::string& path);
  std::string to_json_text(int indent = 2) const;
  void save(const std::string& path) const;

  Ellipsoid ellipsoid() const { return Ellipsoid(P, center, 0.0); }
};

}  // namespace switchbound
