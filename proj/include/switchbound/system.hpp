#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "switchbound/rng.hpp"

namespace switchbound {

enum class SystemKind { Affine, Noisy };

// Tolerances used when validating system data loaded from files.
inline constexpr double kPsdTol = 1e-12;       // eigenvalue floor for noise covariances
inline constexpr double kStabilityTol = 1e-9;  // rho(A) < 1 - kStabilityTol
inline constexpr double kProbabilityTol = 1e-12;

/// One branch of a switched system: x+ = A x + w (affine kind) or
/// x+ = A x + noise with covariance Q (noisy kind).
struct Mode {
  Eigen::MatrixXd A;
  Eigen::VectorXd w;             // affine kind only
  Eigen::MatrixXd Q;             // noisy kind only
  Eigen::MatrixXd noise_factor;  // L with L L^T = Q, precomputed for noisy modes
  SystemKind kind = SystemKind::Affine;

  int dim() const { return static_cast<int>(A.rows()); }

  // Factories validate shapes (and for noisy modes, symmetry / numerical PSD
  // of Q, factorizing it up front). Stability is checked separately so that
  // unstable systems can still be constructed for analysis.
  static Mode affine(Eigen::MatrixXd A, Eigen::VectorXd w);
  static Mode noisy(Eigen::MatrixXd A, Eigen::MatrixXd Q);

  bool is_stable() const;
};

/// Ordered collection of modes sharing kind and state dimension.
struct SwitchedSystem {
  std::vector<Mode> modes;
  int n = 0;
  SystemKind kind = SystemKind::Affine;
  std::vector<std::string> warnings;

  // Consistency checks plus per-mode Schur stability. Throws
  // std::invalid_argument on any violation.
  static SwitchedSystem create(std::vector<Mode> modes);

  // Same consistency checks but skips the spectral-radius gate; used for
  // negative controls and divergence studies.
  static SwitchedSystem create_unchecked(std::vector<Mode> modes);

  int num_modes() const { return static_cast<int>(modes.size()); }
};

/// How the active mode index is chosen at each step.
struct SwitchPolicy {
  enum class Variant { IidUniform, IidWeighted, Periodic, Scripted };

  Variant variant = Variant::IidUniform;
  std::vector<double> probabilities;  // iid-weighted
  std::vector<int> sequence;          // periodic / scripted
  std::uint64_t seed = 0;

  static SwitchPolicy iid_uniform(std::uint64_t seed);
  static SwitchPolicy iid_weighted(std::vector<double> probabilities, std::uint64_t seed);
  static SwitchPolicy periodic(std::vector<int> sequence, std::uint64_t seed = 0);
  static SwitchPolicy scripted(std::vector<int> sequence, std::uint64_t seed = 0);

  // Throws std::invalid_argument on bad probabilities / indices.
  void validate(int num_modes) const;
};

// Streams mode indices according to a policy. Step k is the index of the
// transition being taken (0-based).
class ModeSelector {
 public:
  ModeSelector(const SwitchPolicy& policy, int num_modes);
  int next();

 private:
  SwitchPolicy policy_;
  int num_modes_;
  std::size_t step_ = 0;
  Xoshiro256StarStar rng_;
};

// ---------------------------------------------------------------------------
// Single-step dynamics
// ---------------------------------------------------------------------------

/// A*x + w, exactly one matrix-vector product and one add.
Eigen::VectorXd step_affine(const Mode& mode, const Eigen::VectorXd& x);

/// A*x + L*z with z standard normal and L L^T = Q.
Eigen::VectorXd step_noisy(const Mode& mode, const Eigen::VectorXd& x, GaussianSampler& noise);

/// Unique x* with x* = A x* + w, i.e. (I - A)^{-1} w.
/// Throws SingularSystemError when (I - A) is singular.
Eigen::VectorXd fixed_point(const Mode& mode);

}  // namespace switchbound
