#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchbound/pipeline.hpp"
#include "switchbound/system.hpp"

namespace switchbound {

/// File-facing description of a switched system plus policy and solver
/// settings. Matrices are row-major nested arrays in the JSON form.
struct SystemConfig {
  struct ModeSpec {
    Eigen::MatrixXd A;
    std::optional<Eigen::VectorXd> w;  // affine kind
    std::optional<Eigen::MatrixXd> Q;  // noisy kind
  };
  struct PolicySpec {
    std::string variant = "iid-uniform";
    std::optional<std::vector<double>> probabilities;
    std::optional<std::vector<int>> sequence;
    std::optional<std::uint64_t> seed;
  };
  struct SolverSpec {
    std::optional<std::vector<double>> lambda_grid;
    std::optional<double> lambda;
    std::optional<double> epsilon;
    std::optional<double> tolerance;
    std::optional<int> max_iterations;
  };

  std::string kind = "affine";
  int n = 0;
  std::vector<ModeSpec> modes;
  PolicySpec policy;
  SolverSpec solver;
  std::optional<Eigen::VectorXd> center;
  std::optional<Eigen::VectorXd> x0;

  static SystemConfig from_json_text(const std::string& text);
  static SystemConfig load(const std::string& path);
  std::string to_json_text(int indent = 2) const;
  void save(const std::string& path) const;

  /// Build the validated switched system (spectral-radius gate applies).
  SwitchedSystem to_system() const;

  /// Resolve the switching policy. `seed_override` is the --seed flag;
  /// `env_seed` is the SWITCHBOUND_SEED fallback (lowest precedence).
  SwitchPolicy to_policy(std::optional<std::uint64_t> seed_override = std::nullopt,
                         std::optional<std::uint64_t> env_seed = std::nullopt) const;

  /// Solver and pipeline settings, with config values layered over defaults.
  BoundOptions to_bound_options() const;

  bool operator==(const SystemConfig&) const;
};

}  // namespace switchbound
