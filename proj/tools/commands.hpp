#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace switchbound::cli {

// Exit codes shared by all subcommands:
//   0 success (and verified where applicable)
//   1 error (I/O, validation, bad arguments)
//   2 infeasible
//   3 verification failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerificationFailed = 3;

struct CommonArgs {
  std::optional<std::uint64_t> seed;      // --seed flag
  std::optional<std::uint64_t> env_seed;  // SWITCHBOUND_SEED
  bool verbose = false;
};

struct SimulateArgs {
  std::string config_path;
  long steps = 100000;
  long burn_in = 0;
  bool covariances = false;
  std::string out_path;
  CommonArgs common;
};

struct BoundArgs {
  std::string config_path;
  std::string out_path;
  long samples = 10000;
  bool no_reduce = false;
  CommonArgs common;
};

struct VerifyArgs {
  std::string report_path;
  std::string config_path;
  long samples = 10000;
  CommonArgs common;
};

struct EllipsePointsArgs {
  std::string report_path;
  int resolution = 64;
  std::string out_path;
  CommonArgs common;
};

int run_simulate(const SimulateArgs& args);
int run_bound(const BoundArgs& args);
int run_verify(const VerifyArgs& args);
int run_ellipse_points(const EllipsePointsArgs& args);

}  // namespace switchbound::cli
