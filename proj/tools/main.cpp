#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "switchbound/version.hpp"

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SWITCHBOUND_SEED");
  if (raw == nullptr) return std::nullopt;
  try {
    return std::stoull(raw);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace switchbound::cli;

  CLI::App app{"Invariant ellipsoids for switched affine systems and covariance bounds "
               "for switched linear systems with noise"};
  app.set_version_flag("--version", switchbound::kVersion);
  app.require_subcommand(1);

  bool verbose = false;
  app.add_flag("--verbose", verbose, "Print diagnostics to stderr");

  std::optional<std::uint64_t> seed_flag;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a switched system to CSV");
  simulate->add_option("config", sim.config_path, "System config JSON")->required();
  simulate->add_option("--steps", sim.steps, "Number of transitions");
  simulate->add_option("--burn-in", sim.burn_in, "States to discard from the front");
  simulate->add_flag("--covariances", sim.covariances,
                     "Write the vech covariance recursion instead of sampled states");
  simulate->add_option("--out", sim.out_path, "Output CSV path")->required();
  simulate->add_flag("--verbose", verbose, "Print diagnostics to stderr");
  simulate->add_option("--seed", seed_flag, "Seed override");

  BoundArgs bound;
  auto* bnd = app.add_subcommand("bound", "Compute and verify an invariant ellipsoid");
  bnd->add_option("config", bound.config_path, "System config JSON")->required();
  bnd->add_option("--out", bound.out_path, "Report JSON path")->required();
  bnd->add_option("--samples", bound.samples, "Invariance verification samples");
  bnd->add_flag("--no-reduce", bound.no_reduce,
                "Use the full vec lifting instead of the symmetric reduction");
  bnd->add_flag("--verbose", verbose, "Print diagnostics to stderr");
  bnd->add_option("--seed", seed_flag, "Seed override");

  VerifyArgs verify;
  auto* ver = app.add_subcommand("verify", "Re-check a stored bound report");
  ver->add_option("report", verify.report_path, "Report JSON")->required();
  ver->add_option("config", verify.config_path, "System config JSON")->required();
  ver->add_option("--samples", verify.samples, "Verification samples");
  ver->add_flag("--verbose", verbose, "Print diagnostics to stderr");
  ver->add_option("--seed", seed_flag, "Pin the verification seed");

  EllipsePointsArgs ellipse;
  auto* ell = app.add_subcommand("ellipse-points", "Emit boundary points for plotting");
  ell->add_option("report", ellipse.report_path, "Report JSON")->required();
  ell->add_option("--resolution", ellipse.resolution, "Points (2-D) or mesh size (3-D)");
  ell->add_option("--out", ellipse.out_path, "Output CSV path")->required();
  ell->add_flag("--verbose", verbose, "Print diagnostics to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  CommonArgs common;
  common.seed = seed_flag;
  common.env_seed = env_seed();
  common.verbose = verbose;

  if (simulate->parsed()) {
    sim.common = common;
    return run_simulate(sim);
  }
  if (bnd->parsed()) {
    bound.common = common;
    return run_bound(bound);
  }
  if (ver->parsed()) {
    verify.common = common;
    return run_verify(verify);
  }
  if (ell->parsed()) {
    ellipse.common = common;
    return run_ellipse_points(ellipse);
  }
  return kExitError;
}
