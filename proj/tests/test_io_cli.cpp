#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "commands.hpp"
#include "fixtures.hpp"
#include "switchbound/config.hpp"
#include "switchbound/csv.hpp"
#include "switchbound/kron.hpp"
#include "switchbound/report.hpp"

using namespace switchbound;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("switchbound_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string rotation_affine_config() {
  SystemConfig cfg;
  cfg.kind = "affine";
  cfg.n = 2;
  for (int i = 0; i < 2; ++i) {
    SystemConfig::ModeSpec m;
    m.A = i == 0 ? fixtures::rotationA1() : fixtures::rotationA2();
    m.w = i == 0 ? Eigen::VectorXd(fixtures::rotationW1()) : Eigen::VectorXd(fixtures::rotationW2());
    cfg.modes.push_back(std::move(m));
  }
  cfg.policy.variant = "iid-uniform";
  cfg.policy.seed = 42;
  cfg.x0 = Eigen::Vector2d::Zero();
  return cfg.to_json_text();
}

std::string rotation_noisy_config() {
  SystemConfig cfg;
  cfg.kind = "noisy";
  cfg.n = 2;
  for (int i = 0; i < 2; ++i) {
    SystemConfig::ModeSpec m;
    m.A = i == 0 ? fixtures::rotationA1() : fixtures::rotationA2();
    m.Q = i == 0 ? fixtures::noiseQ1() : fixtures::noiseQ2();
    cfg.modes.push_back(std::move(m));
  }
  cfg.policy.variant = "iid-uniform";
  cfg.policy.seed = 7;
  cfg.solver.lambda = 5.21;
  cfg.center = Eigen::Vector3d(15.0, 1.24, 11.3);
  cfg.x0 = Eigen::Vector3d::Zero();
  return cfg.to_json_text();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config round trip") {
  const std::string text = rotation_noisy_config();
  const SystemConfig a = SystemConfig::from_json_text(text);
  const SystemConfig b = SystemConfig::from_json_text(a.to_json_text());
  CHECK(a == b);
  CHECK(a.to_json_text() == b.to_json_text());
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(SystemConfig::from_json_text("{ not json"), std::invalid_argument);
  CHECK_THROWS_AS(SystemConfig::from_json_text(R"({"kind":"other","n":2,"modes":[]})"),
                  std::invalid_argument);

  // Affine mode without w.
  SystemConfig cfg = SystemConfig::from_json_text(rotation_affine_config());
  cfg.modes[0].w.reset();
  CHECK_THROWS_AS(cfg.to_system(), std::invalid_argument);

  // Spectral radius gate.
  SystemConfig unstable = SystemConfig::from_json_text(rotation_affine_config());
  unstable.modes[0].A = fixtures::scaled_rotation(1.2, 0.2);
  CHECK_THROWS_WITH_AS(unstable.to_system(), doctest::Contains("spectral radius"),
                       std::invalid_argument);
}

TEST_CASE("seed precedence: flag > config > env") {
  SystemConfig cfg = SystemConfig::from_json_text(rotation_affine_config());
  CHECK(cfg.to_policy(std::nullopt, std::nullopt).seed == 42);   // config
  CHECK(cfg.to_policy(std::nullopt, 1000).seed == 42);           // config beats env
  CHECK(cfg.to_policy(7, 1000).seed == 7);                       // flag beats config
  cfg.policy.seed.reset();
  CHECK(cfg.to_policy(std::nullopt, 1000).seed == 1000);         // env as fallback
}

TEST_CASE("csv shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-17) == "-2.5e-17");
  const double tricky = 0.1 + 0.2;
  CHECK(std::stod(format_double(tricky)) == tricky);
}

TEST_CASE("cmd_simulate") {
  TempDir dir;
  const std::string cfg_path = dir.file("rot.json");
  write_file(cfg_path, rotation_affine_config());

  SUBCASE("zero steps writes header plus x0") {
    cli::SimulateArgs args;
    args.config_path = cfg_path;
    args.steps = 0;
    args.out_path = dir.file("points.csv");
    CHECK(cli::run_simulate(args) == cli::kExitOk);
    const std::string text = read_file(args.out_path);
    CHECK(text == "x1,x2\n0,0\n");
  }

  SUBCASE("same seed twice is byte identical") {
    cli::SimulateArgs args;
    args.config_path = cfg_path;
    args.steps = 2000;
    args.out_path = dir.file("a.csv");
    CHECK(cli::run_simulate(args) == cli::kExitOk);
    args.out_path = dir.file("b.csv");
    CHECK(cli::run_simulate(args) == cli::kExitOk);
    CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
  }

  SUBCASE("burn-in trims the front") {
    cli::SimulateArgs args;
    args.config_path = cfg_path;
    args.steps = 100;
    args.burn_in = 50;
    args.out_path = dir.file("trim.csv");
    CHECK(cli::run_simulate(args) == cli::kExitOk);
    CHECK(read_csv_file(args.out_path).size() == 51);
  }

  SUBCASE("covariance stream for noisy systems") {
    const std::string noisy_path = dir.file("noisy.json");
    write_file(noisy_path, rotation_noisy_config());
    cli::SimulateArgs args;
    args.config_path = noisy_path;
    args.steps = 50;
    args.covariances = true;
    args.out_path = dir.file("cov.csv");
    CHECK(cli::run_simulate(args) == cli::kExitOk);
    const auto rows = read_csv_file(args.out_path);
    REQUIRE(rows.size() == 51);
    CHECK(rows[0].size() == 3);  // vech for n = 2
    CHECK(rows[0].norm() == 0.0);
    // Second row is one of the Qcal vectors.
    const bool is_q1 = (rows[1] - vech(fixtures::noiseQ1())).norm() == 0.0;
    const bool is_q2 = (rows[1] - vech(fixtures::noiseQ2())).norm() == 0.0;
    CHECK((is_q1 || is_q2));

    // --covariances on an affine system is an error.
    args.config_path = cfg_path;
    CHECK(cli::run_simulate(args) == cli::kExitError);
  }

  SUBCASE("missing file is an error") {
    cli::SimulateArgs args;
    args.config_path = dir.file("absent.json");
    args.out_path = dir.file("out.csv");
    CHECK(cli::run_simulate(args) == cli::kExitError);
  }
}

TEST_CASE("cmd_bound / cmd_verify / cmd_ellipse_points pipeline") {
  TempDir dir;
  const std::string cfg_path = dir.file("noisy.json");
  write_file(cfg_path, rotation_noisy_config());
  const std::string report_path = dir.file("report.json");

  cli::BoundArgs bargs;
  bargs.config_path = cfg_path;
  bargs.out_path = report_path;
  bargs.samples = 2000;
  REQUIRE(cli::run_bound(bargs) == cli::kExitOk);

  const BoundReport report = BoundReport::load(report_path);
  CHECK(report.kind == "noisy");
  CHECK(report.reduction == "sym-vech");
  CHECK(report.lambda_star == 5.21);
  CHECK(report.verification_violations == 0);
  CHECK(report.tool_version == std::string("0.1.0"));

  SUBCASE("report JSON round trip") {
    const BoundReport again = BoundReport::from_json_text(report.to_json_text());
    CHECK(again.P == report.P);
    CHECK(again.center == report.center);
    CHECK(again.lambda_star == report.lambda_star);
    CHECK(again.verification_violations == report.verification_violations);
  }

  SUBCASE("verify accepts the fresh report") {
    cli::VerifyArgs vargs;
    vargs.report_path = report_path;
    vargs.config_path = cfg_path;
    vargs.samples = 2000;
    CHECK(cli::run_verify(vargs) == cli::kExitOk);

    // Pinned seed re-validation.
    vargs.common.seed = report.verify_seed;
    CHECK(cli::run_verify(vargs) == cli::kExitOk);
  }

  SUBCASE("tampered report fails with exit 3") {
    BoundReport tampered = report;
    tampered.P *= 4.0;  // halves every semi-axis
    const std::string tampered_path = dir.file("tampered.json");
    tampered.save(tampered_path);
    cli::VerifyArgs vargs;
    vargs.report_path = tampered_path;
    vargs.config_path = cfg_path;
    vargs.samples = 2000;
    CHECK(cli::run_verify(vargs) == cli::kExitVerificationFailed);
  }

  SUBCASE("dimension mismatch fails with exit 1") {
    const std::string affine_path = dir.file("affine.json");
    write_file(affine_path, rotation_affine_config());
    cli::VerifyArgs vargs;
    vargs.report_path = report_path;
    vargs.config_path = affine_path;
    CHECK(cli::run_verify(vargs) == cli::kExitError);
  }

  SUBCASE("ellipse points for q = 3 lie on the boundary") {
    cli::EllipsePointsArgs eargs;
    eargs.report_path = report_path;
    eargs.resolution = 12;
    eargs.out_path = dir.file("mesh.csv");
    CHECK(cli::run_ellipse_points(eargs) == cli::kExitOk);
    const auto rows = read_csv_file(eargs.out_path);
    CHECK(rows.size() == 12 * 12);
    const Ellipsoid E = report.ellipsoid();
    for (const auto& x : rows) {
      CHECK(E.quadratic_form(x) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  SUBCASE("full-vec cross-check with --no-reduce") {
    cli::BoundArgs full;
    full.config_path = cfg_path;
    full.out_path = dir.file("full.json");
    full.samples = 1500;
    full.no_reduce = true;
    REQUIRE(cli::run_bound(full) == cli::kExitOk);
    const BoundReport fr = BoundReport::load(full.out_path);
    CHECK(fr.reduction == "full-vec");
    CHECK(fr.P.rows() == 4);

    cli::VerifyArgs vargs;
    vargs.report_path = full.out_path;
    vargs.config_path = cfg_path;
    vargs.samples = 1500;
    CHECK(cli::run_verify(vargs) == cli::kExitOk);
  }
}

TEST_CASE("cmd_bound exit codes") {
  TempDir dir;

  SUBCASE("unstable config exits 1 at validation") {
    SystemConfig cfg = SystemConfig::from_json_text(rotation_affine_config());
    cfg.modes[0].A = fixtures::scaled_rotation(1.2, 0.2);
    const std::string path = dir.file("unstable.json");
    write_file(path, cfg.to_json_text());
    cli::BoundArgs args;
    args.config_path = path;
    args.out_path = dir.file("report.json");
    CHECK(cli::run_bound(args) == cli::kExitError);
  }

  SUBCASE("stable modes with no common invariant ellipsoid exit 2") {
    // Both modes are nilpotent (rho = 0) but their alternation expands, so
    // the whole lambda grid is infeasible.
    SystemConfig cfg;
    cfg.kind = "affine";
    cfg.n = 2;
    SystemConfig::ModeSpec m1, m2;
    m1.A = Eigen::Matrix2d::Zero();
    m1.A(0, 1) = 2.0;
    m1.w = Eigen::Vector2d(0.0, 0.0);
    m2.A = Eigen::Matrix2d::Zero();
    m2.A(1, 0) = 2.0;
    m2.w = Eigen::Vector2d(0.0, 0.0);
    cfg.modes = {m1, m2};
    cfg.policy.variant = "iid-uniform";
    cfg.policy.seed = 1;
    cfg.solver.max_iterations = 2500;
    const std::string path = dir.file("nilpotent.json");
    write_file(path, cfg.to_json_text());

    cli::BoundArgs args;
    args.config_path = path;
    args.out_path = dir.file("report.json");
    CHECK(cli::run_bound(args) == cli::kExitInfeasible);
  }
}

TEST_CASE("ellipse points in two dimensions") {
  TempDir dir;
  // Build a 2-D report by hand: the unit circle.
  BoundReport report;
  report.P = Eigen::Matrix2d::Identity();
  report.center = Eigen::Vector2d::Zero();
  report.lambda_star = 1.0;
  report.objective = 2.0;
  report.tool_version = "0.1.0";
  report.rng_id = "test";
  report.kind = "affine";
  const std::string path = dir.file("circle.json");
  report.save(path);

  cli::EllipsePointsArgs args;
  args.report_path = path;
  args.resolution = 4;
  args.out_path = dir.file("circle.csv");
  CHECK(cli::run_ellipse_points(args) == cli::kExitOk);
  const auto rows = read_csv_file(args.out_path);
  REQUIRE(rows.size() == 4);
  for (const auto& x : rows) CHECK(x.norm() == doctest::Approx(1.0));
}

TEST_CASE("process-level seed handling") {
  TempDir dir;
  // Config without a policy seed, so the environment variable is the only
  // seed source.
  SystemConfig cfg = SystemConfig::from_json_text(rotation_affine_config());
  cfg.policy.seed.reset();
  const std::string cfg_path = dir.file("noseed.json");
  write_file(cfg_path, cfg.to_json_text());

  auto run = [&](const std::string& env, const std::string& extra, const std::string& out) {
    const std::string cmd = env + " " + SWITCHBOUND_CLI_BIN + " simulate " + cfg_path +
                            " --steps 200" + extra + " --out " + out + " 2>/dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };

  CHECK(run("SWITCHBOUND_SEED=123", "", dir.file("a.csv")) == cli::kExitOk);
  CHECK(run("SWITCHBOUND_SEED=123", "", dir.file("b.csv")) == cli::kExitOk);
  CHECK(run("SWITCHBOUND_SEED=999", "", dir.file("c.csv")) == cli::kExitOk);
  CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
  CHECK(read_file(dir.file("a.csv")) != read_file(dir.file("c.csv")));

  // --seed flag outranks the environment.
  CHECK(run("SWITCHBOUND_SEED=123", " --seed 999", dir.file("d.csv")) == cli::kExitOk);
  CHECK(read_file(dir.file("d.csv")) == read_file(dir.file("c.csv")));
}

TEST_CASE("axes summary for dimensions above three") {
  TempDir dir;
  BoundReport report;
  Eigen::VectorXd diag(6);
  diag << 1.0, 4.0, 9.0, 16.0, 25.0, 36.0;
  report.P = diag.asDiagonal();
  report.center = Eigen::VectorXd::Zero(6);
  report.tool_version = "0.1.0";
  report.rng_id = "test";
  report.kind = "noisy";
  const std::string path = dir.file("big.json");
  report.save(path);

  cli::EllipsePointsArgs args;
  args.report_path = path;
  args.out_path = dir.file("axes.csv");
  CHECK(cli::run_ellipse_points(args) == cli::kExitOk);
  const auto rows = read_csv_file(args.out_path);
  REQUIRE(rows.size() == 6);
  // Semi-axes 1/sqrt(eig), descending: 1, 1/2, ..., 1/6.
  for (int i = 0; i < 6; ++i) {
    CHECK(rows[static_cast<std::size_t>(i)](0) == doctest::Approx(1.0 / (i + 1)));
  }
}
