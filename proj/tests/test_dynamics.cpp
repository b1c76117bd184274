#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fixtures.hpp"
#include "switchbound/errors.hpp"
#include "switchbound/kron.hpp"
#include "switchbound/simulate.hpp"
#include "switchbound/system.hpp"

using namespace switchbound;

TEST_CASE("step_affine basics") {
  SUBCASE("zero dynamics return the affine term") {
    const Mode m = Mode::affine(Eigen::Matrix2d::Zero(), Eigen::Vector2d(0.5, -0.5));
    const Eigen::VectorXd y = step_affine(m, Eigen::Vector2d(9.0, 9.0));
    CHECK(y(0) == doctest::Approx(0.5));
    CHECK(y(1) == doctest::Approx(-0.5));
  }

  SUBCASE("rotation mode with the derived affine term") {
    // w = (A - I) x_eq places the fixed point at -x_eq; stepping from the
    // origin returns w itself.
    const Eigen::Matrix2d A = fixtures::rotationA1();
    const Eigen::Vector2d w = (A - Eigen::Matrix2d::Identity()) * Eigen::Vector2d(1.0, 0.0);
    CHECK(w(0) == doctest::Approx(-0.1179).epsilon(1e-3));
    CHECK(w(1) == doctest::Approx(0.1788).epsilon(1e-3));
    const Mode m = Mode::affine(A, w);
    const Eigen::VectorXd y = step_affine(m, Eigen::Vector2d::Zero());
    CHECK((y - w).norm() == doctest::Approx(0.0));
  }

  SUBCASE("fixed point is stationary") {
    const Mode m = Mode::affine(fixtures::rotationA1(), fixtures::rotationW1());
    const Eigen::VectorXd xs = fixed_point(m);
    const Eigen::VectorXd y = step_affine(m, xs);
    CHECK((y - xs).lpNorm<Eigen::Infinity>() <= 1e-10);
  }

  SUBCASE("dimension mismatch throws") {
    const Mode m = Mode::affine(Eigen::Matrix2d::Identity() * 0.5, Eigen::Vector2d(1, 0));
    CHECK_THROWS_AS(step_affine(m, Eigen::Vector3d::Zero()), std::invalid_argument);
  }
}

TEST_CASE("fixed_point") {
  SUBCASE("zero dynamics") {
    const Mode m = Mode::affine(Eigen::Matrix2d::Zero(), Eigen::Vector2d(3, 4));
    CHECK((fixed_point(m) - Eigen::Vector2d(3, 4)).norm() == doctest::Approx(0.0));
  }

  SUBCASE("paper-convention affine term for mode 2 gives [1, 0]") {
    // With w2 as printed (A2 x_eq2 - x_eq2, x_eq2 = [-1,0]), the genuine
    // fixed point is -x_eq2.
    const Eigen::Matrix2d A = fixtures::rotationA2();
    const Eigen::Vector2d w = (A - Eigen::Matrix2d::Identity()) * Eigen::Vector2d(-1.0, 0.0);
    CHECK(w(0) == doctest::Approx(0.104).epsilon(5e-3));
    CHECK(w(1) == doctest::Approx(-0.0899).epsilon(5e-3));
    const Eigen::VectorXd xs = fixed_point(Mode::affine(A, w));
    CHECK(xs(0) == doctest::Approx(1.0));
    CHECK(xs(1) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("geometric series") {
    const Mode m = Mode::affine(0.5 * Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 0));
    const Eigen::VectorXd xs = fixed_point(m);
    CHECK(xs(0) == doctest::Approx(2.0));
    CHECK(xs(1) == doctest::Approx(0.0));
  }

  SUBCASE("singular (I - A) is rejected") {
    const Mode m = Mode::affine(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 0));
    CHECK_THROWS_AS(fixed_point(m), SingularSystemError);
  }

  SUBCASE("residual bound over the fixture modes") {
    for (const Mode& m : fixtures::planar_rotation_affine().modes) {
      const Eigen::VectorXd xs = fixed_point(m);
      CHECK((m.A * xs + m.w - xs).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
  }
}

TEST_CASE("step_noisy") {
  SUBCASE("zero noise reduces to the linear map") {
    const Mode m = Mode::noisy(fixtures::rotationA1(), Eigen::Matrix2d::Zero());
    GaussianSampler g(1);
    const Eigen::Vector2d x(1.0, 2.0);
    const Eigen::VectorXd y = step_noisy(m, x, g);
    CHECK((y - fixtures::rotationA1() * x).norm() == doctest::Approx(0.0));
  }

  SUBCASE("same seed, same stream") {
    const Mode m = Mode::noisy(fixtures::rotationA1(), Eigen::Matrix2d::Identity());
    GaussianSampler g1(77), g2(77);
    for (int k = 0; k < 16; ++k) {
      const Eigen::VectorXd a = step_noisy(m, Eigen::Vector2d::Zero(), g1);
      const Eigen::VectorXd b = step_noisy(m, Eigen::Vector2d::Zero(), g2);
      CHECK(a == b);  // bitwise
    }
  }

  SUBCASE("non-PSD covariance is rejected at construction") {
    Eigen::Matrix2d Q;
    Q << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(Mode::noisy(Eigen::Matrix2d::Zero(), Q), std::invalid_argument);
  }

  SUBCASE("sample covariance matches Q") {
    // Noise pushed through an arbitrary A from x = 0 has covariance exactly Q.
    const Mode m = Mode::noisy(fixtures::rotationA1(), fixtures::noiseQ1());
    GaussianSampler g(2024);
    const long n = 1000000;
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    for (long k = 0; k < n; ++k) {
      const Eigen::VectorXd y = step_noisy(m, Eigen::Vector2d::Zero(), g);
      acc += y * y.transpose();
    }
    acc /= static_cast<double>(n);
    CHECK(acc(0, 0) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(acc(1, 1) == doctest::Approx(3.0).epsilon(0.02));
    CHECK(std::abs(acc(0, 1)) < 0.02 * 3.0);
  }
}

TEST_CASE("system validation") {
  SUBCASE("stability gate") {
    const Mode unstable = Mode::affine(1.2 * fixtures::scaled_rotation(1.0, 0.2),
                                       Eigen::Vector2d(0.1, 0.0));
    CHECK_THROWS_WITH_AS(SwitchedSystem::create({unstable, unstable}),
                         doctest::Contains("spectral radius"), std::invalid_argument);
    CHECK_NOTHROW(SwitchedSystem::create_unchecked({unstable, unstable}));
  }

  SUBCASE("kind and dimension consistency") {
    const Mode affine2 = Mode::affine(Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero());
    const Mode noisy2 = Mode::noisy(Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Identity());
    const Mode affine3 = Mode::affine(Eigen::Matrix3d::Zero(), Eigen::Vector3d::Zero());
    CHECK_THROWS_AS(SwitchedSystem::create({affine2, noisy2}), std::invalid_argument);
    CHECK_THROWS_AS(SwitchedSystem::create({affine2, affine3}), std::invalid_argument);
  }

  SUBCASE("single mode is accepted with a warning") {
    const Mode m = Mode::affine(Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero());
    const SwitchedSystem sys = SwitchedSystem::create({m});
    CHECK(sys.warnings.size() == 1);
  }
}

TEST_CASE("policies") {
  SUBCASE("validation") {
    CHECK_THROWS_AS(SwitchPolicy::iid_weighted({0.5, 0.4}, 1).validate(2),
                    std::invalid_argument);
    CHECK_THROWS_AS(SwitchPolicy::scripted({0, 2}, 1).validate(2), std::invalid_argument);
    CHECK_NOTHROW(SwitchPolicy::iid_weighted({0.25, 0.75}, 1).validate(2));
  }

  SUBCASE("weighted marginals stay within 3 sigma") {
    const std::vector<double> probs = {0.2, 0.5, 0.3};
    ModeSelector sel(SwitchPolicy::iid_weighted(probs, 99), 3);
    const long n = 100000;
    std::vector<long> counts(3, 0);
    for (long k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(sel.next())];
    for (std::size_t i = 0; i < 3; ++i) {
      const double expected = probs[i] * n;
      const double sigma = std::sqrt(probs[i] * (1 - probs[i]) * n);
      CHECK(std::abs(counts[i] - expected) <= 3.0 * sigma);
    }
  }

  SUBCASE("periodic cycles and scripted exhausts") {
    ModeSelector per(SwitchPolicy::periodic({0, 1, 1}), 2);
    CHECK(per.next() == 0);
    CHECK(per.next() == 1);
    CHECK(per.next() == 1);
    CHECK(per.next() == 0);

    ModeSelector scr(SwitchPolicy::scripted({1, 0}), 2);
    CHECK(scr.next() == 1);
    CHECK(scr.next() == 0);
    CHECK_THROWS_AS(scr.next(), std::invalid_argument);
  }
}

TEST_CASE("simulate") {
  const SwitchedSystem sys = fixtures::planar_rotation_affine();

  SUBCASE("zero steps") {
    const Trajectory t = simulate(sys, Eigen::Vector2d(0.3, -0.2), 0, SwitchPolicy::iid_uniform(5));
    CHECK(t.points.size() == 1);
    CHECK(t.mode_sequence.empty());
  }

  SUBCASE("bitwise determinism") {
    const auto policy = SwitchPolicy::iid_uniform(1234);
    const Trajectory a = simulate(sys, Eigen::Vector2d::Zero(), 5000, policy);
    const Trajectory b = simulate(sys, Eigen::Vector2d::Zero(), 5000, policy);
    CHECK(a.mode_sequence.size() == a.points.size() - 1);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) CHECK(a.points[k] == b.points[k]);
    CHECK(a.mode_sequence == b.mode_sequence);

    const Trajectory noisy_a =
        simulate(fixtures::planar_rotation_noisy(), Eigen::Vector2d::Zero(), 2000, policy);
    const Trajectory noisy_b =
        simulate(fixtures::planar_rotation_noisy(), Eigen::Vector2d::Zero(), 2000, policy);
    for (std::size_t k = 0; k < noisy_a.points.size(); ++k) {
      CHECK(noisy_a.points[k] == noisy_b.points[k]);
    }
  }

  SUBCASE("scripted single mode converges to the fixed point") {
    const std::vector<int> script(600, 0);
    const Trajectory t = simulate(sys, Eigen::Vector2d::Zero(), 500,
                                  SwitchPolicy::scripted(script));
    const Eigen::VectorXd xs = fixed_point(sys.modes[0]);
    CHECK((t.points.back() - xs).lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}

TEST_CASE("sample_attractor") {
  const SwitchedSystem sys = fixtures::planar_rotation_affine();

  SUBCASE("total = burn_in + 1 keeps exactly one point") {
    const AttractorSample s =
        sample_attractor(sys, Eigen::Vector2d::Zero(), 101, 100, SwitchPolicy::iid_uniform(3));
    CHECK(s.points.size() == 1);
    CHECK((s.centroid - s.points[0]).norm() == doctest::Approx(0.0));
  }

  SUBCASE("constant system collapses to the constant") {
    const Mode c1 = Mode::affine(Eigen::Matrix2d::Zero(), Eigen::Vector2d(0.7, -0.1));
    const SwitchedSystem constant = SwitchedSystem::create({c1, c1});
    const AttractorSample s = sample_attractor(constant, Eigen::Vector2d(5.0, 5.0), 1000, 100,
                                               SwitchPolicy::iid_uniform(4));
    for (const auto& p : s.points) CHECK((p - Eigen::Vector2d(0.7, -0.1)).norm() < 1e-12);
    CHECK((s.centroid - Eigen::Vector2d(0.7, -0.1)).norm() < 1e-12);
  }

  SUBCASE("default burn in") {
    CHECK(default_burn_in(100000) == 1000);
    CHECK(default_burn_in(5000) == 100);
    CHECK(default_burn_in(50) == 49);
  }
}

TEST_CASE("single-mode empirical covariance matches the Lyapunov fixed point") {
  // Mild contraction and correlated noise keep every entry of the fixed
  // point well away from zero, so the per-entry relative check is
  // statistically meaningful at 1e5 samples.
  const Eigen::Matrix2d A = fixtures::scaled_rotation(0.5, 0.3);
  Eigen::Matrix2d Q;
  Q << 2.0, 0.8, 0.8, 3.0;
  const SwitchedSystem sys = SwitchedSystem::create({Mode::noisy(A, Q), Mode::noisy(A, Q)});

  const LiftedSystem ls = lift(sys);
  const Eigen::MatrixXd Pstar = unvech(lifted_fixed_point(ls, 0));

  const long steps = 100000;
  const std::vector<int> script(static_cast<std::size_t>(steps), 0);
  const Trajectory t =
      simulate(sys, Eigen::Vector2d::Zero(), steps, SwitchPolicy::scripted(script, 11));

  const long burn = default_burn_in(steps);
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  long count = 0;
  for (std::size_t k = static_cast<std::size_t>(burn); k < t.points.size(); ++k) {
    acc += t.points[k] * t.points[k].transpose();
    ++count;
  }
  acc /= static_cast<double>(count);

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(acc(i, j) - Pstar(i, j)) <= 0.05 * std::abs(Pstar(i, j)));
    }
  }
}
