#include "switchbound/system.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "switchbound/errors.hpp"
#include "switchbound/matrix_utils.hpp"

namespace switchbound {

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& S, double clamp_tol) {
  if (!is_symmetric(S, 1e-10)) {
    throw std::invalid_argument("psd_factor: matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = symmetrize(S);
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  // Semidefinite within tolerance: clamp small negative eigenvalues at zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] < -clamp_tol) {
      throw std::invalid_argument("psd_factor: matrix is not numerically PSD (eigenvalue " +
                                  std::to_string(d[i]) + ")");
    }
    d[i] = d[i] < 0.0 ? 0.0 : d[i];
  }
  return es.eigenvectors() * d.cwiseSqrt().asDiagonal();
}

Mode Mode::affine(Eigen::MatrixXd A, Eigen::VectorXd w) {
  if (A.rows() != A.cols()) throw std::invalid_argument("Mode: A must be square");
  if (w.size() != A.rows()) throw std::invalid_argument("Mode: w dimension mismatch");
  Mode m;
  m.A = std::move(A);
  m.w = std::move(w);
  m.kind = SystemKind::Affine;
  return m;
}

Mode Mode::noisy(Eigen::MatrixXd A, Eigen::MatrixXd Q) {
  if (A.rows() != A.cols()) throw std::invalid_argument("Mode: A must be square");
  if (Q.rows() != A.rows() || Q.cols() != A.cols()) {
    throw std::invalid_argument("Mode: Q dimension mismatch");
  }
  if (!is_symmetric(Q, 1e-10)) throw std::invalid_argument("Mode: Q must be symmetric");
  Mode m;
  m.A = std::move(A);
  m.Q = symmetrize(Q);
  m.noise_factor = psd_factor(m.Q, kPsdTol);
  m.kind = SystemKind::Noisy;
  return m;
}

bool Mode::is_stable() const { return spectral_radius(A) < 1.0 - kStabilityTol; }

namespace {

SwitchedSystem assemble(std::vector<Mode> modes, bool check_stability) {
  if (modes.empty()) throw std::invalid_argument("SwitchedSystem: no modes");
  SwitchedSystem sys;
  sys.kind = modes.front().kind;
  sys.n = modes.front().dim();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].kind != sys.kind) {
      throw std::invalid_argument("SwitchedSystem: modes mix affine and noisy kinds");
    }
    if (modes[i].dim() != sys.n) {
      throw std::invalid_argument("SwitchedSystem: modes disagree on state dimension");
    }
    if (check_stability && !modes[i].is_stable()) {
      std::ostringstream os;
      os << "SwitchedSystem: mode " << i << " fails the spectral radius gate (rho(A) = "
         << spectral_radius(modes[i].A) << " >= 1)";
      throw std::invalid_argument(os.str());
    }
  }
  if (modes.size() == 1) {
    sys.warnings.push_back("single-mode system: this is a plain LTI system");
  }
  sys.modes = std::move(modes);
  return sys;
}

}  // namespace

SwitchedSystem SwitchedSystem::create(std::vector<Mode> modes) {
  return assemble(std::move(modes), true);
}

SwitchedSystem SwitchedSystem::create_unchecked(std::vector<Mode> modes) {
  return assemble(std::move(modes), false);
}

SwitchPolicy SwitchPolicy::iid_uniform(std::uint64_t seed) {
  SwitchPolicy p;
  p.variant = Variant::IidUniform;
  p.seed = seed;
  return p;
}

SwitchPolicy SwitchPolicy::iid_weighted(std::vector<double> probabilities, std::uint64_t seed) {
  SwitchPolicy p;
  p.variant = Variant::IidWeighted;
  p.probabilities = std::move(probabilities);
  p.seed = seed;
  return p;
}

SwitchPolicy SwitchPolicy::periodic(std::vector<int> sequence, std::uint64_t seed) {
  SwitchPolicy p;
  p.variant = Variant::Periodic;
  p.sequence = std::move(sequence);
  p.seed = seed;
  return p;
}

SwitchPolicy SwitchPolicy::scripted(std::vector<int> sequence, std::uint64_t seed) {
  SwitchPolicy p;
  p.variant = Variant::Scripted;
  p.sequence = std::move(sequence);
  p.seed = seed;
  return p;
}

void SwitchPolicy::validate(int num_modes) const {
  switch (variant) {
    case Variant::IidUniform:
      break;
    case Variant::IidWeighted: {
      if (static_cast<int>(probabilities.size()) != num_modes) {
        throw std::invalid_argument("SwitchPolicy: probabilities length != number of modes");
      }
      double sum = 0.0;
      for (double p : probabilities) {
        if (p < 0.0) throw std::invalid_argument("SwitchPolicy: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbabilityTol) {
        throw std::invalid_argument("SwitchPolicy: probabilities sum to " + std::to_string(sum));
      }
      break;
    }
    case Variant::Periodic:
    case Variant::Scripted: {
      if (sequence.empty()) throw std::invalid_argument("SwitchPolicy: empty sequence");
      for (int idx : sequence) {
        if (idx < 0 || idx >= num_modes) {
          throw std::invalid_argument("SwitchPolicy: mode index " + std::to_string(idx) +
                                      " out of range");
        }
      }
      break;
    }
  }
}

ModeSelector::ModeSelector(const SwitchPolicy& policy, int num_modes)
    : policy_(policy), num_modes_(num_modes), rng_(substream_seed(policy.seed, 0)) {
  policy_.validate(num_modes);
}

int ModeSelector::next() {
  const std::size_t k = step_++;
  switch (policy_.variant) {
    case SwitchPolicy::Variant::IidUniform: {
      return static_cast<int>(rng_.next() % static_cast<std::uint64_t>(num_modes_));
    }
    case SwitchPolicy::Variant::IidWeighted: {
      const double u = rng_.uniform01();
      double acc = 0.0;
      for (int i = 0; i < num_modes_; ++i) {
        acc += policy_.probabilities[i];
        if (u < acc) return i;
      }
      return num_modes_ - 1;
    }
    case SwitchPolicy::Variant::Periodic:
      return policy_.sequence[k % policy_.sequence.size()];
    case SwitchPolicy::Variant::Scripted:
      if (k >= policy_.sequence.size()) {
        throw std::invalid_argument("SwitchPolicy: scripted sequence exhausted at step " +
                                    std::to_string(k));
      }
      return policy_.sequence[k];
  }
  return 0;
}

Eigen::VectorXd step_affine(const Mode& mode, const Eigen::VectorXd& x) {
  if (mode.kind != SystemKind::Affine) {
    throw std::invalid_argument("step_affine: mode is not affine");
  }
  if (x.size() != mode.dim()) throw std::invalid_argument("step_affine: dimension mismatch");
  return mode.A * x + mode.w;
}

Eigen::VectorXd step_noisy(const Mode& mode, const Eigen::VectorXd& x, GaussianSampler& noise) {
  if (mode.kind != SystemKind::Noisy) {
    throw std::invalid_argument("step_noisy: mode is not noisy");
  }
  if (x.size() != mode.dim()) throw std::invalid_argument("step_noisy: dimension mismatch");
  return mode.A * x + mode.noise_factor * noise.vector(mode.dim());
}

Eigen::VectorXd fixed_point(const Mode& mode) {
  if (mode.kind != SystemKind::Affine) {
    throw std::invalid_argument("fixed_point: mode is not affine");
  }
  const int n = mode.dim();
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - mode.A;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    throw SingularSystemError("fixed_point: (I - A) is singular");
  }
  return lu.solve(mode.w);
}

}  // namespace switchbound
