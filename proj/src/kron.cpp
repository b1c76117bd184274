#include "switchbound/kron.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "switchbound/errors.hpp"
#include "switchbound/matrix_utils.hpp"

namespace switchbound {

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
  return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("unvec: length != n^2");
  }
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

int vech_dim(int n) { return n * (n + 1) / 2; }

int vech_state_dim(int d) {
  const int n = static_cast<int>(std::floor((std::sqrt(8.0 * d + 1.0) - 1.0) / 2.0 + 0.5));
  if (vech_dim(n) != d) throw std::invalid_argument("vech length is not triangular");
  return n;
}

Eigen::VectorXd vech(const Eigen::MatrixXd& S, double tol) {
  if (S.rows() != S.cols()) throw std::invalid_argument("vech: matrix not square");
  if (!is_symmetric(S, tol)) throw std::invalid_argument("vech: matrix not symmetric");
  const Eigen::MatrixXd sym = symmetrize(S);
  const int n = static_cast<int>(sym.rows());
  Eigen::VectorXd v(vech_dim(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) v[k++] = sym(i, j);
  }
  return v;
}

Eigen::MatrixXd unvech(const Eigen::VectorXd& v) {
  const int n = vech_state_dim(static_cast<int>(v.size()));
  Eigen::MatrixXd S(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      S(i, j) = v[k];
      S(j, i) = v[k];
      ++k;
    }
  }
  return S;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

namespace {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_dup_elim(int n) {
  const int d = vech_dim(n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n * n, d);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, n * n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      D(j * n + i, k) = 1.0;
      D(i * n + j, k) = 1.0;  // same entry when i == j
      L(k, j * n + i) = 1.0;
      ++k;
    }
  }
  return {std::move(D), std::move(L)};
}

const std::pair<Eigen::MatrixXd, Eigen::MatrixXd>& cached_dup_elim(int n) {
  if (n < 1) throw std::invalid_argument("duplication/elimination: n must be >= 1");
  static std::mutex mtx;
  static std::map<int, std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_dup_elim(n)).first;
  return it->second;
}

}  // namespace

const Eigen::MatrixXd& duplication_matrix(int n) { return cached_dup_elim(n).first; }

const Eigen::MatrixXd& elimination_matrix(int n) { return cached_dup_elim(n).second; }

Eigen::MatrixXd cov_step(const Mode& mode, const Eigen::MatrixXd& P) {
  if (mode.kind != SystemKind::Noisy) throw std::invalid_argument("cov_step: mode is not noisy");
  if (P.rows() != mode.dim() || P.cols() != mode.dim()) {
    throw std::invalid_argument("cov_step: P dimension mismatch");
  }
  return symmetrize(mode.A * P * mode.A.transpose() + mode.Q);
}

LiftedSystem lift(const SwitchedSystem& sys, Reduction reduction) {
  if (sys.kind != SystemKind::Noisy) throw std::invalid_argument("lift: system is not noisy");

  LiftedSystem ls;
  ls.n = sys.n;
  ls.reduction = reduction;
  ls.d = reduction == Reduction::SymVech ? vech_dim(sys.n) : sys.n * sys.n;

  for (const Mode& m : sys.modes) {
    LiftedSystem::LiftedMode lm;
    const Eigen::MatrixXd AkA = kron(m.A, m.A);
    if (reduction == Reduction::SymVech) {
      lm.Acal = elimination_matrix(sys.n) * AkA * duplication_matrix(sys.n);
      lm.Qcal = vech(m.Q);
    } else {
      lm.Acal = AkA;
      lm.Qcal = vec(m.Q);
    }
    ls.modes.push_back(std::move(lm));
  }

  // Construction self-check: the lifted step must reproduce cov_step on a
  // probe matrix, exactly up to rounding.
  Eigen::MatrixXd probe(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      probe(i, j) = probe(j, i) = 1.0 + static_cast<double>(i + j) / (sys.n + 1);
    }
  }
  for (int i = 0; i < sys.num_modes(); ++i) {
    const Eigen::MatrixXd direct = cov_step(sys.modes[static_cast<std::size_t>(i)], probe);
    const Eigen::VectorXd p0 =
        reduction == Reduction::SymVech ? vech(probe) : vec(probe);
    const Eigen::VectorXd through = lifted_step(ls, i, p0);
    const Eigen::VectorXd expected =
        reduction == Reduction::SymVech ? vech(direct) : vec(direct);
    if ((through - expected).cwiseAbs().maxCoeff() > 1e-11) {
      throw std::logic_error("lift: construction self-check failed");
    }
  }
  return ls;
}

Eigen::VectorXd lifted_step(const LiftedSystem& ls, int i, const Eigen::VectorXd& p) {
  if (i < 0 || i >= ls.num_modes()) throw std::out_of_range("lifted_step: mode index");
  const auto& m = ls.modes[static_cast<std::size_t>(i)];
  if (p.size() != ls.d) throw std::invalid_argument("lifted_step: vector dimension mismatch");
  return m.Acal * p + m.Qcal;
}

Eigen::VectorXd lifted_fixed_point(const LiftedSystem& ls, int i) {
  if (i < 0 || i >= ls.num_modes()) throw std::out_of_range("lifted_fixed_point: mode index");
  const auto& m = ls.modes[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(ls.d, ls.d) - m.Acal;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    throw SingularSystemError("lifted_fixed_point: (I - Acal) is singular");
  }
  Eigen::VectorXd p = lu.solve(m.Qcal);

  // For a stable mode the fixed point is a covariance matrix; guard the sign
  // convention (the genuine fixed point, not its negative).
  if (spectral_radius(m.Acal) < 1.0) {
    const Eigen::MatrixXd P =
        ls.reduction == Reduction::SymVech ? unvech(p) : unvec(p, ls.n);
    if (eig_min(symmetrize(P)) < -1e-9) {
      throw std::logic_error("lifted_fixed_point: stable mode produced a non-PSD fixed point");
    }
  }
  return p;
}

SwitchedSystem as_switched_affine(const LiftedSystem& ls) {
  std::vector<Mode> modes;
  modes.reserve(ls.modes.size());
  for (const auto& m : ls.modes) modes.push_back(Mode::affine(m.Acal, m.Qcal));
  return SwitchedSystem::create_unchecked(std::move(modes));
}

}  // namespace switchbound
