#include "switchbound/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace switchbound {

namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw std::invalid_argument("config: " + what + " must be a nested array (row-major)");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) {
      throw std::invalid_argument("config: ragged rows in " + what);
    }
    for (std::size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
  }
  return M;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument("config: " + what + " must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

SystemConfig SystemConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }

  SystemConfig cfg;
  cfg.kind = j.at("kind").get<std::string>();
  if (cfg.kind != "affine" && cfg.kind != "noisy") {
    throw std::invalid_argument("config: kind must be \"affine\" or \"noisy\"");
  }
  cfg.n = j.at("n").get<int>();
  if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");

  if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty()) {
    throw std::invalid_argument("config: modes must be a non-empty array");
  }
  for (const auto& jm : j["modes"]) {
    ModeSpec spec;
    spec.A = matrix_from_json(jm.at("A"), "mode A");
    if (jm.contains("w")) spec.w = vector_from_json(jm["w"], "mode w");
    if (jm.contains("Q")) spec.Q = matrix_from_json(jm["Q"], "mode Q");
    cfg.modes.push_back(std::move(spec));
  }

  if (j.contains("policy")) {
    const auto& jp = j["policy"];
    if (jp.contains("variant")) cfg.policy.variant = jp["variant"].get<std::string>();
    if (jp.contains("probabilities")) {
      cfg.policy.probabilities = jp["probabilities"].get<std::vector<double>>();
    }
    if (jp.contains("sequence")) cfg.policy.sequence = jp["sequence"].get<std::vector<int>>();
    if (jp.contains("seed")) cfg.policy.seed = jp["seed"].get<std::uint64_t>();
  }

  if (j.contains("solver")) {
    const auto& js = j["solver"];
    if (js.contains("lambda_grid")) {
      cfg.solver.lambda_grid = js["lambda_grid"].get<std::vector<double>>();
    }
    if (js.contains("lambda")) cfg.solver.lambda = js["lambda"].get<double>();
    if (js.contains("epsilon")) cfg.solver.epsilon = js["epsilon"].get<double>();
    if (js.contains("tolerance")) cfg.solver.tolerance = js["tolerance"].get<double>();
    if (js.contains("max_iterations")) cfg.solver.max_iterations = js["max_iterations"].get<int>();
  }

  if (j.contains("center")) cfg.center = vector_from_json(j["center"], "center");
  if (j.contains("x0")) cfg.x0 = vector_from_json(j["x0"], "x0");
  return cfg;
}

SystemConfig SystemConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string SystemConfig::to_json_text(int indent) const {
  json j;
  j["kind"] = kind;
  j["n"] = n;
  j["modes"] = json::array();
  for (const auto& m : modes) {
    json jm;
    jm["A"] = matrix_to_json(m.A);
    if (m.w.has_value()) jm["w"] = vector_to_json(*m.w);
    if (m.Q.has_value()) jm["Q"] = matrix_to_json(*m.Q);
    j["modes"].push_back(std::move(jm));
  }
  json jp;
  jp["variant"] = policy.variant;
  if (policy.probabilities.has_value()) jp["probabilities"] = *policy.probabilities;
  if (policy.sequence.has_value()) jp["sequence"] = *policy.sequence;
  if (policy.seed.has_value()) jp["seed"] = *policy.seed;
  j["policy"] = std::move(jp);

  json js = json::object();
  if (solver.lambda_grid.has_value()) js["lambda_grid"] = *solver.lambda_grid;
  if (solver.lambda.has_value()) js["lambda"] = *solver.lambda;
  if (solver.epsilon.has_value()) js["epsilon"] = *solver.epsilon;
  if (solver.tolerance.has_value()) js["tolerance"] = *solver.tolerance;
  if (solver.max_iterations.has_value()) js["max_iterations"] = *solver.max_iterations;
  if (!js.empty()) j["solver"] = std::move(js);

  if (center.has_value()) j["center"] = vector_to_json(*center);
  if (x0.has_value()) j["x0"] = vector_to_json(*x0);
  return j.dump(indent) + "\n";
}

void SystemConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("config: cannot write " + path);
  out << to_json_text();
}

SwitchedSystem SystemConfig::to_system() const {
  std::vector<Mode> built;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeSpec& spec = modes[i];
    if (spec.A.rows() != n || spec.A.cols() != n) {
      throw std::invalid_argument("config: mode " + std::to_string(i) + " A is not n x n");
    }
    if (kind == "affine") {
      if (!spec.w.has_value()) {
        throw std::invalid_argument("config: affine mode " + std::to_string(i) + " missing w");
      }
      built.push_back(Mode::affine(spec.A, *spec.w));
    } else {
      if (!spec.Q.has_value()) {
        throw std::invalid_argument("config: noisy mode " + std::to_string(i) + " missing Q");
      }
      built.push_back(Mode::noisy(spec.A, *spec.Q));
    }
  }
  return SwitchedSystem::create(std::move(built));
}

SwitchPolicy SystemConfig::to_policy(std::optional<std::uint64_t> seed_override,
                                     std::optional<std::uint64_t> env_seed) const {
  std::uint64_t seed = 0x5eedULL;
  if (env_seed.has_value()) seed = *env_seed;
  if (policy.seed.has_value()) seed = *policy.seed;
  if (seed_override.has_value()) seed = *seed_override;

  SwitchPolicy p;
  if (policy.variant == "iid-uniform") {
    p = SwitchPolicy::iid_uniform(seed);
  } else if (policy.variant == "iid-weighted") {
    if (!policy.probabilities.has_value()) {
      throw std::invalid_argument("config: iid-weighted policy needs probabilities");
    }
    p = SwitchPolicy::iid_weighted(*policy.probabilities, seed);
  } else if (policy.variant == "periodic") {
    if (!policy.sequence.has_value()) {
      throw std::invalid_argument("config: periodic policy needs a sequence");
    }
    p = SwitchPolicy::periodic(*policy.sequence, seed);
  } else if (policy.variant == "scripted") {
    if (!policy.sequence.has_value()) {
      throw std::invalid_argument("config: scripted policy needs a sequence");
    }
    p = SwitchPolicy::scripted(*policy.sequence, seed);
  } else {
    throw std::invalid_argument("config: unknown policy variant '" + policy.variant + "'");
  }
  p.validate(static_cast<int>(modes.size()));
  return p;
}

BoundOptions SystemConfig::to_bound_options() const {
  BoundOptions opts;
  if (solver.lambda.has_value()) opts.fixed_lambda = *solver.lambda;
  if (solver.lambda_grid.has_value()) opts.lambda_grid = *solver.lambda_grid;
  if (solver.epsilon.has_value()) opts.psd_floor = *solver.epsilon;
  if (solver.tolerance.has_value()) opts.solver.feasibility_tol = *solver.tolerance;
  if (solver.max_iterations.has_value()) opts.solver.max_iterations = *solver.max_iterations;
  if (center.has_value()) opts.center = *center;
  if (x0.has_value()) opts.x0 = *x0;
  return opts;
}

bool SystemConfig::operator==(const SystemConfig& o) const {
  auto eq_vec = [](const std::optional<Eigen::VectorXd>& a,
                   const std::optional<Eigen::VectorXd>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a.has_value() || (a->size() == b->size() && *a == *b);
  };
  auto eq_mat = [](const std::optional<Eigen::MatrixXd>& a,
                   const std::optional<Eigen::MatrixXd>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a.has_value() || (a->rows() == b->rows() && a->cols() == b->cols() && *a == *b);
  };
  if (kind != o.kind || n != o.n || modes.size() != o.modes.size()) return false;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].A != o.modes[i].A) return false;
    if (!eq_vec(modes[i].w, o.modes[i].w) || !eq_mat(modes[i].Q, o.modes[i].Q)) return false;
  }
  return policy.variant == o.policy.variant && policy.probabilities == o.policy.probabilities &&
         policy.sequence == o.policy.sequence && policy.seed == o.policy.seed &&
         solver.lambda_grid == o.solver.lambda_grid && solver.lambda == o.solver.lambda &&
         solver.epsilon == o.solver.epsilon && solver.tolerance == o.solver.tolerance &&
         solver.max_iterations == o.solver.max_iterations && eq_vec(center, o.center) &&
         eq_vec(x0, o.x0);
}

}  // namespace switchbound
