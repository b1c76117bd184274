#include "switchbound/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "switchbound/version.hpp"

namespace switchbound {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
  }
  return M;
}

}  // namespace

BoundReport BoundReport::from_outcome(const BoundOutcome& outcome, const std::string& kind,
                                      const std::string& reduction, std::uint64_t policy_seed,
                                      std::uint64_t verify_seed) {
  if (!outcome.feasible) {
    throw std::invalid_argument("BoundReport: outcome is infeasible, nothing to report");
  }
  BoundReport r;
  r.P = outcome.ellipsoid->P();
  r.center = outcome.center;
  r.lambda_star = outcome.lambda_star;
  r.objective = outcome.solve.objective;
  r.residuals = outcome.solve.residuals;
  r.verification_samples = outcome.verification.boundary_samples;
  r.verification_violations = outcome.verification.violations;
  r.verification_worst_value = outcome.verification.worst_value;
  r.solve_seconds = outcome.solve_seconds;
  r.verify_seconds = outcome.verify_seconds;
  r.tool_version = kVersion;
  r.rng_id = kRngId;
  r.policy_seed = policy_seed;
  r.verify_seed = verify_seed;
  r.kind = kind;
  r.reduction = reduction;
  return r;
}

std::string BoundReport::to_json_text(int indent) const {
  json j;
  j["ellipsoid"]["P"] = matrix_to_json(P);
  {
    json c = json::array();
    for (Eigen::Index i = 0; i < center.size(); ++i) c.push_back(center[i]);
    j["ellipsoid"]["center"] = std::move(c);
  }
  j["lambda_star"] = lambda_star;
  j["objective"] = objective;
  j["residuals"] = json::array();
  for (const auto& res : residuals) {
    j["residuals"].push_back(
        {{"name", res.name},
         {"sense", res.sense == ConstraintSense::NegativeSemidefinite ? "nsd" : "psd"},
         {"value", res.value}});
  }
  j["verification"]["samples"] = verification_samples;
  j["verification"]["violations"] = verification_violations;
  j["verification"]["worst_value"] = verification_worst_value;
  j["timings"]["solve_seconds"] = solve_seconds;
  j["timings"]["verify_seconds"] = verify_seconds;
  j["tool_version"] = tool_version;
  j["rng"] = rng_id;
  j["seeds"]["policy"] = policy_seed;
  j["seeds"]["verify"] = verify_seed;
  j["kind"] = kind;
  if (!reduction.empty()) j["reduction"] = reduction;
  return j.dump(indent) + "\n";
}

BoundReport BoundReport::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report: JSON parse error: ") + e.what());
  }
  BoundReport r;
  r.P = matrix_from_json(j.at("ellipsoid").at("P"));
  {
    const auto& c = j.at("ellipsoid").at("center");
    r.center.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) r.center[i] = c[i].get<double>();
  }
  r.lambda_star = j.at("lambda_star").get<double>();
  r.objective = j.at("objective").get<double>();
  if (j.contains("residuals")) {
    for (const auto& res : j["residuals"]) {
      r.residuals.push_back({res.at("name").get<std::string>(),
                             res.at("sense").get<std::string>() == "nsd"
                                 ? ConstraintSense::NegativeSemidefinite
                                 : ConstraintSense::PositiveSemidefinite,
                             res.at("value").get<double>()});
    }
  }
  r.verification_samples = j.at("verification").at("samples").get<long>();
  r.verification_violations = j.at("verification").at("violations").get<long>();
  r.verification_worst_value = j.at("verification").at("worst_value").get<double>();
  r.solve_seconds = j.at("timings").at("solve_seconds").get<double>();
  r.verify_seconds = j.at("timings").at("verify_seconds").get<double>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.rng_id = j.at("rng").get<std::string>();
  r.policy_seed = j.at("seeds").at("policy").get<std::uint64_t>();
  r.verify_seed = j.at("seeds").at("verify").get<std::uint64_t>();
  r.kind = j.at("kind").get<std::string>();
  if (j.contains("reduction")) r.reduction = j["reduction"].get<std::string>();
  return r;
}

BoundReport BoundReport::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("report: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void BoundReport::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("report: cannot write " + path);
  out << to_json_text();
}

}  // namespace switchbound
