#pragma once

#include <stdexcept>
#include <string>

namespace switchbound {

// Thrown when (I - A) or a lifted counterpart is singular, i.e. the affine
// map has no unique fixed point.
class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown inside the SDP solver (not plain infeasibility, which
// is reported through SolveResult::status).
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace switchbound
