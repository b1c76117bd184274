#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "switchbound/system.hpp"

// Shared benchmark systems: the planar shifted-rotation pair (with true
// equilibria at [+1,0] / [-1,0]) and the "erratic" pair, plus their noisy
// variants.
namespace fixtures {

inline Eigen::Matrix2d scaled_rotation(double r, double theta) {
  Eigen::Matrix2d R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r * R;
}

// Rotation mode matrices: A1 = 0.9 R(0.2), A2 = 0.9 R(0.1).
inline Eigen::Matrix2d rotationA1() { return scaled_rotation(0.9, 0.2); }
inline Eigen::Matrix2d rotationA2() { return scaled_rotation(0.9, 0.1); }

// Affine terms chosen so the mode equilibria sit at x_eq1 = [1, 0] and
// x_eq2 = [-1, 0]: w = (I - A) x_eq.
inline Eigen::Vector2d rotationW1() {
  return (Eigen::Matrix2d::Identity() - rotationA1()) * Eigen::Vector2d(1.0, 0.0);
}
inline Eigen::Vector2d rotationW2() {
  return (Eigen::Matrix2d::Identity() - rotationA2()) * Eigen::Vector2d(-1.0, 0.0);
}

inline switchbound::SwitchedSystem planar_rotation_affine() {
  using switchbound::Mode;
  return switchbound::SwitchedSystem::create(
      {Mode::affine(rotationA1(), rotationW1()), Mode::affine(rotationA2(), rotationW2())});
}

// Noise covariances paired with the rotation modes.
inline Eigen::Matrix2d noiseQ1() { return Eigen::Vector2d(2.0, 3.0).asDiagonal(); }
inline Eigen::Matrix2d noiseQ2() { return Eigen::Vector2d(4.0, 1.0).asDiagonal(); }

inline switchbound::SwitchedSystem planar_rotation_noisy() {
  using switchbound::Mode;
  return switchbound::SwitchedSystem::create(
      {Mode::noisy(rotationA1(), noiseQ1()), Mode::noisy(rotationA2(), noiseQ2())});
}

// The loosely clustered pair with identity noise.
inline Eigen::Matrix2d erraticA1() {
  Eigen::Matrix2d A;
  A << 0.7, -0.7, 0.2, 0.7;
  return A;
}
inline Eigen::Matrix2d erraticA2() {
  Eigen::Matrix2d A;
  A << 0.6, -0.3, 0.1, 0.6;
  return A;
}

inline switchbound::SwitchedSystem erratic_noisy() {
  using switchbound::Mode;
  return switchbound::SwitchedSystem::create(
      {Mode::noisy(erraticA1(), Eigen::Matrix2d::Identity()),
       Mode::noisy(erraticA2(), Eigen::Matrix2d::Identity())});
}

}  // namespace fixtures
