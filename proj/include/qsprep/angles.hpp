#pragma once

#include <cmath>
#include <numbers>

namespace qsp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPi = 4 * std::numbers::pi;

// Ry is 4π-periodic on real amplitudes (Ry(θ + 2π) = -Ry(θ)), so angles that
// must stay sign-exact are reduced into (-2π, 2π].
inline double wrap_4pi(double theta) {
  double r = std::fmod(theta, kFourPi);
  if (r > 2 * kPi) r -= kFourPi;
  if (r <= -2 * kPi) r += kFourPi;
  return r;
}

inline double wrap_2pi(double theta) {
  double r = std::fmod(theta, 2 * kPi);
  if (r > kPi) r -= 2 * kPi;
  if (r <= -kPi) r += 2 * kPi;
  return r;
}

// Distance from theta to the nearest multiple of 4π.
inline double distance_4pi(double theta) { return std::abs(wrap_4pi(theta)); }

inline bool same_angle_4pi(double a, double b, double tol = 1e-9) {
  return distance_4pi(a - b) <= tol;
}

// Angle φ with (cos φ/2, sin φ/2) ∝ (a0, a1), in (-2π, 2π].
inline double pair_angle(double a0, double a1) { return 2 * std::atan2(a1, a0); }

}  // namespace qsp
