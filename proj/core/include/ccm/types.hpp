#pragma once

// Shared primitive types and error hierarchy.  All lengths are millimetres,
// forces Newtons, angles radians, unless a name says otherwise.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccm {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;

/// Base class for all recoverable engine errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
  using Error::Error;
};
struct GeometryError : Error {
  using Error::Error;
};
struct MeshError : Error {
  using Error::Error;
};
struct LoopError : Error {
  using Error::Error;
};
struct WearError : Error {
  using Error::Error;
};
struct DeckError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

/// Wrap an angle to [0, 2*pi).
inline double wrap_angle_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline Vec2 unit_dir(double angle) { return Vec2(std::cos(angle), std::sin(angle)); }

/// Rotate 90 degrees counter-clockwise.
inline Vec2 perp_ccw(const Vec2& v) { return Vec2(-v.y(), v.x()); }

}  // namespace ccm
