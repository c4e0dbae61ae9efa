#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace navevo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle, min corner inclusive.
struct Rect {
  Vec2 min;
  Vec2 max;

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline bool contains(const Rect& r, Vec2 p) {
  return p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y;
}

/// Euclidean distance from a point to a rectangle (0 inside).
inline double distance(const Rect& r, Vec2 p) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

/// Euclidean distance between two rectangles (0 when they touch or overlap).
inline double distance(const Rect& a, const Rect& b) {
  const double dx = std::max({a.min.x - b.max.x, 0.0, b.min.x - a.max.x});
  const double dy = std::max({a.min.y - b.max.y, 0.0, b.min.y - a.max.y});
  return std::hypot(dx, dy);
}

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double a) {
  double w = wrap_two_pi(a);
  if (w > std::numbers::pi) w -= kTwoPi;
  return w;
}

}  // namespace navevo
