#pragma once

#include <cmath>
#include <stdexcept>

namespace maxlag {

/// A point (or displacement) in the plane.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(b - a); }

inline Point2 normalized(Point2 a) {
  const double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
  return a / n;
}

/// Rotate 90 degrees counterclockwise.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

/// Twice the signed area of triangle (a, b, c); positive when CCW.
inline double signed_area2(Point2 a, Point2 b, Point2 c) {
  return cross(b - a, c - a);
}

inline double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * signed_area2(a, b, c);
}

/// Interior angle of the wedge (b, apex, c) at `apex`, in [0, pi].
inline double wedge_angle(Point2 apex, Point2 b, Point2 c) {
  const Point2 u = b - apex, v = c - apex;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

}  // namespace maxlag
