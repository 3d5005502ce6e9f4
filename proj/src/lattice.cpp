#include "tropcyl/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tropcyl/error.hpp"

namespace tropcyl {

std::ostream& operator<<(std::ostream& os, const Vec2& v) {
  return os << '(' << v.x << ',' << v.y << ')';
}

std::string to_string(const Vec2& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Int lattice_gcd(const Vec2& v) { return std::gcd(v.x, v.y); }

bool is_primitive(const Vec2& v) { return !v.is_zero() && lattice_gcd(v) == 1; }

Vec2 primitive_part(const Vec2& v) {
  if (v.is_zero()) throw Error(ErrorCode::ZeroVector, "primitive part of the zero vector");
  const Int g = lattice_gcd(v);
  return {v.x / g, v.y / g};
}

bool same_ray(const Vec2& a, const Vec2& b) {
  return !a.is_zero() && !b.is_zero() && det(a, b) == 0 && dot(a, b) > 0;
}

bool parallel(const Vec2& a, const Vec2& b) {
  return !a.is_zero() && !b.is_zero() && det(a, b) == 0;
}

namespace {

int half_plane(const Vec2& v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; }

}  // namespace

bool angle_less(const Vec2& a, const Vec2& b) {
  const int ha = half_plane(a);
  const int hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return det(a, b) > 0;
}

Point2 operator*(const Rational& s, const Vec2& v) { return {s * v.x, s * v.y}; }
Point2 operator*(const Rational& s, const Point2& p) { return {s * p.x, s * p.y}; }
Rational det(const Vec2& a, const Point2& p) { return Rational(a.x) * p.y - Rational(a.y) * p.x; }
Rational dot(const Vec2& a, const Point2& p) { return Rational(a.x) * p.x + Rational(a.y) * p.y; }

std::ostream& operator<<(std::ostream& os, const Point2& p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

std::optional<Vec2> integral_direction(const Point2& p) {
  if (p.is_zero()) return std::nullopt;
  const Int l = std::lcm(p.x.denominator(), p.y.denominator());
  return primitive_part(Vec2{p.x.numerator() * (l / p.x.denominator()),
                             p.y.numerator() * (l / p.y.denominator())});
}

const Vec2& Fan::ray(std::ptrdiff_t i) const {
  const auto m = static_cast<std::ptrdiff_t>(rays_.size());
  return rays_[static_cast<std::size_t>(((i % m) + m) % m)];
}

std::optional<std::size_t> Fan::ray_index(const Vec2& v) const {
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    if (rays_[i] == v) return i;
  }
  return std::nullopt;
}

Int Fan::self_intersection(std::size_t i) const {
  const Vec2 s = ray(static_cast<std::ptrdiff_t>(i) - 1) + ray(static_cast<std::ptrdiff_t>(i) + 1);
  const Vec2& u = rays_[i];
  // s = k u with u primitive.
  const Int k = (u.x != 0) ? s.x / u.x : s.y / u.y;
  return -k;
}

FanValidation validate_fan_rotation(std::span<const Vec2> rays) {
  const std::size_t m = rays.size();
  if (m < 3) throw Error(ErrorCode::TooFewRays, "a complete fan needs at least 3 rays, got " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_primitive(rays[i])) {
      throw Error(ErrorCode::NotPrimitive, "ray " + std::to_string(i) + " = " + to_string(rays[i]));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = rays[i];
    const Vec2& b = rays[(i + 1) % m];
    if (det(a, b) != 1) {
      throw Error(ErrorCode::NotSmooth, "det(" + to_string(a) + ", " + to_string(b) +
                                            ") = " + std::to_string(det(a, b)) + " at index " +
                                            std::to_string(i));
    }
  }
  // Every step turns counterclockwise by less than pi, so the cyclic sequence
  // winds around the origin once exactly when the angle wraps once.
  std::size_t wraps = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!angle_less(rays[i], rays[(i + 1) % m])) ++wraps;
  }
  if (wraps != 1) {
    throw Error(ErrorCode::NotComplete, "rays wind " + std::to_string(wraps) + " times around the origin");
  }

  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (angle_less(rays[i], rays[start])) start = i;
  }
  std::vector<Vec2> ordered;
  ordered.reserve(m);
  for (std::size_t k = 0; k < m; ++k) ordered.push_back(rays[(k + start) % m]);
  return FanValidation{Fan(std::move(ordered)), start};
}

Fan validate_fan(std::span<const Vec2> rays) { return validate_fan_rotation(rays).fan; }

ConeCoordinates cone_coordinates(const Fan& fan, const Vec2& v) {
  if (v.is_zero()) throw Error(ErrorCode::ZeroVector, "cone coordinates of the zero vector");
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Int a = det(v, fan.ray(static_cast<std::ptrdiff_t>(i) + 1));
    const Int b = det(fan.ray(static_cast<std::ptrdiff_t>(i)), v);
    if (a > 0 && b >= 0) return {i, a, b};
  }
  throw Error(ErrorCode::NotComplete, "no cone contains " + to_string(v));
}

Int norm(const Fan& fan, const Vec2& v) {
  if (v.is_zero()) return 0;
  const ConeCoordinates c = cone_coordinates(fan, v);
  return c.a + c.b;
}

std::size_t germ_cone(const Fan& fan, const Point2& x, const Vec2& p) {
  const auto dir = integral_direction(x);
  if (!dir) return cone_coordinates(fan, p).cone;
  const ConeCoordinates c = cone_coordinates(fan, *dir);
  if (c.b != 0) return c.cone;
  // x lies on ray u_cone.
  const Int side = det(fan.ray(static_cast<std::ptrdiff_t>(c.cone)), p);
  if (side < 0) return fan.prev(c.cone);
  return c.cone;
}

std::vector<Int> linear_profile(const Fan& fan, std::size_t cone, const Vec2& v) {
  std::vector<Int> out(fan.size(), 0);
  const Vec2& u = fan.ray(static_cast<std::ptrdiff_t>(cone));
  const Vec2& w = fan.ray(static_cast<std::ptrdiff_t>(cone) + 1);
  out[cone] += det(v, w);
  out[fan.next(cone)] += det(u, v);
  return out;
}

std::vector<Int> cone_profile(const Fan& fan, const Vec2& v) {
  if (v.is_zero()) return std::vector<Int>(fan.size(), 0);
  return linear_profile(fan, cone_coordinates(fan, v).cone, v);
}

namespace {

// (s, t) with a*s + b*t = gcd(a, b).
std::pair<Int, Int> extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_s, -old_t};
  return {old_s, old_t};
}

// Lattice point w in cone(u, v) with det(u, w) = 1 and 0 < det(w, v) < det(u, v).
Vec2 first_interior_generator(const Vec2& u, const Vec2& v) {
  const auto [s, t] = extended_gcd(u.x, u.y);
  const Vec2 w0{-t, s};
  const Int n = det(u, v);
  const Int c = det(w0, v);
  const Int r = ((c % n) + n) % n;
  const Int k = (r - c) / n;
  return w0 + k * u;
}

}  // namespace

Refinement refine_fan(const Fan& fan, const Vec2& d) {
  if (!is_primitive(d)) throw Error(ErrorCode::NotPrimitive, "refinement direction " + to_string(d));
  if (fan.ray_index(d)) throw Error(ErrorCode::AlreadyRay, to_string(d) + " is already a ray");

  const ConeCoordinates c = cone_coordinates(fan, d);
  std::vector<Vec2> rays = fan.rays();
  std::vector<Vec2> inserted{d};
  rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(c.cone) + 1, d);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const Vec2 u = rays[i];
      const Vec2 v = rays[(i + 1) % rays.size()];
      if (det(u, v) > 1) {
        const Vec2 w = first_interior_generator(u, v);
        rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(i) + 1, w);
        inserted.push_back(w);
        changed = true;
        break;
      }
    }
  }
  Fan refined = validate_fan(rays);
  const std::size_t idx = *refined.ray_index(d);
  return Refinement{std::move(refined), std::move(inserted), idx};
}

}  // namespace tropcyl
