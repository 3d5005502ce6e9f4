#pragma once

// Exact 2D lattice geometry: integer vectors, rational points, smooth complete
// fans, cone coordinates and the lattice norm.
//
// Ray indices are 0-based throughout the library; the fan is stored in
// counterclockwise order starting at the ray of smallest angle measured from
// the positive x-axis.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace tropcyl {

using Int = std::int64_t;
using Rational = boost::rational<Int>;

// Comparisons of Rational against plain integer literals recurse forever
// under C++20 rewritten operators in this Boost version; use these instead.
inline int sign(const Rational& r) { return r.numerator() > 0 ? 1 : (r.numerator() < 0 ? -1 : 0); }
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }

struct Vec2 {
  Int x = 0;
  Int y = 0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool is_zero() const { return x == 0 && y == 0; }
  friend constexpr Vec2 operator*(Int k, const Vec2& v) { return {k * v.x, k * v.y}; }
  friend constexpr auto operator<=>(const Vec2&, const Vec2&) = default;
};

std::ostream& operator<<(std::ostream& os, const Vec2& v);
std::string to_string(const Vec2& v);

constexpr Int det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
constexpr Int dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

Int lattice_gcd(const Vec2& v);
bool is_primitive(const Vec2& v);
// v / gcd(v); throws ZeroVector for v = 0.
Vec2 primitive_part(const Vec2& v);
// Same direction (positive multiple).
bool same_ray(const Vec2& a, const Vec2& b);
// Parallel up to sign.
bool parallel(const Vec2& a, const Vec2& b);
// Strict angular order on nonzero vectors, angles taken in [0, 2pi).
bool angle_less(const Vec2& a, const Vec2& b);

// Point of M_R with exact rational coordinates.
struct Point2 {
  Rational x{0};
  Rational y{0};

  Point2() = default;
  Point2(Rational px, Rational py) : x(px), y(py) {}
  explicit Point2(const Vec2& v) : x(v.x), y(v.y) {}

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  bool is_zero() const { return x.numerator() == 0 && y.numerator() == 0; }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
  bool operator<(const Point2& o) const { return x < o.x || (x == o.x && y < o.y); }
};

Point2 operator*(const Rational& s, const Vec2& v);
Point2 operator*(const Rational& s, const Point2& p);
Rational det(const Vec2& a, const Point2& p);
Rational dot(const Vec2& a, const Point2& p);
std::ostream& operator<<(std::ostream& os, const Point2& p);
// Positive integral multiple of p, or nullopt for p = 0.
std::optional<Vec2> integral_direction(const Point2& p);

struct FanValidation;

class Fan {
 public:
  const std::vector<Vec2>& rays() const { return rays_; }
  std::size_t size() const { return rays_.size(); }
  // Cyclic access.
  const Vec2& ray(std::ptrdiff_t i) const;
  std::size_t next(std::size_t i) const { return (i + 1) % rays_.size(); }
  std::size_t prev(std::size_t i) const { return (i + rays_.size() - 1) % rays_.size(); }
  std::optional<std::size_t> ray_index(const Vec2& v) const;
  // k with u_{i-1} + u_{i+1} = k u_i; the self-intersection of D_i is -k.
  Int self_intersection(std::size_t i) const;

  bool operator==(const Fan&) const = default;

 private:
  explicit Fan(std::vector<Vec2> rays) : rays_(std::move(rays)) {}
  friend struct FanValidation;
  friend FanValidation validate_fan_rotation(std::span<const Vec2> rays);

  std::vector<Vec2> rays_;
};

struct FanValidation {
  Fan fan;
  // fan.ray(k) == input[(k + rotation) % m]
  std::size_t rotation = 0;
};

FanValidation validate_fan_rotation(std::span<const Vec2> rays);
Fan validate_fan(std::span<const Vec2> rays);

// v = a * u_cone + b * u_{cone+1}; on a ray u_i the cone is i and b = 0.
struct ConeCoordinates {
  std::size_t cone = 0;
  Int a = 0;
  Int b = 0;
};

ConeCoordinates cone_coordinates(const Fan& fan, const Vec2& v);
Int norm(const Fan& fan, const Vec2& v);

// Cone containing x + eps * p for all small eps > 0. x may be the origin.
std::size_t germ_cone(const Fan& fan, const Point2& x, const Vec2& p);

// Coefficient vector in Z^m of the linear extension of the cone-coordinate
// map of `cone` evaluated at v. Entries may be negative off the cone.
std::vector<Int> linear_profile(const Fan& fan, std::size_t cone, const Vec2& v);
// Boundary contact profile of a leg of slope v: its cone coordinates spread
// over the two rays of its cone.
std::vector<Int> cone_profile(const Fan& fan, const Vec2& v);

struct Refinement {
  Fan fan;
  std::vector<Vec2> inserted;  // requested ray first, then resolution rays
  std::size_t new_ray_index = 0;
};

// Inserts d and resolves the two new cones by Hirzebruch-Jung subdivision.
Refinement refine_fan(const Fan& fan, const Vec2& d);

}  // namespace tropcyl
