#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vperc/error.hpp"

namespace vperc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr Vec2 midpoint(Vec2 a, Vec2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Closed axis-aligned rectangle [x1,x2] x [y1,y2] with x1 < x2 and y1 < y2.
struct Rect {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  static Rect checked(double x1, double y1, double x2, double y2) {
    if (!(x1 < x2) || !(y1 < y2) || !std::isfinite(x1) || !std::isfinite(x2) ||
        !std::isfinite(y1) || !std::isfinite(y2)) {
      throw Error(ErrorKind::invalid_parameter, "rectangle needs finite x1<x2, y1<y2");
    }
    return Rect{x1, y1, x2, y2};
  }

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double aspect() const { return width() / height(); }
  double area() const { return width() * height(); }
  Vec2 centre() const { return {0.5 * (x1 + x2), 0.5 * (y1 + y2)}; }
  bool contains(Vec2 p) const { return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2; }
  Rect expanded(double d) const { return Rect{x1 - d, y1 - d, x2 + d, y2 + d}; }
  Rect translated(Vec2 t) const { return Rect{x1 + t.x, y1 + t.y, x2 + t.x, y2 + t.y}; }
  bool contains(const Rect& r) const {
    return r.x1 >= x1 && r.x2 <= x2 && r.y1 >= y1 && r.y2 <= y2;
  }
  bool intersects(const Rect& r) const {
    return r.x1 <= x2 && r.x2 >= x1 && r.y1 <= y2 && r.y2 >= y1;
  }
};

/// Sampling domain: either a plane window (a core rectangle surrounded by a
/// guard band; points live in the expanded rectangle) or a flat torus of side s.
class Domain {
 public:
  enum class Kind { plane, torus };

  static Domain torus(double side);
  /// `guard` must be at least 2r with r = 2 sqrt(log max(longest side, e)).
  static Domain plane(const Rect& core, double guard);
  static Domain plane(const Rect& core);  ///< minimal admissible guard band
  static double minimum_guard(const Rect& core);

  Kind kind() const { return kind_; }
  bool is_torus() const { return kind_ == Kind::torus; }
  double side() const { return side_; }
  const Rect& core() const { return core_; }
  double guard() const { return guard_; }
  /// Rectangle in which sites live: [0,s)^2 on the torus, core[guard] in the plane.
  Rect bounds() const;
  double area() const;

  /// Canonical representative; identity in the plane.
  Vec2 wrap(Vec2 p) const;
  /// Displacement b - a, reduced on the torus to [-s/2, s/2] per coordinate.
  Vec2 delta(Vec2 a, Vec2 b) const;
  double distance(Vec2 a, Vec2 b) const { return norm(delta(a, b)); }
  double distance2(Vec2 a, Vec2 b) const { return norm2(delta(a, b)); }
  bool contains(Vec2 p) const;

  /// Scale used for the 2 sqrt(log s) radii: torus side, or the longest core side.
  double scale() const;

 private:
  Kind kind_ = Kind::torus;
  double side_ = 1.0;
  Rect core_{};
  double guard_ = 0.0;
};

/// The r(s) = 2 sqrt(log s) radius used by the density event and badness
/// definitions, floored at s = e so it stays positive for small windows.
inline double density_radius(double s) { return 2.0 * std::sqrt(std::log(std::max(s, std::exp(1.0)))); }

struct PointSet {
  std::vector<Vec2> sites;
  Domain domain = Domain::torus(1.0);
  std::uint64_t seed = 0;
  double intensity = 1.0;

  std::size_t size() const { return sites.size(); }
  bool empty() const { return sites.empty(); }

  /// Wraps/validates sites against the domain and rejects exact duplicates.
  static PointSet from_sites(std::vector<Vec2> sites, const Domain& domain, double intensity = 1.0,
                             std::uint64_t seed = 0);
};

}  // namespace vperc
