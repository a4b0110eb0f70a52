#include "vperc/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vperc {

double signed_area(const Polygon& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 centroid(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n == 0) return {};
  const double a = signed_area(poly);
  if (std::fabs(a) < 1e-300) {
    Vec2 c{};
    for (const auto& p : poly) c = c + p;
    return (1.0 / static_cast<double>(n)) * c;
  }
  Vec2 c{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % n];
    c = c + cross(p, q) * (p + q);
  }
  return (1.0 / (6.0 * a)) * c;
}

Rect bounding_box(const Polygon& poly) {
  Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : poly) {
    r.x1 = std::min(r.x1, p.x);
    r.y1 = std::min(r.y1, p.y);
    r.x2 = std::max(r.x2, p.x);
    r.y2 = std::max(r.y2, p.y);
  }
  return r;
}

Polygon translated(const Polygon& poly, Vec2 t) {
  Polygon out(poly);
  for (auto& p : out) p = p + t;
  return out;
}

Polygon rect_polygon(const Rect& r) { return {{r.x1, r.y1}, {r.x2, r.y1}, {r.x2, r.y2}, {r.x1, r.y2}}; }

Polygon clip_halfplane(const Polygon& poly, Vec2 n, double c) {
  Polygon out;
  const std::size_t m = poly.size();
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % m];
    const double fp = dot(n, p) - c, fq = dot(n, q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

Polygon clip_rect(const Polygon& poly, const Rect& r) {
  Polygon out = clip_halfplane(poly, {-1, 0}, -r.x1);
  out = clip_halfplane(out, {1, 0}, r.x2);
  out = clip_halfplane(out, {0, -1}, -r.y1);
  return clip_halfplane(out, {0, 1}, r.y2);
}

bool intersects(const Polygon& convex, const Rect& r) {
  if (convex.empty()) return false;
  const Rect bb = bounding_box(convex);
  if (!bb.intersects(r)) return false;
  // Remaining separating axes are the polygon's edge normals.
  const Polygon corners = rect_polygon(r);
  const std::size_t n = convex.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = convex[i], q = convex[(i + 1) % n];
    const Vec2 e = q - p;
    if (e.x == 0.0 && e.y == 0.0) continue;
    bool all_outside = true;
    for (const auto& c : corners) {
      if (cross(e, c - p) >= 0.0) {
        all_outside = false;
        break;
      }
    }
    if (all_outside) return false;
  }
  return true;
}

std::optional<Segment> clip_segment(Vec2 a, Vec2 b, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - r.x1, r.x2 - a.x, a.y - r.y1, r.y2 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return std::nullopt;
  }
  Vec2 s = a + t0 * d, e = a + t1 * d;
  const auto clamp = [&](Vec2 v) {
    return Vec2{std::clamp(v.x, r.x1, r.x2), std::clamp(v.y, r.y1, r.y2)};
  };
  return Segment{clamp(s), clamp(e)};
}

std::optional<Segment> clip_segment(Vec2 a, Vec2 b, const Polygon& convex) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const std::size_t n = convex.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = convex[i], q = convex[(i + 1) % n];
    const Vec2 e = q - p;
    if (e.x == 0.0 && e.y == 0.0) continue;
    // Inside: cross(e, x - p) >= 0.
    const double f0 = cross(e, a - p);
    const double fd = cross(e, d);
    if (fd == 0.0) {
      if (f0 < 0.0) return std::nullopt;
      continue;
    }
    const double t = -f0 / fd;
    if (fd > 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return std::nullopt;
  }
  return Segment{a + t0 * d, a + t1 * d};
}

bool inside_open(const Polygon& convex, const Rect& r) {
  for (const auto& p : convex) {
    if (!(p.x > r.x1 && p.x < r.x2 && p.y > r.y1 && p.y < r.y2)) return false;
  }
  return !convex.empty();
}

Segment side_segment(const Rect& r, Side side) {
  switch (side) {
    case Side::left: return {{r.x1, r.y1}, {r.x1, r.y2}};
    case Side::right: return {{r.x2, r.y1}, {r.x2, r.y2}};
    case Side::bottom: return {{r.x1, r.y1}, {r.x2, r.y1}};
    case Side::top: return {{r.x1, r.y2}, {r.x2, r.y2}};
  }
  return {};
}

}  // namespace vperc
