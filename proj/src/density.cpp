#include "vperc/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace vperc {
namespace {

struct Arc {
  Vec2 c;
  double sx, sy;  // quadrant: points with sx*(x-cx) >= 0 and sy*(y-cy) >= 0
};

double dist_to_rect(Vec2 x, const Rect& r) {
  const double dx = std::max({r.x1 - x.x, 0.0, x.x - r.x2});
  const double dy = std::max({r.y1 - x.y, 0.0, x.y - r.y2});
  return std::hypot(dx, dy);
}

std::optional<Vec2> segment_cross(Vec2 p, Vec2 p2, Vec2 q, Vec2 q2) {
  const Vec2 d = p2 - p, e = q2 - q;
  const double den = cross(d, e);
  if (den == 0.0) return std::nullopt;
  const double t = cross(q - p, e) / den;
  const double u = cross(q - p, d) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return p + t * d;
}

template <class F>
void circle_cross(Vec2 p, Vec2 p2, const Arc& arc, double r, F f) {
  const Vec2 d = p2 - p, w = p - arc.c;
  const double a = norm2(d);
  if (a == 0.0) return;
  const double b = 2.0 * dot(w, d);
  const double c = norm2(w) - r * r;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (t < 0.0 || t > 1.0) continue;
    const Vec2 x = p + t * d;
    if (arc.sx * (x.x - arc.c.x) >= 0.0 && arc.sy * (x.y - arc.c.y) >= 0.0) f(x);
  }
}

}  // namespace

std::vector<Vec2> translations_meeting(const Domain& domain, const Rect& box, const Rect& target) {
  if (!domain.is_torus()) {
    if (box.intersects(target)) return {Vec2{0.0, 0.0}};
    return {};
  }
  const double s = domain.side();
  std::vector<Vec2> out;
  const long kx1 = static_cast<long>(std::ceil((target.x1 - box.x2) / s));
  const long kx2 = static_cast<long>(std::floor((target.x2 - box.x1) / s));
  const long ky1 = static_cast<long>(std::ceil((target.y1 - box.y2) / s));
  const long ky2 = static_cast<long>(std::floor((target.y2 - box.y1) / s));
  for (long kx = kx1; kx <= kx2; ++kx) {
    for (long ky = ky1; ky <= ky2; ++ky) {
      out.push_back({static_cast<double>(kx) * s, static_cast<double>(ky) * s});
    }
  }
  return out;
}

DenseVerdict check_dense(const VoronoiGraph& graph, const Rect& rect, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::invalid_parameter, "r must be positive");
  DenseVerdict out;
  const PointSet& ps = *graph.points;
  const Rect region = rect.expanded(r);
  if (ps.empty()) {
    out.dense = false;
    out.worst = rect.centre();
    out.max_distance = std::numeric_limits<double>::infinity();
    return out;
  }
  const Domain& dom = ps.domain;
  const SpatialIndex& index = *graph.index;
  out.max_distance = -1.0;
  const auto consider = [&](Vec2 x) {
    if (dist_to_rect(x, rect) > r * (1.0 + 1e-12)) return;
    const double d = index.nearest(x).distance;
    if (d > out.max_distance) {
      out.max_distance = d;
      out.worst = x;
    }
  };

  const Arc arcs[4] = {{{rect.x1, rect.y1}, -1, -1},
                       {{rect.x2, rect.y1}, 1, -1},
                       {{rect.x2, rect.y2}, 1, 1},
                       {{rect.x1, rect.y2}, -1, 1}};
  const Segment sides[4] = {{{rect.x1, rect.y1 - r}, {rect.x2, rect.y1 - r}},
                            {{rect.x2 + r, rect.y1}, {rect.x2 + r, rect.y2}},
                            {{rect.x1, rect.y2 + r}, {rect.x2, rect.y2 + r}},
                            {{rect.x1 - r, rect.y1}, {rect.x1 - r, rect.y2}}};
  for (const auto& s : sides) {
    consider(s.first);
    consider(s.second);
  }

  // Voronoi vertices.
  for (const auto& t : graph.triangles) {
    const Rect box{t.centre.x, t.centre.y, t.centre.x, t.centre.y};
    for (const Vec2 tr : translations_meeting(dom, box, region)) consider(t.centre + tr);
  }

  // Voronoi edges against the boundary of R[r]; sites of edges crossing an
  // arc own part of it.
  std::vector<std::size_t> owners[4];
  for (int k = 0; k < 4; ++k) {
    const Vec2 c = arcs[k].c;
    for (const Vec2 end : {c + Vec2{arcs[k].sx * r, 0.0}, c + Vec2{0.0, arcs[k].sy * r}}) {
      owners[k].push_back(index.nearest(end).index);
    }
  }
  for (const auto& e : graph.edges) {
    const Rect box{std::min(e.o1.x, e.o2.x), std::min(e.o1.y, e.o2.y), std::max(e.o1.x, e.o2.x),
                   std::max(e.o1.y, e.o2.y)};
    for (const Vec2 tr : translations_meeting(dom, box, region)) {
      const Vec2 p = e.o1 + tr, q = e.o2 + tr;
      for (const auto& s : sides) {
        if (auto x = segment_cross(p, q, s.first, s.second)) consider(*x);
      }
      for (int k = 0; k < 4; ++k) {
        circle_cross(p, q, arcs[k], r, [&](Vec2 x) {
          consider(x);
          owners[k].push_back(e.a);
          owners[k].push_back(e.b);
        });
      }
    }
  }

  // Along an arc the distance to a fixed site peaks in the direction away from it.
  for (int k = 0; k < 4; ++k) {
    const Arc& arc = arcs[k];
    for (const std::size_t i : owners[k]) {
      const Vec2 v = dom.delta(ps.sites[i], arc.c);
      const double len = norm(v);
      if (len == 0.0) continue;
      const Vec2 x = arc.c + (r / len) * v;
      if (arc.sx * (x.x - arc.c.x) >= 0.0 && arc.sy * (x.y - arc.c.y) >= 0.0) consider(x);
    }
  }
  out.dense = out.max_distance < r;
  return out;
}

}  // namespace vperc
