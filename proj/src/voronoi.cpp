#include "vperc/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vperc/delaunay.hpp"
#include "vperc/random.hpp"

namespace vperc {
namespace {

constexpr int kCentral = 4;

Vec2 copy_offset(int copy, double s) {
  return {static_cast<double>(copy % 3 - 1) * s, static_cast<double>(copy / 3 - 1) * s};
}

bool positive_offset(Vec2 o) { return o.x > 0.0 || (o.x == 0.0 && o.y > 0.0); }

struct Replica {
  std::vector<Vec2> pts;
  std::vector<std::size_t> site;
  std::vector<int> copy;
  std::vector<PerturbKey> keys;

  void add(Vec2 p, std::size_t i, int c) {
    pts.push_back(p);
    site.push_back(i);
    copy.push_back(c);
    keys.push_back({static_cast<std::int64_t>(i), c});
  }
};

// Canonical copies first so that vertex i < N is site i itself.
Replica replicate(const std::vector<Vec2>& sites, double s, double w) {
  Replica r;
  const std::size_t n = sites.size();
  for (std::size_t i = 0; i < n; ++i) r.add(sites[i], i, kCentral);
  for (int c = 0; c < 9; ++c) {
    if (c == kCentral) continue;
    const Vec2 off = copy_offset(c, s);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 q = sites[i] + off;
      if (q.x >= -w && q.x <= s + w && q.y >= -w && q.y <= s + w) r.add(q, i, c);
    }
  }
  return r;
}

struct Circle {
  Vec2 c;
  double r;
};

Circle circle_of(const Triangulation& tri, int t) {
  const auto& v = tri.tris[t].v;
  const Vec2 a = tri.points[v[0]], b = tri.points[v[1]], c = tri.points[v[2]];
  const Vec2 o = circumcentre(a, b, c);
  // Largest of the three distances, so discs are never under-estimated.
  const double r = std::max({distance(o, a), distance(o, b), distance(o, c)});
  return {o, r};
}

void finish_edge(VoronoiEdge& e) {
  e.m = midpoint(e.o1, e.o2);
}

VoronoiGraph single_site(std::shared_ptr<const PointSet> ps) {
  VoronoiGraph g;
  g.points = ps;
  const Domain& d = ps->domain;
  const Vec2 z = ps->sites[0];
  VoronoiCell cell;
  if (d.is_torus()) {
    const double h = 0.5 * d.side();
    cell.polygon = rect_polygon(Rect{z.x - h, z.y - h, z.x + h, z.y + h});
    cell.determined = true;
    VoronoiEdge ex;
    ex.a = ex.b = 0;
    ex.offset = {d.side(), 0.0};
    ex.kx = 1;
    ex.o1 = {z.x + h, z.y - h};
    ex.o2 = {z.x + h, z.y + h};
    VoronoiEdge ey;
    ey.a = ey.b = 0;
    ey.offset = {0.0, d.side()};
    ey.ky = 1;
    ey.o1 = {z.x - h, z.y + h};
    ey.o2 = {z.x + h, z.y + h};
    for (auto* e : {&ex, &ey}) {
      e->r1 = e->r2 = std::sqrt(2.0) * h;
      finish_edge(*e);
      cell.edges.push_back(g.edges.size());
      g.edges.push_back(*e);
    }
    g.max_empty_radius = std::sqrt(2.0) * h;
  } else {
    cell.polygon = rect_polygon(d.bounds());
    cell.determined = false;
    g.max_empty_radius = std::numeric_limits<double>::infinity();
  }
  cell.area = signed_area(cell.polygon);
  g.cells.push_back(std::move(cell));
  return g;
}

VoronoiGraph build_torus(std::shared_ptr<const PointSet> ps) {
  const auto& sites = ps->sites;
  const std::size_t n = sites.size();
  const double s = ps->domain.side();
  const double third = s / 3.0;
  const double density = static_cast<double>(n) / (s * s);
  double w = std::min(
      s, 2.2 * std::sqrt((std::log(2.0 * static_cast<double>(n)) + 2.0) / (std::numbers::pi * density)));

  Replica rep;
  Triangulation tri;
  std::vector<Circle> circ;
  for (;;) {
    rep = replicate(sites, s, w);
    tri = delaunay(rep.pts, rep.keys);
    circ.assign(tri.tris.size(), Circle{{}, -1.0});
    const double tol = 1e-9 * s;
    bool ok = true;
    for (std::size_t t = 0; t < tri.tris.size() && ok; ++t) {
      const auto& v = tri.tris[t].v;
      const bool central = (v[0] >= 0 && static_cast<std::size_t>(v[0]) < n) ||
                           (v[1] >= 0 && static_cast<std::size_t>(v[1]) < n) ||
                           (v[2] >= 0 && static_cast<std::size_t>(v[2]) < n);
      if (!central) continue;
      if (tri.tris[t].ghost()) {
        ok = false;
        break;
      }
      circ[t] = circle_of(tri, static_cast<int>(t));
      const Circle& c = circ[t];
      if (c.c.x - c.r < -w + tol || c.c.x + c.r > s + w - tol || c.c.y - c.r < -w + tol ||
          c.c.y + c.r > s + w - tol) {
        ok = false;
      }
    }
    if (ok || w >= s) break;
    w = std::min(2.0 * w, s);
  }

  VoronoiGraph g;
  g.points = ps;
  g.margin = w;
  g.degeneracies = tri.ties;
  g.cells.resize(n);
  double max_r = 0.0;
  for (std::size_t t = 0; t < circ.size(); ++t) {
    if (circ[t].r < 0.0 && !tri.tris[t].ghost()) {
      const auto& v = tri.tris[t].v;
      if (static_cast<std::size_t>(v[0]) < n || static_cast<std::size_t>(v[1]) < n ||
          static_cast<std::size_t>(v[2]) < n) {
        circ[t] = circle_of(tri, static_cast<int>(t));
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto fan = tri.fan(static_cast<int>(v));
    for (const int t : fan) {
      if (tri.tris[t].ghost() || circ[t].r < 0.0) {
        throw Error(ErrorKind::too_sparse, "a cell wraps around the torus");
      }
      max_r = std::max(max_r, circ[t].r);
    }
  }
  if (max_r >= third) {
    throw Error(ErrorKind::too_sparse, "empty circle of radius " + std::to_string(max_r) +
                                           " is not below s/3 = " + std::to_string(third));
  }
  g.max_empty_radius = max_r;

  for (std::size_t v = 0; v < n; ++v) {
    const auto fan = tri.fan(static_cast<int>(v));
    VoronoiCell& cell = g.cells[v];
    cell.polygon.reserve(fan.size());
    for (std::size_t j = 0; j < fan.size(); ++j) {
      const int t = fan[j];
      const int t2 = fan[(j + 1) % fan.size()];
      cell.polygon.push_back(circ[t].c);
      const auto& tv = tri.tris[t].v;
      const int k = tri.tris[t].index_of(static_cast<int>(v));
      const int b = tv[(k + 2) % 3];
      const std::size_t sb = rep.site[b];
      const Vec2 off = copy_offset(rep.copy[b], s);
      if (!(v < sb || (v == sb && positive_offset(off)))) continue;
      VoronoiEdge e;
      e.a = v;
      e.b = sb;
      e.offset = off;
      e.kx = rep.copy[b] % 3 - 1;
      e.ky = rep.copy[b] / 3 - 1;
      e.o1 = circ[t].c;
      e.o2 = circ[t2].c;
      e.r1 = circ[t].r;
      e.r2 = circ[t2].r;
      finish_edge(e);
      g.edges.push_back(e);
    }
    cell.area = signed_area(cell.polygon);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.cells[g.edges[e].a].edges.push_back(e);
    if (g.edges[e].b != g.edges[e].a) g.cells[g.edges[e].b].edges.push_back(e);
  }

  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    if (tri.tris[t].ghost() || circ[t].r < 0.0) continue;
    const auto& v = tri.tris[t].v;
    int lead = 0;
    for (int k = 1; k < 3; ++k) {
      if (rep.site[v[k]] < rep.site[v[lead]]) lead = k;
    }
    if (rep.copy[v[lead]] != kCentral) continue;
    DelaunayTriangle d;
    for (int k = 0; k < 3; ++k) {
      d.site[k] = rep.site[v[k]];
      d.offset[k] = copy_offset(rep.copy[v[k]], s);
    }
    d.centre = circ[t].c;
    d.radius = circ[t].r;
    g.triangles.push_back(d);
  }
  return g;
}

VoronoiGraph build_plane(std::shared_ptr<const PointSet> ps) {
  const auto& sites = ps->sites;
  const std::size_t n = sites.size();
  if (n == 2) throw Error(ErrorKind::degenerate_input, "two sites are always collinear");
  std::vector<PerturbKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = {static_cast<std::int64_t>(i), 0};
  const Triangulation tri = delaunay(sites, keys);
  const Rect box = ps->domain.bounds();
  const double far = 4.0 * std::hypot(box.width(), box.height());

  std::vector<Circle> circ(tri.tris.size(), Circle{{}, -1.0});
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    if (!tri.tris[t].ghost()) circ[t] = circle_of(tri, static_cast<int>(t));
  }

  VoronoiGraph g;
  g.points = ps;
  g.degeneracies = tri.ties;
  g.cells.resize(n);
  double max_r = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto fan = tri.fan(static_cast<int>(v));
    VoronoiCell& cell = g.cells[v];
    bool hull = false;
    bool inside = true;
    for (const int t : fan) {
      if (tri.tris[t].ghost()) {
        hull = true;
        continue;
      }
      const Circle& c = circ[t];
      if (c.c.x - c.r < box.x1 || c.c.x + c.r > box.x2 || c.c.y - c.r < box.y1 || c.c.y + c.r > box.y2) {
        inside = false;
      }
    }
    cell.determined = !hull && inside;
    if (!hull) {
      for (const int t : fan) {
        cell.polygon.push_back(circ[t].c);
        if (cell.determined) max_r = std::max(max_r, circ[t].r);
      }
      if (!box.contains(bounding_box(cell.polygon))) cell.polygon = clip_rect(cell.polygon, box);
    } else {
      cell.polygon = rect_polygon(box);
      const Vec2 z = sites[v];
      for (const int t : fan) {
        for (const int u : tri.tris[t].v) {
          if (u < 0 || static_cast<std::size_t>(u) == v) continue;
          const Vec2 q = sites[u];
          cell.polygon = clip_halfplane(cell.polygon, q - z, 0.5 * (norm2(q) - norm2(z)));
        }
      }
    }
    cell.area = signed_area(cell.polygon);

    for (std::size_t j = 0; j < fan.size(); ++j) {
      const int t = fan[j];
      const int t2 = fan[(j + 1) % fan.size()];
      const int k = tri.tris[t].index_of(static_cast<int>(v));
      const int b = tri.tris[t].v[(k + 2) % 3];
      if (b < 0 || static_cast<std::size_t>(b) < v) continue;
      VoronoiEdge e;
      e.a = v;
      e.b = static_cast<std::size_t>(b);
      const bool g1 = tri.tris[t].ghost(), g2 = tri.tris[t2].ghost();
      if (!g1 && !g2) {
        e.o1 = circ[t].c;
        e.o2 = circ[t2].c;
        e.r1 = circ[t].r;
        e.r2 = circ[t2].r;
      } else {
        const int solid = g1 ? t2 : t;
        const int ghost = g1 ? t : t2;
        const auto& gv = tri.tris[ghost].v;
        const int gk = tri.tris[ghost].index_of(-1);
        const Vec2 d = sites[gv[(gk + 2) % 3]] - sites[gv[(gk + 1) % 3]];
        const Vec2 out{-d.y, d.x};
        e.o1 = circ[solid].c;
        e.o2 = e.o1 + (far / norm(out)) * out;
        e.r1 = circ[solid].r;
        e.r2 = std::numeric_limits<double>::infinity();
        e.unbounded = true;
      }
      finish_edge(e);
      g.edges.push_back(e);
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.cells[g.edges[e].a].edges.push_back(e);
    g.cells[g.edges[e].b].edges.push_back(e);
  }
  for (std::size_t t = 0; t < tri.tris.size(); ++t) {
    if (tri.tris[t].ghost()) continue;
    DelaunayTriangle d;
    for (int k = 0; k < 3; ++k) d.site[k] = static_cast<std::size_t>(tri.tris[t].v[k]);
    d.centre = circ[t].c;
    d.radius = circ[t].r;
    g.triangles.push_back(d);
  }
  g.max_empty_radius = max_r;
  return g;
}

}  // namespace

std::pair<std::size_t, Vec2> VoronoiGraph::across(std::size_t e, std::size_t from) const {
  const VoronoiEdge& ed = edges[e];
  if (from == ed.a) return {ed.b, ed.offset};
  return {ed.a, -1.0 * ed.offset};
}

Segment VoronoiGraph::segment_from(std::size_t e, std::size_t from) const {
  const VoronoiEdge& ed = edges[e];
  if (from == ed.a) return {ed.o1, ed.o2};
  return {ed.o1 - ed.offset, ed.o2 - ed.offset};
}

VoronoiGraph build_tessellation(std::shared_ptr<const PointSet> points) {
  if (!points || points->empty()) throw Error(ErrorKind::empty_domain, "no sites to tessellate");
  VoronoiGraph g;
  if (points->size() == 1) {
    g = single_site(points);
  } else if (points->domain.is_torus()) {
    g = build_torus(points);
  } else {
    g = build_plane(points);
  }
  g.index = std::make_shared<SpatialIndex>(*g.points);
  return g;
}

VoronoiGraph build_tessellation(const PointSet& points) {
  return build_tessellation(std::make_shared<const PointSet>(points));
}

std::vector<std::size_t> locate_cell(const VoronoiGraph& graph, Vec2 x) {
  const Neighbour best = graph.index->nearest(x);
  const double tol = best.distance * (1.0 + 1e-9) + 1e-12;
  std::vector<std::size_t> out;
  graph.index->for_each_within(x, tol, [&](std::size_t i, double) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::size_t, std::size_t> disc_statistics(const PointSet& points, double radius,
                                                    std::size_t probes, std::uint64_t seed) {
  if (probes == 0) throw Error(ErrorKind::invalid_parameter, "probes must be at least 1");
  if (!(radius >= 0.0)) throw Error(ErrorKind::invalid_parameter, "radius must be non-negative");
  if (points.empty()) return {0, 0};
  const SpatialIndex index(points);
  const Rect b = points.domain.bounds();
  Rng rng(seed);
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (std::size_t k = 0; k < probes; ++k) {
    const Vec2 c{uniform(rng, b.x1, b.x2), uniform(rng, b.y1, b.y2)};
    std::size_t count = 0;
    index.for_each_within(c, radius, [&](std::size_t, double) { ++count; });
    lo = std::min(lo, count);
    hi = std::max(hi, count);
  }
  return {lo, hi};
}

}  // namespace vperc
