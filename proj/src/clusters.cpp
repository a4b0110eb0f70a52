#include "vperc/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "vperc/union_find.hpp"

namespace vperc {
namespace {

using Shift = std::array<int, 2>;

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Breadth-first search over the black cluster of `start`, tracking torus
// shifts; calls visit(site, shift) once per site and reports wrapping.
template <class Visit>
bool unwrapped_bfs(const ColouredConfiguration& c, std::size_t start, Visit visit) {
  const VoronoiGraph& g = *c.graph;
  std::vector<Shift> shift(c.size());
  std::vector<char> seen(c.size(), 0);
  std::deque<std::size_t> queue{start};
  seen[start] = 1;
  shift[start] = {0, 0};
  bool wraps = false;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (!visit(v, shift[v])) return wraps;
    for (const std::size_t e : g.cells[v].edges) {
      const auto [w, off] = g.across(e, v);
      (void)off;
      if (!c.is_black(w)) continue;
      const Shift d = g.shift_across(e, v);
      for (const int sign : {1, -1}) {
        // Self-edges (single-site torus) connect to both neighbouring images.
        if (sign < 0 && w != v) break;
        const Shift sw{shift[v][0] + sign * d[0], shift[v][1] + sign * d[1]};
        if (!seen[w]) {
          seen[w] = 1;
          shift[w] = sw;
          queue.push_back(w);
        } else if (shift[w] != sw) {
          wraps = true;
        }
      }
    }
  }
  return wraps;
}

}  // namespace

Partition black_components(const ColouredConfiguration& config) {
  const VoronoiGraph& g = *config.graph;
  const std::size_t n = config.size();
  UnionFind uf(n);
  for (const auto& e : g.edges) {
    if (config.is_black(e.a) && config.is_black(e.b)) uf.unite(e.a, e.b);
  }
  Partition p;
  p.label.assign(n, -1);
  std::map<std::size_t, int> ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (!config.is_black(i)) continue;
    const auto [it, fresh] = ids.emplace(uf.find(i), static_cast<int>(p.members.size()));
    if (fresh) p.members.emplace_back();
    p.label[i] = it->second;
    p.members[static_cast<std::size_t>(it->second)].push_back(i);
  }
  return p;
}

ClusterStats cluster_stats(const ColouredConfiguration& config, int id) {
  const Partition& part = config.components();
  if (id < 0 || static_cast<std::size_t>(id) >= part.members.size()) {
    throw Error(ErrorKind::invalid_parameter, "no such cluster");
  }
  const auto& members = part.members[static_cast<std::size_t>(id)];
  const VoronoiGraph& g = *config.graph;
  const double s = g.domain().is_torus() ? g.domain().side() : 0.0;
  ClusterStats st;
  st.id = id;
  st.cells = members.size();
  std::vector<Vec2> corners;
  st.wraps = unwrapped_bfs(config, members.front(), [&](std::size_t v, Shift sh) {
    st.area += g.cells[v].area;
    const Vec2 t{sh[0] * s, sh[1] * s};
    for (const Vec2 q : g.cells[v].polygon) corners.push_back(q + t);
    return true;
  });
  if (st.wraps) {
    st.diameter = std::numeric_limits<double>::infinity();
  } else {
    const auto hull = convex_hull(std::move(corners));
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, norm2(hull[i] - hull[j]));
    }
    st.diameter = std::sqrt(best);
  }
  return st;
}

std::optional<ClusterStats> origin_cluster(const ColouredConfiguration& config, Vec2 x) {
  for (const std::size_t i : locate_cell(*config.graph, x)) {
    if (config.is_black(i)) return cluster_stats(config, config.components().label[i]);
  }
  return std::nullopt;
}

double cluster_reach(const ColouredConfiguration& config, Vec2 x, double stop_at) {
  const VoronoiGraph& g = *config.graph;
  const Domain& d = g.domain();
  std::size_t start = SpatialIndex::npos;
  for (const std::size_t i : locate_cell(g, x)) {
    if (config.is_black(i)) {
      start = i;
      break;
    }
  }
  if (start == SpatialIndex::npos) return 0.0;
  const double s = d.is_torus() ? d.side() : 0.0;
  // Express x in the frame of the start cell.
  const Vec2 origin = g.site(start) + d.delta(g.site(start), x);
  double reach = 0.0;
  const bool wraps = unwrapped_bfs(config, start, [&](std::size_t v, Shift sh) {
    const Vec2 t{sh[0] * s, sh[1] * s};
    for (const Vec2 q : g.cells[v].polygon) reach = std::max(reach, distance(q + t, origin));
    return reach <= stop_at;
  });
  if (wraps && reach <= stop_at) return std::numeric_limits<double>::infinity();
  return reach;
}

}  // namespace vperc
