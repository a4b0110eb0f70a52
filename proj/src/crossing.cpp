#include "vperc/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "vperc/density.hpp"
#include "vperc/union_find.hpp"

namespace vperc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<Side, 2> ends(Orientation o) {
  return o == Orientation::horizontal ? std::array<Side, 2>{Side::left, Side::right}
                                      : std::array<Side, 2>{Side::bottom, Side::top};
}

std::optional<Segment> side_piece(const CrossingGeometry::Node& node, const Rect& r, Side side) {
  const Segment s = side_segment(r, side);
  return clip_segment(s.first, s.second, node.polygon);
}

}  // namespace

CrossingGeometry::CrossingGeometry(const VoronoiGraph& graph, const Rect& outer, std::optional<Rect> hole)
    : graph_(&graph), outer_(outer) {
  const Domain& d = graph.domain();
  const double s = d.is_torus() ? d.side() : 1.0;
  const std::size_t n = graph.size();
  std::vector<std::vector<std::size_t>> node_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Polygon& poly = graph.cells[i].polygon;
    for (const Vec2 t : translations_meeting(d, bounding_box(poly), outer)) {
      Polygon moved = translated(poly, t);
      if (!intersects(moved, outer)) continue;
      if (hole && inside_open(moved, *hole)) continue;
      Node node;
      node.site = i;
      node.shift = {static_cast<int>(std::lround(t.x / s)), static_cast<int>(std::lround(t.y / s))};
      node.polygon = std::move(moved);
      for (int k = 0; k < 4; ++k) {
        const Segment side = side_segment(outer, static_cast<Side>(k));
        node.meets[k] = clip_segment(side.first, side.second, node.polygon).has_value();
      }
      node.meets_hole = hole && intersects(node.polygon, *hole);
      node_of[i].push_back(nodes_.size());
      nodes_.push_back(std::move(node));
    }
  }
  incident_.resize(nodes_.size());
  for (const auto& e : graph.edges) {
    for (const std::size_t u : node_of[e.a]) {
      const auto sh = nodes_[u].shift;
      const std::array<int, 2> want{sh[0] + e.kx, sh[1] + e.ky};
      for (const std::size_t v : node_of[e.b]) {
        if (nodes_[v].shift != want) continue;
        const Vec2 t{sh[0] * s, sh[1] * s};
        const Vec2 p = d.is_torus() ? e.o1 + t : e.o1;
        const Vec2 q = d.is_torus() ? e.o2 + t : e.o2;
        const auto piece = clip_segment(p, q, outer);
        if (!piece) continue;
        if (hole && inside_open(Polygon{piece->first, piece->second}, *hole)) continue;
        incident_[u].push_back(links_.size());
        if (v != u) incident_[v].push_back(links_.size());
        links_.push_back({u, v, *piece});
      }
    }
  }
}

std::vector<char> CrossingGeometry::meeting(const Rect& r) const {
  std::vector<char> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = intersects(nodes_[i].polygon, r) ? 1 : 0;
  return out;
}

std::vector<char> CrossingGeometry::meeting_side(Side side) const {
  std::vector<char> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].meets[static_cast<int>(side)] ? 1 : 0;
  return out;
}

double CrossingGeometry::minimax(const std::vector<double>& value, const std::vector<char>& sources,
                                 const std::vector<char>& targets) const {
  const std::size_t n = nodes_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = value[nodes_[a].site], vb = value[nodes_[b].site];
    return va != vb ? va < vb : a < b;
  });
  UnionFind uf(n + 2);
  const std::size_t src = n, dst = n + 1;
  std::vector<char> active(n, 0);
  for (const std::size_t v : order) {
    active[v] = 1;
    if (sources[v]) uf.unite(v, src);
    if (targets[v]) uf.unite(v, dst);
    for (const std::size_t l : incident_[v]) {
      const std::size_t w = links_[l].u == v ? links_[l].v : links_[l].u;
      if (active[w]) uf.unite(v, w);
    }
    if (uf.same(src, dst)) return value[nodes_[v].site];
  }
  return kInf;
}

void require_admissible(const Domain& d, const Rect& rect) {
  (void)Rect::checked(rect.x1, rect.y1, rect.x2, rect.y2);
  if (d.is_torus()) {
    if (rect.width() > 0.9 * d.side() || rect.height() > 0.9 * d.side()) {
      throw Error(ErrorKind::rect_outside_domain, "rectangle sides must not exceed 0.9 s on the torus");
    }
    return;
  }
  const double r = density_radius(d.scale());
  const Rect allowed = d.core().expanded(d.guard() - 2.0 * r);
  if (!allowed.contains(rect)) {
    throw Error(ErrorKind::rect_outside_domain, "rectangle must lie in the core of the window");
  }
}

void require_determined(const VoronoiGraph& g, const Rect& rect) {
  if (g.domain().is_torus()) return;
  const double r = density_radius(g.domain().scale());
  const DenseVerdict v = check_dense(g, rect, r);
  if (!v.dense) {
    throw Error(ErrorKind::indeterminate, "E_dense fails: a point at distance " +
                                              std::to_string(v.max_distance) + " from every site");
  }
}

CrossingWitness crossing(const ColouredConfiguration& config, const CrossingGeometry& geo,
                         Orientation orientation, Colour colour) {
  const auto [from, to] = ends(orientation);
  const auto path = geo.path(geo.meeting_side(from), geo.meeting_side(to),
                             [&](std::size_t site) { return config.has(site, colour); });
  CrossingWitness w;
  w.degenerate = config.graph->degenerate();
  if (path.empty()) return w;
  w.verdict = true;
  const auto& nodes = geo.nodes();
  for (const std::size_t v : path) {
    w.path.push_back(nodes[v].site);
    w.shifts.push_back(nodes[v].shift);
  }
  const auto entry = side_piece(nodes[path.front()], geo.outer(), from);
  const auto exit = side_piece(nodes[path.back()], geo.outer(), to);
  w.entry = midpoint(entry->first, entry->second);
  w.exit = midpoint(exit->first, exit->second);
  w.polyline.push_back(w.entry);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    for (const std::size_t l : geo.incident(path[k])) {
      const auto& link = geo.links()[l];
      const std::size_t other = link.u == path[k] ? link.v : link.u;
      if (other == path[k + 1]) {
        w.polyline.push_back(midpoint(link.piece.first, link.piece.second));
        break;
      }
    }
  }
  w.polyline.push_back(w.exit);
  return w;
}

CrossingWitness crossing(const ColouredConfiguration& config, const Rect& rect, Orientation orientation,
                         Colour colour) {
  require_admissible(config.graph->domain(), rect);
  require_determined(*config.graph, rect);
  const CrossingGeometry geo(*config.graph, rect);
  return crossing(config, geo, orientation, colour);
}

double crossing_threshold(const CrossingGeometry& geo, const std::vector<double>& uniforms,
                          Orientation orientation, Colour colour) {
  const auto [from, to] = ends(orientation);
  const auto sources = geo.meeting_side(from), targets = geo.meeting_side(to);
  if (colour == Colour::black) return geo.minimax(uniforms, sources, targets);
  std::vector<double> neg(uniforms.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -uniforms[i];
  return -geo.minimax(neg, sources, targets);
}

DualityOutcome duality_check(const ColouredConfiguration& config, const Rect& square) {
  (void)Rect::checked(square.x1, square.y1, square.x2, square.y2);
  if (std::fabs(square.width() - square.height()) > 1e-12 * square.width()) {
    throw Error(ErrorKind::invalid_parameter, "duality needs a square");
  }
  require_admissible(config.graph->domain(), square);
  require_determined(*config.graph, square);
  const CrossingGeometry geo(*config.graph, square);
  const bool bh = crossing(config, geo, Orientation::horizontal, Colour::black).verdict;
  const bool wv = crossing(config, geo, Orientation::vertical, Colour::white).verdict;
  if (bh == wv) return DualityOutcome::degenerate;
  return bh ? DualityOutcome::black_h : DualityOutcome::white_v;
}

Vec2 length_anchor(const CrossingGeometry& geo, std::size_t node) {
  const auto& nd = geo.nodes()[node];
  const Domain& d = geo.graph().domain();
  const double s = d.is_torus() ? d.side() : 0.0;
  const Vec2 z = geo.graph().site(nd.site) + Vec2{nd.shift[0] * s, nd.shift[1] * s};
  if (geo.outer().contains(z)) return z;
  const Polygon inside = clip_rect(nd.polygon, geo.outer());
  return centroid(inside.empty() ? nd.polygon : inside);
}

Vec2 length_portal(const CrossingGeometry& geo, std::size_t node, Side side) {
  const auto piece = side_piece(geo.nodes()[node], geo.outer(), side);
  if (!piece) throw Error(ErrorKind::invalid_parameter, "cell does not meet that side");
  const Vec2 a = length_anchor(geo, node);
  const Vec2 d = piece->second - piece->first;
  const double len2 = norm2(d);
  const double t = len2 > 0.0 ? std::clamp(dot(a - piece->first, d) / len2, 0.0, 1.0) : 0.0;
  return piece->first + t * d;
}

double crossing_length(const ColouredConfiguration& config, const CrossingGeometry& geo) {
  const auto& nodes = geo.nodes();
  const std::size_t n = nodes.size();
  std::vector<Vec2> anchor(n);
  for (std::size_t i = 0; i < n; ++i) anchor[i] = length_anchor(geo, i);
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t i = 0; i < n; ++i) {
    if (!config.is_black(nodes[i].site) || !nodes[i].meets[0]) continue;
    dist[i] = distance(anchor[i], length_portal(geo, i, Side::left));
    pq.push({dist[i], i});
  }
  double best = kInf;
  while (!pq.empty()) {
    const auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[v]) continue;
    if (dv >= best) break;
    if (nodes[v].meets[1]) best = std::min(best, dv + distance(anchor[v], length_portal(geo, v, Side::right)));
    for (const std::size_t l : geo.incident(v)) {
      const auto& link = geo.links()[l];
      const std::size_t w = link.u == v ? link.v : link.u;
      if (!config.is_black(nodes[w].site)) continue;
      const Vec2 m = midpoint(link.piece.first, link.piece.second);
      const double nd = dv + distance(anchor[v], m) + distance(m, anchor[w]);
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return best;
}

double crossing_length(const ColouredConfiguration& config, const Rect& rect) {
  require_admissible(config.graph->domain(), rect);
  require_determined(*config.graph, rect);
  const CrossingGeometry geo(*config.graph, rect);
  return crossing_length(config, geo);
}

}  // namespace vperc
