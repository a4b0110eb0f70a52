#include "vperc/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>

namespace vperc {

double robustness_margin(const ColouredConfiguration& config, Vec2 x) {
  if (config.size() == 0) throw Error(ErrorKind::empty_domain, "no sites");
  const SpatialIndex& index = *config.graph->index;
  x = config.graph->domain().wrap(x);
  const Neighbour b = index.nearest_if(x, [&](std::size_t i) { return config.is_black(i); });
  const Neighbour w = index.nearest_if(x, [&](std::size_t i) { return !config.is_black(i); });
  const double inf = std::numeric_limits<double>::infinity();
  if (b.index == SpatialIndex::npos) return -inf;
  if (w.index == SpatialIndex::npos) return inf;
  return w.distance - b.distance;
}

PolylineCertificate certify_polyline(const ColouredConfiguration& config, const std::vector<Vec2>& polyline,
                                     double level, double pitch, double cap, bool adaptive) {
  if (!(pitch > 0.0)) throw Error(ErrorKind::invalid_parameter, "pitch must be positive");
  if (polyline.empty()) throw Error(ErrorKind::invalid_parameter, "empty polyline");
  const double inf = std::numeric_limits<double>::infinity();
  if (cap <= 0.0) cap = level + 1.0;
  cap = std::max(cap, level);
  const Domain& d = config.graph->domain();
  const SpatialIndex& index = *config.graph->index;
  PolylineCertificate out;
  out.pitch = pitch;
  out.min_sampled = cap;
  out.certified = cap;
  std::vector<Vec2> black, white;
  const auto margin_at = [&](Vec2 x) {
    double db = inf, dw = inf;
    for (const Vec2 z : black) db = std::min(db, norm2(x - z));
    for (const Vec2 z : white) dw = std::min(dw, norm2(x - z));
    const double m = std::min(cap, std::sqrt(dw) - std::sqrt(db));
    out.min_sampled = std::min(out.min_sampled, m);
    out.samples += 1;
    if (m < level) out.below += 1;
    return m;
  };
  const auto run = [&](Vec2 a, Vec2 b) {
    const Vec2 c = midpoint(a, b);
    const double len = distance(a, b);
    const Vec2 cw = d.wrap(c);
    const Neighbour nb = index.nearest_if(cw, [&](std::size_t i) { return config.is_black(i); });
    if (nb.index == SpatialIndex::npos) {
      out.samples += 1;
      out.below += 1;
      out.min_sampled = out.certified = -inf;
      return;
    }
    // Any site that can be the nearest black site, or a white site within
    // `cap` of it, at some point of the segment lies within this radius of c.
    black.clear();
    white.clear();
    index.for_each_within(cw, nb.distance + len + cap, [&](std::size_t i, double) {
      (config.is_black(i) ? black : white).push_back(c + d.delta(cw, config.graph->site(i)));
    });
    double t = 0.0, m = margin_at(a);
    out.certified = std::min(out.certified, m);
    while (t < len) {
      const double step = adaptive ? std::max(pitch, 0.5 * (m - level)) : pitch;
      const double next = std::min(len, t + step);
      const double mn = margin_at(a + (next / len) * (b - a));
      out.certified = std::min(out.certified, 0.5 * (m + mn) - (next - t));
      t = next;
      m = mn;
    }
  };
  if (polyline.size() == 1) {
    run(polyline[0], polyline[0]);
  } else {
    for (std::size_t k = 0; k + 1 < polyline.size(); ++k) run(polyline[k], polyline[k + 1]);
  }
  return out;
}

std::vector<Vec2> pair_polyline(const VoronoiGraph& g, std::size_t e, std::size_t from) {
  const auto [to, t] = g.across(e, from);
  const Segment seg = g.segment_from(e, from);
  return {g.site(from), midpoint(seg.first, seg.second), g.site(to) + t};
}

GoodPairCheck check_good_pairs(const ColouredConfiguration& config, const std::vector<std::uint8_t>& good,
                               double delta) {
  const double level = std::pow(delta, 6);
  GoodPairCheck out;
  out.pitch = level / 4.0;
  out.min_sampled = std::numeric_limits<double>::infinity();
  const VoronoiGraph& g = *config.graph;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    if (ed.a == ed.b || !config.is_black(ed.a) || !config.is_black(ed.b) || !good[ed.a] || !good[ed.b]) continue;
    if (!g.domain().is_torus() && (ed.unbounded || !g.cells[ed.a].determined || !g.cells[ed.b].determined)) continue;
    const auto cert = certify_polyline(config, pair_polyline(g, e, ed.a), level - out.pitch, out.pitch);
    ++out.pairs;
    out.samples += cert.samples;
    out.violations += cert.below;
    out.min_sampled = std::min(out.min_sampled, cert.min_sampled);
  }
  return out;
}

}  // namespace vperc
