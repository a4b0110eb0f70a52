#include "vperc/badness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "vperc/predicates.hpp"
#include "vperc/union_find.hpp"

namespace vperc {
namespace {

double default_r_max(const VoronoiGraph& g, double r_max) {
  return r_max > 0.0 ? r_max : density_radius(g.domain().scale());
}

std::vector<Vec2> grid_centres(const Domain& d, double pitch) {
  const Rect b = d.bounds();
  const auto nx = static_cast<std::size_t>(std::ceil(b.width() / pitch));
  const auto ny = static_cast<std::size_t>(std::ceil(b.height() / pitch));
  std::vector<Vec2> out;
  out.reserve((nx + 1) * (ny + 1));
  const std::size_t ex = d.is_torus() ? nx - 1 : nx, ey = d.is_torus() ? ny - 1 : ny;
  for (std::size_t j = 0; j <= ey; ++j) {
    for (std::size_t i = 0; i <= ex; ++i) out.push_back({b.x1 + i * b.width() / nx, b.y1 + j * b.height() / ny});
  }
  return out;
}

}  // namespace

std::size_t BadnessReport::bad_count() const {
  return static_cast<std::size_t>(std::count(good.begin(), good.end(), 0));
}

std::size_t BadnessReport::largest_component() const {
  std::size_t best = 0;
  for (const auto& c : components) best = std::max(best, c.size());
  return best;
}

namespace {

// Accumulates the best witness per 4-set over a stream of candidate centres.
class QuadCollector {
 public:
  QuadCollector(const VoronoiGraph& g, double delta, double r_max) : g_(g), delta_(delta), r_max_(r_max) {}

  // Examines centre x and returns the excess d4(x) - r(x) - delta of the
  // fourth nearest site, which bounds how far x is from any witness.
  double visit(Vec2 x) {
    const Domain& d = g_.domain();
    x = d.wrap(x);
    ++visited_;
    const auto near = g_.index->k_nearest(x, 4);
    if (near.size() < 4) return std::numeric_limits<double>::infinity();
    const double excess = near[3].distance - near[0].distance - delta_;
    if (excess > 1e-9 * (1.0 + near[3].distance)) return excess;
    // Distances are recomputed with the same formula the verifier uses.
    k_.clear();
    g_.index->for_each_within(x, near[0].distance + delta_ + 1e-9 * (1.0 + near[0].distance),
                              [&](std::size_t i, double) { k_.push_back({i, d.distance(x, g_.site(i))}); });
    double r = std::numeric_limits<double>::infinity();
    for (const auto& [i, dist] : k_) r = std::min(r, dist);
    if (!(r < r_max_)) return excess;
    std::erase_if(k_, [&](const auto& e) { return !(e.second <= r + delta_); });
    if (k_.size() < 4) return excess;
    std::sort(k_.begin(), k_.end());
    const std::size_t n = k_.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
          for (std::size_t e = c + 1; e < n; ++e) {
            const double far = std::max({k_[a].second, k_[b].second, k_[c].second, k_[e].second});
            const double slack = std::min(r + delta_ - far, r_max_ - r);
            const std::array<std::size_t, 4> key{k_[a].first, k_[b].first, k_[c].first, k_[e].first};
            auto it = best_.find(key);
            if (it == best_.end() || slack > it->second.slack) best_[key] = BadQuadruple{key, x, r, slack};
          }
        }
      }
    }
    return excess;
  }

  std::size_t visited() const { return visited_; }

  std::vector<BadQuadruple> take() const {
    std::vector<BadQuadruple> out;
    out.reserve(best_.size());
    for (const auto& [key, q] : best_) out.push_back(q);
    return out;
  }

 private:
  const VoronoiGraph& g_;
  double delta_, r_max_;
  std::size_t visited_ = 0;
  std::vector<std::pair<std::size_t, double>> k_;
  std::map<std::array<std::size_t, 4>, BadQuadruple> best_;
};

// Voronoi vertices, then every edge walked with steps of `pitch`, lengthened
// to half the fourth-neighbour excess where that is larger: the excess is
// 2-Lipschitz, so no centre with excess <= 0 is skipped and every point with
// negative excess has a visited centre within pitch/2.
void walk_fast(const VoronoiGraph& g, double pitch, QuadCollector& col) {
  const Rect b = g.domain().bounds();
  for (const auto& t : g.triangles) col.visit(t.centre);
  for (const auto& e : g.edges) {
    Vec2 p = e.o1, q = e.o2;
    if (!g.domain().is_torus()) {
      const auto clipped = clip_segment(p, q, b);
      if (!clipped) continue;
      p = clipped->first;
      q = clipped->second;
    }
    const double len = distance(p, q);
    for (double t = 0.0;;) {
      const double excess = col.visit(len > 0.0 ? p + (t / len) * (q - p) : p);
      if (t >= len) break;
      t = std::min(len, t + std::max(pitch, 0.5 * excess));
    }
  }
}

}  // namespace

std::vector<BadQuadruple> quadruples_at(const VoronoiGraph& g, const std::vector<Vec2>& centres, double delta,
                                        double r_max) {
  QuadCollector col(g, delta, r_max);
  for (const Vec2 x : centres) col.visit(x);
  return col.take();
}

bool verify_quadruple(const VoronoiGraph& g, const BadQuadruple& q, double delta, double r_max) {
  if (!(q.radius < r_max) || q.radius < 0.0) return false;
  const Domain& d = g.domain();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (d.distance(q.centre, g.site(i)) < q.radius) return false;
  }
  for (const std::size_t i : q.sites) {
    if (!(d.distance(q.centre, g.site(i)) <= q.radius + delta)) return false;
  }
  return std::adjacent_find(q.sites.begin(), q.sites.end()) == q.sites.end();
}

BadnessReport detect_badness(const VoronoiGraph& g, double delta, const BadnessOptions& opt) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorKind::invalid_parameter, "delta must be positive");
  if (opt.mode == BadnessMode::exhaustive && g.size() > 20) {
    throw Error(ErrorKind::invalid_parameter, "exhaustive badness needs at most 20 sites");
  }
  BadnessReport rep;
  rep.delta = delta;
  rep.r_max = default_r_max(g, opt.r_max);
  const double pitch = opt.pitch > 0.0 ? opt.pitch : (opt.mode == BadnessMode::fast ? delta / 4.0 : delta / 10.0);
  QuadCollector col(g, delta, rep.r_max);
  if (opt.mode == BadnessMode::fast) {
    walk_fast(g, pitch, col);
  } else {
    const Rect b = g.domain().bounds();
    if (b.area() / (pitch * pitch) > 5e7) throw Error(ErrorKind::invalid_parameter, "exhaustive grid too fine");
    for (const Vec2 x : grid_centres(g.domain(), pitch)) col.visit(x);
  }
  rep.candidates = col.visited();
  rep.quadruples = col.take();
  for (const auto& q : rep.quadruples) {
    if (!verify_quadruple(g, q, delta, rep.r_max)) {
      throw Error(ErrorKind::precondition_failed, "bad quadruple witness failed re-verification");
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.index->for_each_within(g.site(i), delta, [&](std::size_t j, double) {
      if (j > i) rep.close_pairs.push_back({i, j});
    });
  }
  std::sort(rep.close_pairs.begin(), rep.close_pairs.end());
  UnionFind uf(g.size());
  rep.good.assign(g.size(), 1);
  for (const auto& [a, b] : rep.close_pairs) {
    uf.unite(a, b);
    rep.good[a] = rep.good[b] = 0;
  }
  for (const auto& q : rep.quadruples) {
    for (const std::size_t i : q.sites) {
      uf.unite(q.sites[0], i);
      rep.good[i] = 0;
    }
  }
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (rep.good[i]) continue;
    const auto [it, fresh] = slot.try_emplace(uf.find(i), rep.components.size());
    if (fresh) rep.components.emplace_back();
    rep.components[it->second].push_back(i);
  }
  return rep;
}

WeakBadness is_weakly_bad(const std::array<Vec2, 4>& pts, double delta, double r_max) {
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_parameter, "delta must be positive");
  const auto eval = [&](Vec2 x) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Vec2 p : pts) {
      const double d = distance(x, p);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return WeakBadness{hi - lo <= delta && lo <= r_max + delta, x, hi - lo, lo};
  };
  // Penalised objective: spread, plus the excess of the nearest distance
  // over its bound.
  const auto score = [&](const WeakBadness& w) { return w.spread + std::max(0.0, w.nearest - r_max - delta); };
  Rect box{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Vec2 p : pts) {
    box.x1 = std::min(box.x1, p.x);
    box.y1 = std::min(box.y1, p.y);
    box.x2 = std::max(box.x2, p.x);
    box.y2 = std::max(box.y2, p.y);
  }
  box = box.expanded(r_max + delta);
  std::vector<Vec2> starts;
  constexpr int grid = 48;
  for (int j = 0; j <= grid; ++j) {
    for (int i = 0; i <= grid; ++i) {
      starts.push_back({box.x1 + box.width() * i / grid, box.y1 + box.height() * j / grid});
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (int c = b + 1; c < 4; ++c) {
        if (orient2d(pts[a], pts[b], pts[c]) != 0.0) starts.push_back(circumcentre(pts[a], pts[b], pts[c]));
      }
    }
  }
  std::sort(starts.begin(), starts.end(), [&](Vec2 u, Vec2 v) { return score(eval(u)) < score(eval(v)); });
  WeakBadness best = eval(starts.front());
  const std::size_t refine = std::min<std::size_t>(starts.size(), 12);
  const double step0 = std::max(box.width(), box.height()) / grid;
  for (std::size_t s = 0; s < refine && !best.bad; ++s) {
    WeakBadness cur = eval(starts[s]);
    for (double step = step0; step > 1e-12 * step0 && !cur.bad; ) {
      bool moved = false;
      for (const Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}, Vec2{1, 1}, Vec2{-1, -1},
                             Vec2{1, -1}, Vec2{-1, 1}}) {
        const WeakBadness cand = eval(cur.centre + step * dir);
        if (score(cand) < score(cur)) {
          cur = cand;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (cur.bad || score(cur) < score(best)) best = cur;
  }
  return eval(best.centre);
}

void to_json(nlohmann::json& j, const BadnessReport& r) {
  j = nlohmann::json{{"delta", r.delta}, {"r_max", r.r_max}, {"candidates", r.candidates}};
  auto& pairs = j["close_pairs"] = nlohmann::json::array();
  for (const auto& [a, b] : r.close_pairs) pairs.push_back({a, b});
  auto& quads = j["quadruples"] = nlohmann::json::array();
  for (const auto& q : r.quadruples) {
    quads.push_back({{"sites", q.sites}, {"centre", {q.centre.x, q.centre.y}}, {"radius", q.radius}, {"slack", q.slack}});
  }
  j["components"] = r.components;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < r.good.size(); ++i) {
    if (!r.good[i]) bad.push_back(i);
  }
  j["bad_sites"] = bad;
}

}  // namespace vperc
