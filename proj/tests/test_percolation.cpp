#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "vperc/clusters.hpp"
#include "vperc/crossing.hpp"
#include "vperc/sampling.hpp"
#include "vperc/stats.hpp"

using namespace vperc;

namespace {

std::shared_ptr<const VoronoiGraph> torus_graph(double s, double intensity, std::uint64_t seed) {
  return std::make_shared<const VoronoiGraph>(build_tessellation(sample_poisson(Domain::torus(s), intensity, seed)));
}

std::shared_ptr<const VoronoiGraph> graph_of(std::vector<Vec2> sites, const Domain& d) {
  return std::make_shared<const VoronoiGraph>(build_tessellation(PointSet::from_sites(std::move(sites), d)));
}

// Does x lie in the closed cell of `site` (translated by `shift` on the torus)?
bool in_cell(const ColouredConfiguration& c, std::size_t site, std::array<int, 2> shift, Vec2 x) {
  const Domain& d = c.graph->domain();
  const double s = d.is_torus() ? d.side() : 0.0;
  const Vec2 z = c.graph->site(site) + Vec2{shift[0] * s, shift[1] * s};
  const double own = distance(x, z);
  const double best = c.graph->index->nearest(d.wrap(x)).distance;
  return own <= best + 1e-9;
}

void check_witness(const ColouredConfiguration& c, const Rect& r, Orientation o, Colour colour,
                   const CrossingWitness& w) {
  REQUIRE(w.verdict);
  REQUIRE(!w.path.empty());
  REQUIRE(w.polyline.size() == w.path.size() + 1);
  for (const std::size_t v : w.path) CHECK(c.has(v, colour));
  const Domain& d = c.graph->domain();
  const double s = d.is_torus() ? d.side() : 0.0;
  for (std::size_t k = 0; k + 1 < w.path.size(); ++k) {
    bool found = false;
    for (const auto& e : c.graph->edges) {
      for (int dir = 0; dir < 2 && !found; ++dir) {
        const std::size_t a = dir ? e.b : e.a, b = dir ? e.a : e.b;
        const int kx = dir ? -e.kx : e.kx, ky = dir ? -e.ky : e.ky;
        if (a != w.path[k] || b != w.path[k + 1]) continue;
        if (w.shifts[k][0] + kx != w.shifts[k + 1][0] || w.shifts[k][1] + ky != w.shifts[k + 1][1]) continue;
        const Vec2 t{w.shifts[k][0] * s, w.shifts[k][1] * s};
        if (clip_segment(e.o1 + t, e.o2 + t, r)) found = true;
      }
    }
    CHECK(found);
  }
  const double tol = 1e-9 * std::max(1.0, r.width());
  if (o == Orientation::horizontal) {
    CHECK(std::fabs(w.entry.x - r.x1) <= tol);
    CHECK(std::fabs(w.exit.x - r.x2) <= tol);
  } else {
    CHECK(std::fabs(w.entry.y - r.y1) <= tol);
    CHECK(std::fabs(w.exit.y - r.y2) <= tol);
  }
  for (const Vec2 q : w.polyline) CHECK(r.expanded(tol).contains(q));
  for (std::size_t k = 0; k + 1 < w.polyline.size(); ++k) {
    for (int m = 0; m <= 8; ++m) {
      const Vec2 q = w.polyline[k] + (m / 8.0) * (w.polyline[k + 1] - w.polyline[k]);
      CHECK(in_cell(c, w.path[k], w.shifts[k], q));
    }
  }
}

// Every simple path of black nodes under the same anchor/midpoint rule.
double exhaustive_length(const ColouredConfiguration& c, const CrossingGeometry& geo) {
  const auto& nodes = geo.nodes();
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(nodes.size(), 0);
  std::function<void(std::size_t, double)> go = [&](std::size_t v, double len) {
    if (nodes[v].meets[1]) best = std::min(best, len + distance(length_anchor(geo, v), length_portal(geo, v, Side::right)));
    for (const std::size_t l : geo.incident(v)) {
      const auto& link = geo.links()[l];
      const std::size_t w = link.u == v ? link.v : link.u;
      if (used[w] || !c.is_black(nodes[w].site)) continue;
      const Vec2 m = midpoint(link.piece.first, link.piece.second);
      used[w] = 1;
      go(w, len + distance(length_anchor(geo, v), m) + distance(m, length_anchor(geo, w)));
      used[w] = 0;
    }
  };
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!c.is_black(nodes[v].site) || !nodes[v].meets[0]) continue;
    used[v] = 1;
    go(v, distance(length_anchor(geo, v), length_portal(geo, v, Side::left)));
    used[v] = 0;
  }
  return best;
}

}  // namespace

TEST_CASE("colouring") {
  const auto g = torus_graph(10.0, 1.0, 1);
  const auto all = colour_sites(g, 1.0, 5);
  const auto none = colour_sites(g, 0.0, 5);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(all.is_black(i));
    CHECK(!none.is_black(i));
  }
  CHECK_THROWS_AS(colour_sites(g, 1.5, 5), Error);
  CHECK_THROWS_AS(colour_sites(g, -0.1, 5), Error);

  const auto lo = colour_sites(g, 0.3, 9);
  const auto hi = colour_sites(g, 0.7, 9);
  const auto again = colour_sites(g, 0.3, 9);
  for (std::size_t i = 0; i < g->size(); ++i) {
    if (lo.is_black(i)) CHECK(hi.is_black(i));
    CHECK(lo.black[i] == again.black[i]);
  }
  const auto re = lo.recoloured(0.7);
  CHECK(re.black == hi.black);

  std::size_t black = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = colour_sites(g, 0.3, seed);
    for (std::size_t i = 0; i < c.size(); ++i) black += c.is_black(i);
    total += c.size();
  }
  CHECK(wilson(black, total).contains(0.3));
}

TEST_CASE("black components") {
  const auto g = torus_graph(17.3, 1.0, 2);
  CHECK(black_components(colour_sites(g, 0.0, 1)).members.empty());
  std::vector<Colour> one(g->size(), Colour::white);
  one[7] = Colour::black;
  const auto single = black_components(with_colours(g, one));
  REQUIRE(single.members.size() == 1);
  CHECK(single.members[0] == std::vector<std::size_t>{7});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g300 = torus_graph(17.3, 1.0, 100 + seed);
    for (const double p : {0.3, 0.5, 0.7}) {
      const auto c = colour_sites(g300, p, seed);
      const Partition& part = c.components();
      std::set<std::vector<std::size_t>> got;
      for (auto m : part.members) {
        std::sort(m.begin(), m.end());
        got.insert(m);
      }
      CHECK(got == oracle::bfs_components(c));
      for (std::size_t i = 0; i < c.size(); ++i) CHECK((part.label[i] < 0) == !c.is_black(i));
    }
  }
}

TEST_CASE("origin cluster") {
  const auto single = graph_of({{1.0, 2.0}}, Domain::torus(5.0));
  const auto st = origin_cluster(with_colours(single, {Colour::black}), {3.0, 3.0});
  REQUIRE(st);
  CHECK(st->cells == 1);
  CHECK(st->area == doctest::Approx(25.0));
  CHECK(!origin_cluster(with_colours(single, {Colour::white}), {3.0, 3.0}));

  const auto g = torus_graph(10.0, 1.0, 21);
  const auto c = colour_sites(g, 0.55, 4);
  int checked = 0;
  for (std::size_t i = 0; i < c.size() && checked < 3; ++i) {
    if (!c.is_black(i)) continue;
    const Vec2 x = g->site(i);
    const auto got = origin_cluster(c, x);
    REQUIRE(got);
    const auto ref = oracle::raster_cluster(c, x, 2000);
    CHECK(got->area == doctest::Approx(ref.area).epsilon(0.01));
    CHECK(got->wraps == ref.wraps);
    if (!ref.wraps) CHECK(got->diameter == doctest::Approx(ref.diameter).epsilon(0.01));
    double sum = 0.0;
    for (const std::size_t m : c.components().members[c.components().label[i]]) sum += g->cells[m].area;
    CHECK(got->area == doctest::Approx(sum).epsilon(1e-12));
    ++checked;
    i += 20;
  }
  CHECK(checked == 3);
}

TEST_CASE("cluster reach") {
  const auto g = torus_graph(30.0, 1.0, 5);
  const auto c = colour_sites(g, 0.4, 8);
  for (std::size_t i = 0; i < 40; ++i) {
    const Vec2 x = g->site(i);
    const double reach = cluster_reach(c, x, 1e9);
    if (!c.is_black(i)) {
      CHECK(reach == 0.0);
      continue;
    }
    const auto st = origin_cluster(c, x);
    REQUIRE(st);
    if (st->wraps) {
      CHECK(std::isinf(reach));
    } else {
      CHECK(reach <= st->diameter + 1e-9);
      CHECK(reach >= 0.5 * st->diameter - 1e-9);
    }
    CHECK(cluster_reach(c, x, 0.5 * reach) > 0.5 * reach);
  }
}

TEST_CASE("crossing trivia") {
  const auto single = graph_of({{1.0, 2.0}}, Domain::torus(5.0));
  const auto black = with_colours(single, {Colour::black});
  const Rect r{0.3, 0.7, 4.0, 3.0};
  const auto w = crossing(black, r, Orientation::horizontal, Colour::black);
  CHECK(w.verdict);
  check_witness(black, r, Orientation::horizontal, Colour::black, w);
  CHECK(crossing_length(black, r) >= r.width());
  CHECK(!crossing(black, r, Orientation::vertical, Colour::white).verdict);
  CHECK(duality_check(black, Rect{0, 0, 4, 4}) == DualityOutcome::black_h);
  CHECK(duality_check(with_colours(single, {Colour::white}), Rect{0, 0, 4, 4}) == DualityOutcome::white_v);
  CHECK_THROWS_AS(duality_check(black, Rect{0, 0, 4, 3}), Error);
  CHECK_THROWS_AS(crossing(black, Rect{0, 0, 4.6, 1}, Orientation::horizontal, Colour::black), Error);

  const auto g = torus_graph(12.0, 1.0, 3);
  const auto white = colour_sites(g, 0.0, 1);
  CHECK(!crossing(white, Rect{1, 1, 9, 5}, Orientation::horizontal, Colour::black).verdict);
  CHECK(std::isinf(crossing_length(white, Rect{1, 1, 9, 5})));
}

TEST_CASE("plane crossings are gated on the density event") {
  const Domain d = Domain::plane(Rect{0, 0, 12, 12});
  const auto g = std::make_shared<const VoronoiGraph>(build_tessellation(sample_poisson(d, 1.0, 4)));
  const auto c = colour_sites(g, 0.5, 2);
  const Rect r{2, 2, 10, 10};
  const auto w = crossing(c, r, Orientation::horizontal, Colour::black);
  CHECK(w.verdict == oracle::raster_crossing(c, r, Orientation::horizontal, Colour::black));
  CHECK_THROWS_AS(crossing(c, d.core().expanded(d.guard()), Orientation::horizontal, Colour::black), Error);

  // A window holding only a few sites cannot certify density.
  const Domain big = Domain::plane(Rect{0, 0, 40, 40});
  const auto sparse = graph_of({{5, 5}, {30, 8}, {12, 33}, {35, 35}}, big);
  const auto cs = colour_sites(sparse, 0.5, 1);
  try {
    (void)crossing(cs, Rect{10, 10, 30, 30}, Orientation::horizontal, Colour::black);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::indeterminate);
  }
}

TEST_CASE("crossing agrees with a raster flood fill") {
  int mismatches = 0, crossings = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = torus_graph(11.0, 1.0, 500 + seed);
    const auto c = colour_sites(g, 0.5, seed);
    const Rect r{1.3, 2.1, 1.3 + 7.0, 2.1 + 5.0};
    for (const auto o : {Orientation::horizontal, Orientation::vertical}) {
      for (const auto col : {Colour::black, Colour::white}) {
        const auto w = crossing(c, r, o, col);
        const bool ref = oracle::raster_crossing(c, r, o, col);
        if (w.verdict != ref) ++mismatches;
        if (w.verdict) {
          ++crossings;
          check_witness(c, r, o, col, w);
        }
      }
    }
  }
  CHECK(mismatches == 0);
  CHECK(crossings > 40);
}

TEST_CASE("duality, monotonicity and aspect nesting") {
  std::size_t bh = 0, n = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = torus_graph(12.0, 1.0, 900 + seed);
    const auto c = colour_sites(g, 0.5, seed);
    const Rect sq{0.5, 0.5, 10.5, 10.5};
    const auto out = duality_check(c, sq);
    CHECK(out != DualityOutcome::degenerate);
    bh += out == DualityOutcome::black_h;
    ++n;

    const CrossingGeometry geo(*g, sq);
    const double t = crossing_threshold(geo, *c.uniforms, Orientation::horizontal, Colour::black);
    for (const double p : {0.2, 0.4, 0.5, 0.6, 0.8}) {
      const auto cp = c.recoloured(p);
      CHECK(crossing(cp, geo, Orientation::horizontal, Colour::black).verdict == (t < p));
      const double tw = crossing_threshold(geo, *c.uniforms, Orientation::vertical, Colour::white);
      CHECK(crossing(cp, geo, Orientation::vertical, Colour::white).verdict == (tw >= p));
    }
    bool wider = true;
    for (const double width : {4.0, 6.0, 8.0, 10.0}) {
      const bool v = crossing(c, Rect{0.5, 0.5, 0.5 + width, 4.5}, Orientation::horizontal, Colour::black).verdict;
      if (v) CHECK(wider);
      wider = v;
    }
  }
  CHECK(wilson(bh, n).contains(0.5));
}

TEST_CASE("crossing length on a corridor equals exhaustive path search") {
  const Domain d = Domain::plane(Rect{0, 0, 6, 2});
  const auto g = graph_of({{0.5, 0.5}, {1.5, 1.4}, {2.4, 0.6}, {3.6, 1.5}, {4.5, 0.4}, {5.5, 1.6}}, d);
  const auto c = with_colours(g, std::vector<Colour>(6, Colour::black));
  const CrossingGeometry geo(*g, d.core());
  const double len = crossing_length(c, geo);
  CHECK(len == doctest::Approx(exhaustive_length(c, geo)).epsilon(1e-12));
  CHECK(len >= 6.0);

  auto mixed = std::vector<Colour>(6, Colour::black);
  mixed[2] = Colour::white;
  const auto cm = with_colours(g, mixed);
  CHECK(crossing_length(cm, geo) == doctest::Approx(exhaustive_length(cm, geo)).epsilon(1e-12));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto gr = torus_graph(7.0, 0.5, 70 + seed);
    const auto cr = colour_sites(gr, 0.7, seed);
    const Rect r{0.5, 0.5, 6.0, 4.0};
    const CrossingGeometry gg(*gr, r);
    const double a = crossing_length(cr, gg), b = exhaustive_length(cr, gg);
    if (std::isinf(b)) {
      CHECK(std::isinf(a));
    } else {
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
      CHECK(a >= r.width() - 1e-9);
    }
    CHECK(std::isinf(a) == !crossing(cr, gg, Orientation::horizontal, Colour::black).verdict);
  }
}
