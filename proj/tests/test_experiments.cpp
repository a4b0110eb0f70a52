#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "vperc/clusters.hpp"
#include "vperc/density.hpp"
#include "vperc/experiments.hpp"

using namespace vperc;

namespace {

// Runs tasks on several threads in a scrambled order.
Runner scrambled_runner(unsigned threads) {
  return [threads](std::size_t n, const std::function<void(std::size_t)>& task) {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t i = n - 1 - k;
          if (i % threads == t) task(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  };
}

int column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  REQUIRE(it != t.header.end());
  return static_cast<int>(it - t.header.begin());
}

std::size_t brute_force_separated(const LatticeGraph& g, int k) {
  const std::size_t n = g.vertices.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (!(mask >> a & 1)) continue;
      for (std::size_t b = a + 1; b < n && ok; ++b) {
        if (!(mask >> b & 1)) continue;
        const auto& u = g.vertices[a];
        const auto& v = g.vertices[b];
        ok = std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]) >= k;
      }
    }
    if (ok) best = size;
  }
  return best;
}

LatticeGraph random_tree(std::size_t n, std::mt19937_64& rng) {
  LatticeGraph g;
  g.vertices.push_back({0, 0});
  std::set<std::array<int, 2>> used{{0, 0}};
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  while (g.vertices.size() < n) {
    const std::size_t from = rng() % g.vertices.size();
    const int d = static_cast<int>(rng() % 4);
    const std::array<int, 2> v{g.vertices[from][0] + dx[d], g.vertices[from][1] + dy[d]};
    if (used.count(v)) continue;
    used.insert(v);
    g.edges.push_back({from, g.vertices.size()});
    g.vertices.push_back(v);
  }
  return g;
}

}  // namespace

TEST_CASE("wilson intervals cover a fair coin at the nominal rate") {
  std::mt19937_64 rng(20240611);
  std::bernoulli_distribution coin(0.5);
  const int reps = 20000, n = 200;
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) k += coin(rng);
    covered += Estimate::from_counts(k, n, 0, 0.99).ci.contains(0.5);
  }
  CHECK(std::abs(covered / double(reps) - 0.99) <= 0.01);

  const Estimate small = Estimate::from_counts(40, 100, 1, 0.99);
  const Estimate large = Estimate::from_counts(400, 1000, 1, 0.99);
  CHECK(small.ci.lo <= small.mean);
  CHECK(small.mean <= small.ci.hi);
  CHECK(large.ci.hi - large.ci.lo < small.ci.hi - small.ci.lo);
}

TEST_CASE("crossing estimates") {
  const auto all = estimate_crossing(1.0, 3.0, 10, 10, 3);
  CHECK(all.estimate.mean == 1.0);
  CHECK(all.records.csv().rfind("index,seed,crossed\n", 0) == 0);
  CHECK_THROWS_AS(estimate_crossing(0.5, 0.5, 10, 10, 1), Error);
  CHECK_THROWS_AS(estimate_crossing(0.5, 1.0, -1, 10, 1), Error);
  CHECK_THROWS_AS(estimate_crossing(0.5, 1.0, 10, 0, 1), Error);

  const auto half = estimate_crossing(0.5, 1.0, 12, 400, 11);
  CHECK(half.estimate.ci.contains(0.5));

  // Reusing the seed stream at a larger p can only add crossings.
  const auto lower = estimate_crossing(0.4, 1.0, 12, 150, 5);
  const auto upper = estimate_crossing(0.6, 1.0, 12, 150, 5);
  const int c = column(lower.records, "crossed");
  for (std::size_t i = 0; i < 150; ++i) CHECK(lower.records.rows[i][c] <= upper.records.rows[i][c]);
}

TEST_CASE("duality runs") {
  const auto run = duality_run(0.5, 8, 60, 21);
  CHECK(run.degenerate == 0);
  CHECK(run.black_h + run.white_v == 60);
  CHECK(run.records.header == std::vector<std::string>{"seed", "verdict"});
  for (const auto& row : run.records.rows) CHECK((row[1] == "black_h" || row[1] == "white_v"));
}

TEST_CASE("composition inequality") {
  CHECK_THROWS_AS(composition_check(0.5, 0.9, 1.5, 10, 10, 1), Error);
  const auto trivial = composition_check(0.5, 1.0, 1.0, 10, 100, 2);
  CHECK(trivial.margin >= 0.0);
  CHECK_FALSE(trivial.violation);

  const auto r = composition_check(0.5, 1.5, 1.5, 10, 300, 3);
  CHECK_FALSE(r.violation);
  CHECK(r.sigma > 0.0);
  // Longer rectangles are crossed only when shorter ones are.
  for (const auto& row : r.records.rows) {
    CHECK(row[2] <= row[3]);
    CHECK(row[3] <= row[5]);
  }
}

TEST_CASE("correlation of crossing events") {
  const CrossingEvent a{Rect{0, 0, 20, 10}, Orientation::horizontal, Colour::black};
  const CrossingEvent b{Rect{5, 0, 15, 20}, Orientation::vertical, Colour::black};
  const auto same = correlation_check(0.5, a, a, 200, 4);
  CHECK(same.difference == doctest::Approx(same.a.mean * (1 - same.a.mean)).epsilon(1e-12));

  CrossingEvent white = b;
  white.colour = Colour::white;
  CHECK_THROWS_AS(correlation_check(0.5, a, white, 10, 1), Error);

  const auto overlap = correlation_check(0.5, a, b, 400, 5);
  CHECK(overlap.difference >= -3 * overlap.sigma);

  const CrossingEvent far_a{Rect{0, 0, 6, 6}, Orientation::horizontal, Colour::black};
  const CrossingEvent far_b{Rect{30, 30, 36, 36}, Orientation::horizontal, Colour::black};
  const auto far = correlation_check(0.5, far_a, far_b, 400, 6, 60.0);
  CHECK(std::abs(far.difference) <= 3 * far.sigma);
}

TEST_CASE("threshold scans") {
  const auto degenerate = threshold_scan({10}, {0.0, 1.0}, 1.0, 50, 7);
  CHECK(degenerate.curves[0].width == 1.0);
  CHECK(degenerate.curves[0].resolution_limited);
  CHECK_FALSE(degenerate.warnings.empty());

  const auto scan = threshold_scan({20}, {0.25, 0.75}, 1.0, 200, 8);
  CHECK(scan.curves[0].raw[0].mean < scan.curves[0].raw[1].mean);
  CHECK_THROWS_AS(threshold_scan({10}, {0.5, 0.4}, 1.0, 10, 1), Error);

  // The per-sample threshold agrees with direct crossings at grid points.
  const auto tiny = threshold_scan({8}, {0.3, 0.5, 0.7}, 1.0, 30, 9);
  const int tcol = column(tiny.records, "threshold");
  for (std::size_t i = 0; i < 30; ++i) {
    const auto config = torus_sample(8 / 0.9, 0.5, sample_seed(child_seed(9, 0), i));
    const double t = std::stod(tiny.records.rows[i][tcol]);
    for (const double p : {0.3, 0.5, 0.7}) {
      const bool direct = crossing(config.recoloured(p), Rect{0, 0, 8, 8}, Orientation::horizontal, Colour::black).verdict;
      CHECK(direct == (t < p));
    }
  }
}

TEST_CASE("experiments are independent of worker scheduling") {
  RunOptions threaded;
  threaded.runner = scrambled_runner(3);
  CHECK(estimate_crossing(0.5, 1.0, 10, 40, 12).records.csv() ==
        estimate_crossing(0.5, 1.0, 10, 40, 12, threaded).records.csv());
  const auto s1 = threshold_scan({8, 12}, {0.3, 0.5, 0.7}, 1.0, 40, 13);
  const auto s2 = threshold_scan({8, 12}, {0.3, 0.5, 0.7}, 1.0, 40, 13, threaded);
  CHECK(s1.records.csv() == s2.records.csv());
  CHECK(s1.summary().dump() == s2.summary().dump());
  CHECK(tail_distribution(0.4, 12, 40, SizeMeasure::area, 14).summary().dump() ==
        tail_distribution(0.4, 12, 40, SizeMeasure::area, 14, threaded).summary().dump());
}

TEST_CASE("supercritical renormalisation") {
  const LatticeWindow w{0, 0, 1, 1};
  const auto full = renorm_supercritical(1.0, 8, w, 15);
  REQUIRE(full.units.size() == 4);
  CHECK(full.dependence == 1);
  for (const auto& u : full.units) {
    CHECK(u.crossing);
    CHECK(u.open == u.dense);
    CHECK(u.dense == check_dense(*full.sample->graph, u.region, density_radius(8)).dense);
  }
  const auto lat = renorm_supercritical(0.6, 8, w, 16);
  const auto again = renorm_states(*lat.sample, lat.mode, lat.block, lat.window);
  REQUIRE(again.size() == lat.units.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].open == lat.units[i].open);
    CHECK(again[i].crossing == lat.units[i].crossing);
  }
  // Horizontal edge (1,0)-(2,0) at block 8 occupies [16,40] x [0,8].
  const auto units = renorm_states(*lat.sample, lat.mode, 8, LatticeWindow{1, 0, 2, 0});
  REQUIRE(units.size() == 1);
  CHECK(units[0].region.x1 == 16);
  CHECK(units[0].region.x2 == 40);
  CHECK(units[0].region.y2 == 8);
}

TEST_CASE("bond spanning and site clusters") {
  RenormLattice lat;
  lat.window = {0, 0, 2, 0};
  lat.units = {{0, 0, false, {}, true, true, true}, {1, 0, false, {}, true, true, false}};
  CHECK_FALSE(spans(lat));
  lat.units[1].open = true;
  CHECK(spans(lat));

  RenormLattice site;
  site.mode = RenormMode::site_subcritical;
  site.window = {0, 0, 2, 1};
  for (int y = 0; y <= 1; ++y) {
    for (int x = 0; x <= 2; ++x) site.units.push_back({x, y, false, {}, false, true, false});
  }
  site.units[0].open = site.units[1].open = site.units[5].open = true;
  CHECK(open_cluster_sizes(site) == std::vector<std::size_t>{2, 1});
}

TEST_CASE("subcritical renormalisation") {
  const LatticeWindow w{0, 0, 1, 1};
  const auto white = renorm_subcritical(0.0, 6, w, 17);
  CHECK(white.dependence == 7);
  for (const auto& u : white.units) {
    CHECK_FALSE(u.crossing);
    CHECK(u.open == !u.dense);
  }
  const auto black = renorm_subcritical(1.0, 6, w, 17);
  for (const auto& u : black.units) CHECK(u.open);

  const auto lat = renorm_subcritical(0.5, 6, w, 18);
  const auto again = renorm_states(*lat.sample, lat.mode, lat.block, lat.window);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].open == lat.units[i].open);
}

TEST_CASE("renormalisation studies") {
  const auto study = renorm_study(RenormMode::bond_supercritical, 0.8, 8, {0, 0, 2, 2}, 6, 19);
  CHECK(study.marginal.n == 6 * 12);
  CHECK(study.distant.pairs > 0);
  CHECK(study.records.rows.size() == 6 * 12);
  const auto sub = renorm_study(RenormMode::site_subcritical, 0.3, 4, {0, 0, 7, 0}, 4, 20);
  CHECK(sub.marginal.n == 4 * 8);
  CHECK(sub.distant.pairs == 4);
}

TEST_CASE("cluster tails") {
  const auto empty = tail_distribution(0.0, 10, 20, SizeMeasure::cells, 21);
  CHECK(empty.tail.empty());
  CHECK_FALSE(empty.warnings.empty());
  CHECK_THROWS_AS(size_measure_from_string("volume"), Error);

  const auto fits = tail_family({0.2, 0.4}, 20, 300, SizeMeasure::cells, 22);
  for (const auto& f : fits) {
    CHECK(std::is_sorted(f.tail.rbegin(), f.tail.rend()));
    CHECK(f.fit.slope < 0);
    // Independent count of the tail at n = 2 from the per-sample records.
    const int c = column(f.records, "cells");
    std::size_t k = 0;
    for (const auto& row : f.records.rows) k += std::stod(row[c]) >= 2;
    REQUIRE(f.tail.size() >= 2);
    CHECK(f.tail[1] == doctest::Approx(k / 300.0));
  }
  CHECK(fits[0].fit.slope < fits[1].fit.slope);

  // Recolouring reuses the samples: origin clusters grow with p.
  const int c = column(fits[0].records, "cells");
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(std::stod(fits[0].records.rows[i][c]) <= std::stod(fits[1].records.rows[i][c]));
  }
}

TEST_CASE("reach probabilities") {
  const auto none = reach_scan(0.0, {2, 4}, 20, 20, 23);
  for (const auto& e : none.reach) CHECK(e.mean == 0.0);
  const auto r = reach_scan(0.6, {2, 4, 8}, 30, 60, 24);
  CHECK(r.reach[0].mean >= r.reach[1].mean);
  CHECK(r.reach[1].mean >= r.reach[2].mean);
}

TEST_CASE("annulus scans") {
  const auto white = annulus_scan(0.0, {4}, 10, 25);
  CHECK(white.points[0].cycle.mean == 1.0);
  CHECK(white.points[0].four.mean == 1.0);
  const auto black = annulus_scan(1.0, {4}, 10, 26);
  CHECK(black.points[0].cycle.mean == 0.0);
  CHECK(black.points[0].four.mean == 0.0);

  // Four ring crossings always contain a circuit.
  const auto mixed = annulus_scan(0.5, {5}, 80, 27);
  for (const auto& row : mixed.records.rows) CHECK(row[4] <= row[3]);
  CHECK(mixed.points[0].cycle.mean >= mixed.points[0].four.mean);
}

TEST_CASE("separated subsets") {
  LatticeGraph single{{{3, 4}}, {}};
  CHECK(separated_subset(single, 5) == std::vector<std::size_t>{0});

  LatticeGraph path;
  for (int i = 0; i < 85; ++i) {
    path.vertices.push_back({i, 0});
    if (i) path.edges.push_back({std::size_t(i - 1), std::size_t(i)});
  }
  CHECK(separated_bound(85, 7) == 1);
  CHECK(separated_subset(path, 7).size() >= 1);
  CHECK(separated_subset(path, 7).size() == 13);

  LatticeGraph split{{{0, 0}, {5, 5}}, {}};
  CHECK_THROWS_AS(separated_subset(split, 2), Error);
  LatticeGraph jump{{{0, 0}, {1, 1}}, {{0, 1}}};
  CHECK_THROWS_AS(separated_subset(jump, 2), Error);

  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const auto tree = random_tree(n, rng);
    const auto pick = separated_subset(tree, 2);
    CHECK(pick.size() >= separated_bound(n, 2));
    CHECK(pick.size() <= brute_force_separated(tree, 2));
    for (std::size_t a = 0; a < pick.size(); ++a) {
      for (std::size_t b = a + 1; b < pick.size(); ++b) {
        const auto& u = tree.vertices[pick[a]];
        const auto& v = tree.vertices[pick[b]];
        CHECK(std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]) >= 2);
      }
    }
  }
}
