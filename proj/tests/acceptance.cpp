// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "vperc/badness.hpp"
#include "vperc/crude.hpp"
#include "vperc/experiments.hpp"
#include "vperc/robustness.hpp"
#include "vperc/sampling.hpp"

using namespace vperc;

namespace {

// Pinned tolerances.
constexpr double kConfidence = 0.99;
constexpr double kSigmas = 3.0;
constexpr double kTailR2 = 0.9;
constexpr double kReachFloor = 0.25;
constexpr double kRenormTarget = 0.8639;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !v.pass;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", secs);
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " (" << buf << ")"
            << std::endl;
}

std::string num(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

std::string ci(const Estimate& e) { return num(e.mean) + " [" + num(e.ci.lo) + ", " + num(e.ci.hi) + "]"; }

std::shared_ptr<const VoronoiGraph> torus_graph(double side, double intensity, std::uint64_t seed) {
  return std::make_shared<const VoronoiGraph>(build_tessellation(sample_poisson(Domain::torus(side), intensity, seed)));
}

// Sign of the in-circle determinant times the orientation: > 0 when d lies
// strictly inside the circle through a, b, c. Doubles with a conservative
// error bound, rationals when the bound is not met.
int inside_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y, bdx = b.x - d.x, bdy = b.y - d.y, cdx = c.x - d.x, cdy = c.y - d.y;
  const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  const double det = al * (bdx * cdy - cdx * bdy) + bl * (cdx * ady - adx * cdy) + cl * (adx * bdy - bdx * ady);
  const double perm = al * (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) + bl * (std::fabs(cdx * ady) + std::fabs(adx * cdy)) +
                      cl * (std::fabs(adx * bdy) + std::fabs(bdx * ady));
  const double ox = (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x);
  const double operm = std::fabs((a.x - c.x) * (b.y - c.y)) + std::fabs((a.y - c.y) * (b.x - c.x));
  int s_det = 0, s_or = 0;
  if (std::fabs(det) > 1e-12 * perm && std::fabs(ox) > 1e-12 * operm) {
    s_det = det > 0 ? 1 : -1;
    s_or = ox > 0 ? 1 : -1;
  } else {
    const mpq_class qdx(d.x), qdy(d.y);
    const mpq_class xa = mpq_class(a.x) - qdx, ya = mpq_class(a.y) - qdy;
    const mpq_class xb = mpq_class(b.x) - qdx, yb = mpq_class(b.y) - qdy;
    const mpq_class xc = mpq_class(c.x) - qdx, yc = mpq_class(c.y) - qdy;
    const mpq_class e = (xa * xa + ya * ya) * (xb * yc - xc * yb) + (xb * xb + yb * yb) * (xc * ya - xa * yc) +
                        (xc * xc + yc * yc) * (xa * yb - xb * ya);
    const mpq_class o = (mpq_class(a.x) - mpq_class(c.x)) * (mpq_class(b.y) - mpq_class(c.y)) -
                        (mpq_class(a.y) - mpq_class(c.y)) * (mpq_class(b.x) - mpq_class(c.x));
    s_det = sgn(e);
    s_or = sgn(o);
  }
  return s_det * s_or;
}

std::size_t brute_nearest(const PointSet& ps, Vec2 x) {
  std::size_t best = 0;
  double bd = INFINITY;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double d = ps.domain.distance2(x, ps.sites[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

// Whether sites a and b own 4-adjacent pixels of a res x res grid over the
// square of half-width h centred at c, by brute-force nearest site. Each
// contact is zoomed into again, `depth` more times, so that a separating edge
// far below the pixel pitch still shows up.
bool zoom_adjacent(const PointSet& ps, std::size_t a, std::size_t b, Vec2 c, double h, int depth = 0, int res = 64) {
  std::vector<std::size_t> owner(static_cast<std::size_t>(res) * res);
  const double pitch = 2 * h / res;
  const auto centre = [&](int i, int j) { return Vec2{c.x - h + (i + 0.5) * pitch, c.y - h + (j + 0.5) * pitch}; };
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) owner[static_cast<std::size_t>(j) * res + i] = brute_nearest(ps, ps.domain.wrap(centre(i, j)));
  }
  std::vector<Vec2> contacts;
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const std::size_t u = owner[static_cast<std::size_t>(j) * res + i];
      if (u != a && u != b) continue;
      const std::size_t want = u == a ? b : a;
      if (i + 1 < res && owner[static_cast<std::size_t>(j) * res + i + 1] == want) {
        contacts.push_back(centre(i, j) + Vec2{pitch / 2, 0});
      }
      if (j + 1 < res && owner[static_cast<std::size_t>(j + 1) * res + i] == want) {
        contacts.push_back(centre(i, j) + Vec2{0, pitch / 2});
      }
    }
  }
  if (depth == 0 || contacts.empty()) return !contacts.empty();
  // Contacts along a genuine edge are many; a corner artefact gives a handful.
  if (contacts.size() > 8) return true;
  for (const Vec2 x : contacts) {
    if (zoom_adjacent(ps, a, b, x, 2 * pitch, depth - 1, res)) return true;
  }
  return false;
}

Verdict criterion_duality() {
  const auto r = duality_run(0.5, 20, 2000, 101, {kConfidence, serial_runner()});
  const bool ok = r.degenerate == 0 && r.horizontal.ci.contains(0.5);
  return {ok, "degenerate=" + std::to_string(r.degenerate) + ", Pr(H_b)=" + ci(r.horizontal)};
}

Verdict criterion_geometry() {
  std::size_t triangles = 0, circle_violations = 0, mismatches = 0, refined = 0, max_n = 0;
  const double side = 12.0;
  const int res = 600;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PointSet ps = sample_poisson(Domain::torus(side), 1.0, 7000 + seed);
    if (ps.size() > 200) return {false, "seed " + std::to_string(seed) + " drew more than 200 sites"};
    max_n = std::max(max_n, ps.size());
    const auto g = std::make_shared<const VoronoiGraph>(build_tessellation(ps));
    for (const auto& t : g->triangles) {
      ++triangles;
      const Vec2 a = ps.sites[t.site[0]] + t.offset[0];
      const Vec2 b = ps.sites[t.site[1]] + t.offset[1];
      const Vec2 c = ps.sites[t.site[2]] + t.offset[2];
      for (std::size_t i = 0; i < ps.size(); ++i) {
        for (int kx = -1; kx <= 1; ++kx) {
          for (int ky = -1; ky <= 1; ++ky) {
            const Vec2 d = ps.sites[i] + Vec2{kx * side, ky * side};
            if (d == a || d == b || d == c) continue;
            if (inside_circle(a, b, c, d) > 0) ++circle_violations;
          }
        }
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> voronoi;
    for (const auto& e : g->edges) voronoi.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    const auto raster = oracle::raster_pairs(*g, res);
    const double pitch = side / res;
    // Pairs the coarse raster disagrees on are settled on a zoomed raster.
    for (const auto& pr : raster) {
      if (voronoi.count(pr)) continue;
      ++refined;
      bool still = false;
      for (int j = 0; j < res && !still; ++j) {
        for (int i = 0; i < res && !still; ++i) {
          const Vec2 x{(i + 0.5) * pitch, (j + 0.5) * pitch};
          if (g->index->nearest(x).index != pr.first) continue;
          for (const Vec2 step : {Vec2{pitch, 0}, Vec2{0, pitch}, Vec2{-pitch, 0}, Vec2{0, -pitch}}) {
            if (g->index->nearest(ps.domain.wrap(x + step)).index == pr.second &&
                zoom_adjacent(ps, pr.first, pr.second, x + 0.5 * step, 2 * pitch, 5)) {
              still = true;
            }
          }
        }
      }
      mismatches += still;
    }
    for (const auto& e : g->edges) {
      const std::pair<std::size_t, std::size_t> key{std::min(e.a, e.b), std::max(e.a, e.b)};
      if (raster.count(key)) continue;
      ++refined;
      const Vec2 m = ps.domain.wrap(g->site(e.a) + (e.m - g->site(e.a)));
      const double h = std::max(distance(e.o1, e.o2), 1e-9);
      if (!zoom_adjacent(ps, e.a, e.b, m, h)) ++mismatches;
    }
  }
  return {circle_violations == 0 && mismatches == 0,
          std::to_string(triangles) + " triangles, " + std::to_string(circle_violations) +
              " empty-circle violations; adjacency mismatches=" + std::to_string(mismatches) + " (" +
              std::to_string(refined) + " pairs settled by zoom, max N=" + std::to_string(max_n) + ")"};
}

Verdict criterion_closest() {
  std::size_t probes = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointSet ps = sample_poisson(Domain::torus(12.0), 1.0, 8000 + seed);
    const VoronoiGraph g = build_tessellation(ps);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : g.edges) pairs.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    Rng rng(seed);
    for (int k = 0; k < 500; ++k) {
      const Vec2 x{uniform(rng, 0, 12), uniform(rng, 0, 12)};
      std::size_t i1 = 0, i2 = 0;
      double d1 = INFINITY, d2 = INFINITY;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const double d = ps.domain.distance2(x, ps.sites[i]);
        if (d < d1) {
          d2 = d1;
          i2 = i1;
          d1 = d;
          i1 = i;
        } else if (d < d2) {
          d2 = d;
          i2 = i;
        }
      }
      ++probes;
      violations += !pairs.count({std::min(i1, i2), std::max(i1, i2)});
    }
  }
  return {violations == 0, std::to_string(probes) + " probes, " + std::to_string(violations) + " violations"};
}

Verdict criterion_crossing_oracle() {
  std::size_t mismatches = 0, crossings = 0, refined = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(child_seed(9000, seed));
    const auto g = torus_graph(11.0, 1.0, 9000 + seed);
    const auto c = colour_sites(g, uniform(rng, 0.3, 0.7), seed);
    const double w = uniform(rng, 3, 9), h = uniform(rng, 3, 9);
    const double x = uniform(rng, 0, 11), y = uniform(rng, 0, 11);
    const Rect r{x, y, x + w, y + h};
    const Orientation o = rng() % 2 ? Orientation::horizontal : Orientation::vertical;
    const Colour col = rng() % 2 ? Colour::black : Colour::white;
    const bool got = crossing(c, r, o, col).verdict;
    crossings += got;
    if (got == oracle::raster_crossing(c, r, o, col, 500)) continue;
    ++refined;
    if (got != oracle::raster_crossing(c, r, o, col, 4000)) ++mismatches;
  }
  return {mismatches == 0, "200 configurations, " + std::to_string(crossings) + " crossings, " +
                               std::to_string(mismatches) + " disagreements (" + std::to_string(refined) +
                               " re-rastered finer)"};
}

Verdict criterion_fkg() {
  const double s = 15;
  const CrossingEvent a{Rect{0, 0, 2 * s, s}, Orientation::horizontal, Colour::black};
  const CrossingEvent b{Rect{s / 2, 0, 1.5 * s, 2 * s}, Orientation::vertical, Colour::black};
  const auto r = correlation_check(0.5, a, b, 4000, 505, 0.0, {kConfidence, serial_runner()});
  return {r.difference >= -kSigmas * r.sigma,
          "Pr(A)=" + num(r.a.mean) + " Pr(B)=" + num(r.b.mean) + " Pr(AB)-Pr(A)Pr(B)=" + num(r.difference) +
              " sigma=" + num(r.sigma)};
}

Verdict criterion_composition() {
  bool ok = true;
  std::string detail;
  for (const double p : {0.5, 0.7}) {
    const auto r = composition_check(p, 1.5, 1.5, 15, 2000, 606, {kConfidence, serial_runner()});
    ok = ok && !r.violation;
    detail += "p=" + num(p) + ": margin=" + num(r.margin) + " sigma=" + num(r.sigma) + "; ";
  }
  return {ok, detail};
}

Verdict criterion_sharp_threshold() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  const auto scan = threshold_scan({15, 60}, grid, 1.0, 1500, 707, {kConfidence, serial_runner()});
  const auto& a = scan.curves[0];
  const auto& b = scan.curves[1];
  const bool ok = scan.narrower_beyond_ci(0, 1) && !a.resolution_limited && !b.resolution_limited;
  return {ok, "width(15)=" + num(a.width) + " [" + num(a.width_ci.lo) + ", " + num(a.width_ci.hi) + "], width(60)=" +
                  num(b.width) + " [" + num(b.width_ci.lo) + ", " + num(b.width_ci.hi) + "]"};
}

Verdict criterion_subcritical_tail() {
  const auto fits = tail_family({0.3, 0.2, 0.4}, 40, 5000, SizeMeasure::cells, 808, {kConfidence, serial_runner()});
  const auto& f3 = fits[0];
  const auto& f2 = fits[1];
  const auto& f4 = fits[2];
  const double gap = f4.fit.slope - f2.fit.slope;
  const double err = std::hypot(f2.fit.slope_se, f4.fit.slope_se);
  const bool ok = f3.fit.slope < 0 && f3.fit.r2 > kTailR2 && f3.warnings.empty() && gap > kSigmas * err;
  return {ok, "slope(0.3)=" + num(f3.fit.slope) + " R2=" + num(f3.fit.r2) + " over " + std::to_string(f3.fit.points) +
                  " points; slope(0.2)=" + num(f2.fit.slope) + ", slope(0.4)=" + num(f4.fit.slope) + " (gap " +
                  num(gap) + ", 3se " + num(kSigmas * err) + ")"};
}

Verdict criterion_supercritical() {
  const double s = 2.0;
  const auto reach = reach_scan(0.65, {5 * s, 10 * s, 20 * s}, 90, 300, 909, {kConfidence, serial_runner()});
  bool ok = true;
  std::string detail = "reach:";
  for (std::size_t i = 0; i < reach.radii.size(); ++i) {
    ok = ok && reach.reach[i].ci.lo >= kReachFloor;
    if (i) ok = ok && reach.reach[i].mean <= reach.reach[i - 1].mean;
    detail += " R=" + num(reach.radii[i]) + " " + ci(reach.reach[i]);
  }
  bool tuned = false;
  for (const double block : {10.0, 20.0, 30.0}) {
    const auto st = renorm_study(RenormMode::bond_supercritical, 0.65, block, {0, 0, 2, 2}, 200, 910,
                                 {kConfidence, serial_runner()});
    detail += "; block " + num(block) + ": marginal " + ci(st.marginal);
    if (st.marginal.mean < kRenormTarget) continue;
    const bool flat = st.distant.se > 0 && std::fabs(st.distant.r) <= kSigmas * st.distant.se;
    detail += ", distant r=" + num(st.distant.r) + " se=" + num(st.distant.se) + " over " +
              std::to_string(st.distant.pairs) + " pairs, spanning " + ci(st.spanning);
    tuned = flat;
    break;
  }
  return {ok && tuned, detail};
}

Verdict criterion_crude_law() {
  const double s = 20, delta = 0.2, p = 0.7;
  const auto expected = crude_probabilities(delta * delta, p);
  std::array<double, 3> counts{};
  double total = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    const auto g = crude_grid(torus_sample(s, p, child_seed(1010, i)), delta);
    counts[0] += double(g.bad);
    counts[1] += double(g.neutral);
    counts[2] += double(g.good);
    total += double(g.states.size());
  }
  bool ok = expected[1] == std::exp(-delta * delta);
  std::string detail;
  const char* names[3] = {"bad", "neutral", "good"};
  for (int k = 0; k < 3; ++k) {
    const double f = counts[k] / total;
    const double sigma = std::sqrt(expected[k] * (1 - expected[k]) / total);
    ok = ok && std::fabs(f - expected[k]) <= kSigmas * sigma;
    detail += std::string(names[k]) + " " + num(f) + " vs " + num(expected[k]) + " (z=" + num((f - expected[k]) / sigma) + ") ";
  }
  return {ok, detail + "over " + num(total) + " squares"};
}

Verdict criterion_badness() {
  std::size_t configs = 0, compared = 0, disagreements = 0, unverified = 0, monotone_violations = 0;
  for (std::uint64_t seed = 0; configs < 40 && seed < 2000; ++seed) {
    const PointSet ps = sample_poisson(Domain::torus(6.0), 12.0 / 36.0, 11000 + seed);
    if (ps.size() < 4 || ps.size() > 12) continue;
    std::shared_ptr<const VoronoiGraph> g;
    try {
      g = std::make_shared<const VoronoiGraph>(build_tessellation(ps));
    } catch (const Error&) {
      continue;
    }
    ++configs;
    for (const double delta : {0.1, 0.2, 0.3}) {
      const auto fast = detect_badness(*g, delta);
      const auto full = detect_badness(*g, delta, {BadnessMode::exhaustive, 0, 0});
      const double pitch = delta / 4;
      std::set<std::array<std::size_t, 4>> fk, ek;
      for (const auto& q : fast.quadruples) {
        fk.insert(q.sites);
        unverified += !verify_quadruple(*g, q, delta, fast.r_max);
      }
      for (const auto& q : full.quadruples) {
        ek.insert(q.sites);
        unverified += !verify_quadruple(*g, q, delta, full.r_max);
      }
      for (const auto& q : full.quadruples) {
        if (q.slack < pitch) continue;
        ++compared;
        disagreements += !fk.count(q.sites);
      }
      for (const auto& q : fast.quadruples) {
        if (q.slack < pitch) continue;
        ++compared;
        disagreements += !ek.count(q.sites);
      }
      disagreements += fast.close_pairs != full.close_pairs;
    }
    std::vector<std::uint8_t> prev(g->size(), 1);
    std::set<std::array<std::size_t, 4>> prev_quads;
    for (const double dl : {0.05, 0.1, 0.2, 0.3, 0.4}) {
      const auto rep = detect_badness(*g, dl, {BadnessMode::exhaustive, 0, 0.02});
      for (std::size_t i = 0; i < g->size(); ++i) monotone_violations += !prev[i] && rep.good[i];
      std::set<std::array<std::size_t, 4>> quads;
      for (const auto& q : rep.quadruples) quads.insert(q.sites);
      for (const auto& k : prev_quads) monotone_violations += !quads.count(k);
      prev = rep.good;
      prev_quads = quads;
    }
  }
  const bool ok = configs == 40 && disagreements == 0 && unverified == 0 && monotone_violations == 0;
  return {ok, std::to_string(configs) + " configurations, " + std::to_string(compared) +
                  " witnesses with slack >= pitch compared, " + std::to_string(disagreements) + " disagreements, " +
                  std::to_string(unverified) + " failed re-verifications, " + std::to_string(monotone_violations) +
                  " monotonicity violations"};
}

Verdict criterion_robust_paths() {
  const double delta = 0.01;
  std::size_t pairs = 0, samples = 0, violations = 0;
  double worst = INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = torus_sample(30, 0.5, child_seed(1212, seed));
    const auto rep = detect_badness(*c.graph, delta);
    const auto check = check_good_pairs(c, rep.good, delta);
    pairs += check.pairs;
    samples += check.samples;
    violations += check.violations;
    if (check.pairs) worst = std::min(worst, check.min_sampled);
  }
  return {violations == 0 && pairs > 0, std::to_string(pairs) + " good black pairs, " + std::to_string(samples) +
                                            " sampled points, " + std::to_string(violations) +
                                            " violations, smallest sampled margin " + num(worst) + " vs delta^6 " +
                                            num(std::pow(delta, 6))};
}

ColouredConfiguration corridor() {
  Rng rng(77);
  std::vector<Vec2> sites;
  std::vector<Colour> colours;
  for (double y = 0.05; y < 10.0; y += 0.25) {
    const bool black = y >= 1.5 && y <= 8.5;
    const double step = black ? 0.25 : 0.5;
    for (double x = 0.1; x < 10.0 - 1e-9; x += step) {
      sites.push_back({x + 0.05 * uniform01(rng), y + 0.05 * uniform01(rng)});
      colours.push_back(black ? Colour::black : Colour::white);
    }
  }
  auto g = std::make_shared<const VoronoiGraph>(build_tessellation(PointSet::from_sites(sites, Domain::torus(10.0))));
  return with_colours(g, colours);
}

Verdict criterion_crude_stability() {
  const auto rep = crude_stability_test(corridor(), 0.2, Rect{1, 4, 8, 6}, 50, 1313);
  return {rep.resamples == 50 && rep.crossed == 50 && rep.violations == 0,
          std::to_string(rep.crossed) + "/" + std::to_string(rep.resamples) + " resamples crossed, certified margin " +
              num(rep.certified_margin) + " (>= 4 delta = 0.8), skipped " + std::to_string(rep.skipped)};
}

Verdict criterion_annulus() {
  const auto r = annulus_scan(0.5, {10, 20, 40}, 1000, 1414, {kConfidence, serial_runner()});
  bool ok = true;
  std::string detail;
  for (const auto& pt : r.points) {
    ok = ok && pt.cycle.ci.lo > 0;
    detail += "s=" + num(pt.s) + ": circuit " + ci(pt.cycle) + ", four crossings " + ci(pt.four) + "; ";
  }
  return {ok, detail};
}

Verdict criterion_determinism() {
  namespace fs = std::filesystem;
  const nlohmann::json base = {{"n", 12},        {"s", 8.0},           {"seed", 1515},
                               {"s_list", {6.0, 9.0}}, {"p_grid", {0.3, 0.5, 0.7}}, {"radii", {3.0, 6.0}},
                               {"block", 6.0},   {"window", {0, 0, 1, 1}}, {"k", 2},
                               {"bootstrap", 50}, {"delta", 0.2}};
  std::size_t compared = 0;
  std::string differing;
  const fs::path root = fs::temp_directory_path() / "vperc_acceptance_determinism";
  for (const auto& name : cli::experiment_names()) {
    std::string first;
    for (const unsigned workers : {1u, 3u, 4u}) {
      nlohmann::json j = base;
      j["experiment"] = name;
      j["workers"] = workers;
      j["torus"] = name == "reach" ? 20.0 : (name == "correlate" ? 20.0 : 8.0);
      if (name == "crude") j["torus"] = 8.0;
      if (name == "couple") j["delta1"] = 0.5;
      j["output"] = (root / (name + "_" + std::to_string(workers))).string();
      const auto config = cli::RunConfig::from_json(j);
      cli::emit(config, cli::execute(config));
      std::ifstream in(fs::path(j["output"].get<std::string>()) / (name + ".csv"), std::ios::binary);
      const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      if (workers == 1) {
        first = bytes;
      } else if (bytes != first) {
        differing += name + " ";
      }
      ++compared;
    }
  }
  fs::remove_all(root);
  return {differing.empty(), std::to_string(compared) + " runs over " + std::to_string(cli::experiment_names().size()) +
                                 " experiments with 1, 3 and 4 workers" +
                                 (differing.empty() ? ", all CSVs byte-identical" : ", differing: " + differing)};
}

}  // namespace

int main() {
  std::cout << "acceptance: confidence " << kConfidence << ", " << kSigmas << " sigma tolerances" << std::endl;
  report(1, "duality at p=1/2 on 20x20 squares", criterion_duality);
  report(2, "Delaunay empty circles and raster adjacency", criterion_geometry);
  report(3, "two closest sites are adjacent", criterion_closest);
  report(4, "crossing verdicts match a raster flood fill", criterion_crossing_oracle);
  report(5, "positive correlation of overlapping crossings", criterion_fkg);
  report(6, "composition inequality", criterion_composition);
  report(7, "threshold window narrows from s=15 to s=60", criterion_sharp_threshold);
  report(8, "subcritical cluster tail decays exponentially", criterion_subcritical_tail);
  report(9, "supercritical reach floor and renormalised marginal", criterion_supercritical);
  report(10, "crude state law", criterion_crude_law);
  report(11, "fast and exhaustive badness detection", criterion_badness);
  report(12, "robust paths between good black neighbours", criterion_robust_paths);
  report(13, "crude resamples keep a robust corridor crossing", criterion_crude_stability);
  report(14, "white circuits in the annulus at p=1/2", criterion_annulus);
  report(15, "determinism across worker counts", criterion_determinism);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
