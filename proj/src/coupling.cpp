#include "vperc/coupling.hpp"

#include <cmath>
#include <deque>
#include <map>

#include "vperc/badness.hpp"
#include "vperc/crude.hpp"
#include "vperc/random.hpp"
#include "vperc/robustness.hpp"
#include "vperc/sampling.hpp"
#include "vperc/union_find.hpp"

namespace vperc {
namespace {

// Distance range, in square units, from a lattice corner to the unit square
// whose lower-left corner sits at offset k from it.
std::pair<double, double> corner_range(long k) {
  const double lo = k > 0 ? static_cast<double>(k) : (k + 1 < 0 ? static_cast<double>(-(k + 1)) : 0.0);
  const double hi = static_cast<double>(std::max(std::labs(k), std::labs(k + 1)));
  return {lo, hi};
}

}  // namespace

CoupledSample coupled_sample(const Domain& domain, double p1, double p2, double delta1, std::uint64_t seed,
                             double delta2) {
  if (!domain.is_torus()) throw Error(ErrorKind::invalid_parameter, "coupling is defined on the torus");
  if (!(p1 > 0.0 && p1 < p2 && p2 < 1.0)) throw Error(ErrorKind::invalid_parameter, "need 0 < p1 < p2 < 1");
  const double s = domain.side();
  const std::size_t n = squares_per_side(s, delta1);
  if (delta2 <= 0.0) delta2 = std::pow(s, -0.01);
  auto ps = std::make_shared<const PointSet>(sample_poisson(domain, 1.0, child_seed(seed, 0)));
  auto g = std::make_shared<const VoronoiGraph>(build_tessellation(ps));
  CoupledSample c{s / n, delta2, n, {}, colour_sites(g, p1, child_seed(seed, 1)), {}, {}};
  c.second = c.first.recoloured(p2);

  const double d1 = c.delta1;
  std::vector<std::vector<std::size_t>> in(n * n);
  c.square_of.resize(ps->size());
  for (std::size_t i = 0; i < ps->size(); ++i) {
    const auto cx = std::min(n - 1, static_cast<std::size_t>(ps->sites[i].x / d1));
    const auto cy = std::min(n - 1, static_cast<std::size_t>(ps->sites[i].y / d1));
    c.square_of[i] = cy * n + cx;
    in[cy * n + cx].push_back(i);
  }
  const long nn = static_cast<long>(n);
  const auto sq = [&](long i, long j) { return static_cast<std::size_t>(((j % nn + nn) % nn) * nn + (i % nn + nn) % nn); };

  UnionFind uf(ps->size());
  std::vector<char> flagged(ps->size(), 0);
  const auto join = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (const std::size_t x : a) {
      flagged[x] = 1;
      uf.unite(a.front(), x);
    }
    for (const std::size_t x : b) {
      flagged[x] = 1;
      uf.unite(a.front(), x);
    }
  };

  // Potentially close: two sites in squares within delta2 of each other.
  const long reach = static_cast<long>(std::ceil(delta2 / d1)) + 1;
  for (long j = 0; j < nn; ++j) {
    for (long i = 0; i < nn; ++i) {
      const auto& here = in[sq(i, j)];
      if (here.empty()) continue;
      if (here.size() >= 2) join(here, {});
      for (long dj = -reach; dj <= reach; ++dj) {
        for (long di = -reach; di <= reach; ++di) {
          if ((dj < 0) || (dj == 0 && di <= 0)) continue;
          const double gx = std::max(0.0, static_cast<double>(std::labs(di) - 1));
          const double gy = std::max(0.0, static_cast<double>(std::labs(dj) - 1));
          if (std::hypot(gx, gy) * d1 > delta2) continue;
          const auto& there = in[sq(i + di, j + dj)];
          if (!there.empty() && sq(i + di, j + dj) != sq(i, j)) join(here, there);
        }
      }
    }
  }

  // Potentially bad quadruples: from each lattice corner x, r is the least
  // distance within which some occupied square lies entirely; every occupied
  // square meeting the disc of radius r + delta2 belongs to the group.
  const double r_max = density_radius(s);
  const long far = static_cast<long>(std::ceil((r_max + delta2) / d1)) + 2;
  std::vector<std::size_t> group;
  for (long j = 0; j < nn; ++j) {
    for (long i = 0; i < nn; ++i) {
      double r = std::numeric_limits<double>::infinity();
      for (long dj = -far; dj < far; ++dj) {
        for (long di = -far; di < far; ++di) {
          if (in[sq(i + di, j + dj)].empty()) continue;
          r = std::min(r, d1 * std::hypot(corner_range(di).second, corner_range(dj).second));
        }
      }
      if (!(r <= r_max + std::sqrt(2.0) * d1)) continue;
      group.clear();
      for (long dj = -far; dj < far; ++dj) {
        for (long di = -far; di < far; ++di) {
          const auto& there = in[sq(i + di, j + dj)];
          if (there.empty()) continue;
          if (d1 * std::hypot(corner_range(di).first, corner_range(dj).first) > r + delta2) continue;
          group.insert(group.end(), there.begin(), there.end());
        }
      }
      if (group.size() >= 4) join(group, {});
    }
  }
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < ps->size(); ++i) {
    if (!flagged[i]) continue;
    const auto [it, fresh] = slot.try_emplace(uf.find(i), c.potentially_bad.size());
    if (fresh) c.potentially_bad.emplace_back();
    c.potentially_bad[it->second].push_back(i);
  }
  return c;
}

GoodPathStats good_path_check(const CoupledSample& coupled, double delta, const GoodPathOptions& opt) {
  const ColouredConfiguration& one = coupled.first;
  const ColouredConfiguration& two = coupled.second;
  const VoronoiGraph& g = *two.graph;
  const Domain& d = g.domain();
  const double L = std::log(std::max(d.scale(), std::exp(1.0)));
  const std::size_t max_hops = static_cast<std::size_t>(std::ceil(8.0 * L));
  const double radius = L * L;
  const BadnessReport bad = detect_badness(g, delta, {BadnessMode::fast, 0.0, 0.0});
  const double level = std::pow(delta, 6);
  const double pitch = level / 4.0;
  const auto usable = [&](std::size_t i) { return two.is_black(i) && bad.good[i]; };

  GoodPathStats out;
  out.min_certified = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> depth(g.size()), via(g.size());
  std::vector<std::size_t> touched;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::fill(depth.begin(), depth.end(), none);
  long certified = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    const std::size_t a = coupled.partner(ed.a), b = coupled.partner(ed.b);
    if (ed.a == ed.b || !one.is_black(ed.a) || !one.is_black(ed.b)) continue;
    ++out.pairs;
    if (!usable(a) || !usable(b)) {
      ++out.endpoint_bad;
      continue;
    }
    // Breadth-first search over usable sites near a.
    for (const std::size_t t : touched) depth[t] = none;
    touched.assign({a});
    depth[a] = 0;
    std::deque<std::size_t> q{a};
    bool found = false;
    while (!q.empty() && !found) {
      const std::size_t v = q.front();
      q.pop_front();
      if (depth[v] >= max_hops) continue;
      for (const std::size_t ce : g.cells[v].edges) {
        const std::size_t w = g.across(ce, v).first;
        if (w == v || depth[w] != none || !usable(w) || d.distance(g.site(a), g.site(w)) > radius) continue;
        depth[w] = depth[v] + 1;
        via[w] = ce;
        touched.push_back(w);
        if (w == b) {
          found = true;
          break;
        }
        q.push_back(w);
      }
    }
    if (!found) continue;
    ++out.successes;
    out.hops_max = std::max(out.hops_max, depth[b]);
    if (opt.certify >= 0 && certified >= opt.certify) continue;
    ++certified;
    // Rebuild the hop chain and certify each site-midpoint-site leg.
    for (std::size_t w = b; w != a;) {
      const std::size_t ce = via[w];
      const std::size_t v = g.edges[ce].a == w ? g.edges[ce].b : g.edges[ce].a;
      const auto cert = certify_polyline(two, pair_polyline(g, ce, v), level - pitch, pitch);
      ++out.polylines;
      out.violations += cert.below;
      out.min_certified = std::min(out.min_certified, cert.certified);
      w = v;
    }
  }
  out.fraction = out.pairs ? static_cast<double>(out.successes) / static_cast<double>(out.pairs) : 1.0;
  return out;
}

}  // namespace vperc
