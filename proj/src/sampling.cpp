#include "vperc/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace vperc {

PointSet sample_poisson(const Domain& domain, double intensity, Rng& rng, std::uint64_t seed_tag) {
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "intensity must be finite and non-negative");
  }
  const Rect b = domain.bounds();
  const double mean = intensity * b.area();
  std::uint64_t n = 0;
  if (mean > 0.0) n = std::poisson_distribution<std::uint64_t>(mean)(rng);

  PointSet ps;
  ps.domain = domain;
  ps.intensity = intensity;
  ps.seed = seed_tag;
  ps.sites.reserve(n);
  const auto draw = [&] { return domain.wrap(Vec2{uniform(rng, b.x1, b.x2), uniform(rng, b.y1, b.y2)}); };
  for (std::uint64_t i = 0; i < n; ++i) ps.sites.push_back(draw());

  std::vector<std::uint32_t> order(n);
  for (bool clean = false; !clean;) {
    clean = true;
    std::iota(order.begin(), order.end(), 0u);
    const auto& s = ps.sites;
    std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
      if (s[i].x != s[j].x) return s[i].x < s[j].x;
      if (s[i].y != s[j].y) return s[i].y < s[j].y;
      return i < j;
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (s[order[k]] == s[order[k - 1]]) {
        ps.sites[order[k]] = draw();
        clean = false;
      }
    }
  }
  return ps;
}

PointSet sample_poisson(const Domain& domain, double intensity, std::uint64_t seed) {
  Rng rng(seed);
  return sample_poisson(domain, intensity, rng, seed);
}

}  // namespace vperc
