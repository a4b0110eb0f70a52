#include "vperc/geometry.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace vperc {

Domain Domain::torus(double side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw Error(ErrorKind::invalid_parameter, "torus side must be positive and finite");
  }
  Domain d;
  d.kind_ = Kind::torus;
  d.side_ = side;
  d.core_ = Rect{0.0, 0.0, side, side};
  return d;
}

double Domain::minimum_guard(const Rect& core) {
  return 2.0 * density_radius(std::max(core.width(), core.height()));
}

Domain Domain::plane(const Rect& core, double guard) {
  (void)Rect::checked(core.x1, core.y1, core.x2, core.y2);
  const double need = minimum_guard(core);
  if (!(guard >= need) || !std::isfinite(guard)) {
    throw Error(ErrorKind::invalid_parameter,
                "guard band " + std::to_string(guard) + " below required " + std::to_string(need));
  }
  Domain d;
  d.kind_ = Kind::plane;
  d.core_ = core;
  d.guard_ = guard;
  d.side_ = std::max(core.width(), core.height());
  return d;
}

Domain Domain::plane(const Rect& core) { return plane(core, minimum_guard(core)); }

Rect Domain::bounds() const {
  if (is_torus()) return Rect{0.0, 0.0, side_, side_};
  return core_.expanded(guard_);
}

double Domain::area() const { return bounds().area(); }

double Domain::scale() const { return side_; }

Vec2 Domain::wrap(Vec2 p) const {
  if (!is_torus()) return p;
  auto w = [s = side_](double v) {
    double r = std::fmod(v, s);
    if (r < 0.0) r += s;
    if (r >= s) r = 0.0;  // fmod of a tiny negative can round up to s
    return r;
  };
  return {w(p.x), w(p.y)};
}

Vec2 Domain::delta(Vec2 a, Vec2 b) const {
  Vec2 d = b - a;
  if (is_torus()) {
    d.x -= side_ * std::nearbyint(d.x / side_);
    d.y -= side_ * std::nearbyint(d.y / side_);
  }
  return d;
}

bool Domain::contains(Vec2 p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  if (is_torus()) return p.x >= 0.0 && p.x < side_ && p.y >= 0.0 && p.y < side_;
  return bounds().contains(p);
}

PointSet PointSet::from_sites(std::vector<Vec2> sites, const Domain& domain, double intensity,
                              std::uint64_t seed) {
  std::set<std::pair<double, double>> seen;
  for (auto& p : sites) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::invalid_parameter, "non-finite site coordinate");
    }
    p = domain.wrap(p);
    if (!domain.contains(p)) throw Error(ErrorKind::invalid_parameter, "site outside domain");
    if (!seen.emplace(p.x, p.y).second) {
      throw Error(ErrorKind::degenerate_input, "two sites coincide exactly");
    }
  }
  PointSet ps;
  ps.sites = std::move(sites);
  ps.domain = domain;
  ps.intensity = intensity;
  ps.seed = seed;
  return ps;
}

}  // namespace vperc
