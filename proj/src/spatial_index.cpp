#include "vperc/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace vperc {

SpatialIndex::SpatialIndex(const PointSet& points, double pitch) : points_(&points) {
  const Domain& d = points.domain;
  bounds_ = d.bounds();
  torus_ = d.is_torus();
  const std::size_t n = points.size();
  if (!(pitch > 0.0)) {
    const double density = n > 0 ? static_cast<double>(n) / bounds_.area() : 1.0 / bounds_.area();
    pitch = std::sqrt(2.0 / density);
  }
  const double cap = 4096.0;
  nx_ = static_cast<std::size_t>(std::clamp(std::floor(bounds_.width() / pitch), 1.0, cap));
  ny_ = static_cast<std::size_t>(std::clamp(std::floor(bounds_.height() / pitch), 1.0, cap));
  if (torus_) ny_ = nx_ = std::min(nx_, ny_);
  pitch_ = std::max(bounds_.width() / static_cast<double>(nx_),
                    bounds_.height() / static_cast<double>(ny_));

  std::vector<std::uint32_t> which(n);
  start_.assign(nx_ * ny_ + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = points.sites[i];
    const auto col = static_cast<std::size_t>(std::clamp(
        std::floor((p.x - bounds_.x1) / bounds_.width() * static_cast<double>(nx_)), 0.0,
        static_cast<double>(nx_ - 1)));
    const auto row = static_cast<std::size_t>(std::clamp(
        std::floor((p.y - bounds_.y1) / bounds_.height() * static_cast<double>(ny_)), 0.0,
        static_cast<double>(ny_ - 1)));
    which[i] = static_cast<std::uint32_t>(row * nx_ + col);
    ++start_[which[i] + 1];
  }
  for (std::size_t b = 0; b < nx_ * ny_; ++b) start_[b + 1] += start_[b];
  items_.resize(n);
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) items_[fill[which[i]]++] = static_cast<std::uint32_t>(i);
}

std::vector<std::size_t> SpatialIndex::bucket(std::size_t i, std::size_t j) const {
  std::vector<std::size_t> out;
  visit_bucket(static_cast<long>(i), static_cast<long>(j), [&](std::size_t k) { out.push_back(k); });
  return out;
}

SpatialIndex::Cursor SpatialIndex::cursor(Vec2 x) const {
  if (torus_) x = points_->domain.wrap(x);
  const double wx = bounds_.width() / static_cast<double>(nx_);
  const double wy = bounds_.height() / static_cast<double>(ny_);
  const double fx = (x.x - bounds_.x1) / wx;
  const double fy = (x.y - bounds_.y1) / wy;
  Cursor c;
  c.bx = static_cast<long>(std::clamp(std::floor(fx), 0.0, static_cast<double>(nx_ - 1)));
  c.by = static_cast<long>(std::clamp(std::floor(fy), 0.0, static_cast<double>(ny_ - 1)));
  if (!bounds_.contains(x)) {
    c.slack = 0.0;
  } else {
    const double lx = (fx - static_cast<double>(c.bx)) * wx;
    const double ly = (fy - static_cast<double>(c.by)) * wy;
    c.slack = std::max(0.0, std::min({lx, wx - lx, ly, wy - ly}));
  }
  return c;
}

long SpatialIndex::max_ring() const {
  // Beyond this ring a torus search would revisit buckets; signal a full scan.
  const long n = static_cast<long>(std::max(nx_, ny_));
  if (torus_) return 2 * ((n - 1) / 2) + 1 <= n ? (n - 1) / 2 : -1;
  return n;
}

std::vector<Neighbour> SpatialIndex::k_nearest(Vec2 x, std::size_t k) const {
  const auto& s = points_->sites;
  if (s.empty()) throw Error(ErrorKind::empty_domain, "k_nearest on an empty point set");
  if (k > s.size()) throw Error(ErrorKind::invalid_parameter, "k exceeds the number of sites");
  const auto& d = points_->domain;
  std::vector<std::pair<double, std::size_t>> found;
  const auto collect = [&](std::size_t i) { found.emplace_back(d.distance2(x, s[i]), i); };
  const auto kth = [&]() {
    std::nth_element(found.begin(), found.begin() + static_cast<long>(k - 1), found.end());
    return found[k - 1].first;
  };
  const Cursor c = cursor(x);
  const long rmax = max_ring();
  bool done = false;
  if (rmax >= 0) {
    for (long r = 0; r <= rmax && !done; ++r) {
      visit_ring(c, r, collect);
      if (found.size() >= k) {
        const double reach = static_cast<double>(r) * pitch_ + c.slack;
        done = kth() < reach * reach;
      }
    }
  }
  if (!done) {
    found.clear();
    for (std::size_t i = 0; i < s.size(); ++i) collect(i);
  }
  std::sort(found.begin(), found.end());
  std::vector<Neighbour> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({found[i].second, std::sqrt(found[i].first)});
  return out;
}

Neighbour SpatialIndex::nearest(Vec2 x) const {
  if (points_->empty()) throw Error(ErrorKind::empty_domain, "nearest on an empty point set");
  return nearest_if(x, [](std::size_t) { return true; });
}

}  // namespace vperc
