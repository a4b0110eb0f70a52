#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <limits>
#include <vector>

#include "vperc/geometry.hpp"

namespace vperc {

struct Neighbour {
  std::size_t index = 0;
  double distance = std::numeric_limits<double>::infinity();
};

/// Uniform bucket grid over the domain. Holds a pointer to the point set,
/// which must outlive the index. Immutable after construction.
class SpatialIndex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit SpatialIndex(const PointSet& points, double pitch = 0.0);

  const PointSet& points() const { return *points_; }
  double pitch() const { return pitch_; }
  std::size_t columns() const { return nx_; }
  std::size_t rows() const { return ny_; }
  /// Sites stored in bucket (i, j).
  std::vector<std::size_t> bucket(std::size_t i, std::size_t j) const;

  /// k nearest sites, ascending by distance then index.
  std::vector<Neighbour> k_nearest(Vec2 x, std::size_t k) const;
  Neighbour nearest(Vec2 x) const;

  /// Nearest site accepted by `keep(index)`; index npos when none is.
  template <class Pred>
  Neighbour nearest_if(Vec2 x, Pred keep) const;

  /// Calls f(index, distance) for every site with distance <= radius.
  template <class F>
  void for_each_within(Vec2 x, double radius, F f) const;

 private:
  struct Cursor {
    long bx, by;
    double slack;  // distance from x to the border of its bucket
  };
  Cursor cursor(Vec2 x) const;
  long max_ring() const;
  template <class F>
  void visit_ring(const Cursor& c, long r, F f) const;
  template <class F>
  void visit_bucket(long i, long j, F f) const;

  const PointSet* points_;
  Rect bounds_;
  double pitch_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  bool torus_ = false;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> items_;
};

template <class F>
void SpatialIndex::visit_bucket(long i, long j, F f) const {
  if (torus_) {
    const long nx = static_cast<long>(nx_), ny = static_cast<long>(ny_);
    i = ((i % nx) + nx) % nx;
    j = ((j % ny) + ny) % ny;
  } else if (i < 0 || j < 0 || i >= static_cast<long>(nx_) || j >= static_cast<long>(ny_)) {
    return;
  }
  const std::size_t b = static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
  for (std::uint32_t k = start_[b]; k < start_[b + 1]; ++k) f(static_cast<std::size_t>(items_[k]));
}

template <class F>
void SpatialIndex::visit_ring(const Cursor& c, long r, F f) const {
  if (r == 0) {
    visit_bucket(c.bx, c.by, f);
    return;
  }
  for (long d = -r; d <= r; ++d) {
    visit_bucket(c.bx + d, c.by - r, f);
    visit_bucket(c.bx + d, c.by + r, f);
  }
  for (long d = -r + 1; d <= r - 1; ++d) {
    visit_bucket(c.bx - r, c.by + d, f);
    visit_bucket(c.bx + r, c.by + d, f);
  }
}

template <class Pred>
Neighbour SpatialIndex::nearest_if(Vec2 x, Pred keep) const {
  const auto& d = points_->domain;
  const auto& s = points_->sites;
  Neighbour best;
  double best2 = std::numeric_limits<double>::infinity();
  const auto consider = [&](std::size_t i) {
    if (!keep(i)) return;
    const double d2 = d.distance2(x, s[i]);
    if (d2 < best2 || (d2 == best2 && i < best.index)) {
      best2 = d2;
      best.index = i;
    }
  };
  best.index = npos;
  const Cursor c = cursor(x);
  const long rmax = max_ring();
  bool done = false;
  for (long r = 0; r <= rmax && !done; ++r) {
    visit_ring(c, r, consider);
    const double reach = static_cast<double>(r) * pitch_ + c.slack;
    done = best.index != npos && best2 < reach * reach;
  }
  if (!done) {
    best.index = npos;
    best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) consider(i);
  }
  if (best.index != npos) best.distance = std::sqrt(best2);
  return best;
}

template <class F>
void SpatialIndex::for_each_within(Vec2 x, double radius, F f) const {
  const auto& d = points_->domain;
  const auto& s = points_->sites;
  const double r2 = radius * radius;
  const auto test = [&](std::size_t i) {
    const double d2 = d.distance2(x, s[i]);
    if (d2 <= r2) f(i, std::sqrt(d2));
  };
  const long rings = static_cast<long>(std::ceil(radius / pitch_)) + 1;
  const long rmax = max_ring();
  if (rmax < 0 || rings > rmax) {
    for (std::size_t i = 0; i < s.size(); ++i) test(i);
    return;
  }
  const Cursor c = cursor(x);
  for (long r = 0; r <= rings; ++r) visit_ring(c, r, test);
}

}  // namespace vperc
