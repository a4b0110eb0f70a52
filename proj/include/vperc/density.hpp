#pragma once

#include "vperc/geometry.hpp"
#include "vperc/voronoi.hpp"

namespace vperc {

struct DenseVerdict {
  bool dense = false;
  Vec2 worst{};             ///< point of R[r] farthest from every site
  double max_distance = 0;  ///< its nearest-site distance (infinite with no sites)
};

/// E_dense(R): every point within distance r of `rect` has a site at distance
/// < r. The maximiser of the nearest-site distance over R[r] is found among
/// Voronoi vertices, Voronoi-edge crossings of the boundary of R[r], the
/// boundary's segment/arc junctions, and the farthest arc point from each site.
DenseVerdict check_dense(const VoronoiGraph& graph, const Rect& rect, double r);

/// Torus translations k*s (k integer) moving a box so that it meets `target`;
/// the zero translation alone in the plane.
std::vector<Vec2> translations_meeting(const Domain& domain, const Rect& box, const Rect& target);

}  // namespace vperc
