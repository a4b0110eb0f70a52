#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "vperc/geometry.hpp"
#include "vperc/polygon.hpp"
#include "vperc/spatial_index.hpp"

namespace vperc {

/// Shared Voronoi segment between the cell of site `a` and the cell of the
/// image `sites[b] + offset` of site `b`. Geometry is in the frame of `a`.
struct VoronoiEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  Vec2 offset{};
  int kx = 0, ky = 0;  ///< offset in units of the torus side
  Vec2 o1{}, o2{};
  Vec2 m{};           ///< midpoint of o1 o2
  double r1 = 0.0;    ///< empty-circle radius at o1
  double r2 = 0.0;    ///< empty-circle radius at o2 (infinite for a ray)
  bool unbounded = false;
};

struct VoronoiCell {
  Polygon polygon;  ///< counter-clockwise, in the site's own frame
  double area = 0.0;
  bool determined = true;  ///< plane mode: unaffected by anything outside the window
  std::vector<std::size_t> edges;
};

/// Delaunay triangle; vertex k is the image sites[site[k]] + offset[k].
struct DelaunayTriangle {
  std::array<std::size_t, 3> site{};
  std::array<Vec2, 3> offset{};
  Vec2 centre{};
  double radius = 0.0;
};

class VoronoiGraph {
 public:
  std::shared_ptr<const PointSet> points;
  std::shared_ptr<const SpatialIndex> index;
  std::vector<VoronoiCell> cells;
  std::vector<VoronoiEdge> edges;
  std::vector<DelaunayTriangle> triangles;
  std::size_t degeneracies = 0;  ///< co-circular ties broken symbolically
  double max_empty_radius = 0.0;
  double margin = 0.0;  ///< torus replication band actually used

  bool degenerate() const { return degeneracies > 0; }
  std::size_t size() const { return cells.size(); }
  const Domain& domain() const { return points->domain; }
  Vec2 site(std::size_t i) const { return points->sites[i]; }

  /// Neighbour across edge e seen from site `from`, and the translation
  /// taking the neighbour's canonical position to its adjacent image.
  std::pair<std::size_t, Vec2> across(std::size_t e, std::size_t from) const;
  /// Integer torus shift of the neighbour across edge e seen from `from`.
  std::array<int, 2> shift_across(std::size_t e, std::size_t from) const {
    const VoronoiEdge& ed = edges[e];
    return from == ed.a ? std::array<int, 2>{ed.kx, ed.ky} : std::array<int, 2>{-ed.kx, -ed.ky};
  }
  /// Edge geometry expressed in the frame of site `from`.
  Segment segment_from(std::size_t e, std::size_t from) const;
};

/// Voronoi diagram and its Delaunay dual. On the torus only a band of images
/// around the square is replicated, widened until every triangle touching a
/// canonical site is certified. Throws too-sparse-for-torus when some empty
/// circle has radius >= s/3, degenerate-input for collinear input.
VoronoiGraph build_tessellation(const PointSet& points);
VoronoiGraph build_tessellation(std::shared_ptr<const PointSet> points);

/// Sites whose closed cell contains x: the nearest site plus any tied with it
/// to within a relative 1e-9.
std::vector<std::size_t> locate_cell(const VoronoiGraph& graph, Vec2 x);

/// Minimum and maximum site counts over `probes` uniformly placed discs.
std::pair<std::size_t, std::size_t> disc_statistics(const PointSet& points, double radius,
                                                    std::size_t probes, std::uint64_t seed);

}  // namespace vperc
