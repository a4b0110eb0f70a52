#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vperc/colouring.hpp"
#include "vperc/polygon.hpp"

namespace vperc {

enum class Orientation { horizontal, vertical };

inline const char* to_string(Orientation o) { return o == Orientation::horizontal ? "horizontal" : "vertical"; }

/// Cell images meeting a region (a closed rectangle, optionally minus an open
/// rectangular hole) and the shared Voronoi segments that meet it. Colour
/// independent, so one instance serves every colouring of the same sample.
class CrossingGeometry {
 public:
  struct Node {
    std::size_t site;
    std::array<int, 2> shift;  ///< torus image, in units of the side
    Polygon polygon;           ///< cell translated to the image
    std::array<bool, 4> meets; ///< closed sides left, right, bottom, top of the outer rectangle
    bool meets_hole = false;   ///< touches the closed hole rectangle
  };
  struct Link {
    std::size_t u, v;
    Segment piece;  ///< part of the shared segment inside the region
  };

  CrossingGeometry(const VoronoiGraph& graph, const Rect& outer, std::optional<Rect> hole = std::nullopt);

  const VoronoiGraph& graph() const { return *graph_; }
  const Rect& outer() const { return outer_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  /// Links incident to node i.
  const std::vector<std::size_t>& incident(std::size_t i) const { return incident_[i]; }

  /// Nodes whose polygon meets a closed rectangle.
  std::vector<char> meeting(const Rect& r) const;
  std::vector<char> meeting_side(Side side) const;

  /// Breadth-first path of nodes with `keep(site)` from a source node to a
  /// target node; empty when none exists.
  template <class Keep>
  std::vector<std::size_t> path(const std::vector<char>& sources, const std::vector<char>& targets,
                                Keep keep) const;

  /// Smallest t such that sources and targets are joined by nodes whose
  /// values are all <= t (infinity when not joined at all).
  double minimax(const std::vector<double>& value_per_site, const std::vector<char>& sources,
                 const std::vector<char>& targets) const;

 private:
  const VoronoiGraph* graph_;
  Rect outer_;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<std::size_t>> incident_;
};

struct CrossingWitness {
  bool verdict = false;
  std::vector<std::size_t> path;             ///< site indices C1..Cn
  std::vector<std::array<int, 2>> shifts;    ///< torus image of each path cell
  Vec2 entry{}, exit{};
  std::vector<Vec2> polyline;
  bool degenerate = false;
};

/// Checks the rectangle against the domain: on the torus both sides at most
/// 0.9 s; in the plane inside core[guard - 2r]. Throws rect-outside-domain.
void require_admissible(const Domain& d, const Rect& rect);

/// Plane mode: throws indeterminate unless E_dense(rect) holds.
void require_determined(const VoronoiGraph& g, const Rect& rect);

CrossingWitness crossing(const ColouredConfiguration& config, const Rect& rect, Orientation orientation,
                         Colour colour);

/// Crossing from a prepared geometry; no admissibility checks.
CrossingWitness crossing(const ColouredConfiguration& config, const CrossingGeometry& geo,
                         Orientation orientation, Colour colour);

/// Threshold view of a monotone colouring: a black crossing exists at p iff
/// the returned value is < p; a white crossing exists at p iff it is >= p
/// (for white the value is the maximin uniform).
double crossing_threshold(const CrossingGeometry& geo, const std::vector<double>& uniforms,
                          Orientation orientation, Colour colour);

enum class DualityOutcome { black_h, white_v, degenerate };

inline const char* to_string(DualityOutcome d) {
  return d == DualityOutcome::black_h ? "black_h" : d == DualityOutcome::white_v ? "white_v" : "degenerate";
}

DualityOutcome duality_check(const ColouredConfiguration& config, const Rect& square);

/// Shortest black crossing length along polylines entry -> z1 -> M12 -> z2 ->
/// ... -> exit, where z is the site (or the centroid of cell and rectangle when
/// the site lies outside) and M the midpoint of the clipped shared segment. An
/// upper bound for the true shortest black path; infinity without a crossing.
double crossing_length(const ColouredConfiguration& config, const Rect& rect);

/// Same, over a prepared geometry, with the per-node anchor points exposed
/// for independent checking.
double crossing_length(const ColouredConfiguration& config, const CrossingGeometry& geo);
Vec2 length_anchor(const CrossingGeometry& geo, std::size_t node);
Vec2 length_portal(const CrossingGeometry& geo, std::size_t node, Side side);

}  // namespace vperc

#include "vperc/crossing_impl.hpp"
