#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vperc/voronoi.hpp"

namespace vperc {

enum class Colour : std::uint8_t { white = 0, black = 1 };

inline const char* to_string(Colour c) { return c == Colour::black ? "black" : "white"; }

struct Partition;

/// A tessellated sample with one uniform u per site; a site is black iff u < p.
/// Recolouring at another p reuses the uniforms, so black sets are nested in p.
class ColouredConfiguration {
 public:
  std::shared_ptr<const VoronoiGraph> graph;
  std::shared_ptr<const std::vector<double>> uniforms;
  std::vector<std::uint8_t> black;
  double p = 0.0;
  std::uint64_t colour_seed = 0;

  const PointSet& points() const { return *graph->points; }
  std::size_t size() const { return black.size(); }
  bool is_black(std::size_t i) const { return black[i] != 0; }
  Colour colour(std::size_t i) const { return black[i] ? Colour::black : Colour::white; }
  bool has(std::size_t i, Colour c) const { return colour(i) == c; }

  ColouredConfiguration recoloured(double p) const;
  /// Black components, computed on first use and shared by copies.
  const Partition& components() const;

 private:
  struct Cache;
  mutable std::shared_ptr<Cache> cache_;
  friend ColouredConfiguration make_configuration(std::shared_ptr<const VoronoiGraph>,
                                                  std::shared_ptr<const std::vector<double>>, double,
                                                  std::uint64_t);
};

ColouredConfiguration make_configuration(std::shared_ptr<const VoronoiGraph> graph,
                                         std::shared_ptr<const std::vector<double>> uniforms, double p,
                                         std::uint64_t seed);

/// i.i.d. Bernoulli(p) colours from per-site uniforms drawn with `seed`.
ColouredConfiguration colour_sites(std::shared_ptr<const VoronoiGraph> graph, double p, std::uint64_t seed);
ColouredConfiguration colour_sites(const VoronoiGraph& graph, double p, std::uint64_t seed);

/// Fixed colours (for constructed examples); uniforms are 0 for black and
/// just below 1 for white, with p = 1/2.
ColouredConfiguration with_colours(std::shared_ptr<const VoronoiGraph> graph, const std::vector<Colour>& colours);

}  // namespace vperc
