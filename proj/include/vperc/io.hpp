#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vperc/geometry.hpp"
#include "vperc/voronoi.hpp"

namespace vperc {

/// Shortest round-trip decimal form ('.' separator, locale independent).
std::string format_double(double v);

nlohmann::json domain_to_json(const Domain& d);
Domain domain_from_json(const nlohmann::json& j);

/// `index,x,y` rows.
void write_points_csv(std::ostream& out, const PointSet& ps);
/// Reads `index,x,y` rows back into a point set on the given domain.
PointSet read_points_csv(std::istream& in, const Domain& domain, double intensity, std::uint64_t seed);
nlohmann::json points_header(const PointSet& ps);

/// `site_a,site_b,mx,my,o1x,o1y,o2x,o2y` rows, one per Voronoi edge.
void write_adjacency_csv(std::ostream& out, const VoronoiGraph& g);

/// Writes `content` to a temporary sibling, then renames it over `path`.
void atomic_write(const std::string& path, std::string_view content);

}  // namespace vperc
