#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vperc/geometry.hpp"

namespace vperc {

using Polygon = std::vector<Vec2>;
using Segment = std::pair<Vec2, Vec2>;

double signed_area(const Polygon& poly);
Vec2 centroid(const Polygon& poly);
Rect bounding_box(const Polygon& poly);
Polygon translated(const Polygon& poly, Vec2 t);
Polygon rect_polygon(const Rect& r);

/// Sutherland-Hodgman clip of a convex polygon to {x : dot(n, x) <= c}.
Polygon clip_halfplane(const Polygon& poly, Vec2 n, double c);
Polygon clip_rect(const Polygon& poly, const Rect& r);

/// Closed-set intersection of a convex counter-clockwise polygon and a rectangle.
bool intersects(const Polygon& convex, const Rect& r);
/// Portion of segment ab inside the closed rectangle, if any (Liang-Barsky).
std::optional<Segment> clip_segment(Vec2 a, Vec2 b, const Rect& r);
/// Portion of segment ab inside a closed convex counter-clockwise polygon.
std::optional<Segment> clip_segment(Vec2 a, Vec2 b, const Polygon& convex);
/// Whether the convex polygon lies inside the open rectangle.
bool inside_open(const Polygon& convex, const Rect& r);

/// Closed side segments of a rectangle.
enum class Side { left, right, bottom, top };
Segment side_segment(const Rect& r, Side side);

}  // namespace vperc
