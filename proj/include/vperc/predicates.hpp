#pragma once

#include <cstdint>

#include "vperc/geometry.hpp"

namespace vperc {

/// Twice the signed area of (a,b,c); the sign is exact, the magnitude is
/// only approximate when the floating-point filter fails.
double orient2d(Vec2 a, Vec2 b, Vec2 c);

/// Sign of the in-circle determinant: > 0 when d lies inside the circle
/// through a,b,c (taken counter-clockwise). Exact.
double incircle_raw(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

enum class InCircle { inside, outside, on };

/// Exact in-circle classification; a,b,c may be in either orientation.
InCircle in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Priority of a point for symbolic perturbation; larger keys perturb first.
struct PerturbKey {
  std::int64_t primary = 0;
  std::int64_t secondary = 0;
  friend bool operator<(const PerturbKey& a, const PerturbKey& b) {
    return a.primary != b.primary ? a.primary < b.primary : a.secondary < b.secondary;
  }
};

/// In-circle sign for counter-clockwise a,b,c, never zero: exact ties are
/// broken by lifting each point by an infinitesimal ordered by its key.
/// `tie` is set when the unperturbed determinant vanished.
int incircle_perturbed(Vec2 a, Vec2 b, Vec2 c, Vec2 d, PerturbKey ka, PerturbKey kb,
                       PerturbKey kc, PerturbKey kd, bool* tie = nullptr);

/// Circumcentre of a non-degenerate triangle.
Vec2 circumcentre(Vec2 a, Vec2 b, Vec2 c);

}  // namespace vperc
