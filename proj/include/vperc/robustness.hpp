#pragma once

#include <cstdint>
#include <vector>

#include "vperc/colouring.hpp"

namespace vperc {

/// Nearest white distance minus nearest black distance at x; +inf without
/// white sites, -inf without black ones. x is delta-robustly black iff the
/// margin is at least delta.
double robustness_margin(const ColouredConfiguration& config, Vec2 x);

struct PolylineCertificate {
  std::size_t samples = 0;
  std::size_t below = 0;      ///< samples whose margin is under `level`
  double min_sampled = 0.0;   ///< smallest sampled margin, capped at `cap`
  /// Lower bound on the margin at every point of the polyline: over each gap
  /// of length L between samples with margins m1, m2 the 2-Lipschitz margin
  /// is at least (m1 + m2)/2 - L.
  double certified = 0.0;
  double pitch = 0.0;
};

/// Samples the margin along a polyline, both ends of every segment included.
/// Uniform mode steps by at most `pitch`. Adaptive mode steps by
/// max(pitch, (m - level)/2) from a sample of margin m, which still bounds
/// the margin by `level` wherever the step exceeds the pitch, so the
/// certified value is at least min(level, smallest sample) - pitch either way.
/// Margins above `cap` (default level + 1) are only resolved up to the cap,
/// which keeps the candidate sites local.
PolylineCertificate certify_polyline(const ColouredConfiguration& config, const std::vector<Vec2>& polyline,
                                     double level, double pitch, double cap = 0.0, bool adaptive = true);

/// z1 - M - z2 for edge e, in the frame of site `from`; M is the midpoint of
/// the shared Voronoi segment.
std::vector<Vec2> pair_polyline(const VoronoiGraph& g, std::size_t e, std::size_t from);

struct GoodPairCheck {
  std::size_t pairs = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;  ///< samples with margin under delta^6 - pitch
  double min_sampled = 0.0;
  double pitch = 0.0;
};

/// Samples every black adjacent pair with both ends flagged good along its
/// z1 - M - z2 polyline at pitch delta^6/4.
GoodPairCheck check_good_pairs(const ColouredConfiguration& config, const std::vector<std::uint8_t>& good,
                               double delta);

}  // namespace vperc
