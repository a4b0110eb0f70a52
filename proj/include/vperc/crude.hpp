#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vperc/colouring.hpp"

namespace vperc {

/// Per-square states of a torus cut into (s/delta)^2 squares: -1 when the
/// square holds a white site, 0 when empty, +1 when it holds only black sites.
struct CrudeGrid {
  double delta = 0.0;
  double side = 0.0;
  std::size_t n = 0;  ///< squares per side
  std::vector<std::int8_t> states;  ///< row-major, row j covers y in [j delta, (j+1) delta)
  std::size_t bad = 0, neutral = 0, good = 0;
};

/// Number of squares per side when s/delta is an integer (to a relative
/// 1e-9); throws invalid-parameter otherwise.
std::size_t squares_per_side(double side, double delta);

CrudeGrid crude_grid(const ColouredConfiguration& config, double delta);

/// Expected (bad, neutral, good) probabilities of one square with gamma =
/// intensity * delta^2 and black probability p.
std::array<double, 3> crude_probabilities(double gamma, double p);

/// Run-length text: a JSON header line {"s":..,"delta":..,"seed":..,"n":..}
/// followed by space separated `state x count` tokens such as `-1x3 0x250 1x7`.
std::string crude_to_text(const CrudeGrid& grid, std::uint64_t seed);
CrudeGrid crude_from_text(const std::string& text);

/// A fresh sample compatible with the crude grid: each bad square gets one
/// white site plus Poisson(gamma) extra sites coloured black with
/// probability p; each good square one black site plus Poisson(gamma) extra
/// black sites; neutral squares stay empty.
PointSet crude_resample(const CrudeGrid& grid, double p, double intensity, std::uint64_t seed,
                        std::vector<Colour>& colours);

struct StabilityReport {
  double certified_margin = 0.0;  ///< robustness of the original crossing polyline
  std::size_t resamples = 0;
  std::size_t crossed = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  ///< resamples too sparse to tessellate
};

/// Requires a black horizontal crossing of rect whose polyline is
/// 4 delta-robustly black (precondition-failed otherwise), then checks that
/// every compatible resample still has a black horizontal crossing.
StabilityReport crude_stability_test(const ColouredConfiguration& config, double delta, const Rect& rect,
                                     std::size_t resamples, std::uint64_t seed);

}  // namespace vperc
