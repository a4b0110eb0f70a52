#pragma once

#include <cstdint>
#include <vector>

#include "vperc/colouring.hpp"

namespace vperc {

/// Natural coupling of two colourings p1 < p2 of one Poisson sample: the
/// points are shared (so z and its partner coincide), and a site is black at
/// p1 only if it is black at p2. Squares of side delta1 tile the torus.
struct CoupledSample {
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::size_t squares = 0;             ///< per side
  std::vector<std::size_t> square_of;  ///< row-major square index per site
  ColouredConfiguration first;         ///< colouring at p1
  ColouredConfiguration second;        ///< colouring at p2
  /// Components of the potentially-bad graph, over site indices.
  std::vector<std::vector<std::size_t>> potentially_bad;

  std::size_t size() const { return square_of.size(); }
  /// Partner of site i in the second sample (the identity here).
  std::size_t partner(std::size_t i) const { return i; }
};

/// delta2 <= 0 selects the default s^(-1/100).
CoupledSample coupled_sample(const Domain& domain, double p1, double p2, double delta1, std::uint64_t seed,
                             double delta2 = 0.0);

struct GoodPathStats {
  std::size_t pairs = 0;      ///< adjacent black pairs of the first colouring
  std::size_t successes = 0;  ///< joined in the second by black delta-good sites
  std::size_t endpoint_bad = 0;  ///< pairs failing because an endpoint is delta-bad
  double fraction = 0.0;
  std::size_t hops_max = 0;
  std::size_t polylines = 0;     ///< hop polylines certified
  std::size_t violations = 0;    ///< samples under delta^6 - pitch
  double min_certified = 0.0;
};

struct GoodPathOptions {
  /// Certify at most this many successful pairs (0: none, -1: all).
  long certify = -1;
};

/// For each adjacent black pair of the first colouring, look for a path of
/// black delta-good sites of the second colouring joining the pair, with at
/// most ceil(8 log s) hops and staying within (log s)^2 of the first site.
/// Successful paths are certified delta^6-robustly black along their
/// site-midpoint-site polylines at pitch delta^6/4.
GoodPathStats good_path_check(const CoupledSample& coupled, double delta, const GoodPathOptions& opt = {});

}  // namespace vperc
