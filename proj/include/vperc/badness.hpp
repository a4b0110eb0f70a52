#pragma once

#include <array>
#include <optional>
#include <vector>

#include "json.hpp"
#include "vperc/voronoi.hpp"

namespace vperc {

enum class BadnessMode { fast, exhaustive };

struct BadQuadruple {
  std::array<std::size_t, 4> sites{};  ///< ascending
  Vec2 centre{};
  double radius = 0.0;
  /// min(r + delta - farthest member distance, r_max - r): how far the
  /// witness sits inside the defining inequalities.
  double slack = 0.0;
};

struct BadnessReport {
  double delta = 0.0;
  double r_max = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> close_pairs;
  std::vector<BadQuadruple> quadruples;  ///< one witness per 4-set, the one with the largest slack
  std::vector<std::vector<std::size_t>> components;  ///< hypergraph components over bad sites
  std::vector<std::uint8_t> good;
  std::size_t candidates = 0;  ///< centres examined

  std::size_t bad_count() const;
  std::size_t largest_component() const;
};

struct BadnessOptions {
  BadnessMode mode = BadnessMode::fast;
  double r_max = 0.0;  ///< 0: 2 sqrt(log s) of the domain scale
  double pitch = 0.0;  ///< 0: delta/4 along edges (fast) or delta/10 grid (exhaustive)
};

/// delta-close pairs (distance <= delta) and delta-bad quadruples (a centre x
/// with empty open disc of radius r < r_max and all four within r + delta).
BadnessReport detect_badness(const VoronoiGraph& graph, double delta, const BadnessOptions& opt = {});

/// Exact re-check of a witness against every site.
bool verify_quadruple(const VoronoiGraph& graph, const BadQuadruple& q, double delta, double r_max);

/// Every 4-set that has a witness on the given list of centres, with the
/// best slack per set.
std::vector<BadQuadruple> quadruples_at(const VoronoiGraph& graph, const std::vector<Vec2>& centres, double delta,
                                        double r_max);

struct WeakBadness {
  bool bad = false;
  Vec2 centre{};
  double spread = 0.0;  ///< max - min distance from the centre to the four points
  double nearest = 0.0;  ///< min distance from the centre
};

/// Is there an x with max_i |x - x_i| - min_i |x - x_i| <= delta and
/// min_i |x - x_i| <= r_max + delta? Coarse grid plus triple circumcentres,
/// refined by a compass search, and verified at the returned centre.
WeakBadness is_weakly_bad(const std::array<Vec2, 4>& points, double delta, double r_max);

void to_json(nlohmann::json& j, const BadnessReport& r);

}  // namespace vperc
