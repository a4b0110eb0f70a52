#pragma once

#include <optional>
#include <vector>

#include "vperc/colouring.hpp"

namespace vperc {

/// Components of the black-induced adjacency subgraph; white sites have label -1.
struct Partition {
  std::vector<int> label;
  std::vector<std::vector<std::size_t>> members;
};

Partition black_components(const ColouredConfiguration& config);

struct ClusterStats {
  int id = -1;
  std::size_t cells = 0;
  double area = 0.0;
  double diameter = 0.0;  ///< infinite when the cluster wraps the torus
  bool wraps = false;
};

ClusterStats cluster_stats(const ColouredConfiguration& config, int id);

/// Black cluster whose closure contains x; empty when every cell at x is white.
std::optional<ClusterStats> origin_cluster(const ColouredConfiguration& config, Vec2 x);

/// Largest distance from x reached by the black cluster at x (measured in the
/// universal cover on the torus, infinite when the cluster wraps); stops early
/// once `stop_at` is exceeded. Zero when x is white.
double cluster_reach(const ColouredConfiguration& config, Vec2 x, double stop_at);

}  // namespace vperc
