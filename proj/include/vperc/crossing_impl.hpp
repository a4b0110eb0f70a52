#pragma once

#include <deque>

namespace vperc {

template <class Keep>
std::vector<std::size_t> CrossingGeometry::path(const std::vector<char>& sources,
                                                const std::vector<char>& targets, Keep keep) const {
  const std::size_t n = nodes_.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, none);
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (sources[i] && keep(nodes_[i].site)) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (targets[v]) {
      std::vector<std::size_t> out;
      for (std::size_t u = v; u != none; u = parent[u]) out.push_back(u);
      return {out.rbegin(), out.rend()};
    }
    for (const std::size_t l : incident_[v]) {
      const std::size_t w = links_[l].u == v ? links_[l].v : links_[l].u;
      if (seen[w] || !keep(nodes_[w].site)) continue;
      seen[w] = 1;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  return {};
}

}  // namespace vperc
