#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vperc/geometry.hpp"
#include "vperc/predicates.hpp"

namespace vperc {

/// Delaunay triangulation with ghost triangles: vertex -1 is the point at
/// infinity, so every finite edge has a triangle on both sides.
/// Triangle vertices are counter-clockwise; n[k] is the neighbour across the
/// edge opposite v[k]. In a ghost triangle with v[k] = -1 the finite edge runs
/// v[k+1] -> v[k+2] with the outside of the hull on its left.
struct Triangulation {
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;
    bool ghost() const { return v[0] < 0 || v[1] < 0 || v[2] < 0; }
    int index_of(int vertex) const { return v[0] == vertex ? 0 : v[1] == vertex ? 1 : v[2] == vertex ? 2 : -1; }
  };

  std::vector<Vec2> points;
  std::vector<Tri> tris;
  std::vector<int> vertex_tri;  ///< one incident triangle per vertex
  std::size_t ties = 0;         ///< exact co-circular tests resolved symbolically

  /// Triangles around `vertex`, counter-clockwise.
  std::vector<int> fan(int vertex) const;
};

/// Throws degenerate-input for fewer than three points, duplicates, or an
/// all-collinear input. `keys` orders symbolic perturbation (one per point).
Triangulation delaunay(std::vector<Vec2> points, const std::vector<PerturbKey>& keys);

}  // namespace vperc
