#pragma once

// Small complexes with hand-checkable Betti numbers.

#include <string>
#include <vector>

#include "tqtda/complex.hpp"

namespace tqtda::corpus {

inline SimplicialComplex hollow_triangle() { return complex_from_maximal(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline SimplicialComplex filled_triangle() { return complex_from_maximal(3, {{0, 1, 2}}); }

inline SimplicialComplex tetrahedron_boundary() {
  return complex_from_maximal(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

/// Two disjoint edges: b_0 = 2.
inline SimplicialComplex two_components() { return complex_from_maximal(4, {{0, 1}, {2, 3}}); }

/// Boundary of the octahedron on poles {0, 5} and equator 1-2-3-4: b_2 = 1.
inline SimplicialComplex octahedron_boundary() {
  return complex_from_maximal(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 1, 4},
                                  {1, 2, 5}, {2, 3, 5}, {3, 4, 5}, {1, 4, 5}});
}

struct Entry {
  std::string name;
  SimplicialComplex complex;
  std::vector<std::size_t> betti;  // b_0, b_1, ... up to max_dim
};

inline std::vector<Entry> all() {
  return {
      {"hollow_triangle", hollow_triangle(), {1, 1}},
      {"filled_triangle", filled_triangle(), {1, 0, 0}},
      {"tetrahedron_boundary", tetrahedron_boundary(), {1, 0, 1}},
      {"two_components", two_components(), {2, 0}},
      {"octahedron_boundary", octahedron_boundary(), {1, 0, 1}},
  };
}

}  // namespace tqtda::corpus
