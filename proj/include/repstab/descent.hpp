#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "repstab/word.hpp"

namespace repstab {

// Minimizes a convex integer-valued function over the vertices of the Cayley
// tree of F_k. Displacement functions x |-> d(x, w x) and finite maxima/sums
// of them are convex along tree geodesics, so a steepest-descent walk with a
// plateau search (level sets are connected) reaches the global minimum.
//
// Returns the minimum value and all minimizing vertices found (the full
// minimizing set when it fits under plateau_cap). Throws CapExceeded when a
// plateau search would exceed plateau_cap vertices.
struct TreeMinimum {
  std::int64_t value = 0;
  std::vector<ReducedWord> minimizers;  // sorted length-lexicographically
};

TreeMinimum minimize_convex_on_tree(const std::function<std::int64_t(const ReducedWord&)>& f,
                                    const ReducedWord& start, std::size_t plateau_cap = 100000);

}  // namespace repstab
