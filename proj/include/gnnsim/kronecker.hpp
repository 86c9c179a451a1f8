#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gnnsim/csr_graph.hpp"

namespace gnnsim {

// Small dense 0/1 pattern used to grow a seed graph by repeated Kronecker
// products. No duplicate cells; dim >= 1.
struct KroneckerBase {
  std::uint32_t dim = 2;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;  // (row, col)
  std::uint32_t reps = 1;

  void validate() const;
};

// Applies `reps` Kronecker products of the seed's adjacency structure with
// the base pattern. Node (u, j) maps to id u * dim + j per application, so
// node count multiplies by dim and edge count by cells.size() each rep.
// Throws CapacityError when the resulting counts overflow.
CsrGraph kronecker_expand(const CsrGraph& seed, const KroneckerBase& base);

}  // namespace gnnsim
