#include "gnnsim/kronecker.hpp"

#include <algorithm>
#include <set>

namespace gnnsim {

void KroneckerBase::validate() const {
  if (dim == 0) throw ConfigError("kronecker base dim must be >= 1");
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [r, c] : cells) {
    if (r >= dim || c >= dim) throw ConfigError("kronecker base cell out of range");
    if (!seen.insert({r, c}).second) throw ConfigError("duplicate kronecker base cell");
  }
}

CsrGraph kronecker_expand(const CsrGraph& seed, const KroneckerBase& base) {
  base.validate();

  // Prove every rep's counts fit before touching memory, so a doomed
  // expansion fails fast instead of mid-build.
  {
    std::uint64_t nodes = seed.num_nodes(), edges = seed.num_edges();
    for (std::uint32_t rep = 0; rep < base.reps; ++rep) {
      if (__builtin_mul_overflow(nodes, std::uint64_t(base.dim), &nodes) ||
          __builtin_mul_overflow(edges, std::uint64_t(base.cells.size()), &edges))
        throw CapacityError("kronecker expansion overflows node/edge counters");
      if (edges > (1ull << 36))
        throw CapacityError("kronecker expansion exceeds build limit of 2^36 edges");
    }
  }

  // Per-row adjacency of the base, column-sorted for deterministic output.
  std::vector<std::vector<std::uint32_t>> base_adj(base.dim);
  for (const auto& [r, c] : base.cells) base_adj[r].push_back(c);
  for (auto& row : base_adj) std::sort(row.begin(), row.end());

  CsrGraph g = seed;
  const std::uint64_t m = base.dim;
  const std::uint64_t eb = base.cells.size();
  for (std::uint32_t rep = 0; rep < base.reps; ++rep) {
    const std::uint64_t next_nodes = g.num_nodes() * m;
    const std::uint64_t next_edges = g.num_edges() * eb;
    CsrGraph next;
    next.indptr.resize(next_nodes + 1);
    next.indptr[0] = 0;
    next.indices.resize(next_edges);
    std::uint64_t pos = 0;
    for (std::uint64_t u = 0; u < g.num_nodes(); ++u) {
      const auto nbrs = g.neighbors(u);
      for (std::uint64_t j = 0; j < m; ++j) {
        for (NodeId w : nbrs) {
          for (std::uint32_t l : base_adj[j]) next.indices[pos++] = w * m + l;
        }
        next.indptr[u * m + j + 1] = pos;
      }
    }
    g = std::move(next);
  }
  return g;
}

}  // namespace gnnsim
