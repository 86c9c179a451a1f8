#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "gnnsim/common.hpp"

namespace gnnsim {

// Directed multigraph in CSR form. indptr has num_nodes()+1 entries,
// monotone non-decreasing, with indptr.front() == 0 and
// indptr.back() == indices.size(). Duplicate edges are permitted and node
// IDs are 64-bit in memory regardless of the on-disk width.
struct CsrGraph {
  std::vector<std::uint64_t> indptr{0};
  std::vector<NodeId> indices;

  std::uint64_t num_nodes() const { return indptr.size() - 1; }
  std::uint64_t num_edges() const { return indices.size(); }

  std::uint64_t degree(NodeId v) const {
    check_node(v);
    return indptr[v + 1] - indptr[v];
  }

  // Neighbors of v in storage order (zero-copy view).
  std::span<const NodeId> neighbors(NodeId v) const {
    check_node(v);
    return std::span<const NodeId>(indices).subspan(indptr[v], indptr[v + 1] - indptr[v]);
  }

  // Full structural check; throws FormatError on the first violation.
  void validate() const;

  // Builds a CSR graph from an (unsorted) edge list. Duplicates are kept.
  static CsrGraph from_edges(std::uint64_t num_nodes,
                             std::span<const std::pair<NodeId, NodeId>> edges);

 private:
  void check_node(NodeId v) const {
    if (v + 1 >= indptr.size())
      throw std::out_of_range("node id " + std::to_string(v) + " out of range");
  }
};

// On-disk CSR container. 32-byte header: magic "CSRGRAF1", u64 node count,
// u64 edge count, u8 id width (4 or 8), 7 zero bytes; then indptr as u64s
// and the edge array at the declared width. All fields little-endian.
inline constexpr char kCsrMagic[8] = {'C', 'S', 'R', 'G', 'R', 'A', 'F', '1'};
inline constexpr std::uint64_t kCsrHeaderBytes = 32;

// Width save_csr picks: 4-byte ids whenever every id fits.
std::uint8_t csr_id_width(std::uint64_t num_nodes);

void save_csr(const CsrGraph& g, const std::filesystem::path& path);
CsrGraph load_csr(const std::filesystem::path& path);

// In-memory codec used by both the file functions and tests.
std::vector<std::byte> encode_csr(const CsrGraph& g);
CsrGraph decode_csr(std::span<const std::byte> bytes);

struct DegreeHistogram {
  std::map<std::uint64_t, std::uint64_t> buckets;  // degree -> node count
  std::uint64_t total_nodes = 0;
  std::uint64_t total_edges = 0;

  // Exact average as a ratio; avg() is the floating-point convenience view.
  double avg() const { return total_nodes == 0 ? 0.0 : double(total_edges) / double(total_nodes); }
};

DegreeHistogram degree_distribution(const CsrGraph& g);

}  // namespace gnnsim
