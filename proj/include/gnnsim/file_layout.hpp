#pragma once

#include <cstdint>

#include "gnnsim/common.hpp"
#include "gnnsim/csr_graph.hpp"

namespace gnnsim {

// Byte geometry of a graph as stored on the device: the CSR header, the
// indptr array, then the edge array at the declared id width. Runs never
// need the physical file, only this arithmetic.
struct GraphFileLayout {
  std::uint64_t num_nodes = 0;
  std::uint64_t num_edges = 0;
  std::uint32_t id_width = 4;
  std::uint32_t block_bytes = 4096;

  static GraphFileLayout for_graph(const CsrGraph& g, std::uint32_t block_bytes) {
    return {g.num_nodes(), g.num_edges(), csr_id_width(g.num_nodes()), block_bytes};
  }

  std::uint64_t indptr_offset() const { return kCsrHeaderBytes; }
  std::uint64_t indptr_bytes() const { return (num_nodes + 1) * 8; }
  std::uint64_t edges_offset() const { return indptr_offset() + indptr_bytes(); }
  std::uint64_t file_bytes() const { return edges_offset() + num_edges * id_width; }

  // Byte position of the two indptr entries bounding node v's list.
  std::uint64_t indptr_entry_byte(NodeId v) const { return indptr_offset() + v * 8; }

  struct EdgeListLoc {
    std::uint64_t start_lba = 0;
    std::uint32_t byte_offset = 0;  // within the first block
    std::uint64_t byte_length = 0;
    std::uint64_t edge_count = 0;

    std::uint64_t end_lba_exclusive(std::uint32_t block_bytes) const {
      if (byte_length == 0) return start_lba;
      return start_lba + (byte_offset + byte_length + block_bytes - 1) / block_bytes;
    }
    std::uint64_t blocks(std::uint32_t block_bytes) const {
      return end_lba_exclusive(block_bytes) - start_lba;
    }
  };

  EdgeListLoc locate(std::uint64_t indptr_v, std::uint64_t indptr_v1) const {
    const std::uint64_t start = edges_offset() + indptr_v * id_width;
    EdgeListLoc loc;
    loc.start_lba = start / block_bytes;
    loc.byte_offset = std::uint32_t(start % block_bytes);
    loc.edge_count = indptr_v1 - indptr_v;
    loc.byte_length = loc.edge_count * id_width;
    return loc;
  }

  EdgeListLoc locate(const CsrGraph& g, NodeId v) const {
    return locate(g.indptr[v], g.indptr[v + 1]);
  }
};

}  // namespace gnnsim
