#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gnnsim/common.hpp"
#include "gnnsim/csr_graph.hpp"
#include "gnnsim/file_layout.hpp"
#include "gnnsim/sampling.hpp"

namespace gnnsim {

// One edge-list descriptor shipped to the device: where the target's
// neighbor list lives and how many entries it has. Packed to 26 bytes.
struct NsConfigRecord {
  std::uint64_t node_id = 0;
  std::uint64_t start_lba = 0;
  std::uint16_t byte_offset = 0;
  std::uint64_t edge_count = 0;

  bool operator==(const NsConfigRecord&) const = default;
};

// Sampling descriptor blob carried by a subgraph-generation command.
// Wire layout (little-endian):
//   32-byte header: magic "NSCF", u16 version (=1), u16 layer count,
//                   u32 target count, u64 rng seed base, 12 zero bytes
//   u16 fanout per layer, records following immediately
// A two-layer blob for 1024 targets is 32 + 4 + 1024*26 = 26660 bytes.
struct NsConfigBlob {
  std::uint16_t version = 1;
  std::vector<std::uint16_t> fanouts;
  std::uint64_t rng_seed_base = 0;
  std::vector<NsConfigRecord> records;

  bool operator==(const NsConfigBlob&) const = default;

  std::uint64_t encoded_size() const { return 32 + 2 * fanouts.size() + 26 * records.size(); }
};

inline constexpr char kNsConfigMagic[4] = {'N', 'S', 'C', 'F'};
inline constexpr std::size_t kNsConfigRecordBytes = 26;

// Throws ConfigError when the blob has no targets or no layers.
std::vector<std::byte> encode_nsconfig(const NsConfigBlob& blob);

// Throws FormatError on malformed input (bad magic, version, truncation,
// trailing bytes).
NsConfigBlob decode_nsconfig(std::span<const std::byte> bytes);

// Builds the blob for a set of targets using host-resident indptr data.
NsConfigBlob make_nsconfig(const CsrGraph& g, const GraphFileLayout& layout,
                           std::span<const NodeId> targets, std::span<const std::uint32_t> fanouts,
                           std::uint64_t rng_seed_base);

}  // namespace gnnsim
