#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gnnsim/common.hpp"
#include "gnnsim/lru_cache.hpp"
#include "gnnsim/virtual_clock.hpp"

namespace gnnsim {

struct SsdConfig {
  std::uint32_t logical_block_bytes = 4096;
  std::uint32_t flash_page_bytes = 16384;
  std::uint32_t channels = 8;
  double flash_read_us = 60.0;
  double dma_gbps = 3.2;                 // SSD <-> host link, 10^9 bytes/s
  double nvme_cmd_overhead_us = 10.0;    // per-command submit/complete cost
  std::uint64_t page_buffer_bytes = 256ull << 20;  // SSD-internal DRAM cache
  std::uint32_t firmware_cores = 2;
  double core_sample_rate = 1e7;         // sampled ids per second per stream
  double poll_interval_us = 5.0;

  void validate() const;
  std::uint32_t blocks_per_page() const { return flash_page_bytes / logical_block_bytes; }
  double link_bytes_per_us() const { return dma_gbps * 1000.0; }
};

struct FlashAddress {
  std::uint32_t channel = 0;
  std::uint64_t page = 0;
  auto operator<=>(const FlashAddress&) const = default;
};

// Virtual-time SSD: deterministic FTL striping, per-channel FIFO flash
// reads, an internal DRAM page buffer, and the host DMA link. One instance
// is shared by every access path in a run, so their requests contend.
class SsdDevice {
 public:
  SsdDevice(const SsdConfig& cfg, std::uint64_t capacity_bytes);

  const SsdConfig& config() const { return cfg_; }
  std::uint64_t capacity_blocks() const { return capacity_blocks_; }

  // Static striping: consecutive flash pages rotate across channels.
  FlashAddress ftl_translate(std::uint64_t lba) const;

  struct ReadResult {
    SimTime done = 0;             // completion of the last page
    std::uint32_t pages = 0;      // distinct flash pages touched
    std::uint32_t page_misses = 0;  // pages that required a flash read
  };

  // Reads the given logical blocks starting at time t. Distinct flash pages
  // are resolved in first-touch order; buffered pages cost no flash time,
  // misses queue FIFO on their channel for flash_read_us and then enter the
  // page buffer. The result excludes any host DMA.
  ReadResult read_blocks(SimTime t, std::span<const std::uint64_t> lbas);

  // Same, for a byte range (used by on-device readers).
  ReadResult read_byte_range(SimTime t, std::uint64_t start_byte, std::uint64_t length);

  ThroughputLink& host_link() { return host_link_; }  // AToB = SSD to host

  std::uint64_t flash_bytes_read() const { return flash_bytes_read_; }
  std::size_t buffered_pages() const { return page_buffer_.size(); }
  std::size_t page_buffer_capacity() const { return page_buffer_.capacity(); }

 private:
  void read_page(SimTime t, std::uint64_t page_seq, ReadResult& r);

  SsdConfig cfg_;
  std::uint64_t capacity_blocks_;
  std::vector<BusyResource> channels_;
  LruCache<std::uint64_t> page_buffer_;  // keyed by page sequence number
  ThroughputLink host_link_;
  std::uint64_t flash_bytes_read_ = 0;
};

}  // namespace gnnsim
