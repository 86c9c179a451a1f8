#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gnnsim/csr_graph.hpp"
#include "gnnsim/file_layout.hpp"
#include "gnnsim/lru_cache.hpp"
#include "gnnsim/nsconfig.hpp"
#include "gnnsim/ssd_model.hpp"

namespace gnnsim {

enum class AccessPath { InMemory, MmapPageCache, DirectIo, Isp };

std::string to_string(AccessPath p);
AccessPath parse_access_path(const std::string& s);  // throws ConfigError

struct HostConfig {
  double dram_read_us_per_block = 0.05;  // per logical block read from DRAM
  std::uint64_t page_cache_pages = 0;    // 0 = sized to 10% of the graph file
  double page_fault_us = 30.0;
  std::uint32_t scratchpad_blocks = 1024;  // per worker, direct-I/O staging

  void validate() const;
  std::uint64_t resolved_page_cache_pages(std::uint64_t file_bytes,
                                          std::uint32_t block_bytes) const {
    if (page_cache_pages != 0) return page_cache_pages;
    return div_ceil(file_bytes, 10ull * block_bytes);  // ceil(0.1 * file / block)
  }
};

// Host-visible traffic counters for one run.
struct RunCounters {
  std::uint64_t bytes_ssd_to_host = 0;
  std::uint64_t bytes_host_to_ssd = 0;
  std::uint64_t nvme_commands = 0;
  std::uint64_t page_faults = 0;
  std::uint64_t scratchpad_evictions = 0;
  std::uint64_t isp_request_failures = 0;
};

// Charges the latency of fetching one node's edge list on a given path and
// advances the shared cache/device state. Content is never produced here;
// the sampler already knows it. read() returns the completion time for a
// fetch issued at `now` by one worker.
class EdgeListReader {
 public:
  virtual ~EdgeListReader() = default;
  virtual SimTime read(SimTime now, NodeId v) = 0;
  virtual void on_batch_start() {}
};

// Everything in DRAM: covering blocks at DRAM cost, no device traffic.
class InMemoryReader final : public EdgeListReader {
 public:
  InMemoryReader(const CsrGraph& g, const GraphFileLayout& layout, const HostConfig& host);
  SimTime read(SimTime now, NodeId v) override;

 private:
  const CsrGraph& g_;
  GraphFileLayout layout_;
  double block_us_;
};

// mmap over the graph file: covering OS pages probe a shared page cache;
// each miss pays the fault cost, a device block read, and a block DMA.
class MmapReader final : public EdgeListReader {
 public:
  MmapReader(const CsrGraph& g, const GraphFileLayout& layout, const HostConfig& host,
             SsdDevice& dev, LruCache<std::uint64_t>& os_page_cache, RunCounters& counters);
  SimTime read(SimTime now, NodeId v) override;

 private:
  const CsrGraph& g_;
  GraphFileLayout layout_;
  const HostConfig& host_;
  SsdDevice& dev_;
  LruCache<std::uint64_t>& cache_;
  RunCounters& counters_;
};

// O_DIRECT-style: one NVMe command per contiguous block range, staged in a
// per-worker scratchpad that is cleared at each mini-batch boundary.
class DirectIoReader final : public EdgeListReader {
 public:
  DirectIoReader(const CsrGraph& g, const GraphFileLayout& layout, const HostConfig& host,
                 SsdDevice& dev, RunCounters& counters);
  SimTime read(SimTime now, NodeId v) override;
  void on_batch_start() override;

 private:
  const CsrGraph& g_;
  GraphFileLayout layout_;
  const HostConfig& host_;
  SsdDevice& dev_;
  RunCounters& counters_;
  LruCache<std::uint64_t> scratchpad_;
};

// Splits a mini-batch of targets into subgraph-generation commands of at
// most `granularity` targets each, preserving order. Throws ConfigError on
// granularity == 0.
std::vector<std::span<const NodeId>> coalesce_targets(std::span<const NodeId> targets,
                                                      std::uint32_t granularity);

}  // namespace gnnsim
