#include "gnnsim/host_io.hpp"

#include <algorithm>

namespace gnnsim {

std::string to_string(AccessPath p) {
  switch (p) {
    case AccessPath::InMemory: return "in_memory";
    case AccessPath::MmapPageCache: return "mmap";
    case AccessPath::DirectIo: return "direct";
    case AccessPath::Isp: return "isp";
  }
  return "?";
}

AccessPath parse_access_path(const std::string& s) {
  if (s == "in_memory") return AccessPath::InMemory;
  if (s == "mmap") return AccessPath::MmapPageCache;
  if (s == "direct") return AccessPath::DirectIo;
  if (s == "isp") return AccessPath::Isp;
  throw ConfigError("unknown access path '" + s + "' (in_memory|mmap|direct|isp)");
}

void HostConfig::validate() const {
  if (dram_read_us_per_block < 0) throw ConfigError("host.dram_read_us_per_block must be >= 0");
  if (page_fault_us < 0) throw ConfigError("host.page_fault_us must be >= 0");
}

InMemoryReader::InMemoryReader(const CsrGraph& g, const GraphFileLayout& layout,
                               const HostConfig& host)
    : g_(g), layout_(layout), block_us_(host.dram_read_us_per_block) {}

SimTime InMemoryReader::read(SimTime now, NodeId v) {
  const auto loc = layout_.locate(g_, v);
  return now + double(loc.blocks(layout_.block_bytes)) * block_us_;
}

MmapReader::MmapReader(const CsrGraph& g, const GraphFileLayout& layout, const HostConfig& host,
                       SsdDevice& dev, LruCache<std::uint64_t>& os_page_cache,
                       RunCounters& counters)
    : g_(g), layout_(layout), host_(host), dev_(dev), cache_(os_page_cache), counters_(counters) {}

SimTime MmapReader::read(SimTime now, NodeId v) {
  const auto loc = layout_.locate(g_, v);
  if (loc.byte_length == 0) return now;
  // The worker touches the mapped pages in order and blocks on each fault.
  SimTime t = now;
  const std::uint64_t first = loc.start_lba;
  const std::uint64_t last = loc.end_lba_exclusive(layout_.block_bytes) - 1;
  for (std::uint64_t page = first; page <= last; ++page) {
    if (cache_.touch(page)) {
      t += host_.dram_read_us_per_block;
      continue;
    }
    ++counters_.page_faults;
    ++counters_.nvme_commands;
    t += host_.page_fault_us;
    const std::uint64_t lba = page;
    const auto res = dev_.read_blocks(t, std::span<const std::uint64_t>(&lba, 1));
    counters_.bytes_ssd_to_host += layout_.block_bytes;
    t = dev_.host_link().transfer(res.done, layout_.block_bytes, ThroughputLink::Dir::AToB);
    cache_.insert(page);
  }
  return t;
}

DirectIoReader::DirectIoReader(const CsrGraph& g, const GraphFileLayout& layout,
                               const HostConfig& host, SsdDevice& dev, RunCounters& counters)
    : g_(g), layout_(layout), host_(host), dev_(dev), counters_(counters),
      scratchpad_(host.scratchpad_blocks) {}

void DirectIoReader::on_batch_start() {
  scratchpad_ = LruCache<std::uint64_t>(host_.scratchpad_blocks);
}

SimTime DirectIoReader::read(SimTime now, NodeId v) {
  const auto loc = layout_.locate(g_, v);
  if (loc.byte_length == 0) return now;
  const std::uint64_t first = loc.start_lba;
  const std::uint64_t end = loc.end_lba_exclusive(layout_.block_bytes);

  // Blocks already staged this batch are free; the rest are fetched with
  // one command per contiguous missing run.
  SimTime t = now;
  std::vector<std::uint64_t> missing;
  for (std::uint64_t lba = first; lba < end; ++lba) {
    if (!scratchpad_.touch(lba)) missing.push_back(lba);
  }
  if (missing.empty()) return t;

  std::size_t i = 0;
  while (i < missing.size()) {
    std::size_t j = i + 1;
    while (j < missing.size() && missing[j] == missing[j - 1] + 1) ++j;
    const std::span<const std::uint64_t> run(&missing[i], j - i);
    ++counters_.nvme_commands;
    t += dev_.config().nvme_cmd_overhead_us;
    const auto res = dev_.read_blocks(t, run);
    const std::uint64_t bytes = run.size() * layout_.block_bytes;
    counters_.bytes_ssd_to_host += bytes;
    t = dev_.host_link().transfer(res.done, bytes, ThroughputLink::Dir::AToB);
    for (std::uint64_t lba : run) {
      if (scratchpad_.insert(lba)) ++counters_.scratchpad_evictions;
    }
    i = j;
  }
  return t;
}

std::vector<std::span<const NodeId>> coalesce_targets(std::span<const NodeId> targets,
                                                      std::uint32_t granularity) {
  if (granularity == 0) throw ConfigError("coalesce granularity must be >= 1");
  std::vector<std::span<const NodeId>> slices;
  slices.reserve(div_ceil(targets.size(), granularity));
  for (std::size_t i = 0; i < targets.size(); i += granularity) {
    slices.push_back(targets.subspan(i, std::min<std::size_t>(granularity, targets.size() - i)));
  }
  return slices;
}

}  // namespace gnnsim
