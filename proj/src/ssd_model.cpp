#include "gnnsim/ssd_model.hpp"

#include <algorithm>

namespace gnnsim {

void SsdConfig::validate() const {
  if (logical_block_bytes == 0 || logical_block_bytes > 65536)
    throw ConfigError("ssd.logical_block_bytes must be in [1, 65536]");
  if (flash_page_bytes == 0 || flash_page_bytes % logical_block_bytes != 0)
    throw ConfigError("ssd.flash_page_bytes must be a positive multiple of the block size");
  if (channels == 0) throw ConfigError("ssd.channels must be >= 1");
  if (flash_read_us < 0) throw ConfigError("ssd.flash_read_us must be >= 0");
  if (dma_gbps <= 0) throw ConfigError("ssd.dma_gbps must be > 0");
  if (nvme_cmd_overhead_us < 0) throw ConfigError("ssd.nvme_cmd_overhead_us must be >= 0");
  if (firmware_cores == 0) throw ConfigError("ssd.firmware_cores must be >= 1");
  if (core_sample_rate <= 0) throw ConfigError("ssd.core_sample_rate must be > 0");
  if (poll_interval_us <= 0) throw ConfigError("ssd.poll_interval_us must be > 0");
}

SsdDevice::SsdDevice(const SsdConfig& cfg, std::uint64_t capacity_bytes)
    : cfg_(cfg),
      capacity_blocks_(div_ceil(capacity_bytes, cfg.logical_block_bytes)),
      channels_(cfg.channels),
      page_buffer_(std::size_t(cfg.page_buffer_bytes / cfg.flash_page_bytes)),
      host_link_(cfg.link_bytes_per_us()) {
  cfg_.validate();
}

FlashAddress SsdDevice::ftl_translate(std::uint64_t lba) const {
  if (lba >= capacity_blocks_)
    throw SimError("lba " + std::to_string(lba) + " beyond device capacity");
  const std::uint64_t page_seq = lba / cfg_.blocks_per_page();
  return FlashAddress{std::uint32_t(page_seq % cfg_.channels), page_seq / cfg_.channels};
}

void SsdDevice::read_page(SimTime t, std::uint64_t page_seq, ReadResult& r) {
  ++r.pages;
  if (page_buffer_.touch(page_seq)) {
    r.done = std::max(r.done, t);
    return;
  }
  ++r.page_misses;
  flash_bytes_read_ += cfg_.flash_page_bytes;
  const std::uint32_t channel = std::uint32_t(page_seq % cfg_.channels);
  r.done = std::max(r.done, channels_[channel].reserve(t, cfg_.flash_read_us));
  page_buffer_.insert(page_seq);
}

SsdDevice::ReadResult SsdDevice::read_blocks(SimTime t, std::span<const std::uint64_t> lbas) {
  ReadResult r;
  r.done = t;
  std::uint64_t last_page = std::uint64_t(-1);
  const std::uint32_t bpp = cfg_.blocks_per_page();
  for (std::uint64_t lba : lbas) {
    if (lba >= capacity_blocks_)
      throw SimError("lba " + std::to_string(lba) + " beyond device capacity");
    const std::uint64_t page_seq = lba / bpp;
    if (page_seq == last_page) continue;  // adjacent blocks share a page
    last_page = page_seq;
    read_page(t, page_seq, r);
  }
  return r;
}

SsdDevice::ReadResult SsdDevice::read_byte_range(SimTime t, std::uint64_t start_byte,
                                                 std::uint64_t length) {
  ReadResult r;
  r.done = t;
  if (length == 0) return r;
  const std::uint64_t first = start_byte / cfg_.flash_page_bytes;
  const std::uint64_t last = (start_byte + length - 1) / cfg_.flash_page_bytes;
  const std::uint64_t cap_pages = div_ceil(capacity_blocks_ * cfg_.logical_block_bytes,
                                           cfg_.flash_page_bytes);
  if (last >= cap_pages) throw SimError("byte range beyond device capacity");
  for (std::uint64_t p = first; p <= last; ++p) read_page(t, p, r);
  return r;
}

}  // namespace gnnsim
