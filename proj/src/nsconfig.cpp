#include "gnnsim/nsconfig.hpp"

#include <cstring>

namespace gnnsim {
namespace {

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(std::byte(v & 0xff));
  out.push_back(std::byte(v >> 8));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(std::span<const std::byte> in, std::size_t off) {
  return std::uint16_t(std::to_integer<unsigned>(in[off]) |
                       (std::to_integer<unsigned>(in[off + 1]) << 8));
}

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::to_integer<unsigned>(in[off + i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::span<const std::byte> in, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::to_integer<unsigned>(in[off + i])) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::byte> encode_nsconfig(const NsConfigBlob& blob) {
  if (blob.records.empty()) throw ConfigError("nsconfig blob must carry at least one target");
  if (blob.fanouts.empty()) throw ConfigError("nsconfig blob must carry at least one layer");

  std::vector<std::byte> out;
  out.reserve(blob.encoded_size());
  for (char c : kNsConfigMagic) out.push_back(std::byte(c));
  put_u16(out, blob.version);
  put_u16(out, std::uint16_t(blob.fanouts.size()));
  put_u32(out, std::uint32_t(blob.records.size()));
  put_u64(out, blob.rng_seed_base);
  for (int i = 0; i < 12; ++i) out.push_back(std::byte(0));
  for (std::uint16_t f : blob.fanouts) put_u16(out, f);
  for (const NsConfigRecord& r : blob.records) {
    put_u64(out, r.node_id);
    put_u64(out, r.start_lba);
    put_u16(out, r.byte_offset);
    put_u64(out, r.edge_count);
  }
  return out;
}

NsConfigBlob decode_nsconfig(std::span<const std::byte> bytes) {
  if (bytes.size() < 32) throw FormatError("nsconfig blob shorter than header", bytes.size());
  if (std::memcmp(bytes.data(), kNsConfigMagic, 4) != 0)
    throw FormatError("nsconfig bad magic", 0);
  NsConfigBlob blob;
  blob.version = get_u16(bytes, 4);
  if (blob.version != 1) throw FormatError("unsupported nsconfig version", 4);
  const std::uint16_t layers = get_u16(bytes, 6);
  const std::uint32_t targets = get_u32(bytes, 8);
  blob.rng_seed_base = get_u64(bytes, 12);
  if (layers == 0) throw FormatError("nsconfig layer count must be >= 1", 6);
  if (targets == 0) throw FormatError("nsconfig target count must be >= 1", 8);
  for (std::size_t i = 20; i < 32; ++i) {
    if (std::to_integer<unsigned>(bytes[i]) != 0)
      throw FormatError("nonzero nsconfig header padding", i);
  }

  const std::size_t want = 32 + 2 * std::size_t(layers) + kNsConfigRecordBytes * targets;
  if (bytes.size() != want)
    throw FormatError("nsconfig size mismatch: want " + std::to_string(want) + " bytes",
                      std::min<std::size_t>(bytes.size(), want));

  std::size_t off = 32;
  blob.fanouts.resize(layers);
  for (std::uint16_t i = 0; i < layers; ++i, off += 2) blob.fanouts[i] = get_u16(bytes, off);
  blob.records.resize(targets);
  for (std::uint32_t i = 0; i < targets; ++i, off += kNsConfigRecordBytes) {
    NsConfigRecord& r = blob.records[i];
    r.node_id = get_u64(bytes, off);
    r.start_lba = get_u64(bytes, off + 8);
    r.byte_offset = get_u16(bytes, off + 16);
    r.edge_count = get_u64(bytes, off + 18);
  }
  return blob;
}

NsConfigBlob make_nsconfig(const CsrGraph& g, const GraphFileLayout& layout,
                           std::span<const NodeId> targets, std::span<const std::uint32_t> fanouts,
                           std::uint64_t rng_seed_base) {
  NsConfigBlob blob;
  blob.rng_seed_base = rng_seed_base;
  blob.fanouts.assign(fanouts.begin(), fanouts.end());
  blob.records.reserve(targets.size());
  for (NodeId t : targets) {
    const auto loc = layout.locate(g, t);
    blob.records.push_back(NsConfigRecord{t, loc.start_lba, std::uint16_t(loc.byte_offset),
                                          loc.edge_count});
  }
  return blob;
}

}  // namespace gnnsim
