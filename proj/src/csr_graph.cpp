#include "gnnsim/csr_graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace gnnsim {
namespace {

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::span<const std::byte> in, std::uint64_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::to_integer<unsigned>(in[off + i])) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::span<const std::byte> in, std::uint64_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::to_integer<unsigned>(in[off + i])) << (8 * i);
  return v;
}

}  // namespace

void CsrGraph::validate() const {
  if (indptr.empty()) throw FormatError("indptr must have at least one entry", 0);
  if (indptr.front() != 0) throw FormatError("indptr[0] must be 0", 0);
  for (std::size_t i = 1; i < indptr.size(); ++i) {
    if (indptr[i] < indptr[i - 1])
      throw FormatError("indptr not monotone at index " + std::to_string(i), i * 8);
  }
  if (indptr.back() != indices.size())
    throw FormatError("indptr tail does not match edge count", (indptr.size() - 1) * 8);
  const std::uint64_t n = num_nodes();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= n)
      throw FormatError("edge target " + std::to_string(indices[i]) + " out of range", i);
  }
}

CsrGraph CsrGraph::from_edges(std::uint64_t num_nodes,
                              std::span<const std::pair<NodeId, NodeId>> edges) {
  CsrGraph g;
  g.indptr.assign(num_nodes + 1, 0);
  for (const auto& [src, dst] : edges) {
    if (src >= num_nodes || dst >= num_nodes)
      throw std::out_of_range("edge endpoint out of range");
    ++g.indptr[src + 1];
  }
  for (std::size_t i = 1; i < g.indptr.size(); ++i) g.indptr[i] += g.indptr[i - 1];
  g.indices.resize(edges.size());
  std::vector<std::uint64_t> cursor(g.indptr.begin(), g.indptr.end() - 1);
  for (const auto& [src, dst] : edges) g.indices[cursor[src]++] = dst;
  return g;
}

std::uint8_t csr_id_width(std::uint64_t num_nodes) {
  return num_nodes <= (1ull << 32) ? 4 : 8;
}

std::vector<std::byte> encode_csr(const CsrGraph& g) {
  g.validate();
  const std::uint8_t width = csr_id_width(g.num_nodes());
  std::vector<std::byte> out;
  out.reserve(kCsrHeaderBytes + g.indptr.size() * 8 + g.indices.size() * width);
  for (char c : kCsrMagic) out.push_back(std::byte(c));
  put_u64(out, g.num_nodes());
  put_u64(out, g.num_edges());
  out.push_back(std::byte(width));
  for (int i = 0; i < 7; ++i) out.push_back(std::byte(0));
  for (std::uint64_t v : g.indptr) put_u64(out, v);
  for (NodeId id : g.indices) {
    for (int i = 0; i < width; ++i) out.push_back(std::byte((id >> (8 * i)) & 0xff));
  }
  return out;
}

CsrGraph decode_csr(std::span<const std::byte> bytes) {
  if (bytes.size() < kCsrHeaderBytes) throw FormatError("truncated header", bytes.size());
  if (std::memcmp(bytes.data(), kCsrMagic, 8) != 0) throw FormatError("bad magic", 0);
  const std::uint64_t num_nodes = get_u64(bytes, 8);
  const std::uint64_t num_edges = get_u64(bytes, 16);
  const unsigned width = std::to_integer<unsigned>(bytes[24]);
  if (width != 4 && width != 8) throw FormatError("id width must be 4 or 8", 24);
  for (std::uint64_t i = 25; i < 32; ++i) {
    if (std::to_integer<unsigned>(bytes[i]) != 0) throw FormatError("nonzero header padding", i);
  }
  if (num_nodes + 1 > (std::uint64_t(-1) - kCsrHeaderBytes) / 8)
    throw FormatError("node count overflows layout", 8);
  const std::uint64_t indptr_off = kCsrHeaderBytes;
  const std::uint64_t edges_off = indptr_off + (num_nodes + 1) * 8;
  const std::uint64_t want = edges_off + num_edges * width;
  if (bytes.size() != want)
    throw FormatError("file size mismatch: want " + std::to_string(want) + " bytes",
                      std::min<std::uint64_t>(bytes.size(), want));

  CsrGraph g;
  g.indptr.resize(num_nodes + 1);
  for (std::uint64_t i = 0; i <= num_nodes; ++i) {
    g.indptr[i] = get_u64(bytes, indptr_off + i * 8);
    if (i > 0 && g.indptr[i] < g.indptr[i - 1])
      throw FormatError("indptr not monotone", indptr_off + i * 8);
  }
  if (g.indptr[0] != 0) throw FormatError("indptr[0] must be 0", indptr_off);
  if (g.indptr[num_nodes] != num_edges)
    throw FormatError("indptr tail does not match edge count", indptr_off + num_nodes * 8);
  g.indices.resize(num_edges);
  for (std::uint64_t i = 0; i < num_edges; ++i) {
    const std::uint64_t off = edges_off + i * width;
    const NodeId id = width == 4 ? get_u32(bytes, off) : get_u64(bytes, off);
    if (id >= num_nodes) throw FormatError("edge target out of range", off);
    g.indices[i] = id;
  }
  return g;
}

void save_csr(const CsrGraph& g, const std::filesystem::path& path) {
  const std::vector<std::byte> bytes = encode_csr(g);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw SimError("short write to " + path.string());
}

CsrGraph load_csr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw SimError("cannot open " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<std::byte> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw SimError("short read from " + path.string());
  return decode_csr(bytes);
}

DegreeHistogram degree_distribution(const CsrGraph& g) {
  DegreeHistogram h;
  h.total_nodes = g.num_nodes();
  h.total_edges = g.num_edges();
  for (std::uint64_t v = 0; v < g.num_nodes(); ++v) ++h.buckets[g.degree(v)];
  return h;
}

}  // namespace gnnsim
