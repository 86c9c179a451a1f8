#include "gnnsim/isp_firmware.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "gnnsim/rng.hpp"

namespace gnnsim {

void IspConfig::validate() const {
  if (ftl_load < 0.0 || ftl_load >= 1.0) throw ConfigError("isp.ftl_load must be in [0, 1)");
  if (record_translate_us < 0.0) throw ConfigError("isp.record_translate_us must be >= 0");
  if (command_setup_us < 0.0) throw ConfigError("isp.command_setup_us must be >= 0");
  if (subgraph_buffer_bytes == 0) throw ConfigError("isp.subgraph_buffer_bytes must be > 0");
}

double isp_core_rate(const SsdConfig& ssd, const IspConfig& isp) {
  return (ssd.core_sample_rate / 1e6) * (1.0 - isp.ftl_load);
}

const char* to_string(IspRequestState s) {
  switch (s) {
    case IspRequestState::Received: return "received";
    case IspRequestState::Translated: return "translated";
    case IspRequestState::Reading: return "reading";
    case IspRequestState::Sampling: return "sampling";
    case IspRequestState::Ready: return "ready";
    case IspRequestState::Returned: return "returned";
  }
  return "?";
}

namespace {

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::span<const std::byte> b, std::size_t off, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t(b[off + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::byte> encode_isp_payload(const IspResult& r, std::size_t layer_count) {
  std::vector<std::byte> out;
  out.reserve(r.payload_bytes ? r.payload_bytes : 16);
  put_u64(out, r.request_id);
  put_u32(out, std::uint32_t(r.targets.size()));
  put_u32(out, 0);
  for (std::size_t t = 0; t < r.targets.size(); ++t) {
    if (r.ids[t].size() != layer_count) throw SimError("result hop count does not match schedule");
    for (const auto& hop_ids : r.ids[t]) {
      if (hop_ids.size() > 0xffff) throw SimError("per-target hop count exceeds payload field");
      put_u16(out, std::uint16_t(hop_ids.size()));
      for (NodeId id : hop_ids) put_u64(out, id);
    }
  }
  return out;
}

IspPayloadView decode_isp_payload(std::span<const std::byte> bytes, std::size_t layer_count) {
  auto need = [&](std::size_t off, std::size_t n) {
    if (off + n > bytes.size()) throw FormatError("subgraph payload truncated", bytes.size());
  };
  need(0, 16);
  IspPayloadView view;
  view.request_id = get_le(bytes, 0, 8);
  const std::uint32_t targets = std::uint32_t(get_le(bytes, 8, 4));
  if (get_le(bytes, 12, 4) != 0) throw FormatError("nonzero reserved field", 12);
  view.ids.resize(targets);
  std::size_t off = 16;
  for (std::uint32_t t = 0; t < targets; ++t) {
    view.ids[t].resize(layer_count);
    for (std::size_t h = 0; h < layer_count; ++h) {
      need(off, 2);
      const std::size_t n = get_le(bytes, off, 2);
      off += 2;
      need(off, n * 8);
      auto& ids = view.ids[t][h];
      ids.reserve(n);
      for (std::size_t i = 0; i < n; ++i, off += 8) ids.push_back(get_le(bytes, off, 8));
    }
  }
  if (off != bytes.size()) throw FormatError("trailing bytes after payload", off);
  return view;
}

// One in-flight subgraph-generation command.
struct IspFirmware::Request {
  std::uint64_t id = 0;
  NsConfigBlob blob;
  IspCompletion on_done;
  IspResult result;
  // Working state for the hop in progress: the flattened descriptor list
  // and, per descriptor, which target subtree it belongs to.
  std::vector<NsConfigRecord> records;
  std::vector<std::size_t> record_target;
  std::vector<std::vector<NodeId>> frontier;  // per target, next hop's parents
  std::uint64_t buffer_bytes = 0;
  bool counted_inflight = false;
  bool failed = false;
  std::string error;
};

struct IspFirmware::Impl {
  VirtualClock& clock;
  SsdDevice& dev;
  const CsrGraph& graph;
  GraphFileLayout layout;
  IspConfig cfg;
  bool with_replacement;
  RunCounters& counters;

  BusyResource control_unit;
  ServerPool cores;
  std::uint32_t inflight = 0;
  std::uint64_t buffer_used = 0;
  std::uint64_t next_id = 1;
  std::deque<std::shared_ptr<Request>> ready_queue;

  Impl(VirtualClock& c, SsdDevice& d, const CsrGraph& g, const GraphFileLayout& l,
       const IspConfig& ic, bool repl, RunCounters& rc)
      : clock(c), dev(d), graph(g), layout(l), cfg(ic), with_replacement(repl), counters(rc),
        cores(d.config().firmware_cores) {
    cfg.validate();
  }

  void mark(const std::shared_ptr<Request>& req, IspRequestState s, SimTime t) {
    req->result.state_trace.emplace_back(s, t);
  }

  bool charge(const std::shared_ptr<Request>& req, std::uint64_t bytes) {
    if (buffer_used + bytes > cfg.subgraph_buffer_bytes) return false;
    buffer_used += bytes;
    req->buffer_bytes += bytes;
    return true;
  }

  void release(const std::shared_ptr<Request>& req) {
    buffer_used -= req->buffer_bytes;
    req->buffer_bytes = 0;
  }

  SimTime next_poll(SimTime t) const {
    const double iv = dev.config().poll_interval_us;
    if (iv <= 0.0) return t;
    return std::ceil(t / iv) * iv;
  }

  void fail(const std::shared_ptr<Request>& req, SimTime t, std::string why) {
    release(req);
    req->failed = true;
    req->error = std::move(why);
    ++counters.isp_request_failures;
    enqueue_ready(req, t);
  }

  // The request joins the completion queue at its ready time; an earlier
  // poll tick draining other requests must not pull this one forward. It
  // also stops contending for the cores only then, not when the finish
  // was computed.
  void enqueue_ready(const std::shared_ptr<Request>& req, SimTime t) {
    req->result.ready_at = t;
    clock.schedule_at(t, [this, req] {
      if (req->counted_inflight) {
        --inflight;
        req->counted_inflight = false;
      }
      ready_queue.push_back(req);
      clock.schedule_at(next_poll(clock.now()), [this] { drain_ready(); });
    });
  }

  // Fires at a poll tick; hands every finished request back to the host in
  // completion order, serialized on the DMA link.
  void drain_ready() {
    while (!ready_queue.empty()) {
      auto req = ready_queue.front();
      ready_queue.pop_front();
      if (req->failed) {
        req->result.returned_at = clock.now();
        mark(req, IspRequestState::Returned, clock.now());
        IspOutcome out{false, req->error, std::move(req->result)};
        req->on_done(out);
        continue;
      }
      const SimTime done =
          dev.host_link().transfer(clock.now(), req->result.payload_bytes, ThroughputLink::Dir::AToB);
      counters.bytes_ssd_to_host += req->result.payload_bytes;
      req->result.returned_at = done;
      mark(req, IspRequestState::Returned, done);
      clock.schedule_at(done, [this, req] {
        release(req);
        IspOutcome out{true, {}, std::move(req->result)};
        req->on_done(out);
      });
    }
  }

  void begin(const std::shared_ptr<Request>& req, std::vector<std::byte> raw) {
    const SimTime now = clock.now();
    mark(req, IspRequestState::Received, now);
    try {
      req->blob = decode_nsconfig(raw);
    } catch (const std::exception& e) {
      fail(req, now, std::string("blob rejected: ") + e.what());
      return;
    }
    ++inflight;
    req->counted_inflight = true;

    const std::size_t n = req->blob.records.size();
    req->result.targets.reserve(n);
    req->records = req->blob.records;
    req->record_target.resize(n);
    req->frontier.resize(n);
    req->result.ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      req->result.targets.push_back(req->blob.records[i].node_id);
      req->record_target[i] = i;
      req->result.ids[i].resize(req->blob.fanouts.size());
    }
    if (!charge(req, 16)) {
      fail(req, now, "pending-subgraph buffer full");
      return;
    }
    // Command bookkeeping runs on a core while the control unit translates,
    // so each command spends real firmware time even when its sampling
    // workload is tiny. Many small commands bleed core time away from
    // sampling; one large command pays this once.
    if (cfg.command_setup_us > 0.0) cores.serve(now, cfg.command_setup_us);
    const SimTime translated = control_unit.reserve(now, double(n) * cfg.record_translate_us);
    clock.schedule_at(translated, [this, req] {
      mark(req, IspRequestState::Translated, clock.now());
      run_hop(req, 0);
    });
  }

  // Samples ids for deg-sized neighbor lists exactly the way the host
  // sampler does: the stream key fixes every draw, so the two sides agree
  // id for id.
  std::vector<NodeId> draw_children(NodeId parent, std::uint32_t fanout, std::uint64_t hop_base) {
    CounterRng rng(sample_stream_key(hop_base, parent));
    return sample_neighbors(graph.neighbors(parent), fanout, with_replacement, rng);
  }

  void run_hop(const std::shared_ptr<Request>& req, std::uint32_t hop) {
    const SimTime start = clock.now();
    mark(req, IspRequestState::Reading, start);
    const std::uint32_t id_width = layout.id_width;

    // Pull every parent's edge list through the flash channels, FIFO in
    // descriptor order. Buffered pages cost nothing.
    SimTime reads_done = start;
    std::vector<SimTime> record_read_done(req->records.size(), start);
    try {
      for (std::size_t i = 0; i < req->records.size(); ++i) {
        const NsConfigRecord& rec = req->records[i];
        if (rec.edge_count == 0) continue;
        const std::uint64_t byte_start =
            rec.start_lba * layout.block_bytes + rec.byte_offset;
        const std::uint64_t len = rec.edge_count * id_width;
        record_read_done[i] = dev.read_byte_range(start, byte_start, len).done;
        reads_done = std::max(reads_done, record_read_done[i]);
        note_pages(req, byte_start, len);
      }
    } catch (const std::exception& e) {
      fail(req, start, std::string("flash read rejected: ") + e.what());
      return;
    }
    mark(req, IspRequestState::Sampling, reads_done);

    // Per-descriptor service on the embedded cores; concurrent requests
    // time-share them by queueing, so the rate any one stream sees falls
    // as streams pile up while aggregate throughput stays capped at the
    // core count.
    const double rate = isp_core_rate(dev.config(), cfg);
    const std::uint64_t hop_base = hop_seed_base(req->blob.rng_seed_base, hop);
    const std::uint32_t fanout = req->blob.fanouts[hop];
    if (!charge(req, 2 * std::uint64_t(req->frontier.size()))) {
      fail(req, reads_done, "pending-subgraph buffer full");
      return;
    }
    SimTime hop_done = reads_done;
    for (std::size_t i = 0; i < req->records.size(); ++i) {
      const NsConfigRecord& rec = req->records[i];
      std::vector<NodeId> kids = draw_children(rec.node_id, fanout, hop_base);
      if (!kids.empty()) {
        const SimTime served =
            cores.serve(record_read_done[i], double(kids.size()) / rate);
        hop_done = std::max(hop_done, served);
      }
      auto& sink = req->result.ids[req->record_target[i]][hop];
      if (sink.size() + kids.size() > 0xffff) {
        fail(req, hop_done, "per-target hop count exceeds payload field");
        return;
      }
      if (!charge(req, 8 * std::uint64_t(kids.size()))) {
        fail(req, hop_done, "pending-subgraph buffer full");
        return;
      }
      sink.insert(sink.end(), kids.begin(), kids.end());
    }

    if (hop + 1 < req->blob.fanouts.size()) {
      advance_frontier(req, hop);
      locate_next_hop(req, hop + 1, hop_done);
    } else {
      finish(req, hop_done);
    }
  }

  // First-seen dedup of this hop's children, per target subtree.
  void advance_frontier(const std::shared_ptr<Request>& req, std::uint32_t hop) {
    for (std::size_t t = 0; t < req->frontier.size(); ++t) {
      const auto& kids = req->result.ids[t][hop];
      std::unordered_set<NodeId> seen;
      seen.reserve(kids.size());
      req->frontier[t].clear();
      for (NodeId v : kids) {
        if (seen.insert(v).second) req->frontier[t].push_back(v);
      }
    }
  }

  // The next hop's parents are fresh ids: their edge-list locations come
  // from the on-flash indptr region, then the control unit translates the
  // new descriptors.
  void locate_next_hop(const std::shared_ptr<Request>& req, std::uint32_t hop, SimTime t) {
    req->records.clear();
    req->record_target.clear();
    SimTime fetched = t;
    try {
      for (std::size_t tgt = 0; tgt < req->frontier.size(); ++tgt) {
        for (NodeId v : req->frontier[tgt]) {
          const std::uint64_t entry = layout.indptr_entry_byte(v);
          fetched = std::max(fetched, dev.read_byte_range(t, entry, 16).done);
          note_pages(req, entry, 16);
          const auto loc = layout.locate(graph, v);
          req->records.push_back(
              {v, loc.start_lba, std::uint16_t(loc.byte_offset), loc.edge_count});
          req->record_target.push_back(tgt);
        }
      }
    } catch (const std::exception& e) {
      fail(req, t, std::string("flash read rejected: ") + e.what());
      return;
    }
    SimTime ready = fetched;
    if (!req->records.empty()) {
      ready = control_unit.reserve(fetched,
                                   double(req->records.size()) * cfg.record_translate_us);
    }
    clock.schedule_at(ready, [this, req, hop] { run_hop(req, hop); });
  }

  void finish(const std::shared_ptr<Request>& req, SimTime t) {
    std::uint64_t payload = 16;
    for (const auto& per_target : req->result.ids) {
      for (const auto& hop_ids : per_target) payload += 2 + 8 * hop_ids.size();
    }
    req->result.payload_bytes = payload;
    mark(req, IspRequestState::Ready, t);
    enqueue_ready(req, t);
  }

  void note_pages(const std::shared_ptr<Request>& req, std::uint64_t start_byte,
                  std::uint64_t len) {
    const std::uint32_t page = dev.config().flash_page_bytes;
    const std::uint64_t first = start_byte / page;
    const std::uint64_t last = (start_byte + len - 1) / page;
    for (std::uint64_t p = first; p <= last; ++p) {
      if (req->result.pages_read.empty() || req->result.pages_read.back() != p)
        req->result.pages_read.push_back(p);
    }
  }
};

IspFirmware::IspFirmware(VirtualClock& clock, SsdDevice& dev, const CsrGraph& graph,
                         const GraphFileLayout& layout, const IspConfig& cfg,
                         bool with_replacement, RunCounters& counters)
    : impl_(std::make_unique<Impl>(clock, dev, graph, layout, cfg, with_replacement, counters)) {}

IspFirmware::~IspFirmware() = default;

void IspFirmware::submit(SimTime t, std::vector<std::byte> blob, IspCompletion on_done) {
  Impl& im = *impl_;
  ++im.counters.nvme_commands;
  im.counters.bytes_host_to_ssd += blob.size();
  const SimTime arrived =
      im.dev.host_link().transfer(t, blob.size(), ThroughputLink::Dir::BToA);
  auto req = std::make_shared<Request>();
  req->id = im.next_id++;
  req->result.request_id = req->id;
  req->on_done = std::move(on_done);
  im.clock.schedule_at(arrived, [this, req, raw = std::move(blob)]() mutable {
    impl_->begin(req, std::move(raw));
  });
}

std::uint32_t IspFirmware::inflight() const { return impl_->inflight; }
std::uint64_t IspFirmware::buffer_bytes_used() const { return impl_->buffer_used; }

Subgraph reassemble_subgraph(const CsrGraph& g, std::span<const NodeId> targets,
                             const SamplingConfig& cfg,
                             std::span<const IspPayloadView> slices) {
  std::size_t total = 0;
  for (const auto& s : slices) total += s.ids.size();
  if (total != targets.size()) throw SimError("payload slices do not cover the batch");

  const std::size_t hops = cfg.fanouts.size();
  Subgraph sg;
  sg.targets.assign(targets.begin(), targets.end());
  sg.fanouts = cfg.fanouts;
  sg.layers.resize(hops);

  // ids[t][h], re-flattened across slices in batch order.
  std::vector<const std::vector<std::vector<NodeId>>*> per_target;
  per_target.reserve(total);
  for (const auto& s : slices) {
    for (const auto& t : s.ids) {
      if (t.size() != hops) throw SimError("payload hop count does not match schedule");
      per_target.push_back(&t);
    }
  }

  std::vector<std::vector<NodeId>> frontier(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) frontier[t] = {targets[t]};

  for (std::size_t h = 0; h < hops; ++h) {
    SubgraphLayer& layer = sg.layers[h];
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& ids = (*per_target[t])[h];
      std::size_t pos = 0;
      std::vector<NodeId> next;
      std::unordered_set<NodeId> seen;
      for (NodeId p : frontier[t]) {
        const std::uint64_t deg = g.degree(p);
        std::uint64_t take = 0;
        if (deg > 0)
          take = cfg.with_replacement ? cfg.fanouts[h]
                                      : std::min<std::uint64_t>(cfg.fanouts[h], deg);
        if (pos + take > ids.size()) throw SimError("payload shorter than sampling schedule");
        layer.parents.push_back(p);
        layer.counts.push_back(std::uint32_t(take));
        for (std::uint64_t k = 0; k < take; ++k) {
          const NodeId c = ids[pos++];
          layer.children.push_back(c);
          if (seen.insert(c).second) next.push_back(c);
        }
      }
      if (pos != ids.size()) throw SimError("payload longer than sampling schedule");
      frontier[t] = std::move(next);
    }
  }

  std::unordered_set<NodeId> seen;
  auto add = [&](NodeId v) {
    if (seen.insert(v).second) sg.sampled_set.push_back(v);
  };
  for (NodeId t : sg.targets) add(t);
  for (const auto& layer : sg.layers) {
    for (NodeId c : layer.children) add(c);
  }
  return sg;
}

}  // namespace gnnsim
