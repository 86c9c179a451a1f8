#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnnsim/csr_graph.hpp"
#include "gnnsim/file_layout.hpp"
#include "gnnsim/host_io.hpp"
#include "gnnsim/nsconfig.hpp"
#include "gnnsim/sampling.hpp"
#include "gnnsim/ssd_model.hpp"
#include "gnnsim/virtual_clock.hpp"

namespace gnnsim {

struct IspConfig {
  double ftl_load = 0.2;             // core time reserved for routine firmware work
  double record_translate_us = 0.2;  // per descriptor, on the control unit
  double command_setup_us = 0.25;    // per command, on a core: header parse and
                                     // stream setup before sampling can start
  std::uint64_t subgraph_buffer_bytes = 32ull << 20;
  std::uint32_t coalesce_granularity = 0;  // targets per command; 0 = whole batch
  bool per_hop_round_trip = false;   // hop-at-a-time host orchestration

  void validate() const;
};

// Sampling throughput of one embedded core in ids per microsecond, after
// ftl_load reserves its share for routine firmware duties. Requests
// time-share the cores by queueing; this rate is what a record's service
// time is charged at.
double isp_core_rate(const SsdConfig& ssd, const IspConfig& isp);

enum class IspRequestState { Received, Translated, Reading, Sampling, Ready, Returned };
const char* to_string(IspRequestState s);

// What the device hands back for one request.
struct IspResult {
  std::uint64_t request_id = 0;
  std::vector<NodeId> targets;
  // ids[target][hop] lists sampled ids in draw order for that target's
  // subtree, concatenated over the hop's parents.
  std::vector<std::vector<std::vector<NodeId>>> ids;
  std::uint64_t payload_bytes = 0;
  SimTime ready_at = 0;
  SimTime returned_at = 0;
  std::vector<std::pair<IspRequestState, SimTime>> state_trace;
  std::vector<std::uint64_t> pages_read;  // flash page sequence numbers
};

struct IspOutcome {
  bool ok = false;
  std::string error;
  IspResult result;
};

using IspCompletion = std::function<void(const IspOutcome&)>;

// Return payload layout: 16-byte header (u64 request id, u32 target count,
// u32 zero), then per target per hop a u16 id count followed by the packed
// u64 ids.
std::vector<std::byte> encode_isp_payload(const IspResult& r, std::size_t layer_count);
struct IspPayloadView {
  std::uint64_t request_id = 0;
  std::vector<std::vector<std::vector<NodeId>>> ids;  // [target][hop]
};
IspPayloadView decode_isp_payload(std::span<const std::byte> bytes, std::size_t layer_count);

// Simulated on-device firmware servicing subgraph-generation commands. One
// instance per run; concurrent requests share the control unit, the flash
// channels, the page buffer, the embedded cores, and the host link.
//
// A request moves Received -> Translated -> Reading -> Sampling -> Ready ->
// Returned. Each hop reads the parents' edge lists from flash (FIFO per
// channel, buffered pages are free), then draws children on the cores at
// the contention-adjusted rate. Children found at a non-final hop have
// their indptr entries fetched from the on-flash index region and
// translated before the next hop starts. Finished requests sit in the
// completion buffer until the polling scheduler's next tick, then DMA back
// to the host in completion order.
class IspFirmware {
 public:
  IspFirmware(VirtualClock& clock, SsdDevice& dev, const CsrGraph& graph,
              const GraphFileLayout& layout, const IspConfig& cfg, bool with_replacement,
              RunCounters& counters);
  ~IspFirmware();

  // `t` is the time the submit/complete overhead has been paid by the
  // caller; the blob DMA is charged here. on_done fires at return time.
  void submit(SimTime t, std::vector<std::byte> blob, IspCompletion on_done);

  std::uint32_t inflight() const;
  std::uint64_t buffer_bytes_used() const;

 private:
  struct Request;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Rebuilds the mini-batch Subgraph from per-slice device results using
// host-resident degree information. Slices must cover the batch targets in
// order. Throws SimError when a payload is inconsistent with the schedule.
Subgraph reassemble_subgraph(const CsrGraph& g, std::span<const NodeId> targets,
                             const SamplingConfig& cfg,
                             std::span<const IspPayloadView> slices);

}  // namespace gnnsim
