#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gnnsim/csr_graph.hpp"
#include "gnnsim/host_io.hpp"
#include "gnnsim/isp_firmware.hpp"
#include "gnnsim/sampling.hpp"
#include "gnnsim/ssd_model.hpp"

namespace gnnsim {

enum class SamplerKind { NeighborHops, RandomWalk };
std::string to_string(SamplerKind k);
SamplerKind parse_sampler_kind(const std::string& s);  // throws ConfigError

struct PipelineConfig {
  std::uint32_t workers = 12;
  std::uint32_t queue_depth = 0;  // prepared batches the GPU feed buffers; 0 = 2 * workers
  double gpu_batch_time_us = 8000.0;
  std::uint32_t batches = 100;
  std::uint32_t feature_bytes_per_node = 64;
  AccessPath path = AccessPath::InMemory;
  SamplerKind sampler = SamplerKind::NeighborHops;
  bool capture_subgraphs = false;  // keep every Subgraph in the metrics

  void validate() const;
  std::uint32_t resolved_queue_depth() const { return queue_depth ? queue_depth : 2 * workers; }
};

// Everything a run needs besides the graph itself.
struct SimSetup {
  SsdConfig ssd;
  HostConfig host;
  IspConfig isp;
  SamplingConfig sampling;
  RandomWalkConfig walk;
  PipelineConfig pipeline;
};

// Identifies the work a run performed, independent of the access path and
// host-side machinery. Two runs with equal keys sampled the same batches.
struct WorkloadKey {
  std::uint64_t graph_nodes = 0;
  std::uint64_t graph_edges = 0;
  std::uint32_t batch_size = 0;
  std::vector<std::uint32_t> fanouts;
  bool with_replacement = true;
  SamplerKind sampler = SamplerKind::NeighborHops;
  std::uint32_t walk_length = 0;
  std::uint32_t walks_per_target = 0;
  std::uint64_t seed = 0;
  std::uint32_t batches = 0;
  std::uint32_t feature_bytes_per_node = 0;

  bool operator==(const WorkloadKey&) const = default;
};

// Per-stage time, summed over batches (stages of different batches overlap
// in wall time, so these do not sum to total_time_us).
struct StageTotals {
  double sampling_us = 0;
  double feature_gather_us = 0;
  double host_transfer_us = 0;
  double training_us = 0;
};

struct RunMetrics {
  WorkloadKey workload;
  AccessPath path = AccessPath::InMemory;
  std::uint32_t workers = 0;
  std::uint32_t queue_depth = 0;
  double total_time_us = 0;
  double gpu_idle_fraction = 0;
  StageTotals stages;
  RunCounters counters;
  std::uint64_t bytes_flash_read = 0;
  std::uint64_t subgraphs_produced = 0;
  std::uint64_t content_digest = 0;  // folds every batch's subgraph_digest
  std::vector<Subgraph> captured;    // filled only when capture_subgraphs
};

// Uniform draw of min(k, num_nodes) distinct targets, keyed by batch index
// alone so every path and worker count trains on identical batches.
std::vector<NodeId> draw_batch_targets(std::uint64_t num_nodes, std::uint32_t k,
                                       std::uint64_t run_seed, std::uint64_t batch);

// Simulates one training run end to end and reports its metrics. Throws
// ConfigError for inconsistent setups and SimError when the device fails a
// request mid-run.
RunMetrics run_pipeline(const CsrGraph& g, const SimSetup& setup);

// Runs the identical workload once per access path on fresh devices and
// checks the runs agree on workload and sampled content; disagreement
// throws SimError.
struct PathComparison {
  WorkloadKey workload;
  std::vector<RunMetrics> runs;
};
PathComparison compare_paths(const CsrGraph& g, const SimSetup& base,
                             std::span<const AccessPath> paths);

std::string metrics_json(const RunMetrics& m);
std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);

}  // namespace gnnsim
