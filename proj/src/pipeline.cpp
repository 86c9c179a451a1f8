#include "gnnsim/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <deque>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "json.hpp"

#include "gnnsim/file_layout.hpp"
#include "gnnsim/nsconfig.hpp"
#include "gnnsim/rng.hpp"
#include "gnnsim/virtual_clock.hpp"

namespace gnnsim {

std::string to_string(SamplerKind k) {
  return k == SamplerKind::NeighborHops ? "neighbor" : "walk";
}

SamplerKind parse_sampler_kind(const std::string& s) {
  if (s == "neighbor") return SamplerKind::NeighborHops;
  if (s == "walk") return SamplerKind::RandomWalk;
  throw ConfigError("unknown sampler '" + s + "' (expected neighbor or walk)");
}

void PipelineConfig::validate() const {
  if (workers == 0) throw ConfigError("pipeline.workers must be >= 1");
  if (batches == 0) throw ConfigError("pipeline.batches must be >= 1");
  if (gpu_batch_time_us < 0) throw ConfigError("pipeline.gpu_batch_time_us must be >= 0");
}

std::vector<NodeId> draw_batch_targets(std::uint64_t num_nodes, std::uint32_t k,
                                       std::uint64_t run_seed, std::uint64_t batch) {
  const std::uint64_t take = std::min<std::uint64_t>(k, num_nodes);
  CounterRng rng(mix64(mix64(run_seed, 0x746172676574ULL), batch));
  std::vector<NodeId> out;
  out.reserve(take);
  std::unordered_map<std::uint64_t, std::uint64_t> perm;
  auto at = [&](std::uint64_t i) {
    auto it = perm.find(i);
    return it == perm.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < take; ++i) {
    const std::uint64_t j = i + rng.bounded(num_nodes - i);
    const std::uint64_t vi = at(i), vj = at(j);
    out.push_back(vj);
    perm[j] = vi;
  }
  return out;
}

namespace {

struct BatchWork {
  std::uint32_t index = 0;
  std::vector<NodeId> targets;
  Subgraph subgraph;
  std::vector<NodeId> read_sequence;
  SimTime start = 0, sample_done = 0, gather_done = 0, transfer_done = 0;
};
using BatchPtr = std::shared_ptr<BatchWork>;

// Drives one full run on the virtual clock: worker state machines, the
// bounded hand-off queue, and the consumer.
class Runner {
 public:
  Runner(const CsrGraph& g, const SimSetup& s)
      : g_(g),
        setup_(s),
        layout_(GraphFileLayout::for_graph(g, s.ssd.logical_block_bytes)),
        dev_(s.ssd, layout_.file_bytes()),
        gpu_link_(s.ssd.link_bytes_per_us()),
        os_cache_(s.host.resolved_page_cache_pages(layout_.file_bytes(),
                                                   s.ssd.logical_block_bytes)),
        source_(g),
        queue_cap_(s.pipeline.resolved_queue_depth()) {}

  RunMetrics run() {
    const PipelineConfig& pipe = setup_.pipeline;
    setup_.ssd.validate();
    setup_.host.validate();
    setup_.isp.validate();
    setup_.sampling.validate();
    if (pipe.sampler == SamplerKind::RandomWalk) setup_.walk.validate();
    pipe.validate();
    if (g_.num_nodes() == 0) throw ConfigError("graph has no nodes");
    if (pipe.path == AccessPath::Isp && pipe.sampler == SamplerKind::RandomWalk)
      throw ConfigError("random-walk sampling has no on-device command form; use a host path");

    for (std::uint32_t w = 0; w < pipe.workers; ++w) {
      switch (pipe.path) {
        case AccessPath::InMemory:
          readers_.push_back(std::make_unique<InMemoryReader>(g_, layout_, setup_.host));
          break;
        case AccessPath::MmapPageCache:
          readers_.push_back(std::make_unique<MmapReader>(g_, layout_, setup_.host, dev_,
                                                          os_cache_, counters_));
          break;
        case AccessPath::DirectIo:
          readers_.push_back(
              std::make_unique<DirectIoReader>(g_, layout_, setup_.host, dev_, counters_));
          break;
        case AccessPath::Isp:
          break;
      }
    }
    if (pipe.path == AccessPath::Isp) {
      firmware_ = std::make_unique<IspFirmware>(clock_, dev_, g_, layout_, setup_.isp,
                                                setup_.sampling.with_replacement, counters_);
    }

    digests_.assign(pipe.batches, 0);
    if (pipe.capture_subgraphs) captured_.resize(pipe.batches);
    for (std::uint32_t w = 0; w < pipe.workers; ++w) {
      clock_.schedule_at(0, [this, w] { worker_next(w); });
    }
    clock_.run();
    if (!failure_.empty()) throw SimError(failure_);
    if (consumed_ != pipe.batches) throw SimError("pipeline stalled before finishing all batches");
    return finish_metrics();
  }

 private:
  void worker_next(std::size_t w) {
    if (!failure_.empty()) return;
    if (next_batch_ >= setup_.pipeline.batches) return;
    const std::uint32_t b = next_batch_++;
    auto work = std::make_shared<BatchWork>();
    work->index = b;
    work->start = clock_.now();
    work->targets = draw_batch_targets(g_.num_nodes(), setup_.sampling.batch_size,
                                       setup_.sampling.seed, b);
    if (setup_.pipeline.path == AccessPath::Isp) {
      if (setup_.isp.per_hop_round_trip)
        isp_hop_round(w, work, make_hop_state(work), 0, clock_.now());
      else
        isp_sample(w, work, clock_.now());
      return;
    }

    const std::uint64_t seed_base = batch_seed_base(setup_.sampling.seed, b);
    SubgraphBuild sb =
        setup_.pipeline.sampler == SamplerKind::NeighborHops
            ? build_subgraph_traced(source_, work->targets, setup_.sampling, seed_base)
            : random_walk_sample_traced(source_, work->targets, setup_.walk, seed_base);
    work->subgraph = std::move(sb.subgraph);
    work->read_sequence = std::move(sb.read_sequence);
    readers_[w]->on_batch_start();
    if (setup_.pipeline.path == AccessPath::InMemory) {
      // Purely worker-local DRAM arithmetic: no shared state, so the whole
      // replay folds into one event.
      SimTime t = clock_.now();
      for (NodeId v : work->read_sequence) t = readers_[w]->read(t, v);
      clock_.schedule_at(t, [this, w, work] { after_sampling(w, work); });
    } else {
      replay_read(w, work, 0);
    }
  }

  // One event per edge-list fetch, so concurrent workers interleave on the
  // device in arrival order.
  void replay_read(std::size_t w, const BatchPtr& work, std::size_t idx) {
    if (!failure_.empty()) return;
    if (idx == work->read_sequence.size()) {
      after_sampling(w, work);
      return;
    }
    const SimTime done = readers_[w]->read(clock_.now(), work->read_sequence[idx]);
    clock_.schedule_at(done, [this, w, work, idx] { replay_read(w, work, idx + 1); });
  }

  // ---- ISP path, whole-batch commands ----

  struct IspBatchState {
    std::vector<IspPayloadView> views;
    std::size_t outstanding = 0;
    SimTime done_at = 0;
    std::string error;
  };

  void isp_sample(std::size_t w, const BatchPtr& work, SimTime t) {
    const std::uint32_t gran = setup_.isp.coalesce_granularity
                                   ? setup_.isp.coalesce_granularity
                                   : setup_.sampling.batch_size;
    const auto slices = coalesce_targets(work->targets, gran);
    const std::uint64_t seed_base = batch_seed_base(setup_.sampling.seed, work->index);
    const std::size_t layers = setup_.sampling.fanouts.size();
    auto st = std::make_shared<IspBatchState>();
    st->views.resize(slices.size());
    st->outstanding = slices.size();
    SimTime ts = t;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      ts += setup_.ssd.nvme_cmd_overhead_us;
      NsConfigBlob blob =
          make_nsconfig(g_, layout_, slices[i], setup_.sampling.fanouts, seed_base);
      firmware_->submit(ts, encode_nsconfig(blob),
                        [this, w, work, st, i, layers](const IspOutcome& out) {
                          if (!out.ok) {
                            if (st->error.empty()) st->error = out.error;
                          } else {
                            st->views[i] = decode_isp_payload(
                                encode_isp_payload(out.result, layers), layers);
                          }
                          st->done_at = std::max(st->done_at, clock_.now());
                          if (--st->outstanding == 0) isp_finish(w, work, st);
                        });
    }
  }

  void isp_finish(std::size_t w, const BatchPtr& work, const std::shared_ptr<IspBatchState>& st) {
    if (!st->error.empty()) {
      fail_run("device request failed: " + st->error);
      return;
    }
    try {
      work->subgraph = reassemble_subgraph(g_, work->targets, setup_.sampling, st->views);
    } catch (const std::exception& e) {
      fail_run(e.what());
      return;
    }
    after_sampling(w, work);
  }

  // ---- ISP path, hop-at-a-time round trips ----

  struct HopState {
    std::vector<std::vector<NodeId>> frontier;                // per target
    std::vector<std::vector<std::vector<NodeId>>> collected;  // [target][hop]
    std::vector<std::size_t> record_target;                   // this round's flattening
    std::vector<IspPayloadView> views;
    std::size_t outstanding = 0;
    std::string error;
  };

  std::shared_ptr<HopState> make_hop_state(const BatchPtr& work) {
    auto st = std::make_shared<HopState>();
    const std::size_t n = work->targets.size();
    st->frontier.resize(n);
    st->collected.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      st->frontier[i] = {work->targets[i]};
      st->collected[i].resize(setup_.sampling.fanouts.size());
    }
    return st;
  }

  void isp_hop_round(std::size_t w, const BatchPtr& work, const std::shared_ptr<HopState>& st,
                     std::uint32_t hop, SimTime t) {
    if (!failure_.empty()) return;
    if (hop == setup_.sampling.fanouts.size()) {
      IspPayloadView all;
      all.ids = st->collected;
      try {
        work->subgraph =
            reassemble_subgraph(g_, work->targets, setup_.sampling, {&all, 1});
      } catch (const std::exception& e) {
        fail_run(e.what());
        return;
      }
      after_sampling(w, work);
      return;
    }

    std::vector<NodeId> parents;
    st->record_target.clear();
    for (std::size_t tgt = 0; tgt < st->frontier.size(); ++tgt) {
      for (NodeId v : st->frontier[tgt]) {
        parents.push_back(v);
        st->record_target.push_back(tgt);
      }
    }
    if (parents.empty()) {
      isp_hop_round(w, work, st, hop + 1, t);
      return;
    }

    const std::uint32_t gran = setup_.isp.coalesce_granularity
                                   ? setup_.isp.coalesce_granularity
                                   : setup_.sampling.batch_size;
    const std::uint32_t fanout[1] = {setup_.sampling.fanouts[hop]};
    const std::uint64_t hop_seed =
        hop_seed_base(batch_seed_base(setup_.sampling.seed, work->index), hop);
    const auto slices = coalesce_targets(parents, gran);
    st->views.assign(slices.size(), {});
    st->outstanding = slices.size();
    SimTime ts = t;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      ts += setup_.ssd.nvme_cmd_overhead_us;
      NsConfigBlob blob = make_nsconfig(g_, layout_, slices[i], fanout, hop_seed);
      firmware_->submit(ts, encode_nsconfig(blob),
                        [this, w, work, st, i, hop](const IspOutcome& out) {
                          if (!out.ok) {
                            if (st->error.empty()) st->error = out.error;
                          } else {
                            st->views[i] =
                                decode_isp_payload(encode_isp_payload(out.result, 1), 1);
                          }
                          if (--st->outstanding == 0) finish_hop_round(w, work, st, hop);
                        });
    }
  }

  void finish_hop_round(std::size_t w, const BatchPtr& work, const std::shared_ptr<HopState>& st,
                        std::uint32_t hop) {
    if (!st->error.empty()) {
      fail_run("device request failed: " + st->error);
      return;
    }
    std::size_t rec = 0;
    for (const auto& view : st->views) {
      for (const auto& per_record : view.ids) {
        auto& sink = st->collected[st->record_target[rec++]][hop];
        sink.insert(sink.end(), per_record[0].begin(), per_record[0].end());
      }
    }
    for (std::size_t tgt = 0; tgt < st->frontier.size(); ++tgt) {
      const auto& kids = st->collected[tgt][hop];
      std::unordered_set<NodeId> seen;
      st->frontier[tgt].clear();
      for (NodeId v : kids) {
        if (seen.insert(v).second) st->frontier[tgt].push_back(v);
      }
    }
    isp_hop_round(w, work, st, hop + 1, clock_.now());
  }

  // ---- common tail: feature gather, transfer to GPU, hand-off ----

  void after_sampling(std::size_t w, const BatchPtr& work) {
    work->sample_done = clock_.now();
    const std::uint64_t bytes =
        std::uint64_t(work->subgraph.sampled_set.size()) * setup_.pipeline.feature_bytes_per_node;
    const std::uint64_t blocks = div_ceil(bytes, setup_.ssd.logical_block_bytes);
    const SimTime gathered =
        work->sample_done + double(blocks) * setup_.host.dram_read_us_per_block;
    work->gather_done = gathered;
    clock_.schedule_at(gathered, [this, w, work, bytes] {
      const SimTime sent =
          gpu_link_.transfer(clock_.now(), bytes, ThroughputLink::Dir::AToB);
      work->transfer_done = sent;
      clock_.schedule_at(sent, [this, w, work] { try_push(w, work); });
    });
  }

  void try_push(std::size_t w, const BatchPtr& work) {
    if (!failure_.empty()) return;
    if (queue_len_ < queue_cap_) {
      do_push(work);
      worker_next(w);
    } else {
      parked_.push_back({w, work});
    }
  }

  void do_push(const BatchPtr& work) {
    stages_.sampling_us += work->sample_done - work->start;
    stages_.feature_gather_us += work->gather_done - work->sample_done;
    stages_.host_transfer_us += work->transfer_done - work->gather_done;
    digests_[work->index] = subgraph_digest(work->subgraph);
    if (setup_.pipeline.capture_subgraphs) captured_[work->index] = work->subgraph;
    work->subgraph = {};
    work->read_sequence.clear();
    ++queue_len_;
    gpu_kick();
  }

  void gpu_kick() {
    if (gpu_busy_ || queue_len_ == 0 || !failure_.empty()) return;
    gpu_busy_ = true;
    --queue_len_;
    wake_parked();
    const double dur = setup_.pipeline.gpu_batch_time_us;
    gpu_busy_us_ += dur;
    stages_.training_us += dur;
    ++consumed_;
    clock_.schedule_in(dur, [this] {
      last_train_end_ = clock_.now();
      gpu_busy_ = false;
      gpu_kick();
    });
  }

  void wake_parked() {
    if (parked_.empty() || queue_len_ >= queue_cap_) return;
    auto [w, work] = parked_.front();
    parked_.pop_front();
    do_push(work);
    worker_next(w);
  }

  void fail_run(std::string msg) {
    if (failure_.empty()) failure_ = std::move(msg);
  }

  RunMetrics finish_metrics() {
    RunMetrics m;
    m.workload.graph_nodes = g_.num_nodes();
    m.workload.graph_edges = g_.num_edges();
    m.workload.batch_size = setup_.sampling.batch_size;
    m.workload.fanouts = setup_.sampling.fanouts;
    m.workload.with_replacement = setup_.sampling.with_replacement;
    m.workload.sampler = setup_.pipeline.sampler;
    if (setup_.pipeline.sampler == SamplerKind::RandomWalk) {
      m.workload.walk_length = setup_.walk.walk_length;
      m.workload.walks_per_target = setup_.walk.walks_per_target;
    }
    m.workload.seed = setup_.sampling.seed;
    m.workload.batches = setup_.pipeline.batches;
    m.workload.feature_bytes_per_node = setup_.pipeline.feature_bytes_per_node;
    m.path = setup_.pipeline.path;
    m.workers = setup_.pipeline.workers;
    m.queue_depth = queue_cap_;
    m.total_time_us = last_train_end_;
    m.gpu_idle_fraction =
        last_train_end_ > 0 ? 1.0 - gpu_busy_us_ / last_train_end_ : 0.0;
    m.stages = stages_;
    m.counters = counters_;
    m.bytes_flash_read = dev_.flash_bytes_read();
    m.subgraphs_produced = consumed_;
    std::uint64_t d = 0;
    for (std::uint64_t x : digests_) d = mix64(d ^ x);
    m.content_digest = d;
    m.captured = std::move(captured_);
    return m;
  }

  const CsrGraph& g_;
  SimSetup setup_;
  GraphFileLayout layout_;
  VirtualClock clock_;
  SsdDevice dev_;
  ThroughputLink gpu_link_;
  LruCache<std::uint64_t> os_cache_;
  RunCounters counters_;
  GraphSource source_;
  std::vector<std::unique_ptr<EdgeListReader>> readers_;
  std::unique_ptr<IspFirmware> firmware_;

  std::uint32_t next_batch_ = 0;
  std::uint32_t queue_cap_;
  std::uint32_t queue_len_ = 0;
  std::deque<std::pair<std::size_t, BatchPtr>> parked_;
  bool gpu_busy_ = false;
  double gpu_busy_us_ = 0;
  SimTime last_train_end_ = 0;
  std::uint32_t consumed_ = 0;
  std::string failure_;
  StageTotals stages_;
  std::vector<std::uint64_t> digests_;
  std::vector<Subgraph> captured_;
};

}  // namespace

RunMetrics run_pipeline(const CsrGraph& g, const SimSetup& setup) {
  return Runner(g, setup).run();
}

PathComparison compare_paths(const CsrGraph& g, const SimSetup& base,
                             std::span<const AccessPath> paths) {
  PathComparison pc;
  for (AccessPath p : paths) {
    SimSetup s = base;
    s.pipeline.path = p;
    RunMetrics m = run_pipeline(g, s);
    if (pc.runs.empty()) {
      pc.workload = m.workload;
    } else {
      if (!(m.workload == pc.workload))
        throw SimError("comparison spans different workloads");
      if (m.content_digest != pc.runs.front().content_digest)
        throw SimError("access paths produced different sampled content");
    }
    pc.runs.push_back(std::move(m));
  }
  return pc;
}

namespace {

std::string fanouts_label(const std::vector<std::uint32_t>& fs) {
  std::string s;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(fs[i]);
  }
  return s;
}

std::string hex_digest(std::uint64_t d) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, d);
  return buf;
}

}  // namespace

std::string metrics_json(const RunMetrics& m) {
  nlohmann::ordered_json j;
  j["workload"] = {{"graph_nodes", m.workload.graph_nodes},
                   {"graph_edges", m.workload.graph_edges},
                   {"batch_size", m.workload.batch_size},
                   {"fanouts", m.workload.fanouts},
                   {"with_replacement", m.workload.with_replacement},
                   {"sampler", to_string(m.workload.sampler)},
                   {"walk_length", m.workload.walk_length},
                   {"walks_per_target", m.workload.walks_per_target},
                   {"seed", m.workload.seed},
                   {"batches", m.workload.batches},
                   {"feature_bytes_per_node", m.workload.feature_bytes_per_node}};
  j["path"] = to_string(m.path);
  j["workers"] = m.workers;
  j["queue_depth"] = m.queue_depth;
  j["total_time_us"] = m.total_time_us;
  j["gpu_idle_fraction"] = m.gpu_idle_fraction;
  j["stages"] = {{"sampling_us", m.stages.sampling_us},
                 {"feature_gather_us", m.stages.feature_gather_us},
                 {"host_transfer_us", m.stages.host_transfer_us},
                 {"training_us", m.stages.training_us}};
  j["traffic"] = {{"bytes_ssd_to_host", m.counters.bytes_ssd_to_host},
                  {"bytes_host_to_ssd", m.counters.bytes_host_to_ssd},
                  {"bytes_flash_read", m.bytes_flash_read},
                  {"nvme_commands", m.counters.nvme_commands},
                  {"page_faults", m.counters.page_faults},
                  {"scratchpad_evictions", m.counters.scratchpad_evictions},
                  {"isp_request_failures", m.counters.isp_request_failures}};
  j["subgraphs_produced"] = m.subgraphs_produced;
  j["content_digest"] = hex_digest(m.content_digest);
  return j.dump(2) + "\n";
}

std::string metrics_csv_header() {
  return "path,workers,queue_depth,batch_size,fanouts,with_replacement,sampler,seed,batches,"
         "feature_bytes_per_node,total_time_us,gpu_idle_fraction,sampling_us,feature_gather_us,"
         "host_transfer_us,training_us,bytes_ssd_to_host,bytes_host_to_ssd,bytes_flash_read,"
         "nvme_commands,page_faults,scratchpad_evictions,isp_request_failures,"
         "subgraphs_produced,content_digest";
}

std::string metrics_csv_row(const RunMetrics& m) {
  std::ostringstream os;
  char num[64];
  auto f = [&](double v) {
    std::snprintf(num, sizeof num, "%.6f", v);
    return std::string(num);
  };
  os << to_string(m.path) << ',' << m.workers << ',' << m.queue_depth << ','
     << m.workload.batch_size << ',' << fanouts_label(m.workload.fanouts) << ','
     << (m.workload.with_replacement ? 1 : 0) << ',' << to_string(m.workload.sampler) << ','
     << m.workload.seed << ',' << m.workload.batches << ',' << m.workload.feature_bytes_per_node
     << ',' << f(m.total_time_us) << ',' << f(m.gpu_idle_fraction) << ','
     << f(m.stages.sampling_us) << ',' << f(m.stages.feature_gather_us) << ','
     << f(m.stages.host_transfer_us) << ',' << f(m.stages.training_us) << ','
     << m.counters.bytes_ssd_to_host << ',' << m.counters.bytes_host_to_ssd << ','
     << m.bytes_flash_read << ',' << m.counters.nvme_commands << ',' << m.counters.page_faults
     << ',' << m.counters.scratchpad_evictions << ',' << m.counters.isp_request_failures << ','
     << m.subgraphs_produced << ',' << hex_digest(m.content_digest);
  return os.str();
}

}  // namespace gnnsim
