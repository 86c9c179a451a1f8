// Release gate: thirteen end-to-end checks, one verdict line each. Every
// numeric gate is pinned in this file, never in config, so a regression
// cannot hide behind a tweaked knob. Exits nonzero when any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnnsim/csr_graph.hpp"
#include "gnnsim/kronecker.hpp"
#include "gnnsim/lru_cache.hpp"
#include "gnnsim/nsconfig.hpp"
#include "gnnsim/pipeline.hpp"
#include "gnnsim/rng.hpp"
#include "gnnsim/sampling.hpp"
#include "gnnsim/ssd_model.hpp"
#include "gnnsim/sweep.hpp"

using namespace gnnsim;

namespace {

// Wall-clock budgets for the heavy checks and the calibrated bands the
// performance checks must land in.
constexpr double kEquivalenceTimeLimitSec = 60.0;
constexpr double kOrderingTimeLimitSec = 300.0;
constexpr double kMmapSlowdownLo = 5.0;
constexpr double kMmapSlowdownHi = 20.0;
constexpr double kDeviceSamplingSpeedupLo = 5.0;
constexpr double kDeviceSamplingSpeedupHi = 13.0;
constexpr double kTrafficReductionFloor = 10.0;
constexpr double kZeroCostIdleMax = 0.02;
constexpr double kHalfIdleTolerance = 0.05;
// chi-square critical values at significance 0.001: scipy.stats.chi2.ppf(0.999, df)
constexpr double kChi2Df4 = 18.46682695290317;
constexpr double kChi2Df6 = 22.457744484825323;
constexpr double kChi2Df9 = 27.877164871256568;

using WallClock = std::chrono::steady_clock;

double since(WallClock::time_point t0) {
  return std::chrono::duration<double>(WallClock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

CsrGraph random_graph(std::mt19937_64& rng, NodeId n, unsigned max_degree) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < n; ++u) {  // last node stays degree 0
    const unsigned d = rng() % (max_degree + 1);
    for (unsigned i = 0; i < d; ++i) edges.push_back({u, rng() % n});
  }
  return CsrGraph::from_edges(n, edges);
}

CsrGraph ring_graph(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n);
  for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return CsrGraph::from_edges(n, edges);
}

// Deliberately naive LRU over a vector, front = most recent; the oracle
// both cache models are held against.
class NaiveLru {
 public:
  explicit NaiveLru(std::size_t cap) : cap_(cap) {}

  bool touch(std::uint64_t k) {
    auto it = std::find(order_.begin(), order_.end(), k);
    if (it == order_.end()) return false;
    order_.erase(it);
    order_.insert(order_.begin(), k);
    return true;
  }

  std::optional<std::uint64_t> insert(std::uint64_t k) {
    if (cap_ == 0) return std::nullopt;
    if (touch(k)) return std::nullopt;
    std::optional<std::uint64_t> evicted;
    if (order_.size() == cap_) {
      evicted = order_.back();
      order_.pop_back();
    }
    order_.insert(order_.begin(), k);
    return evicted;
  }

  const std::vector<std::uint64_t>& order() const { return order_; }

 private:
  std::size_t cap_;
  std::vector<std::uint64_t> order_;
};

// 1. The device path must hand back bit-identical subgraphs to the host
// sampler across random graphs, fanouts, seeds, and command slicings.
Outcome check_sampler_equivalence() {
  const auto t0 = WallClock::now();
  std::mt19937_64 gen(0xACC01);
  std::uint64_t instances = 0, mismatches = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const CsrGraph g = random_graph(gen, 100 + gen() % 9901, 1 + gen() % 12);
    SimSetup s;
    s.sampling.batch_size = 64;
    s.sampling.fanouts = {std::uint32_t(1 + gen() % 8), std::uint32_t(1 + gen() % 4)};
    s.sampling.with_replacement = gen() % 2 == 0;
    s.sampling.seed = gen();
    s.pipeline.workers = 4;
    s.pipeline.batches = 40;
    s.pipeline.capture_subgraphs = true;
    if (trial % 5 == 4) s.isp.coalesce_granularity = 16;  // slice some batches

    const RunMetrics host = run_pipeline(g, s);
    SimSetup on_device = s;
    on_device.pipeline.path = AccessPath::Isp;
    const RunMetrics dev = run_pipeline(g, on_device);

    if (host.captured.size() != dev.captured.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t i = 0; i < host.captured.size(); ++i) {
      ++instances;
      if (!(host.captured[i] == dev.captured[i])) ++mismatches;
    }
  }
  const double secs = since(t0);
  const bool pass = mismatches == 0 && instances >= 1000 && secs < kEquivalenceTimeLimitSec;
  return {pass, fmt("%llu/%llu subgraphs equal, %.1fs", (unsigned long long)(instances - mismatches),
                    (unsigned long long)instances, secs)};
}

// Dense multiplicity matrix of a multigraph, row-major n x n.
std::vector<std::uint32_t> dense_counts(const CsrGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> m(n * n, 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) ++m[std::size_t(u) * n + v];
  }
  return m;
}

// Kronecker product of an n x n multiplicity matrix with a d x d 0/1 base.
std::vector<std::uint32_t> dense_kronecker(const std::vector<std::uint32_t>& a, std::size_t n,
                                           const std::vector<std::uint32_t>& b, std::size_t d) {
  const std::size_t nd = n * d;
  std::vector<std::uint32_t> out(nd * nd, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t aij = a[i * n + j];
      if (!aij) continue;
      for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = 0; q < d; ++q) {
          if (b[p * d + q]) out[(i * d + p) * nd + (j * d + q)] = aij;
        }
      }
    }
  }
  return out;
}

// 2. Expansion must obey the multiplicative count law and agree cell for
// cell with a dense product computed from scratch.
Outcome check_expansion_oracle() {
  std::mt19937_64 gen(0xACC02);
  const int cases = 50;
  int good = 0;
  for (int cse = 0; cse < cases; ++cse) {
    const std::uint64_t n = 2 + gen() % 63;
    const std::uint64_t e = 1 + gen() % (4 * n);
    std::vector<std::pair<NodeId, NodeId>> edges(e);
    for (auto& [a, b] : edges) {
      a = gen() % n;
      b = gen() % n;
    }
    const CsrGraph seed = CsrGraph::from_edges(n, edges);

    KroneckerBase base;
    base.dim = 1 + gen() % 4;
    for (std::uint32_t r = 0; r < base.dim; ++r) {
      for (std::uint32_t c = 0; c < base.dim; ++c) base.cells.push_back({r, c});
    }
    std::shuffle(base.cells.begin(), base.cells.end(), gen);
    base.cells.resize(1 + gen() % base.cells.size());
    base.reps = gen() % 4;

    const CsrGraph big = kronecker_expand(seed, base);

    std::uint64_t want_nodes = seed.num_nodes(), want_edges = seed.num_edges();
    for (std::uint32_t r = 0; r < base.reps; ++r) {
      want_nodes *= base.dim;
      want_edges *= base.cells.size();
    }
    if (big.num_nodes() != want_nodes || big.num_edges() != want_edges) continue;

    std::vector<std::uint32_t> bmat(std::size_t(base.dim) * base.dim, 0);
    for (const auto& [r, c] : base.cells) bmat[std::size_t(r) * base.dim + c] = 1;
    std::vector<std::uint32_t> want = dense_counts(seed);
    std::size_t cur = seed.num_nodes();
    for (std::uint32_t r = 0; r < base.reps; ++r) {
      want = dense_kronecker(want, cur, bmat, base.dim);
      cur *= base.dim;
    }
    if (dense_counts(big) == want) ++good;
  }
  return {good == cases, fmt("%d/%d cases, counts and adjacency vs dense product", good, cases)};
}

// 3. Both cache models, the host-side page cache and the device's internal
// page buffer, must track a brute-force LRU event for event.
Outcome check_cache_oracles() {
  std::mt19937_64 rng(0xACC03);
  std::uint64_t events = 0, bad = 0;

  for (std::size_t cap : {2ul, 9ul, 57ul}) {
    LruCache<std::uint64_t> cache(cap);
    NaiveLru oracle(cap);
    const std::uint64_t keyspace = cap + cap / 2 + 4;
    for (int ev = 0; ev < 10000; ++ev) {
      const std::uint64_t k = rng() % keyspace;
      ++events;
      if (rng() % 2) {
        if (cache.touch(k) != oracle.touch(k)) ++bad;
      } else {
        if (cache.insert(k) != oracle.insert(k)) ++bad;
      }
    }
    if (cache.keys_mru_order() != oracle.order()) ++bad;
  }

  SsdConfig cfg;
  cfg.page_buffer_bytes = 8ull * cfg.flash_page_bytes;
  SsdDevice dev(cfg, 1ull << 26);
  NaiveLru oracle(8);
  const std::uint64_t bpp = cfg.blocks_per_page();
  for (int ev = 0; ev < 10000; ++ev) {
    const std::uint64_t page = rng() % 14;
    const std::uint64_t lba = page * bpp + rng() % bpp;
    ++events;
    const auto r = dev.read_blocks(0, std::span<const std::uint64_t>(&lba, 1));
    const bool hit = oracle.touch(page);
    if (!hit) oracle.insert(page);
    if (r.page_misses != (hit ? 0u : 1u)) ++bad;
  }
  return {bad == 0, fmt("%llu events across host cache and device buffer, %llu disagreements",
                        (unsigned long long)events, (unsigned long long)bad)};
}

// The performance checks share one synthetic workload: a 1000-node seed
// whose destinations follow a power-skewed draw (x^10 concentrates mass
// near node 0, keeping the hot pages cacheable), grown by ten reps of a
// 3-cell base to 1,024,000 nodes and 110,008,287 edges, average degree
// 107.4. Only exactly-specified arithmetic is used, so every platform
// builds the same graph bit for bit.
CsrGraph make_calibrated_graph() {
  const std::uint64_t seed_nodes = 1000, seed_edges = 1863;
  std::mt19937_64 rng(20260825);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(seed_edges);
  for (std::uint64_t i = 0; i < seed_edges; ++i) {
    const NodeId u = rng() % seed_nodes;
    const double x = double(rng() >> 11) * 0x1.0p-53;  // uniform in [0, 1)
    double p = x;
    for (int k = 1; k < 10; ++k) p *= x;
    const NodeId v = NodeId(p * double(seed_nodes)) % seed_nodes;
    edges.push_back({u, v});
  }
  const CsrGraph seed = CsrGraph::from_edges(seed_nodes, edges);
  const KroneckerBase base{2, {{0, 0}, {0, 1}, {1, 0}}, 10};
  return kronecker_expand(seed, base);
}

RunMetrics run_calibrated(const CsrGraph& g, AccessPath path, std::uint32_t workers,
                          std::uint32_t batches, std::uint32_t granularity, double fanout_scale) {
  SimSetup s;
  s.sampling.seed = 1;
  s.pipeline.path = path;
  s.pipeline.workers = workers;
  s.pipeline.batches = batches;
  s.isp.coalesce_granularity = granularity;
  if (fanout_scale != 1.0) s = apply_sweep_value(s, SweepParameter::FanoutScale, fanout_scale);
  return run_pipeline(g, s);
}

struct Calibrated {
  CsrGraph g;
  RunMetrics in_mem, isp, direct, mmap;  // defaults: 12 workers, 100 batches
  double run_secs = 0;                   // the four runs, graph build excluded
};

Calibrated make_calibrated() {
  Calibrated c;
  c.g = make_calibrated_graph();
  if (c.g.num_nodes() != 1024000 || c.g.num_edges() != 110008287)
    throw SimError("calibrated graph drifted from its frozen shape");
  const auto t0 = WallClock::now();
  c.in_mem = run_calibrated(c.g, AccessPath::InMemory, 12, 100, 0, 1.0);
  c.isp = run_calibrated(c.g, AccessPath::Isp, 12, 100, 0, 1.0);
  c.direct = run_calibrated(c.g, AccessPath::DirectIo, 12, 100, 0, 1.0);
  c.mmap = run_calibrated(c.g, AccessPath::MmapPageCache, 12, 100, 0, 1.0);
  c.run_secs = since(t0);
  return c;
}

// 4. End-to-end time must order in-memory < on-device < direct I/O < mmap.
Outcome check_path_ordering(const Calibrated& c) {
  const bool ordered = c.in_mem.total_time_us < c.isp.total_time_us &&
                       c.isp.total_time_us < c.direct.total_time_us &&
                       c.direct.total_time_us < c.mmap.total_time_us;
  return {ordered && c.run_secs < kOrderingTimeLimitSec,
          fmt("in_memory %.0f < isp %.0f < direct %.0f < mmap %.0f us, %.1fs",
              c.in_mem.total_time_us, c.isp.total_time_us, c.direct.total_time_us,
              c.mmap.total_time_us, c.run_secs)};
}

// 5. Faulting through mmap must cost a single-digit-to-low-double-digit
// multiple of the all-DRAM run.
Outcome check_mmap_slowdown(const Calibrated& c) {
  const double r = c.mmap.total_time_us / c.in_mem.total_time_us;
  return {r >= kMmapSlowdownLo && r <= kMmapSlowdownHi,
          fmt("%.2fx, band [%.0f, %.0f]", r, kMmapSlowdownLo, kMmapSlowdownHi)};
}

// 6. With one worker the on-device sampler's sampling-stage advantage over
// mmap must sit inside the calibrated band.
Outcome check_single_worker_speedup(const Calibrated& c) {
  const RunMetrics mm = run_calibrated(c.g, AccessPath::MmapPageCache, 1, 25, 0, 1.0);
  const RunMetrics is = run_calibrated(c.g, AccessPath::Isp, 1, 25, 0, 1.0);
  const double sp = mm.stages.sampling_us / is.stages.sampling_us;
  return {sp >= kDeviceSamplingSpeedupLo && sp <= kDeviceSamplingSpeedupHi,
          fmt("sampling-stage speedup %.2f, band [%.0f, %.0f]", sp, kDeviceSamplingSpeedupLo,
              kDeviceSamplingSpeedupHi)};
}

// 7. Returning sampled ids instead of raw blocks must slash device-to-host
// traffic; the exact ratio is reported.
Outcome check_traffic_reduction(const Calibrated& c) {
  const double r =
      double(c.direct.counters.bytes_ssd_to_host) / double(c.isp.counters.bytes_ssd_to_host);
  return {r >= kTrafficReductionFloor,
          fmt("direct io moves %.2fx the bytes (floor %.0f)", r, kTrafficReductionFloor)};
}

// 8. Splitting a batch into more, smaller commands may never raise the
// end-to-end speedup over mmap.
Outcome check_granularity_trend(const Calibrated& c) {
  std::string series;
  double prev = 1e300;
  bool mono = true;
  for (std::uint32_t gran : {1024u, 512u, 128u, 32u, 8u, 1u}) {
    const RunMetrics m = run_calibrated(c.g, AccessPath::Isp, 12, 100, gran, 1.0);
    const double sp = c.mmap.total_time_us / m.total_time_us;
    series += fmt("%s%.4f", series.empty() ? "" : " ", sp);
    if (sp > prev) mono = false;
    prev = sp;
  }
  return {mono, fmt("speedup at 1024/512/128/32/8/1 targets per command: %s", series.c_str())};
}

// 9. More workers time-share the two embedded cores, so the advantage over
// direct I/O may never grow with the worker count.
Outcome check_worker_trend(const Calibrated& c) {
  std::string series;
  double prev = 1e300;
  bool mono = true;
  for (std::uint32_t w : {1u, 2u, 4u, 8u, 12u}) {
    const RunMetrics di = run_calibrated(c.g, AccessPath::DirectIo, w, 30, 0, 1.0);
    const RunMetrics is = run_calibrated(c.g, AccessPath::Isp, w, 30, 0, 1.0);
    const double sp = di.total_time_us / is.total_time_us;
    series += fmt("%s%.3f", series.empty() ? "" : " ", sp);
    if (sp > prev) mono = false;
    prev = sp;
  }
  return {mono, fmt("speedup at 1/2/4/8/12 workers: %s", series.c_str())};
}

// 10. Scaling every fanout up shifts work onto the fixed-rate cores, so
// the advantage over mmap must fall strictly with the scale.
Outcome check_fanout_trend(const Calibrated& c) {
  std::string series;
  double prev = 1e300;
  bool falling = true;
  for (double fs : {0.5, 1.0, 2.0}) {
    const RunMetrics mm = run_calibrated(c.g, AccessPath::MmapPageCache, 2, 30, 0, fs);
    const RunMetrics is = run_calibrated(c.g, AccessPath::Isp, 2, 30, 0, fs);
    const double sp = mm.total_time_us / is.total_time_us;
    series += fmt("%s%.3f", series.empty() ? "" : " ", sp);
    if (sp >= prev) falling = false;
    prev = sp;
  }
  return {falling, fmt("speedup at fanout x0.5/x1/x2: %s", series.c_str())};
}

// 11. Per-neighbor draws must pass a chi-square uniformity test on nodes
// of several degrees, and rebuilding with one seed must be bit-stable.
Outcome check_sampler_statistics() {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < 5; ++i) edges.push_back({0, 100 + i});
  for (NodeId i = 0; i < 7; ++i) edges.push_back({1, 200 + i});
  for (NodeId i = 0; i < 10; ++i) edges.push_back({2, 300 + i});
  const CsrGraph g = CsrGraph::from_edges(310, edges);

  const struct {
    NodeId node;
    double crit;
  } probes[] = {{0, kChi2Df4}, {1, kChi2Df6}, {2, kChi2Df9}};
  constexpr int kDraws = 100000;
  std::string stats;
  bool uniform = true;
  for (const auto& pr : probes) {
    CounterRng rng(sample_stream_key(hop_seed_base(20260825, 0), pr.node));
    const auto nbrs = g.neighbors(pr.node);
    std::map<NodeId, int> counts;
    for (int i = 0; i < kDraws; ++i) ++counts[sample_neighbors(nbrs, 1, true, rng)[0]];
    double chi2 = 0;
    const double expect = double(kDraws) / double(nbrs.size());
    for (NodeId v : nbrs) {
      const double d = double(counts[v]) - expect;
      chi2 += d * d / expect;
    }
    stats += fmt("%s%.1f<%.1f", stats.empty() ? "" : " ", chi2, pr.crit);
    uniform = uniform && chi2 < pr.crit;
  }

  std::mt19937_64 gen(0xACC0B);
  const CsrGraph rg = random_graph(gen, 2000, 10);
  GraphSource src(rg);
  SamplingConfig cfg;
  cfg.fanouts = {8, 4};
  const std::vector<NodeId> targets = draw_batch_targets(rg.num_nodes(), 64, 77, 0);
  const Subgraph first = build_subgraph(src, targets, cfg, 123456789);
  int identical = 0;
  for (int i = 0; i < 100; ++i) identical += build_subgraph(src, targets, cfg, 123456789) == first;
  return {uniform && identical == 100,
          fmt("chi-square %s, %d/100 identical rebuilds", stats.c_str(), identical)};
}

// 12. Idle accounting at the two analytic extremes: a free producer keeps
// the consumer saturated; one worker preparing at twice the train time
// leaves the consumer idle half the run.
Outcome check_idle_accounting() {
  SimSetup zero;
  zero.sampling.batch_size = 32;
  zero.sampling.fanouts = {4, 2};
  zero.sampling.seed = 5;
  zero.host.dram_read_us_per_block = 0.0;
  zero.pipeline.workers = 3;
  zero.pipeline.batches = 20;
  zero.pipeline.gpu_batch_time_us = 200.0;
  zero.pipeline.feature_bytes_per_node = 0;
  const double idle0 = run_pipeline(ring_graph(100), zero).gpu_idle_fraction;

  SimSetup half;
  half.sampling.batch_size = 1024;
  half.sampling.fanouts = {1};
  half.sampling.seed = 7;
  half.host.dram_read_us_per_block = 15.625;  // 1024 one-block reads = 2x the train step
  half.pipeline.workers = 1;
  half.pipeline.batches = 500;
  half.pipeline.feature_bytes_per_node = 0;
  half.pipeline.gpu_batch_time_us = 8000.0;
  const double idle1 = run_pipeline(ring_graph(10000), half).gpu_idle_fraction;

  return {idle0 < kZeroCostIdleMax && std::abs(idle1 - 0.5) <= kHalfIdleTolerance,
          fmt("free producer idles %.4f, 2x-cost producer idles %.4f", idle0, idle1)};
}

// 13. The on-disk graph container and the sampling descriptor blob must
// decode back to exactly what was encoded.
Outcome check_round_trips() {
  std::mt19937_64 gen(0xACC0D);
  int graphs = 0;
  for (int i = 0; i < 100; ++i) {
    const CsrGraph g = random_graph(gen, 1 + gen() % 500, gen() % 9);
    const CsrGraph back = decode_csr(encode_csr(g));
    graphs += back.indptr == g.indptr && back.indices == g.indices;
  }
  int blobs = 0;
  for (int i = 0; i < 100; ++i) {
    NsConfigBlob b;
    b.fanouts.resize(1 + gen() % 4);
    for (auto& f : b.fanouts) f = std::uint16_t(1 + gen() % 65535);
    b.rng_seed_base = gen();
    b.records.resize(1 + gen() % 200);
    for (auto& r : b.records) {
      r.node_id = gen();
      r.start_lba = gen();
      r.byte_offset = std::uint16_t(gen());
      r.edge_count = gen();
    }
    blobs += decode_nsconfig(encode_nsconfig(b)) == b;
  }
  return {graphs == 100 && blobs == 100,
          fmt("%d/100 graph files, %d/100 descriptor blobs", graphs, blobs)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  int failed = 0;
  const auto report = [&failed](int id, const char* what, const Outcome& o) {
    std::printf("[%s] %02d %s: %s\n", o.pass ? "PASS" : "FAIL", id, what, o.detail.c_str());
    if (!o.pass) ++failed;
  };
  const auto guarded = [](auto fn) -> Outcome {
    try {
      return fn();
    } catch (const std::exception& e) {
      return {false, std::string("unexpected exception: ") + e.what()};
    }
  };

  report(1, "device sampling reproduces the host sampler", guarded(check_sampler_equivalence));
  report(2, "graph expansion matches the dense product", guarded(check_expansion_oracle));
  report(3, "cache models match a brute-force lru", guarded(check_cache_oracles));

  std::optional<Calibrated> cal;
  std::string cal_error;
  try {
    cal.emplace(make_calibrated());
  } catch (const std::exception& e) {
    cal_error = e.what();
  }
  const auto with_cal = [&](auto fn) -> Outcome {
    if (!cal) return {false, "calibrated workload unavailable: " + cal_error};
    return guarded([&] { return fn(*cal); });
  };

  report(4, "access paths order by total time", with_cal(check_path_ordering));
  report(5, "mmap slowdown over in-memory stays in band", with_cal(check_mmap_slowdown));
  report(6, "single-worker device sampling speedup stays in band",
         with_cal(check_single_worker_speedup));
  report(7, "device sampling cuts device-to-host traffic", with_cal(check_traffic_reduction));
  report(8, "finer command slicing never raises the speedup", with_cal(check_granularity_trend));
  report(9, "worker contention never raises the speedup", with_cal(check_worker_trend));
  report(10, "larger fanouts strictly lower the speedup", with_cal(check_fanout_trend));
  cal.reset();

  report(11, "neighbor draws are uniform and rebuilds identical", guarded(check_sampler_statistics));
  report(12, "gpu idle accounting matches both regimes", guarded(check_idle_accounting));
  report(13, "graph files and descriptor blobs round trip", guarded(check_round_trips));

  std::printf("%d of 13 checks passed\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}
