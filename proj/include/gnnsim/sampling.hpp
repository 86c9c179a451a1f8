#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnnsim/csr_graph.hpp"
#include "gnnsim/rng.hpp"

namespace gnnsim {

struct SamplingConfig {
  std::uint32_t batch_size = 1024;
  std::vector<std::uint32_t> fanouts{25, 10};
  bool with_replacement = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RandomWalkConfig {
  std::uint32_t walk_length = 2;
  std::uint32_t walks_per_target = 1;

  void validate() const;
};

// One hop of sampled edges in segmented form: parents[i] contributed
// counts[i] children, stored consecutively in children. Duplicate children
// are kept; deduplication only shapes the next hop's parent list.
struct SubgraphLayer {
  std::vector<NodeId> parents;
  std::vector<std::uint32_t> counts;
  std::vector<NodeId> children;

  bool operator==(const SubgraphLayer&) const = default;

  std::vector<std::pair<NodeId, NodeId>> pairs() const;
};

// Result of multi-hop neighborhood sampling for one mini-batch. Each target
// owns an independent subtree: its hop-h parents are its own hop-(h-1)
// children deduplicated in first-seen order. Layer h concatenates the
// per-target segments in target order, so the layout is identical no matter
// how targets are split across commands or workers. sampled_set lists every
// node in first-seen traversal order (targets first, then children hop by
// hop). fanouts records the schedule the subgraph was built with.
struct Subgraph {
  std::vector<NodeId> targets;
  std::vector<std::uint32_t> fanouts;
  std::vector<SubgraphLayer> layers;
  std::vector<NodeId> sampled_set;

  bool operator==(const Subgraph&) const = default;

  std::uint64_t total_sampled_children() const;
};

// Data-only view of a graph's adjacency; cost models live elsewhere.
class EdgeListSource {
 public:
  virtual ~EdgeListSource() = default;
  virtual std::span<const NodeId> edge_list(NodeId v) = 0;
  virtual std::uint64_t node_count() const = 0;
};

class GraphSource final : public EdgeListSource {
 public:
  explicit GraphSource(const CsrGraph& g) : g_(g) {}
  std::span<const NodeId> edge_list(NodeId v) override { return g_.neighbors(v); }
  std::uint64_t node_count() const override { return g_.num_nodes(); }

 private:
  const CsrGraph& g_;
};

// Uniform neighbor selection for one node. With replacement: exactly s draws
// (none when the list is empty). Without replacement: min(s, degree) draws
// via partial Fisher-Yates, all results distinct.
std::vector<NodeId> sample_neighbors(std::span<const NodeId> neighbors, std::uint32_t s,
                                     bool with_replacement, CounterRng& rng);
std::vector<NodeId> sample_neighbors(EdgeListSource& src, NodeId u, std::uint32_t s,
                                     bool with_replacement, CounterRng& rng);

// Multi-hop sampling. Draws for parent p at hop h come from the stream
// keyed by (seed_base, h, p); the result is a pure function of
// (graph, targets, config, seed_base).
Subgraph build_subgraph(EdgeListSource& src, std::span<const NodeId> targets,
                        const SamplingConfig& cfg, std::uint64_t seed_base);

// Same as build_subgraph, but also reports every edge-list fetch the
// construction performs, in canonical order (all targets, then each
// target's hop-1 parents, and so on). Cost models replay this sequence.
struct SubgraphBuild {
  Subgraph subgraph;
  std::vector<NodeId> read_sequence;
};
SubgraphBuild build_subgraph_traced(EdgeListSource& src, std::span<const NodeId> targets,
                                    const SamplingConfig& cfg, std::uint64_t seed_base);

// Random-walk sampling: walks_per_target independent walks per target, each
// taking walk_length uniform steps and halting early at a degree-0 node.
// Layer k holds step k of every walk (segmented per surviving walk).
Subgraph random_walk_sample(EdgeListSource& src, std::span<const NodeId> targets,
                            const RandomWalkConfig& cfg, std::uint64_t seed_base);
SubgraphBuild random_walk_sample_traced(EdgeListSource& src, std::span<const NodeId> targets,
                                        const RandomWalkConfig& cfg, std::uint64_t seed_base);

// Order-sensitive digest over every field of the subgraph; equal digests
// across access paths certify identical sampled content.
std::uint64_t subgraph_digest(const Subgraph& sg);

struct SubgraphVerdict {
  bool valid = true;
  std::string reason;
  std::optional<std::pair<NodeId, NodeId>> bad_pair;
};

// Checks a subgraph against the graph it claims to be sampled from: every
// child must be a neighbor of its parent, per-parent counts must respect
// the fanout schedule, and the bookkeeping fields must be consistent.
SubgraphVerdict validate_subgraph(const CsrGraph& g, const Subgraph& sg);

}  // namespace gnnsim
