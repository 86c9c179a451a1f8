#include "gnnsim/sampling.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace gnnsim {

void SamplingConfig::validate() const {
  if (batch_size == 0) throw ConfigError("sampling.batch_size must be >= 1");
  if (fanouts.empty() || fanouts.size() > 0xffff)
    throw ConfigError("sampling.fanouts must list 1 to 65535 layers");
  for (std::uint32_t f : fanouts) {
    if (f == 0 || f > 0xffff) throw ConfigError("sampling fanouts must be in [1, 65535]");
  }
}

void RandomWalkConfig::validate() const {
  if (walk_length == 0) throw ConfigError("walk_length must be >= 1");
  if (walks_per_target == 0) throw ConfigError("walks_per_target must be >= 1");
}

std::vector<std::pair<NodeId, NodeId>> SubgraphLayer::pairs() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(children.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    for (std::uint32_t k = 0; k < counts[i]; ++k) out.emplace_back(parents[i], children[pos++]);
  }
  return out;
}

std::uint64_t Subgraph::total_sampled_children() const {
  std::uint64_t n = 0;
  for (const auto& l : layers) n += l.children.size();
  return n;
}

std::vector<NodeId> sample_neighbors(std::span<const NodeId> neighbors, std::uint32_t s,
                                     bool with_replacement, CounterRng& rng) {
  const std::uint64_t d = neighbors.size();
  std::vector<NodeId> out;
  if (d == 0 || s == 0) return out;
  if (with_replacement) {
    out.reserve(s);
    for (std::uint32_t i = 0; i < s; ++i) out.push_back(neighbors[rng.bounded(d)]);
    return out;
  }
  // Partial Fisher-Yates over a sparse view of the index permutation.
  const std::uint64_t k = std::min<std::uint64_t>(s, d);
  out.reserve(k);
  std::unordered_map<std::uint64_t, std::uint64_t> perm;
  auto at = [&](std::uint64_t i) {
    auto it = perm.find(i);
    return it == perm.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + rng.bounded(d - i);
    const std::uint64_t vi = at(i), vj = at(j);
    out.push_back(neighbors[vj]);
    perm[j] = vi;
  }
  return out;
}

std::vector<NodeId> sample_neighbors(EdgeListSource& src, NodeId u, std::uint32_t s,
                                     bool with_replacement, CounterRng& rng) {
  return sample_neighbors(src.edge_list(u), s, with_replacement, rng);
}

namespace {

// Shared walk over the per-target subtrees. Children for (hop, parent) are
// memoized: the draw stream is keyed the same way, so recomputing for a
// parent reached under several targets would only repeat identical work.
struct SubtreeBuilder {
  EdgeListSource& src;
  const SamplingConfig& cfg;
  std::uint64_t seed_base;
  std::vector<std::unordered_map<NodeId, std::vector<NodeId>>> memo;

  SubtreeBuilder(EdgeListSource& s, const SamplingConfig& c, std::uint64_t sb)
      : src(s), cfg(c), seed_base(sb), memo(c.fanouts.size()) {}

  const std::vector<NodeId>& children_of(std::uint32_t hop, NodeId p) {
    auto [it, fresh] = memo[hop].try_emplace(p);
    if (fresh) {
      CounterRng rng(sample_stream_key(hop_seed_base(seed_base, hop), p));
      it->second = sample_neighbors(src.edge_list(p), cfg.fanouts[hop], cfg.with_replacement, rng);
    }
    return it->second;
  }
};

void dedup_first_seen(const std::vector<NodeId>& in, std::vector<NodeId>& out) {
  out.clear();
  std::unordered_set<NodeId> seen;
  seen.reserve(in.size());
  for (NodeId v : in) {
    if (seen.insert(v).second) out.push_back(v);
  }
}

Subgraph finalize_sampled_set(Subgraph sg) {
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

}  // namespace

SubgraphBuild build_subgraph_traced(EdgeListSource& src, std::span<const NodeId> targets,
                                    const SamplingConfig& cfg, std::uint64_t seed_base) {
  cfg.validate();
  const std::size_t hops = cfg.fanouts.size();
  SubgraphBuild out;
  Subgraph& sg = out.subgraph;
  sg.targets.assign(targets.begin(), targets.end());
  sg.fanouts = cfg.fanouts;
  sg.layers.resize(hops);

  SubtreeBuilder builder(src, cfg, seed_base);
  // frontiers[t] is target t's current parent list for the hop in progress.
  std::vector<std::vector<NodeId>> frontiers(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) frontiers[t] = {targets[t]};

  std::vector<NodeId> scratch;
  for (std::uint32_t hop = 0; hop < hops; ++hop) {
    SubgraphLayer& layer = sg.layers[hop];
    for (std::size_t t = 0; t < targets.size(); ++t) {
      scratch.clear();
      for (NodeId p : frontiers[t]) {
        out.read_sequence.push_back(p);
        const auto& kids = builder.children_of(hop, p);
        layer.parents.push_back(p);
        layer.counts.push_back(std::uint32_t(kids.size()));
        layer.children.insert(layer.children.end(), kids.begin(), kids.end());
        scratch.insert(scratch.end(), kids.begin(), kids.end());
      }
      dedup_first_seen(scratch, frontiers[t]);
    }
  }
  out.subgraph = finalize_sampled_set(std::move(out.subgraph));
  return out;
}

Subgraph build_subgraph(EdgeListSource& src, std::span<const NodeId> targets,
                        const SamplingConfig& cfg, std::uint64_t seed_base) {
  return build_subgraph_traced(src, targets, cfg, seed_base).subgraph;
}

SubgraphBuild random_walk_sample_traced(EdgeListSource& src, std::span<const NodeId> targets,
                                        const RandomWalkConfig& cfg, std::uint64_t seed_base) {
  cfg.validate();
  SubgraphBuild out;
  Subgraph& sg = out.subgraph;
  sg.targets.assign(targets.begin(), targets.end());
  sg.fanouts.assign(cfg.walk_length, 1);
  sg.fanouts[0] = cfg.walks_per_target;
  sg.layers.resize(cfg.walk_length);

  // Trace each walk up front; its stream is private, so draw order does not
  // depend on how steps are later grouped into layers. Every step attempt
  // reads the current node's edge list, including the one that finds it
  // empty.
  std::vector<std::vector<std::vector<NodeId>>> trails(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    trails[t].resize(cfg.walks_per_target);
    for (std::uint32_t w = 0; w < cfg.walks_per_target; ++w) {
      CounterRng rng(walk_stream_key(seed_base, targets[t], w));
      std::vector<NodeId>& trail = trails[t][w];
      trail.push_back(targets[t]);
      for (std::uint32_t step = 0; step < cfg.walk_length; ++step) {
        const auto nbrs = src.edge_list(trail.back());
        out.read_sequence.push_back(trail.back());
        if (nbrs.empty()) break;
        trail.push_back(nbrs[rng.bounded(nbrs.size())]);
      }
    }
  }

  for (std::uint32_t step = 0; step < cfg.walk_length; ++step) {
    SubgraphLayer& layer = sg.layers[step];
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (step == 0) {
        // All of a target's walks start at the target: one segment.
        std::uint32_t taken = 0;
        for (const auto& trail : trails[t]) {
          if (trail.size() > 1) {
            layer.children.push_back(trail[1]);
            ++taken;
          }
        }
        layer.parents.push_back(targets[t]);
        layer.counts.push_back(taken);
      } else {
        for (const auto& trail : trails[t]) {
          if (trail.size() > step + 1) {
            layer.parents.push_back(trail[step]);
            layer.counts.push_back(1);
            layer.children.push_back(trail[step + 1]);
          }
        }
      }
    }
  }
  out.subgraph = finalize_sampled_set(std::move(out.subgraph));
  return out;
}

Subgraph random_walk_sample(EdgeListSource& src, std::span<const NodeId> targets,
                            const RandomWalkConfig& cfg, std::uint64_t seed_base) {
  return random_walk_sample_traced(src, targets, cfg, seed_base).subgraph;
}

std::uint64_t subgraph_digest(const Subgraph& sg) {
  std::uint64_t d = 0x53554247;
  auto fold = [&](std::uint64_t x) { d = mix64(d ^ x); };
  fold(sg.targets.size());
  for (NodeId v : sg.targets) fold(v);
  fold(sg.fanouts.size());
  for (std::uint32_t f : sg.fanouts) fold(f);
  for (const auto& layer : sg.layers) {
    fold(layer.parents.size());
    for (NodeId v : layer.parents) fold(v);
    for (std::uint32_t c : layer.counts) fold(c);
    fold(layer.children.size());
    for (NodeId v : layer.children) fold(v);
  }
  fold(sg.sampled_set.size());
  for (NodeId v : sg.sampled_set) fold(v);
  return d;
}

SubgraphVerdict validate_subgraph(const CsrGraph& g, const Subgraph& sg) {
  auto fail = [](std::string why, std::optional<std::pair<NodeId, NodeId>> pair = {}) {
    return SubgraphVerdict{false, std::move(why), pair};
  };
  if (sg.layers.size() != sg.fanouts.size()) return fail("layer count does not match fanouts");

  std::unordered_set<NodeId> prev(sg.targets.begin(), sg.targets.end());
  for (std::size_t h = 0; h < sg.layers.size(); ++h) {
    const SubgraphLayer& layer = sg.layers[h];
    if (layer.parents.size() != layer.counts.size())
      return fail("layer " + std::to_string(h) + " parents/counts size mismatch");
    std::uint64_t total = 0;
    for (std::uint32_t c : layer.counts) total += c;
    if (total != layer.children.size())
      return fail("layer " + std::to_string(h) + " counts do not sum to children");

    std::size_t pos = 0;
    for (std::size_t i = 0; i < layer.parents.size(); ++i) {
      const NodeId p = layer.parents[i];
      if (p >= g.num_nodes()) return fail("parent out of range");
      if (!prev.contains(p))
        return fail("layer " + std::to_string(h) + " parent not reachable from previous hop");
      const auto nbrs = g.neighbors(p);
      const std::uint64_t deg = nbrs.size();
      const std::uint32_t fanout = sg.fanouts[h];
      const std::uint32_t count = layer.counts[i];
      const bool count_ok =
          deg == 0 ? count == 0
                   : (count == fanout || count == std::min<std::uint64_t>(fanout, deg));
      if (!count_ok)
        return fail("layer " + std::to_string(h) + " fanout violated for parent " +
                    std::to_string(p));
      std::unordered_set<NodeId> nbr_set(nbrs.begin(), nbrs.end());
      for (std::uint32_t k = 0; k < count; ++k) {
        const NodeId c = layer.children[pos++];
        if (!nbr_set.contains(c)) return fail("sampled child is not a neighbor", {{p, c}});
      }
    }
    prev.clear();
    prev.insert(layer.children.begin(), layer.children.end());
  }

  std::unordered_set<NodeId> seen;
  std::vector<NodeId> expected;
  auto add = [&](NodeId v) {
    if (seen.insert(v).second) expected.push_back(v);
  };
  for (NodeId t : sg.targets) add(t);
  for (const auto& layer : sg.layers) {
    for (NodeId c : layer.children) add(c);
  }
  if (expected != sg.sampled_set) return fail("sampled_set is not the first-seen traversal");
  return {};
}

}  // namespace gnnsim
