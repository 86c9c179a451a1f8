#pragma once

#include <cstdint>

#include "gnnsim/common.hpp"

namespace gnnsim {

// 64-bit finalizer used throughout for key derivation and draw generation.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

// Counter-based generator: draw i of a stream is a pure function of
// (key, i). Streams with distinct keys are independent for our purposes,
// and a stream can be replayed from any point by resetting the counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next() { return mix64(key_ ^ (counter_++ * 0xd1342543de82ef95ULL)); }

  // Uniform draw in [0, n). n == 0 returns 0. A single next() per draw so
  // the number of raw draws consumed is deterministic.
  std::uint64_t bounded(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  std::uint64_t draws_consumed() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream-key conventions shared by the host sampler and the device firmware.
// Draws for a given parent node at a given hop depend only on
// (seed_base, hop, node), never on which worker, command slice, or access
// path performs the sampling.
inline constexpr std::uint64_t hop_seed_base(std::uint64_t seed_base, std::uint32_t hop) {
  return hop == 0 ? seed_base : mix64(seed_base, 0x686f7000ULL + hop);
}

inline constexpr std::uint64_t sample_stream_key(std::uint64_t hop_base, NodeId node) {
  return mix64(hop_base, 0x73747265616dULL ^ node);
}

// Per-batch seed base; batch identity is carried here, not in stream keys.
inline constexpr std::uint64_t batch_seed_base(std::uint64_t run_seed, std::uint64_t batch) {
  return mix64(run_seed, 0x6261746368ULL + batch);
}

// Stream key for one random walk (target, walk index) pair.
inline constexpr std::uint64_t walk_stream_key(std::uint64_t seed_base, NodeId target,
                                               std::uint32_t walk) {
  return mix64(mix64(seed_base, 0x77616c6bULL ^ target), walk);
}

}  // namespace gnnsim
