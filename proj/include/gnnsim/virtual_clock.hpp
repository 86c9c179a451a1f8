#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "gnnsim/common.hpp"

namespace gnnsim {

// Discrete-event scheduler over simulated microseconds. Events fire in
// (time, insertion order); time never moves backward.
class VirtualClock {
 public:
  SimTime now() const { return now_; }

  void schedule_at(SimTime t, std::function<void()> fn) {
    assert(t >= now_);
    heap_.push(Event{t, next_seq_++, std::move(fn)});
  }

  void schedule_in(SimTime dt, std::function<void()> fn) {
    schedule_at(now_ + dt, std::move(fn));
  }

  bool empty() const { return heap_.empty(); }

  // Fires the next event; returns false when none remain.
  bool step() {
    if (heap_.empty()) return false;
    Event ev = heap_.top();
    heap_.pop();
    assert(ev.t >= now_);
    now_ = ev.t;
    ev.fn();
    return true;
  }

  void run() {
    while (step()) {
    }
  }

 private:
  struct Event {
    SimTime t;
    std::uint64_t seq;
    std::function<void()> fn;
    bool operator>(const Event& o) const { return t != o.t ? t > o.t : seq > o.seq; }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
};

// Single-server resource with FIFO reservation in virtual time.
class BusyResource {
 public:
  // Occupies the resource for `dur` starting no earlier than `t`; returns
  // the completion time.
  SimTime reserve(SimTime t, SimTime dur) {
    const SimTime start = std::max(t, free_);
    free_ = start + dur;
    return free_;
  }

  SimTime free_at() const { return free_; }

 private:
  SimTime free_ = 0;
};

// Pool of identical servers; work is placed on the earliest-free server
// (lowest index on ties) in call order.
class ServerPool {
 public:
  explicit ServerPool(std::uint32_t n) : free_(n, 0.0) {}

  SimTime serve(SimTime ready, SimTime dur) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < free_.size(); ++i) {
      if (free_[i] < free_[best]) best = i;
    }
    const SimTime start = std::max(ready, free_[best]);
    free_[best] = start + dur;
    return free_[best];
  }

 private:
  std::vector<SimTime> free_;
};

// Shared byte link (e.g. a DMA engine): transfers serialize FIFO and take
// bytes / rate. Per-direction byte counters feed the run metrics.
class ThroughputLink {
 public:
  explicit ThroughputLink(double bytes_per_us) : bytes_per_us_(bytes_per_us) {}

  enum class Dir { AToB, BToA };

  SimTime transfer(SimTime t, std::uint64_t bytes, Dir dir) {
    (dir == Dir::AToB ? bytes_ab_ : bytes_ba_) += bytes;
    if (bytes == 0) return t;
    return busy_.reserve(t, double(bytes) / bytes_per_us_);
  }

  SimTime free_at() const { return busy_.free_at(); }
  std::uint64_t bytes_a_to_b() const { return bytes_ab_; }
  std::uint64_t bytes_b_to_a() const { return bytes_ba_; }

 private:
  double bytes_per_us_;
  BusyResource busy_;
  std::uint64_t bytes_ab_ = 0;
  std::uint64_t bytes_ba_ = 0;
};

}  // namespace gnnsim
