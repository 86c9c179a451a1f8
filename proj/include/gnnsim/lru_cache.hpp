#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>

namespace gnnsim {

// Fixed-capacity LRU set. touch() promotes on hit; insert() evicts the
// least-recently-used entry when full. Deterministic by construction.
template <class Key>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  bool contains(const Key& k) const { return map_.contains(k); }

  // Hit test with promotion.
  bool touch(const Key& k) {
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    order_.splice(order_.begin(), order_, it->second);
    return true;
  }

  // Inserts k as most-recently-used. Returns the evicted key, if any.
  // Inserting an existing key just promotes it. Zero capacity caches
  // nothing.
  std::optional<Key> insert(const Key& k) {
    if (capacity_ == 0) return std::nullopt;
    if (touch(k)) return std::nullopt;
    std::optional<Key> evicted;
    if (map_.size() == capacity_) {
      evicted = order_.back();
      map_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(k);
    map_[k] = order_.begin();
    return evicted;
  }

  std::size_t size() const { return map_.size(); }
  std::size_t capacity() const { return capacity_; }

  // Keys from most- to least-recently-used (test hook).
  std::vector<Key> keys_mru_order() const {
    return std::vector<Key>(order_.begin(), order_.end());
  }

 private:
  std::size_t capacity_;
  std::list<Key> order_;
  std::unordered_map<Key, typename std::list<Key>::iterator> map_;
};

}  // namespace gnnsim
