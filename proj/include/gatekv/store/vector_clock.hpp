#ifndef GATEKV_STORE_VECTOR_CLOCK_HPP
#define GATEKV_STORE_VECTOR_CLOCK_HPP

#include <cstdint>
#include <map>
#include <string>

#include "gatekv/crdt/dot.hpp"

namespace gatekv {

/// Store-wide causal timestamp: one entry per replica, absent entries are
/// zero. The partial order is pointwise; merge takes the pointwise max.
class VectorClock {
 public:
  VectorClock() = default;

  std::uint64_t get(const ReplicaId& r) const {
    auto it = entries_.find(r);
    return it == entries_.end() ? 0 : it->second;
  }

  void set(const ReplicaId& r, std::uint64_t value) {
    if (value == 0) {
      entries_.erase(r);
    } else {
      entries_[r] = value;
    }
  }

  void increment(const ReplicaId& r) { ++entries_[r]; }

  /// Pointwise <=.
  bool leq(const VectorClock& other) const {
    for (const auto& [r, v] : entries_) {
      if (v > other.get(r)) return false;
    }
    return true;
  }

  void merge(const VectorClock& other) {
    for (const auto& [r, v] : other.entries_) {
      auto& mine = entries_[r];
      if (v > mine) mine = v;
    }
  }

  const std::map<ReplicaId, std::uint64_t>& entries() const { return entries_; }

  friend bool operator==(const VectorClock&, const VectorClock&) = default;

 private:
  std::map<ReplicaId, std::uint64_t> entries_;
};

inline std::string to_string(const VectorClock& vc) {
  std::string out = "{";
  bool first = true;
  for (const auto& [r, v] : vc.entries()) {
    if (!first) out += ",";
    first = false;
    out += r + ":" + std::to_string(v);
  }
  return out + "}";
}

}  // namespace gatekv

#endif  // GATEKV_STORE_VECTOR_CLOCK_HPP
