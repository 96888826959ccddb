#ifndef GATEKV_CRDT_DOT_HPP
#define GATEKV_CRDT_DOT_HPP

#include <compare>
#include <cstdint>
#include <set>
#include <string>

namespace gatekv {

using ReplicaId = std::string;

/// Unique tag identifying one update's contribution to an object. A dot is
/// never reused: `seq` is a per-replica transaction serial and `slot` the
/// index of the effect within that transaction. Concurrent-value retention
/// and observed-remove semantics both key off these tags.
struct Dot {
  ReplicaId replica;
  std::uint64_t seq = 0;
  std::uint32_t slot = 0;

  auto operator<=>(const Dot&) const = default;
};

using DotSet = std::set<Dot>;

inline std::string to_string(const Dot& d) {
  return d.replica + ":" + std::to_string(d.seq) + "." + std::to_string(d.slot);
}

}  // namespace gatekv

#endif  // GATEKV_CRDT_DOT_HPP
