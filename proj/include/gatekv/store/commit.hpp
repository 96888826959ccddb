#ifndef GATEKV_STORE_COMMIT_HPP
#define GATEKV_STORE_COMMIT_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "gatekv/crdt/dot.hpp"
#include "gatekv/crdt/effect.hpp"
#include "gatekv/store/bound_object.hpp"
#include "gatekv/store/vector_clock.hpp"

namespace gatekv {

/// Result of committing a transaction: every effect it produced, grouped by
/// object, plus the two clocks that position it in causal order. All effects
/// of one commit become visible atomically or not at all.
struct Commit {
  ReplicaId origin;
  VectorClock snapshot;  // what the transaction read from
  VectorClock clock;     // snapshot advanced by one step at origin
  std::map<BoundObject, std::vector<Effect>> effects;

  std::uint64_t serial() const { return clock.get(origin); }
};

}  // namespace gatekv

#endif  // GATEKV_STORE_COMMIT_HPP
