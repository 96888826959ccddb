#ifndef GATEKV_STORE_CLUSTER_HPP
#define GATEKV_STORE_CLUSTER_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gatekv/store/commit.hpp"
#include "gatekv/store/replica.hpp"

namespace gatekv {

/// A set of replicas plus the history of every commit made through it.
/// Delivery is up to the caller; sync() replays the whole history everywhere,
/// which reaches every replica as long as the history is causally closed.
class Cluster {
 public:
  explicit Cluster(ConsistencyMode mode) : mode_(mode) {}

  ConsistencyMode mode() const { return mode_; }

  Replica& add_replica(const ReplicaId& id) {
    auto [it, fresh] = replicas_.emplace(id, std::make_unique<Replica>(id, mode_));
    if (!fresh) throw std::logic_error("duplicate replica id: " + id);
    return *it->second;
  }

  Replica& replica(const ReplicaId& id) {
    auto it = replicas_.find(id);
    if (it == replicas_.end()) throw std::logic_error("unknown replica id: " + id);
    return *it->second;
  }

  std::vector<ReplicaId> replica_ids() const {
    std::vector<ReplicaId> ids;
    for (const auto& [id, _] : replicas_) ids.push_back(id);
    return ids;
  }

  /// Commits tx on its own replica and records the commit for later delivery.
  const Commit& commit(Transaction& tx) {
    commits_.push_back(tx.commit());
    return commits_.back();
  }

  void record(const Commit& c) { commits_.push_back(c); }

  const std::vector<Commit>& commits() const { return commits_; }

  /// Delivers the recorded history to every replica until nothing moves.
  void sync() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& [id, r] : replicas_) {
        for (const auto& c : commits_) {
          if (c.origin == id) continue;
          if (r->apply(c)) progress = true;
        }
      }
    }
  }

  /// True when every replica has applied every recorded commit.
  bool converged() const {
    for (const auto& [id, r] : replicas_) {
      for (const auto& c : commits_) {
        if (!r->has_applied(c.origin, c.serial())) return false;
      }
    }
    return true;
  }

 private:
  ConsistencyMode mode_;
  std::map<ReplicaId, std::unique_ptr<Replica>> replicas_;
  std::vector<Commit> commits_;
};

}  // namespace gatekv

#endif  // GATEKV_STORE_CLUSTER_HPP
