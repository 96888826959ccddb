#ifndef GATEKV_STORE_REPLICA_HPP
#define GATEKV_STORE_REPLICA_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gatekv/crdt/effect.hpp"
#include "gatekv/crdt/state.hpp"
#include "gatekv/crdt/update_op.hpp"
#include "gatekv/store/bound_object.hpp"
#include "gatekv/store/commit.hpp"
#include "gatekv/store/vector_clock.hpp"

namespace gatekv {

/// causal: remote commits wait until all their causal predecessors have been
/// applied. eventual: commits are applied on arrival, in any order.
enum class ConsistencyMode { causal, eventual };

class Replica;

class TransactionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Buffered read/update context over a fixed snapshot. Reads see the snapshot
/// plus the transaction's own buffered updates; nothing escapes until commit.
class Transaction {
 public:
  ReadResult read(const BoundObject& obj);
  void update(const BoundObject& obj, const UpdateOp& op);

  /// Commits on the owning replica. The transaction is closed afterwards.
  Commit commit();

  const VectorClock& snapshot() const { return snapshot_; }
  bool open() const { return open_; }

  /// Objects this transaction has buffered updates for.
  std::vector<BoundObject> touched() const {
    std::vector<BoundObject> out;
    for (const auto& [obj, _] : effects_) out.push_back(obj);
    return out;
  }

 private:
  friend class Replica;

  Transaction(Replica* replica, VectorClock snapshot, std::uint64_t serial)
      : replica_(replica), snapshot_(std::move(snapshot)), serial_(serial) {}

  CrdtState& working(const BoundObject& obj);

  Replica* replica_;
  VectorClock snapshot_;
  std::uint64_t serial_;  // unique per begin() on one replica; dot middle part
  std::uint32_t next_slot_ = 0;
  bool open_ = true;
  std::map<BoundObject, CrdtState> working_;
  std::map<BoundObject, std::vector<Effect>> effects_;
};

/// One store node. Keeps a per-object log of applied effects tagged with
/// their commit clock; reads fold the log filtered by the snapshot.
class Replica {
 public:
  Replica(ReplicaId id, ConsistencyMode mode)
      : id_(std::move(id)), mode_(mode) {}

  const ReplicaId& id() const { return id_; }
  ConsistencyMode mode() const { return mode_; }
  const VectorClock& applied() const { return applied_; }

  Transaction begin() { return Transaction(this, applied_, ++begun_); }

  /// Applies a commit from another replica. Returns true if anything new got
  /// applied; a duplicate or (in causal mode) a premature commit returns
  /// false. Premature commits stay buffered until their predecessors arrive.
  bool apply(const Commit& c) {
    auto key = std::make_pair(c.origin, c.serial());
    if (delivered_.count(key)) return false;
    if (mode_ == ConsistencyMode::causal && !deliverable(c)) {
      pending_.emplace(key, c);
      return false;
    }
    apply_now(c);
    drain();
    return true;
  }

  bool has_applied(const ReplicaId& origin, std::uint64_t serial) const {
    return delivered_.count({origin, serial}) != 0;
  }

  std::size_t applied_count() const { return delivered_.size(); }
  std::size_t pending_count() const { return pending_.size(); }

  /// State of obj as of the given snapshot: fold of all applied effects whose
  /// commit clock is covered by it. Commits are visible all-or-nothing since
  /// every effect of a commit carries the same clock.
  CrdtState state_at(const BoundObject& obj, const VectorClock& snapshot) const {
    CrdtState state = empty_state(obj.type);
    auto it = log_.find(obj);
    if (it == log_.end()) return state;
    for (const auto& entry : it->second) {
      if (entry.clock.leq(snapshot)) apply_effect(state, entry.effect);
    }
    return state;
  }

  ReadResult read_at(const BoundObject& obj, const VectorClock& snapshot) const {
    CrdtState state = state_at(obj, snapshot);
    return read_value(state);
  }

  /// Read outside any transaction, against everything applied so far.
  ReadResult read_latest(const BoundObject& obj) const {
    return read_at(obj, applied_);
  }

  /// Every object this replica has applied effects for.
  std::vector<BoundObject> objects() const {
    std::vector<BoundObject> out;
    for (const auto& [obj, _] : log_) out.push_back(obj);
    return out;
  }

 private:
  friend class Transaction;

  struct LogEntry {
    Effect effect;
    VectorClock clock;
  };

  bool deliverable(const Commit& c) const {
    return c.snapshot.leq(applied_) &&
           c.clock.get(c.origin) == applied_.get(c.origin) + 1;
  }

  void apply_now(const Commit& c) {
    for (const auto& [obj, effs] : c.effects) {
      auto& log = log_[obj];
      for (const auto& e : effs) log.push_back(LogEntry{e, c.clock});
    }
    applied_.merge(c.clock);
    delivered_.insert({c.origin, c.serial()});
  }

  void drain() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto it = pending_.begin(); it != pending_.end(); ++it) {
        if (deliverable(it->second)) {
          Commit c = std::move(it->second);
          pending_.erase(it);
          apply_now(c);
          progress = true;
          break;
        }
      }
    }
  }

  Commit commit_transaction(Transaction& tx) {
    if (!tx.open_) throw TransactionError("transaction already committed");
    if (tx.replica_ != this) throw TransactionError("transaction from another replica");
    tx.open_ = false;
    Commit c;
    c.origin = id_;
    c.snapshot = tx.snapshot_;
    c.clock = tx.snapshot_;
    c.clock.set(id_, applied_.get(id_) + 1);
    c.effects = std::move(tx.effects_);
    apply_now(c);
    return c;
  }

  ReplicaId id_;
  ConsistencyMode mode_;
  VectorClock applied_;
  std::uint64_t begun_ = 0;
  std::map<BoundObject, std::vector<LogEntry>> log_;
  std::set<std::pair<ReplicaId, std::uint64_t>> delivered_;
  std::map<std::pair<ReplicaId, std::uint64_t>, Commit> pending_;
};

inline CrdtState& Transaction::working(const BoundObject& obj) {
  auto it = working_.find(obj);
  if (it != working_.end()) return it->second;
  auto [pos, _] = working_.emplace(obj, replica_->state_at(obj, snapshot_));
  return pos->second;
}

inline ReadResult Transaction::read(const BoundObject& obj) {
  if (!open_) throw TransactionError("read on a closed transaction");
  auto it = working_.find(obj);
  if (it != working_.end()) return read_value(it->second);
  return replica_->read_at(obj, snapshot_);
}

inline void Transaction::update(const BoundObject& obj, const UpdateOp& op) {
  if (!open_) throw TransactionError("update on a closed transaction");
  if (op_target_type(op) != obj.type) {
    throw TypeMismatchError("update type does not match object type");
  }
  CrdtState& state = working(obj);
  Dot dot{replica_->id(), serial_, next_slot_++};
  Effect e = generate_effect(state, op, dot);
  apply_effect(state, e);
  effects_[obj].push_back(std::move(e));
}

inline Commit Transaction::commit() { return replica_->commit_transaction(*this); }

}  // namespace gatekv

#endif  // GATEKV_STORE_REPLICA_HPP
