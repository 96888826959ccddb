#ifndef GATEKV_ACL_MONITOR_HPP
#define GATEKV_ACL_MONITOR_HPP

#include <any>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gatekv/acl/keys.hpp"
#include "gatekv/acl/user.hpp"
#include "gatekv/crdt/state.hpp"
#include "gatekv/crdt/update_op.hpp"
#include "gatekv/store/replica.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

class SecuredTransaction;

/// Names the levels of an object hierarchy whose permissions matter for a
/// decision, e.g. lecture -> exercise -> group. Order is the caller's
/// convention; names must be unique.
struct LayerDefinition {
  std::vector<std::pair<Bytes, BoundObject>> layers;
};

/// The acting user's permissions on each requested layer, resolved against
/// the transaction snapshot, plus snapshot access to each layer object's data
/// value for data-dependent rules (e.g. a registration flag).
class SecurityLayers {
 public:
  bool has_layer(const Bytes& name) const { return layers_.count(name) != 0; }

  /// Permissions of the acting user on the named layer; unknown layers have
  /// none.
  const PermissionSet& permissions(const Bytes& name) const {
    auto it = layers_.find(name);
    return it == layers_.end() ? empty_set() : it->second.permissions;
  }

  bool layer_grants(const Bytes& name, const Bytes& token) const {
    return permissions(name).count(token) != 0;
  }

  /// Effective permissions are the union over all layers.
  PermissionSet union_permissions() const {
    PermissionSet out;
    for (const auto& [_, layer] : layers_) {
      out.insert(layer.permissions.begin(), layer.permissions.end());
    }
    return out;
  }

  bool any_layer_grants(const Bytes& token) const {
    for (const auto& [_, layer] : layers_) {
      if (layer.permissions.count(token)) return true;
    }
    return false;
  }

  const BoundObject& object(const Bytes& name) const {
    return layer(name).object;
  }

  /// Snapshot read of the named layer's object. Counted as a decision read.
  ReadResult data(const Bytes& name) const;

  std::vector<Bytes> names() const {
    std::vector<Bytes> out;
    for (const auto& [name, _] : layers_) out.push_back(name);
    return out;
  }

 private:
  friend class SecuredTransaction;

  struct Layer {
    BoundObject object;
    PermissionSet permissions;
  };

  static const PermissionSet& empty_set() {
    static const PermissionSet empty;
    return empty;
  }

  const Layer& layer(const Bytes& name) const {
    auto it = layers_.find(name);
    if (it == layers_.end()) throw std::logic_error("unknown security layer: " + name);
    return it->second;
  }

  SecuredTransaction* stx_ = nullptr;
  std::map<Bytes, Layer> layers_;
};

/// Application-supplied policy logic. Implementations must be pure apart
/// from reads made through the provided SecurityLayers accessors, so that a
/// decision depends only on the transaction snapshot.
class DecisionProcedure {
 public:
  virtual ~DecisionProcedure() = default;

  virtual bool decide_read(const UserId& current_user, const BoundObject& object,
                           const std::any& user_data, const SecurityLayers& layers) = 0;

  virtual bool decide_update(const UserId& current_user, const BoundObject& object,
                             const UpdateOp& op, const std::any& user_data,
                             const SecurityLayers& layers) = 0;

  virtual bool decide_policy_read(const UserId& current_user, const BoundObject& object,
                                  const UserId& target_user, const std::any& user_data,
                                  const SecurityLayers& layers) = 0;

  virtual bool decide_policy_assign(const UserId& current_user, const BoundObject& object,
                                    const UserId& target_user,
                                    const PermissionSet& new_permissions,
                                    const PermissionSet& old_permissions,
                                    const std::any& user_data,
                                    const SecurityLayers& layers) = 0;

  virtual LayerDefinition requested_policies(const UserId& current_user,
                                             const BoundObject& object) = 0;
};

/// Counters for auditing the monitor: every data operation that reaches the
/// store must be matched by an allowing decision, and every read a decision
/// performs is tallied separately from application operations.
struct MediationCounters {
  std::uint64_t decisions = 0;          // decide_read/decide_update calls
  std::uint64_t decisions_allowed = 0;  // ... that returned true
  std::uint64_t policy_decisions = 0;   // decide_policy_read/assign calls
  std::uint64_t policy_decisions_allowed = 0;
  std::uint64_t mediated_data_ops = 0;  // inner reads/updates on data buckets
  std::uint64_t decision_reads = 0;     // snapshot reads issued for decisions
  std::uint64_t denials = 0;
};

class BootstrapClosedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SecuredRealm;

/// A store transaction behind the monitor: every operation first resolves
/// the acting user's security layers and asks the decision procedure, all
/// against the one snapshot the transaction runs on.
class SecuredTransaction {
 public:
  /// Denied reads return nullopt and leave the store untouched.
  std::optional<ReadResult> read(const BoundObject& object) {
    validate_app_bucket(object.bucket);
    SecurityLayers layers = resolve_layers(proc_->requested_policies(user_, object));
    const bool allowed = proc_->decide_read(user_, object, user_data_, layers);
    note_decision(allowed);
    if (!allowed) return std::nullopt;
    note_data_op();
    return tx_.read(object);
  }

  /// Denied updates return false and buffer nothing.
  bool update(const BoundObject& object, const UpdateOp& op) {
    validate_app_bucket(object.bucket);
    SecurityLayers layers = resolve_layers(proc_->requested_policies(user_, object));
    const bool allowed = proc_->decide_update(user_, object, op, user_data_, layers);
    note_decision(allowed);
    if (!allowed) return false;
    note_data_op();
    tx_.update(object, op);
    return true;
  }

  /// Permissions of target_user on object, behind decide_policy_read.
  /// Never-assigned policies read as the empty set.
  std::optional<PermissionSet> read_policy(const BoundObject& object, const UserId& target_user) {
    validate_app_bucket(object.bucket);
    SecurityLayers layers = resolve_layers(proc_->requested_policies(user_, object));
    const bool allowed =
        proc_->decide_policy_read(user_, object, target_user, user_data_, layers);
    note_policy_decision(allowed);
    if (!allowed) return std::nullopt;
    ReadResult r = tx_.read(policy_storage_key(object, target_user));
    return PermissionSet(r.values.begin(), r.values.end());
  }

  /// Replaces target_user's permissions on object, behind
  /// decide_policy_assign. The decision sees both the requested set and the
  /// currently effective one, read from the same snapshot. The buffered
  /// policy update commits atomically with any data updates of this
  /// transaction.
  bool assign_policy(const BoundObject& object, const UserId& target_user,
                     const PermissionSet& permissions) {
    validate_app_bucket(object.bucket);
    const BoundObject pobj = policy_storage_key(object, target_user);
    ReadResult prior = tx_.read(pobj);
    note_decision_read();
    PermissionSet old_permissions(prior.values.begin(), prior.values.end());
    SecurityLayers layers = resolve_layers(proc_->requested_policies(user_, object));
    const bool allowed = proc_->decide_policy_assign(user_, object, target_user, permissions,
                                                     old_permissions, user_data_, layers);
    note_policy_decision(allowed);
    if (!allowed) return false;
    tx_.update(pobj, assign_policy_op(permissions));
    return true;
  }

  Commit commit() { return tx_.commit(); }

  const VectorClock& snapshot() const { return tx_.snapshot(); }
  bool open() const { return tx_.open(); }
  const UserId& user() const { return user_; }

 private:
  friend class SecuredRealm;
  friend class SecurityLayers;

  SecuredTransaction(Replica& replica, UserId user, DecisionProcedure& proc,
                     std::any user_data, MediationCounters* counters)
      : tx_(replica.begin()),
        user_(std::move(user)),
        proc_(&proc),
        user_data_(std::move(user_data)),
        counters_(counters) {}

  SecurityLayers resolve_layers(const LayerDefinition& def) {
    SecurityLayers out;
    out.stx_ = this;
    for (const auto& [name, object] : def.layers) {
      ReadResult r = tx_.read(policy_storage_key(object, user_));
      note_decision_read();
      PermissionSet perms(r.values.begin(), r.values.end());
      auto [_, fresh] =
          out.layers_.emplace(name, SecurityLayers::Layer{object, std::move(perms)});
      if (!fresh) throw std::logic_error("duplicate layer name: " + name);
    }
    return out;
  }

  ReadResult layer_data_read(const BoundObject& object) {
    note_decision_read();
    return tx_.read(object);
  }

  void note_decision(bool allowed) {
    counters_->decisions += 1;
    if (allowed) {
      counters_->decisions_allowed += 1;
    } else {
      counters_->denials += 1;
    }
  }

  void note_policy_decision(bool allowed) {
    counters_->policy_decisions += 1;
    if (allowed) {
      counters_->policy_decisions_allowed += 1;
    } else {
      counters_->denials += 1;
    }
  }

  void note_data_op() { counters_->mediated_data_ops += 1; }
  void note_decision_read() { counters_->decision_reads += 1; }

  Transaction tx_;
  UserId user_;
  DecisionProcedure* proc_;
  std::any user_data_;
  MediationCounters* counters_;
};

inline ReadResult SecurityLayers::data(const Bytes& name) const {
  return stx_->layer_data_read(layer(name).object);
}

/// One monitored deployment: hands out secured transactions and carries the
/// audit counters. Initial policies can be written unguarded, but only until
/// the first secured transaction starts; afterwards all policy changes go
/// through decisions like everything else.
class SecuredRealm {
 public:
  struct PolicyGrant {
    BoundObject object;
    UserId target;
    PermissionSet permissions;
  };

  SecuredTransaction begin(Replica& replica, UserId user, DecisionProcedure& proc,
                           std::any user_data = {}) {
    bootstrap_open_ = false;
    return SecuredTransaction(replica, std::move(user), proc, std::move(user_data),
                              &counters_);
  }

  /// Writes initial policies in one unguarded commit. Usable only before the
  /// first secured transaction; the system needs some policy to exist before
  /// any decision can allow managing policies.
  Commit bootstrap_policies(Replica& replica, const std::vector<PolicyGrant>& grants) {
    if (!bootstrap_open_) {
      throw BootstrapClosedError("bootstrap must happen before the first secured transaction");
    }
    Transaction tx = replica.begin();
    for (const PolicyGrant& g : grants) {
      validate_app_bucket(g.object.bucket);
      tx.update(policy_storage_key(g.object, g.target), assign_policy_op(g.permissions));
    }
    return tx.commit();
  }

  const MediationCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = MediationCounters{}; }
  bool bootstrap_open() const { return bootstrap_open_; }

 private:
  bool bootstrap_open_ = true;
  MediationCounters counters_;
};

}  // namespace gatekv

#endif  // GATEKV_ACL_MONITOR_HPP
