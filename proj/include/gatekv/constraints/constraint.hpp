#ifndef GATEKV_CONSTRAINTS_CONSTRAINT_HPP
#define GATEKV_CONSTRAINTS_CONSTRAINT_HPP

#include <algorithm>
#include <utility>
#include <variant>
#include <vector>

#include "gatekv/crdt/update_op.hpp"
#include "gatekv/util/box.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

// Structural predicates over update operations, used by decision procedures
// to allow an operation by shape ("may only add own id to the participants
// set") instead of by object. Evaluation is total: a predicate applied to an
// operation of the wrong kind is false, never an error. Access control wants
// the fail-closed reading.

struct Constraint;

/// Pairs a map key with the constraint its nested update must satisfy.
struct KeyConstraint {
  Bytes key;
  Box<Constraint> inner;

  friend bool operator==(const KeyConstraint&, const KeyConstraint&);
};

struct CAnd {
  std::vector<Constraint> items;
  friend bool operator==(const CAnd&, const CAnd&);
};
struct COr {
  std::vector<Constraint> items;
  friend bool operator==(const COr&, const COr&);
};
struct CIsMapUpdate {
  Box<Constraint> inner;
  friend bool operator==(const CIsMapUpdate&, const CIsMapUpdate&);
};
struct CIsSetUpdate {
  Box<Constraint> inner;
  friend bool operator==(const CIsSetUpdate&, const CIsSetUpdate&);
};
/// Every map key assigned to must come from the given set. Vacuous on
/// removes; pair with CNoMapRemoves to block those.
struct CAssignsOnly {
  ByteSet keys;
  friend bool operator==(const CAssignsOnly&, const CAssignsOnly&) = default;
};
struct CConstrainAssigns {
  std::vector<KeyConstraint> items;
  friend bool operator==(const CConstrainAssigns&, const CConstrainAssigns&);
};
struct CNoMapRemoves {
  friend bool operator==(const CNoMapRemoves&, const CNoMapRemoves&) = default;
};
/// Every removed map key must come from the given set; vacuous on updates.
struct CRemovesOnly {
  ByteSet keys;
  friend bool operator==(const CRemovesOnly&, const CRemovesOnly&) = default;
};
/// Every added element must come from the given set; vacuous on removes.
struct CSetAddsOnly {
  ByteSet elements;
  friend bool operator==(const CSetAddsOnly&, const CSetAddsOnly&) = default;
};
struct CSetRemovesOnly {
  ByteSet elements;
  friend bool operator==(const CSetRemovesOnly&, const CSetRemovesOnly&) = default;
};
struct CNoSetAdds {
  friend bool operator==(const CNoSetAdds&, const CNoSetAdds&) = default;
};
struct CNoSetRemoves {
  friend bool operator==(const CNoSetRemoves&, const CNoSetRemoves&) = default;
};
struct CTrue {
  friend bool operator==(const CTrue&, const CTrue&) = default;
};
struct CFalse {
  friend bool operator==(const CFalse&, const CFalse&) = default;
};

struct Constraint {
  std::variant<CAnd, COr, CIsMapUpdate, CIsSetUpdate, CAssignsOnly,
               CConstrainAssigns, CNoMapRemoves, CRemovesOnly, CSetAddsOnly,
               CSetRemovesOnly, CNoSetAdds, CNoSetRemoves, CTrue, CFalse>
      node;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

inline bool operator==(const KeyConstraint& a, const KeyConstraint& b) {
  return a.key == b.key && a.inner == b.inner;
}
inline bool operator==(const CAnd& a, const CAnd& b) { return a.items == b.items; }
inline bool operator==(const COr& a, const COr& b) { return a.items == b.items; }
inline bool operator==(const CIsMapUpdate& a, const CIsMapUpdate& b) {
  return a.inner == b.inner;
}
inline bool operator==(const CIsSetUpdate& a, const CIsSetUpdate& b) {
  return a.inner == b.inner;
}
inline bool operator==(const CConstrainAssigns& a, const CConstrainAssigns& b) {
  return a.items == b.items;
}

// `and` and `or` are reserved tokens in C++, so the conjunction and
// disjunction builders are named all_of / any_of. The printed grammar keeps
// the and(...)/or(...) spelling.
inline Constraint all_of(std::vector<Constraint> items) {
  return {CAnd{std::move(items)}};
}
inline Constraint any_of(std::vector<Constraint> items) {
  return {COr{std::move(items)}};
}
inline Constraint is_map_update(Constraint inner) {
  return {CIsMapUpdate{Box<Constraint>(std::move(inner))}};
}
inline Constraint is_set_update(Constraint inner) {
  return {CIsSetUpdate{Box<Constraint>(std::move(inner))}};
}
inline Constraint assigns_only(ByteSet keys) { return {CAssignsOnly{std::move(keys)}}; }
inline KeyConstraint key_constrain(Bytes key, Constraint inner) {
  return KeyConstraint{std::move(key), Box<Constraint>(std::move(inner))};
}
inline Constraint constrain_assigns(std::vector<KeyConstraint> items) {
  return {CConstrainAssigns{std::move(items)}};
}
inline Constraint no_map_removes() { return {CNoMapRemoves{}}; }
inline Constraint removes_only(ByteSet keys) { return {CRemovesOnly{std::move(keys)}}; }
inline Constraint set_adds_only(ByteSet elements) {
  return {CSetAddsOnly{std::move(elements)}};
}
inline Constraint set_removes_only(ByteSet elements) {
  return {CSetRemovesOnly{std::move(elements)}};
}
inline Constraint no_set_adds() { return {CNoSetAdds{}}; }
inline Constraint no_set_removes() { return {CNoSetRemoves{}}; }
inline Constraint always() { return {CTrue{}}; }
inline Constraint never() { return {CFalse{}}; }

/// Structural evaluation of a constraint against an update operation.
inline bool applies_to(const Constraint& c, const UpdateOp& op) {
  struct Eval {
    const UpdateOp& op;

    bool operator()(const CAnd& n) const {
      return std::all_of(n.items.begin(), n.items.end(),
                         [&](const Constraint& c) { return applies_to(c, op); });
    }
    bool operator()(const COr& n) const {
      return std::any_of(n.items.begin(), n.items.end(),
                         [&](const Constraint& c) { return applies_to(c, op); });
    }
    bool operator()(const CIsMapUpdate& n) const {
      if (op_target_type(op) != CrdtType::map) return false;
      return applies_to(*n.inner, op);
    }
    bool operator()(const CIsSetUpdate& n) const {
      if (op_target_type(op) != CrdtType::orset) return false;
      return applies_to(*n.inner, op);
    }
    bool operator()(const CAssignsOnly& n) const {
      if (op.is<MapUpdate>()) return n.keys.count(op.as<MapUpdate>().key) != 0;
      return op.is<MapRemove>();
    }
    bool operator()(const CConstrainAssigns& n) const {
      if (op.is<MapRemove>()) return true;
      if (!op.is<MapUpdate>()) return false;
      const auto& mu = op.as<MapUpdate>();
      for (const KeyConstraint& kc : n.items) {
        if (kc.key == mu.key && !applies_to(*kc.inner, *mu.nested)) return false;
      }
      return true;
    }
    bool operator()(const CNoMapRemoves&) const { return op.is<MapUpdate>(); }
    bool operator()(const CRemovesOnly& n) const {
      if (op.is<MapRemove>()) return n.keys.count(op.as<MapRemove>().key) != 0;
      return op.is<MapUpdate>();
    }
    bool operator()(const CSetAddsOnly& n) const {
      if (op.is<SetAdd>()) {
        const auto& add = op.as<SetAdd>();
        return std::all_of(add.elements.begin(), add.elements.end(),
                           [&](const Bytes& e) { return n.elements.count(e) != 0; });
      }
      return op.is<SetRemove>();
    }
    bool operator()(const CSetRemovesOnly& n) const {
      if (op.is<SetRemove>()) {
        const auto& rm = op.as<SetRemove>();
        return std::all_of(rm.elements.begin(), rm.elements.end(),
                           [&](const Bytes& e) { return n.elements.count(e) != 0; });
      }
      return op.is<SetAdd>();
    }
    bool operator()(const CNoSetAdds&) const { return op.is<SetRemove>(); }
    bool operator()(const CNoSetRemoves&) const { return op.is<SetAdd>(); }
    bool operator()(const CTrue&) const { return true; }
    bool operator()(const CFalse&) const { return false; }
  };
  return std::visit(Eval{op}, c.node);
}

}  // namespace gatekv

#endif  // GATEKV_CONSTRAINTS_CONSTRAINT_HPP
