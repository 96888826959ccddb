#ifndef GATEKV_CRDT_UPDATE_OP_HPP
#define GATEKV_CRDT_UPDATE_OP_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "gatekv/util/box.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

/// The CRDT flavours the store supports.
enum class CrdtType : std::uint8_t {
  mvreg,    ///< multi-value register
  policy,   ///< permission-set register resolving conflicts by intersection
  orset,    ///< add-wins observed-remove set
  map,      ///< grow-only map of nested CRDTs, update-wins on remove
  counter,  ///< op-based counter
  flag,     ///< enable-wins boolean flag
};

constexpr const char* to_string(CrdtType t) {
  switch (t) {
    case CrdtType::mvreg: return "mvreg";
    case CrdtType::policy: return "policy";
    case CrdtType::orset: return "orset";
    case CrdtType::map: return "map";
    case CrdtType::counter: return "counter";
    case CrdtType::flag: return "flag";
  }
  return "?";
}

struct UpdateOp;

struct RegisterAssign {
  Bytes value;
  friend bool operator==(const RegisterAssign&, const RegisterAssign&) = default;
};

struct PolicyAssign {
  PermissionSet permissions;
  friend bool operator==(const PolicyAssign&, const PolicyAssign&) = default;
};

struct SetAdd {
  ByteSet elements;
  friend bool operator==(const SetAdd&, const SetAdd&) = default;
};

struct SetRemove {
  ByteSet elements;
  friend bool operator==(const SetRemove&, const SetRemove&) = default;
};

/// Updates one key of a map with an operation on the nested CRDT. The
/// nested CRDT's type is implied by the nested operation.
struct MapUpdate {
  Bytes key;
  Box<UpdateOp> nested;
  friend bool operator==(const MapUpdate&, const MapUpdate&) = default;
};

/// Removes one binding of a map. Bindings are addressed by key and nested
/// type, so the removed type must be named explicitly.
struct MapRemove {
  Bytes key;
  CrdtType nested_type = CrdtType::mvreg;
  friend bool operator==(const MapRemove&, const MapRemove&) = default;
};

struct CounterInc {
  std::int64_t delta = 0;
  friend bool operator==(const CounterInc&, const CounterInc&) = default;
};

struct FlagSet {
  bool value = false;
  friend bool operator==(const FlagSet&, const FlagSet&) = default;
};

/// One update operation against a single object, as issued by a client.
struct UpdateOp {
  std::variant<RegisterAssign, PolicyAssign, SetAdd, SetRemove, MapUpdate, MapRemove, CounterInc,
               FlagSet>
      op;

  friend bool operator==(const UpdateOp&, const UpdateOp&) = default;

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(op);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(op);
  }
};

/// The CRDT type an operation applies to.
inline CrdtType op_target_type(const UpdateOp& u) {
  struct Visitor {
    CrdtType operator()(const RegisterAssign&) const { return CrdtType::mvreg; }
    CrdtType operator()(const PolicyAssign&) const { return CrdtType::policy; }
    CrdtType operator()(const SetAdd&) const { return CrdtType::orset; }
    CrdtType operator()(const SetRemove&) const { return CrdtType::orset; }
    CrdtType operator()(const MapUpdate&) const { return CrdtType::map; }
    CrdtType operator()(const MapRemove&) const { return CrdtType::map; }
    CrdtType operator()(const CounterInc&) const { return CrdtType::counter; }
    CrdtType operator()(const FlagSet&) const { return CrdtType::flag; }
  };
  return std::visit(Visitor{}, u.op);
}

inline UpdateOp assign_register(Bytes value) { return {RegisterAssign{std::move(value)}}; }
inline UpdateOp assign_policy_op(PermissionSet permissions) {
  return {PolicyAssign{std::move(permissions)}};
}
inline UpdateOp add_to_set(ByteSet elements) { return {SetAdd{std::move(elements)}}; }
inline UpdateOp remove_from_set(ByteSet elements) { return {SetRemove{std::move(elements)}}; }
inline UpdateOp update_map_key(Bytes key, UpdateOp nested) {
  return {MapUpdate{std::move(key), Box<UpdateOp>(std::move(nested))}};
}
inline UpdateOp remove_map_key(Bytes key, CrdtType nested_type) {
  return {MapRemove{std::move(key), nested_type}};
}
inline UpdateOp increment_counter(std::int64_t delta) { return {CounterInc{delta}}; }
inline UpdateOp set_flag(bool value) { return {FlagSet{value}}; }

}  // namespace gatekv

#endif  // GATEKV_CRDT_UPDATE_OP_HPP
