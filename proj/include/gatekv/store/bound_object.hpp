#ifndef GATEKV_STORE_BOUND_OBJECT_HPP
#define GATEKV_STORE_BOUND_OBJECT_HPP

#include <compare>
#include <string>

#include "gatekv/crdt/update_op.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

/// Name of one top-level object: a bucket, a key within the bucket, and the
/// CRDT type the object is read and updated as. The same (bucket, key) pair
/// under two types names two independent objects.
struct BoundObject {
  Bytes bucket;
  Bytes key;
  CrdtType type = CrdtType::mvreg;

  auto operator<=>(const BoundObject&) const = default;
};

inline std::string to_string(const BoundObject& obj) {
  return obj.bucket + "/" + obj.key + ":" + to_string(obj.type);
}

}  // namespace gatekv

#endif  // GATEKV_STORE_BOUND_OBJECT_HPP
