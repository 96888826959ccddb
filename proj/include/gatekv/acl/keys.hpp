#ifndef GATEKV_ACL_KEYS_HPP
#define GATEKV_ACL_KEYS_HPP

#include <cstdint>
#include <stdexcept>

#include "gatekv/acl/user.hpp"
#include "gatekv/store/bound_object.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

class InvalidBucketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Permission state lives in shadow buckets derived from the data bucket
/// names. '$' is banned from application bucket names, so a data bucket can
/// never collide with a shadow bucket.
inline constexpr const char* kPolicyBucketPrefix = "acl$";

inline bool is_policy_bucket(const Bytes& bucket) {
  return bucket.rfind(kPolicyBucketPrefix, 0) == 0;
}

inline void validate_app_bucket(const Bytes& bucket) {
  if (bucket.find('$') != Bytes::npos) {
    throw InvalidBucketError("application bucket names must not contain '$': " + bucket);
  }
}

namespace detail {

/// 4-byte big-endian length followed by the raw bytes. Concatenations of
/// these are injective, which plain concatenation is not ("ab"+"c" = "a"+"bc").
inline Bytes length_prefixed(const Bytes& b) {
  const auto n = static_cast<std::uint32_t>(b.size());
  Bytes out;
  out.reserve(4 + b.size());
  out.push_back(static_cast<char>(n >> 24));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out += b;
  return out;
}

}  // namespace detail

/// Where the permission set of `user` on `object` is stored: a Policy CRDT in
/// the shadow bucket, keyed injectively by (object key, user id).
inline BoundObject policy_storage_key(const BoundObject& object, const UserId& user) {
  return BoundObject{
      kPolicyBucketPrefix + object.bucket,
      detail::length_prefixed(object.key) + detail::length_prefixed(user.id),
      CrdtType::policy,
  };
}

}  // namespace gatekv

#endif  // GATEKV_ACL_KEYS_HPP
