#ifndef GATEKV_ACL_USER_HPP
#define GATEKV_ACL_USER_HPP

#include <compare>
#include <stdexcept>
#include <utility>

#include "gatekv/util/bytes.hpp"

namespace gatekv {

/// Identity an operation runs under. Taken on trust; authentication is the
/// caller's problem.
struct UserId {
  Bytes id;

  explicit UserId(Bytes value) : id(std::move(value)) {
    if (id.empty()) throw std::invalid_argument("empty user id");
  }

  auto operator<=>(const UserId&) const = default;
};

}  // namespace gatekv

#endif  // GATEKV_ACL_USER_HPP
