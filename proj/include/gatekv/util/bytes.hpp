#ifndef GATEKV_UTIL_BYTES_HPP
#define GATEKV_UTIL_BYTES_HPP

#include <cstdint>
#include <set>
#include <string>

namespace gatekv {

/// Opaque byte string. Values, permission tokens, keys and user ids are all
/// binary-safe; no structure is imposed on them.
using Bytes = std::string;

using ByteSet = std::set<Bytes>;

/// Permissions are plain tokens; a user's rights on an object form a set.
using PermissionSet = std::set<Bytes>;

namespace detail {

inline char hex_digit(unsigned v) { return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10)); }

}  // namespace detail

/// Renders arbitrary bytes as a double-quoted literal with \xNN escapes for
/// non-printable characters. Stable across platforms; used by diagnostic
/// printers and the constraint grammar.
inline std::string quote_bytes(const Bytes& b) {
  std::string out;
  out.reserve(b.size() + 2);
  out.push_back('"');
  for (unsigned char c : b) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(static_cast<char>(c));
    } else if (c >= 0x20 && c < 0x7f) {
      out.push_back(static_cast<char>(c));
    } else {
      out += "\\x";
      out.push_back(detail::hex_digit(c >> 4));
      out.push_back(detail::hex_digit(c & 0xf));
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace gatekv

#endif  // GATEKV_UTIL_BYTES_HPP
