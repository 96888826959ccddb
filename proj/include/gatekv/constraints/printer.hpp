#ifndef GATEKV_CONSTRAINTS_PRINTER_HPP
#define GATEKV_CONSTRAINTS_PRINTER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatekv/constraints/constraint.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

// Textual form of constraint trees, one line, stable. Grammar:
//
//   constraint  = "true" | "false"
//               | "noMapRemoves" | "noSetAdds" | "noSetRemoves"
//               | "and(" list ")" | "or(" list ")"
//               | "isMapUpdate(" constraint ")"
//               | "isSetUpdate(" constraint ")"
//               | "assignsOnly(" strings ")" | "removesOnly(" strings ")"
//               | "setAddsOnly(" strings ")" | "setRemovesOnly(" strings ")"
//               | "constrainAssigns(" keycons ")"
//   keycon      = "keyConstrain(" string "," constraint ")"
//   string      = double-quoted, escapes \" \\ and \xNN
//
// Lists are comma-separated and possibly empty. parse_constraint accepts
// exactly what to_string produces plus arbitrary spaces after commas.

inline std::string to_string(const Constraint& c);

namespace detail {

inline std::string join_strings(const ByteSet& items) {
  std::string out;
  bool first = true;
  for (const Bytes& b : items) {
    if (!first) out += ", ";
    first = false;
    out += quote_bytes(b);
  }
  return out;
}

struct ConstraintPrinter {
  std::string operator()(const CAnd& n) const { return "and(" + join(n.items) + ")"; }
  std::string operator()(const COr& n) const { return "or(" + join(n.items) + ")"; }
  std::string operator()(const CIsMapUpdate& n) const {
    return "isMapUpdate(" + to_string(*n.inner) + ")";
  }
  std::string operator()(const CIsSetUpdate& n) const {
    return "isSetUpdate(" + to_string(*n.inner) + ")";
  }
  std::string operator()(const CAssignsOnly& n) const {
    return "assignsOnly(" + join_strings(n.keys) + ")";
  }
  std::string operator()(const CConstrainAssigns& n) const {
    std::string out = "constrainAssigns(";
    bool first = true;
    for (const KeyConstraint& kc : n.items) {
      if (!first) out += ", ";
      first = false;
      out += "keyConstrain(" + quote_bytes(kc.key) + ", " + to_string(*kc.inner) + ")";
    }
    return out + ")";
  }
  std::string operator()(const CNoMapRemoves&) const { return "noMapRemoves"; }
  std::string operator()(const CRemovesOnly& n) const {
    return "removesOnly(" + join_strings(n.keys) + ")";
  }
  std::string operator()(const CSetAddsOnly& n) const {
    return "setAddsOnly(" + join_strings(n.elements) + ")";
  }
  std::string operator()(const CSetRemovesOnly& n) const {
    return "setRemovesOnly(" + join_strings(n.elements) + ")";
  }
  std::string operator()(const CNoSetAdds&) const { return "noSetAdds"; }
  std::string operator()(const CNoSetRemoves&) const { return "noSetRemoves"; }
  std::string operator()(const CTrue&) const { return "true"; }
  std::string operator()(const CFalse&) const { return "false"; }

  static std::string join(const std::vector<Constraint>& items) {
    std::string out;
    bool first = true;
    for (const Constraint& c : items) {
      if (!first) out += ", ";
      first = false;
      out += to_string(c);
    }
    return out;
  }
};

}  // namespace detail

inline std::string to_string(const Constraint& c) {
  return std::visit(detail::ConstraintPrinter{}, c.node);
}

class ConstraintParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class ConstraintParser {
 public:
  explicit ConstraintParser(const std::string& text) : text_(text) {}

  Constraint parse() {
    Constraint c = constraint();
    skip_spaces();
    if (pos_ != text_.size()) fail("trailing input");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConstraintParseError("constraint parse error at offset " +
                               std::to_string(pos_) + ": " + what);
  }

  void skip_spaces() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  bool try_consume(const char* lit) {
    std::size_t n = std::string(lit).size();
    if (text_.compare(pos_, n, lit) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail("bad hex digit in escape");
  }

  Bytes string_lit() {
    skip_spaces();
    expect('"');
    Bytes out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= text_.size()) fail("dangling escape");
      char e = text_[pos_++];
      if (e == '"' || e == '\\') {
        out.push_back(e);
      } else if (e == 'x') {
        if (pos_ + 1 >= text_.size()) fail("truncated \\xNN escape");
        int hi = hex_value(text_[pos_++]);
        int lo = hex_value(text_[pos_++]);
        out.push_back(static_cast<char>(hi * 16 + lo));
      } else {
        fail("unknown escape");
      }
    }
    return out;
  }

  ByteSet string_set() {
    ByteSet out;
    expect('(');
    skip_spaces();
    if (!peek(')')) {
      out.insert(string_lit());
      skip_spaces();
      while (peek(',')) {
        ++pos_;
        out.insert(string_lit());
        skip_spaces();
      }
    }
    expect(')');
    return out;
  }

  std::vector<Constraint> constraint_list() {
    std::vector<Constraint> out;
    expect('(');
    skip_spaces();
    if (!peek(')')) {
      out.push_back(constraint());
      skip_spaces();
      while (peek(',')) {
        ++pos_;
        out.push_back(constraint());
        skip_spaces();
      }
    }
    expect(')');
    return out;
  }

  Constraint inner_arg() {
    expect('(');
    Constraint c = constraint();
    skip_spaces();
    expect(')');
    return c;
  }

  KeyConstraint keycon() {
    skip_spaces();
    if (!try_consume("keyConstrain")) fail("expected keyConstrain");
    expect('(');
    Bytes key = string_lit();
    skip_spaces();
    expect(',');
    Constraint inner = constraint();
    skip_spaces();
    expect(')');
    return key_constrain(std::move(key), std::move(inner));
  }

  Constraint constraint() {
    skip_spaces();
    // Longest-match order matters where one name prefixes another.
    if (try_consume("and")) return all_of(constraint_list());
    if (try_consume("or")) return any_of(constraint_list());
    if (try_consume("isMapUpdate")) return is_map_update(inner_arg());
    if (try_consume("isSetUpdate")) return is_set_update(inner_arg());
    if (try_consume("assignsOnly")) return assigns_only(string_set());
    if (try_consume("constrainAssigns")) {
      std::vector<KeyConstraint> items;
      expect('(');
      skip_spaces();
      if (!peek(')')) {
        items.push_back(keycon());
        skip_spaces();
        while (peek(',')) {
          ++pos_;
          items.push_back(keycon());
          skip_spaces();
        }
      }
      expect(')');
      return constrain_assigns(std::move(items));
    }
    if (try_consume("noMapRemoves")) return no_map_removes();
    if (try_consume("removesOnly")) return removes_only(string_set());
    if (try_consume("setAddsOnly")) return set_adds_only(string_set());
    if (try_consume("setRemovesOnly")) return set_removes_only(string_set());
    if (try_consume("noSetAdds")) return no_set_adds();
    if (try_consume("noSetRemoves")) return no_set_removes();
    if (try_consume("true")) return always();
    if (try_consume("false")) return never();
    fail("unknown constraint");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Inverse of to_string; throws ConstraintParseError on malformed input.
inline Constraint parse_constraint(const std::string& text) {
  return detail::ConstraintParser(text).parse();
}

}  // namespace gatekv

#endif  // GATEKV_CONSTRAINTS_PRINTER_HPP
