#ifndef GATEKV_CRDT_STATE_HPP
#define GATEKV_CRDT_STATE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <variant>

#include "gatekv/crdt/dot.hpp"
#include "gatekv/crdt/update_op.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv {

struct CrdtState;

/// Identity of one binding inside a map CRDT.
struct MapEntryKey {
  Bytes key;
  CrdtType type = CrdtType::mvreg;
  auto operator<=>(const MapEntryKey&) const = default;
};

/// Multi-value register: retains every concurrently assigned value, each
/// tagged with the dot of its assignment.
struct MvRegState {
  std::map<Dot, Bytes> entries;
  DotSet seen;
  friend bool operator==(const MvRegState&, const MvRegState&) = default;
};

/// Permission-set register. Same retention behaviour as the multi-value
/// register; only the read differs (intersection of the live entries).
struct PolicyState {
  std::map<Dot, PermissionSet> entries;
  DotSet seen;
  friend bool operator==(const PolicyState&, const PolicyState&) = default;
};

/// Add-wins set: an element is present while it has at least one live tag.
struct OrSetState {
  std::map<Bytes, DotSet> elements;
  DotSet seen;
  friend bool operator==(const OrSetState&, const OrSetState&) = default;
};

/// Op-based counter; contributions are kept per dot so duplicate effects
/// cannot double-count.
struct CounterState {
  std::map<Dot, std::int64_t> increments;
  DotSet seen;
  friend bool operator==(const CounterState&, const CounterState&) = default;
};

/// Enable-wins flag: set-true plants a token, any write clears the tokens it
/// observed. The flag reads true while a token is live.
struct FlagState {
  DotSet tokens;
  DotSet seen;
  friend bool operator==(const FlagState&, const FlagState&) = default;
};

/// Map of nested CRDTs. A binding exists while any of its contributions is
/// live; removal clears exactly the contributions it observed, so an update
/// concurrent with a remove survives (update-wins).
struct MapState {
  std::map<MapEntryKey, CrdtState> bindings;
  DotSet seen;
  friend bool operator==(const MapState& a, const MapState& b);
};

struct CrdtState {
  std::variant<MvRegState, PolicyState, OrSetState, MapState, CounterState, FlagState> state;

  friend bool operator==(const CrdtState&, const CrdtState&) = default;

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(state);
  }
  template <typename T>
  T& as() {
    return std::get<T>(state);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(state);
  }
};

inline bool operator==(const MapState& a, const MapState& b) {
  return a.bindings == b.bindings && a.seen == b.seen;
}

inline CrdtType state_type(const CrdtState& s) {
  struct Visitor {
    CrdtType operator()(const MvRegState&) const { return CrdtType::mvreg; }
    CrdtType operator()(const PolicyState&) const { return CrdtType::policy; }
    CrdtType operator()(const OrSetState&) const { return CrdtType::orset; }
    CrdtType operator()(const MapState&) const { return CrdtType::map; }
    CrdtType operator()(const CounterState&) const { return CrdtType::counter; }
    CrdtType operator()(const FlagState&) const { return CrdtType::flag; }
  };
  return std::visit(Visitor{}, s.state);
}

/// Empty state of the given type. An object that was never written reads as
/// this state's read value.
inline CrdtState empty_state(CrdtType t) {
  switch (t) {
    case CrdtType::mvreg: return {MvRegState{}};
    case CrdtType::policy: return {PolicyState{}};
    case CrdtType::orset: return {OrSetState{}};
    case CrdtType::map: return {MapState{}};
    case CrdtType::counter: return {CounterState{}};
    case CrdtType::flag: return {FlagState{}};
  }
  return {MvRegState{}};
}

/// Result of reading a CRDT. One struct rather than a variant so nested map
/// reads can recurse without boxing; only the fields for `type` are
/// meaningful.
struct ReadResult {
  CrdtType type = CrdtType::mvreg;
  ByteSet values;     ///< mvreg: concurrent values; policy: intersection; orset: elements
  std::int64_t count = 0;  ///< counter
  bool flag = false;       ///< flag
  std::map<MapEntryKey, ReadResult> entries;  ///< map

  friend bool operator==(const ReadResult&, const ReadResult&) = default;
};

inline ReadResult read_value(const CrdtState& s);

namespace detail {

inline ReadResult read_mvreg(const MvRegState& s) {
  ReadResult r{.type = CrdtType::mvreg};
  for (const auto& [dot, value] : s.entries) r.values.insert(value);
  return r;
}

// Intersection over all live entries; the empty state reads as the empty
// permission set (deny by default).
inline ReadResult read_policy(const PolicyState& s) {
  ReadResult r{.type = CrdtType::policy};
  bool first = true;
  for (const auto& [dot, perms] : s.entries) {
    if (first) {
      r.values = perms;
      first = false;
      continue;
    }
    ByteSet kept;
    for (const auto& p : r.values) {
      if (perms.count(p) != 0) kept.insert(p);
    }
    r.values = std::move(kept);
  }
  return r;
}

inline ReadResult read_orset(const OrSetState& s) {
  ReadResult r{.type = CrdtType::orset};
  for (const auto& [element, tags] : s.elements) {
    if (!tags.empty()) r.values.insert(element);
  }
  return r;
}

inline ReadResult read_counter(const CounterState& s) {
  ReadResult r{.type = CrdtType::counter};
  for (const auto& [dot, delta] : s.increments) r.count += delta;
  return r;
}

inline ReadResult read_flag(const FlagState& s) {
  return ReadResult{.type = CrdtType::flag, .flag = !s.tokens.empty()};
}

inline ReadResult read_map(const MapState& s) {
  ReadResult r{.type = CrdtType::map};
  for (const auto& [key, nested] : s.bindings) r.entries.emplace(key, read_value(nested));
  return r;
}

}  // namespace detail

inline ReadResult read_value(const CrdtState& s) {
  struct Visitor {
    ReadResult operator()(const MvRegState& v) const { return detail::read_mvreg(v); }
    ReadResult operator()(const PolicyState& v) const { return detail::read_policy(v); }
    ReadResult operator()(const OrSetState& v) const { return detail::read_orset(v); }
    ReadResult operator()(const MapState& v) const { return detail::read_map(v); }
    ReadResult operator()(const CounterState& v) const { return detail::read_counter(v); }
    ReadResult operator()(const FlagState& v) const { return detail::read_flag(v); }
  };
  return std::visit(Visitor{}, s.state);
}

}  // namespace gatekv

#endif  // GATEKV_CRDT_STATE_HPP
