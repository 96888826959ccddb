#ifndef GATEKV_CRDT_EFFECT_HPP
#define GATEKV_CRDT_EFFECT_HPP

#include <stdexcept>
#include <utility>

#include "gatekv/crdt/dot.hpp"
#include "gatekv/crdt/state.hpp"
#include "gatekv/crdt/update_op.hpp"

namespace gatekv {

/// Thrown when an operation is applied to a CRDT of the wrong type.
struct TypeMismatchError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Downstream form of an update: the operation, its unique tag, and the set
/// of dots the operation supersedes. `observed` is captured against the
/// generating snapshot, which is what makes assignment and removal safe
/// under concurrent delivery: only contributions that were actually visible
/// get replaced.
struct Effect {
  UpdateOp op;
  Dot dot;
  DotSet observed;

  friend bool operator==(const Effect&, const Effect&) = default;
};

namespace detail {

/// All dots currently contributing to a state.
inline DotSet live_dots(const CrdtState& s) {
  DotSet out;
  struct Visitor {
    DotSet& out;
    void operator()(const MvRegState& v) const {
      for (const auto& [dot, _] : v.entries) out.insert(dot);
    }
    void operator()(const PolicyState& v) const {
      for (const auto& [dot, _] : v.entries) out.insert(dot);
    }
    void operator()(const OrSetState& v) const {
      for (const auto& [_, tags] : v.elements) out.insert(tags.begin(), tags.end());
    }
    void operator()(const CounterState& v) const {
      for (const auto& [dot, _] : v.increments) out.insert(dot);
    }
    void operator()(const FlagState& v) const { out.insert(v.tokens.begin(), v.tokens.end()); }
    void operator()(const MapState& v) const {
      for (const auto& [_, nested] : v.bindings) {
        DotSet inner = live_dots(nested);
        out.insert(inner.begin(), inner.end());
      }
    }
  };
  std::visit(Visitor{out}, s.state);
  return out;
}

/// Erases the given contributions from a state. Bindings and elements whose
/// last contribution goes away disappear with it.
inline void remove_dots(CrdtState& s, const DotSet& dots) {
  struct Visitor {
    const DotSet& dots;
    void operator()(MvRegState& v) const {
      for (const auto& d : dots) v.entries.erase(d);
    }
    void operator()(PolicyState& v) const {
      for (const auto& d : dots) v.entries.erase(d);
    }
    void operator()(OrSetState& v) const {
      for (auto it = v.elements.begin(); it != v.elements.end();) {
        for (const auto& d : dots) it->second.erase(d);
        it = it->second.empty() ? v.elements.erase(it) : std::next(it);
      }
    }
    void operator()(CounterState& v) const {
      for (const auto& d : dots) v.increments.erase(d);
    }
    void operator()(FlagState& v) const {
      for (const auto& d : dots) v.tokens.erase(d);
    }
    void operator()(MapState& v) const {
      for (auto it = v.bindings.begin(); it != v.bindings.end();) {
        remove_dots(it->second, dots);
        it = live_dots(it->second).empty() ? v.bindings.erase(it) : std::next(it);
      }
    }
  };
  std::visit(Visitor{dots}, s.state);
}

inline void require_type(const CrdtState& s, const UpdateOp& op) {
  if (state_type(s) != op_target_type(op)) {
    throw TypeMismatchError(std::string("operation for ") + to_string(op_target_type(op)) +
                            " applied to " + to_string(state_type(s)));
  }
}

}  // namespace detail

/// Computes the dots an operation supersedes when executed against `state`.
/// Assignments cover every visible entry, set removals the visible tags of
/// the removed elements, map removals every visible contribution of the
/// binding. Throws TypeMismatchError if the op does not fit the state.
inline Effect generate_effect(const CrdtState& state, const UpdateOp& op, const Dot& dot) {
  detail::require_type(state, op);
  Effect e{op, dot, {}};

  struct Visitor {
    const CrdtState& state;
    DotSet& observed;

    void operator()(const RegisterAssign&) const { observed = detail::live_dots(state); }
    void operator()(const PolicyAssign&) const { observed = detail::live_dots(state); }
    void operator()(const SetAdd& add) const {
      const auto& elements = state.as<OrSetState>().elements;
      for (const auto& el : add.elements) {
        if (auto it = elements.find(el); it != elements.end()) {
          observed.insert(it->second.begin(), it->second.end());
        }
      }
    }
    void operator()(const SetRemove& rem) const {
      const auto& elements = state.as<OrSetState>().elements;
      for (const auto& el : rem.elements) {
        if (auto it = elements.find(el); it != elements.end()) {
          observed.insert(it->second.begin(), it->second.end());
        }
      }
    }
    void operator()(const MapUpdate& mu) const {
      const auto& bindings = state.as<MapState>().bindings;
      MapEntryKey entry{mu.key, op_target_type(*mu.nested)};
      CrdtState nested_state = empty_state(entry.type);
      if (auto it = bindings.find(entry); it != bindings.end()) nested_state = it->second;
      observed = generate_effect(nested_state, *mu.nested, Dot{}).observed;
    }
    void operator()(const MapRemove& mr) const {
      const auto& bindings = state.as<MapState>().bindings;
      if (auto it = bindings.find(MapEntryKey{mr.key, mr.nested_type}); it != bindings.end()) {
        observed = detail::live_dots(it->second);
      }
    }
    void operator()(const CounterInc&) const {}
    void operator()(const FlagSet&) const { observed = state.as<FlagState>().tokens; }
  };
  std::visit(Visitor{state, e.observed}, op.op);
  return e;
}

namespace detail {

// Applies the contribution of an effect, assuming observed dots are already
// cleared. Recurses through map updates; every nested contribution carries
// the effect's dot.
inline void add_contribution(CrdtState& s, const UpdateOp& op, const Dot& dot,
                             const DotSet& observed) {
  struct Visitor {
    CrdtState& s;
    const Dot& dot;
    const DotSet& observed;

    void operator()(const RegisterAssign& a) const { s.as<MvRegState>().entries[dot] = a.value; }
    void operator()(const PolicyAssign& a) const {
      s.as<PolicyState>().entries[dot] = a.permissions;
    }
    void operator()(const SetAdd& add) const {
      for (const auto& el : add.elements) s.as<OrSetState>().elements[el].insert(dot);
    }
    void operator()(const SetRemove&) const {}  // removal is entirely in `observed`
    void operator()(const MapUpdate& mu) const {
      auto& bindings = s.as<MapState>().bindings;
      MapEntryKey entry{mu.key, op_target_type(*mu.nested)};
      auto [it, inserted] = bindings.try_emplace(entry, empty_state(entry.type));
      add_contribution(it->second, *mu.nested, dot, observed);
      // A nested op that contributes nothing (set-remove, flag-set(false))
      // must not leave an empty binding behind, or application order would
      // show through.
      if (live_dots(it->second).empty()) bindings.erase(it);
    }
    void operator()(const MapRemove&) const {}  // likewise
    void operator()(const CounterInc& inc) const {
      s.as<CounterState>().increments[dot] = inc.delta;
    }
    void operator()(const FlagSet& f) const {
      if (f.value) s.as<FlagState>().tokens.insert(dot);
    }
  };
  std::visit(Visitor{s, dot, observed}, op.op);
}

inline DotSet& seen_of(CrdtState& s) {
  struct Visitor {
    DotSet* operator()(MvRegState& v) const { return &v.seen; }
    DotSet* operator()(PolicyState& v) const { return &v.seen; }
    DotSet* operator()(OrSetState& v) const { return &v.seen; }
    DotSet* operator()(MapState& v) const { return &v.seen; }
    DotSet* operator()(CounterState& v) const { return &v.seen; }
    DotSet* operator()(FlagState& v) const { return &v.seen; }
  };
  return *std::visit(Visitor{}, s.state);
}

}  // namespace detail

/// Applies one effect. Total on well-formed effects; re-applying an effect
/// whose dot was already seen is a no-op, so delivery retries are harmless.
/// Once all causal predecessors are in, the application order of a set of
/// effects does not matter.
inline void apply_effect(CrdtState& state, const Effect& e) {
  detail::require_type(state, e.op);
  DotSet& seen = detail::seen_of(state);
  if (!seen.insert(e.dot).second) return;
  detail::remove_dots(state, e.observed);
  detail::add_contribution(state, e.op, e.dot, e.observed);
}

}  // namespace gatekv

#endif  // GATEKV_CRDT_EFFECT_HPP
