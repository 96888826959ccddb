#ifndef GATEKV_CRDT_ORACLE_HPP
#define GATEKV_CRDT_ORACLE_HPP

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gatekv/crdt/effect.hpp"

namespace gatekv {

struct CausalCycleError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Causal skeleton of a set of effects on one object: e1 precedes e2 if e2
/// observed e1's dot, or both come from the same replica and e1 carries the
/// earlier dot (session order).
inline std::vector<std::vector<std::size_t>> causal_predecessors(
    const std::vector<Effect>& effects) {
  std::vector<std::vector<std::size_t>> preds(effects.size());
  for (std::size_t i = 0; i < effects.size(); ++i) {
    for (std::size_t j = 0; j < effects.size(); ++j) {
      if (i == j) continue;
      const bool observed = effects[i].observed.count(effects[j].dot) != 0;
      const bool session = effects[j].dot.replica == effects[i].dot.replica &&
                           effects[j].dot < effects[i].dot;
      if (observed || session) preds[i].push_back(j);
    }
  }
  return preds;
}

/// Enumerates every topological order of `effects` under the causal
/// skeleton and invokes `visit` with each one. Throws CausalCycleError if
/// the claimed order has a cycle. Exponential; meant for small histories.
inline void for_each_topological_order(
    const std::vector<Effect>& effects,
    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  const auto preds = causal_predecessors(effects);
  std::vector<std::size_t> order;
  std::vector<bool> placed(effects.size(), false);

  std::function<void()> recurse = [&] {
    if (order.size() == effects.size()) {
      visit(order);
      return;
    }
    bool any = false;
    for (std::size_t i = 0; i < effects.size(); ++i) {
      if (placed[i]) continue;
      const bool ready = std::all_of(preds[i].begin(), preds[i].end(),
                                     [&](std::size_t p) { return placed[p]; });
      if (!ready) continue;
      any = true;
      placed[i] = true;
      order.push_back(i);
      recurse();
      order.pop_back();
      placed[i] = false;
    }
    if (!any) throw CausalCycleError("cycle in claimed causal order");
  };
  recurse();
}

/// Reference read for a causally closed effect set: applies the effects in
/// every admissible order, checks that each order produces the same state,
/// and returns its read. This is the cross-check for apply_effect under
/// permuted delivery; disagreement between orders throws.
inline ReadResult merge_equivalence_oracle(const std::vector<Effect>& effects, CrdtType type) {
  bool have_reference = false;
  CrdtState reference = empty_state(type);

  for_each_topological_order(effects, [&](const std::vector<std::size_t>& order) {
    CrdtState s = empty_state(type);
    for (std::size_t idx : order) apply_effect(s, effects[idx]);
    if (!have_reference) {
      reference = s;
      have_reference = true;
    } else if (!(s == reference)) {
      throw std::logic_error("application order changed the state");
    }
  });
  if (!have_reference && !effects.empty()) {
    throw CausalCycleError("cycle in claimed causal order");
  }
  return read_value(reference);
}

}  // namespace gatekv

#endif  // GATEKV_CRDT_ORACLE_HPP
