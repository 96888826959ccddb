#ifndef GATEKV_HARNESS_MODEL_CHECK_HPP
#define GATEKV_HARNESS_MODEL_CHECK_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatekv/acl/procedures.hpp"
#include "gatekv/harness/metrics.hpp"
#include "gatekv/store/replica.hpp"

namespace gatekv::harness {

/// Exhaustive check of the protection relation: if a policy commit was
/// visible when a data commit was issued, then wherever the data commit's
/// effects are readable, the decision evaluates against a policy state that
/// includes that policy commit.
///
/// The checker enumerates every policy/data pattern of a writer-side commit
/// chain (grants and revokes of the reader's access alternate) and, per
/// pattern, every arrival order of those commits at an observing replica.
/// Observer replicas hold no commits of their own and never gossip with each
/// other, so one observer's arrival orders are independent of another's;
/// checking each order once therefore covers the full cross product of
/// schedules for any replica count, and the enumeration over one observer is
/// exhaustive.
///
/// Two failure signals are tracked per delivery prefix:
///  - violation: a data commit is applied while one of the policy commits in
///    its causal past is not (the structural invariant);
///  - leak: the reader's secured read returns a value that was written while
///    the reader's access was revoked (or never granted) AND whose guarding
///    policy commits have not all arrived. A later grant that causally
///    follows the write legitimately exposes it, so the write-time label
///    alone is not enough.
struct ProtectionVerdict {
  std::string mode;
  std::size_t history_size = 0;
  std::size_t replica_count = 0;
  std::size_t histories = 0;      // policy/data patterns enumerated
  std::size_t schedules = 0;      // (pattern, arrival order) pairs executed
  std::size_t reads_checked = 0;  // secured reads by the reader
  std::uint64_t violations = 0;
  std::uint64_t leaks = 0;

  struct Counterexample {
    std::string history;               // e.g. "GDRD": grant, data, revoke, data
    std::vector<std::string> arrival;  // commit labels in arrival order
    std::size_t after_delivery = 0;
    std::string missing;  // the policy commit absent from the visible state
  };
  std::optional<Counterexample> counterexample;
};

inline nlohmann::json verdict_json(const ProtectionVerdict& v) {
  nlohmann::json j;
  j["scenario"] = "protection-model-check";
  j["mode"] = v.mode;
  j["history_size"] = v.history_size;
  j["replica_count"] = v.replica_count;
  j["histories"] = v.histories;
  j["schedules"] = v.schedules;
  j["reads_checked"] = v.reads_checked;
  j["violations"] = v.violations;
  j["leaks"] = v.leaks;
  if (v.counterexample) {
    j["counterexample"]["history"] = v.counterexample->history;
    j["counterexample"]["arrival"] = v.counterexample->arrival;
    j["counterexample"]["after_delivery"] = v.counterexample->after_delivery;
    j["counterexample"]["missing"] = v.counterexample->missing;
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

inline ProtectionVerdict model_check_protection(Mode mode, std::size_t history_size,
                                                std::size_t replica_count) {
  if (history_size == 0 || history_size > 7) {
    throw std::invalid_argument("history_size must be between 1 and 7");
  }
  if (replica_count < 2 || replica_count > 3) {
    throw std::invalid_argument("replica_count must be 2 or 3");
  }

  const BoundObject doc{"vault", "doc", CrdtType::mvreg};
  const UserId owner("owner");
  const UserId reader("reader");
  const ConsistencyMode observer_mode =
      mode == Mode::eventual ? ConsistencyMode::eventual : ConsistencyMode::causal;

  ProtectionVerdict verdict;
  verdict.mode = to_string(mode);
  verdict.history_size = history_size;
  verdict.replica_count = replica_count;

  TokenProcedure proc;

  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << history_size); ++pattern) {
    // Build the writer-side chain for this pattern. Bit i set means commit i
    // is a policy commit; policy commits alternate grant / revoke.
    Replica writer("writer", ConsistencyMode::causal);
    SecuredRealm realm;
    const Commit setup =
        realm.bootstrap_policies(writer, {{doc, owner, {"admin", "write", "read"}}});

    std::vector<Commit> commits;
    std::vector<std::string> labels;
    std::vector<bool> is_policy;
    std::vector<std::vector<std::size_t>> prereqs;  // per data commit: policy past
    std::vector<Bytes> value_of;  // data commits: written value; else empty
    ByteSet confidential;  // values written while the reader had no access
    std::string history;
    std::vector<std::size_t> policy_past;
    bool reader_allowed = false;  // policy state along the chain
    std::size_t grants_so_far = 0;

    for (std::size_t i = 0; i < history_size; ++i) {
      SecuredTransaction tx = realm.begin(writer, owner, proc);
      bool ok;
      if ((pattern >> i) & 1) {
        const bool is_grant = (grants_so_far++ % 2) == 0;
        ok = tx.assign_policy(doc, reader, is_grant ? PermissionSet{"read"} : PermissionSet{});
        reader_allowed = is_grant;
        history += is_grant ? 'G' : 'R';
        labels.push_back("c" + std::to_string(i) + (is_grant ? ":grant" : ":revoke"));
        is_policy.push_back(true);
        prereqs.emplace_back();
        value_of.emplace_back();
        policy_past.push_back(i);
      } else {
        const Bytes value = "v" + std::to_string(i);
        ok = tx.update(doc, assign_register(value));
        if (!reader_allowed) confidential.insert(value);
        history += 'D';
        labels.push_back("c" + std::to_string(i) + ":write-" + value);
        is_policy.push_back(false);
        prereqs.push_back(policy_past);
        value_of.push_back(value);
      }
      if (!ok) throw std::logic_error("writer operation unexpectedly denied");
      commits.push_back(tx.commit());
    }
    ++verdict.histories;

    // Every arrival order at the observer.
    std::vector<std::size_t> order(history_size);
    std::iota(order.begin(), order.end(), 0);
    do {
      ++verdict.schedules;
      Replica observer("observer", observer_mode);
      observer.apply(setup);

      auto check_prefix = [&](std::size_t after) {
        // Structural invariant over everything currently applied. Values of
        // violating data commits that were confidential at write time are
        // the ones a read must not show.
        ByteSet endangered;
        for (std::size_t d = 0; d < history_size; ++d) {
          if (is_policy[d] || !observer.has_applied(writer.id(), commits[d].serial())) {
            continue;
          }
          for (std::size_t p : prereqs[d]) {
            if (!observer.has_applied(writer.id(), commits[p].serial())) {
              ++verdict.violations;
              if (confidential.count(value_of[d])) endangered.insert(value_of[d]);
              if (!verdict.counterexample) {
                ProtectionVerdict::Counterexample ce;
                ce.history = history;
                for (std::size_t k : order) ce.arrival.push_back(labels[k]);
                ce.after_delivery = after;
                ce.missing = labels[p];
                verdict.counterexample = std::move(ce);
              }
            }
          }
        }
        // Observable leak via a secured read.
        SecuredTransaction tx = realm.begin(observer, reader, proc);
        auto result = tx.read(doc);
        ++verdict.reads_checked;
        if (result) {
          for (const Bytes& v : result->values) {
            if (endangered.count(v)) {
              ++verdict.leaks;
              break;
            }
          }
        }
      };

      check_prefix(0);
      for (std::size_t k = 0; k < order.size(); ++k) {
        observer.apply(commits[order[k]]);
        check_prefix(k + 1);
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }

  return verdict;
}

}  // namespace gatekv::harness

#endif  // GATEKV_HARNESS_MODEL_CHECK_HPP
