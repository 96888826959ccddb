#ifndef GATEKV_HARNESS_SCENARIOS_HPP
#define GATEKV_HARNESS_SCENARIOS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatekv/acl/procedures.hpp"
#include "gatekv/harness/metrics.hpp"
#include "gatekv/store/replica.hpp"
#include "gatekv/util/rng.hpp"

namespace gatekv::harness {

/// The revoked-viewer anomaly. One user (the owner) grants a viewer read
/// access to an album, later revokes it, and afterwards uploads a private
/// photo — three causally chained commits. The viewer reads from a second
/// replica after every delivery step, across many delivery schedules. A leak
/// is a secured read that returns the private photo: the photo was uploaded
/// strictly after the revoke, so no correct execution may show it to the
/// viewer. Detection compares returned values against that ground-truth
/// label, not the decision outcome alone.
struct AliceBobReport {
  std::string mode;
  std::size_t schedules = 0;      // delivery schedules explored
  std::size_t read_attempts = 0;  // secured reads the viewer issued
  std::uint64_t leaks = 0;        // schedules in which the viewer saw the photo

  struct Counterexample {
    std::vector<std::string> arrival;  // commit labels in arrival order
    std::size_t after_delivery = 0;    // leak observed after this many arrivals

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
  };
  std::optional<Counterexample> counterexample;

  friend bool operator==(const AliceBobReport&, const AliceBobReport&) = default;
};

inline nlohmann::json alice_bob_json(const AliceBobReport& r) {
  nlohmann::json j;
  j["scenario"] = "alice-bob";
  j["mode"] = r.mode;
  j["schedules"] = r.schedules;
  j["read_attempts"] = r.read_attempts;
  j["leaks"] = r.leaks;
  if (r.counterexample) {
    j["counterexample"]["arrival"] = r.counterexample->arrival;
    j["counterexample"]["after_delivery"] = r.counterexample->after_delivery;
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

inline AliceBobReport run_alice_bob(Mode mode, std::size_t schedule_count,
                                    std::uint64_t seed) {
  if (schedule_count == 0) throw std::invalid_argument("schedule_count must be at least 1");

  const BoundObject album{"gallery", "album", CrdtType::mvreg};
  const UserId alice("alice");
  const UserId bob("bob");
  const Bytes confidential = "vacation-photo";

  // The owner's site issues the three commits in causal sequence.
  Replica alice_site("alice-site", ConsistencyMode::causal);
  SecuredRealm realm;
  TokenProcedure token_proc;
  AllowAllProcedure allow_all;
  DecisionProcedure& proc = mode == Mode::no_ac
                                ? static_cast<DecisionProcedure&>(allow_all)
                                : static_cast<DecisionProcedure&>(token_proc);

  const Commit setup =
      realm.bootstrap_policies(alice_site, {{album, alice, {"admin", "write", "read"}}});

  auto owner_commit = [&](auto&& body) {
    SecuredTransaction tx = realm.begin(alice_site, alice, proc);
    if (!body(tx)) throw std::logic_error("owner operation unexpectedly denied");
    return tx.commit();
  };
  const std::array<Commit, 3> commits = {
      owner_commit([&](SecuredTransaction& tx) {
        return tx.assign_policy(album, bob, {"read"});
      }),
      owner_commit([&](SecuredTransaction& tx) {
        return tx.assign_policy(album, bob, {});  // revoke: no read token left
      }),
      owner_commit([&](SecuredTransaction& tx) {
        return tx.update(album, assign_register(confidential));
      }),
  };
  const std::array<std::string, 3> labels = {"grant", "revoke", "upload"};

  // All arrival orders of the three commits at the viewer's site; the seed
  // only picks which ones are explored first when schedule_count < 6.
  std::vector<std::array<int, 3>> orders;
  std::array<int, 3> idx = {0, 1, 2};
  do {
    orders.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  Rng rng(seed);
  rng.shuffle(orders);
  if (orders.size() > schedule_count) orders.resize(schedule_count);

  const ConsistencyMode viewer_mode =
      mode == Mode::eventual ? ConsistencyMode::eventual : ConsistencyMode::causal;

  AliceBobReport report;
  report.mode = to_string(mode);
  report.schedules = orders.size();

  for (const auto& order : orders) {
    Replica bob_site("bob-site", viewer_mode);
    bob_site.apply(setup);

    bool leaked = false;
    std::size_t leaked_after = 0;
    auto viewer_reads = [&](std::size_t after) {
      SecuredTransaction tx = realm.begin(bob_site, bob, proc);
      auto photo = tx.read(album);
      ++report.read_attempts;
      if (photo && photo->values.count(confidential) && !leaked) {
        leaked = true;
        leaked_after = after;
      }
      // The read-only transaction is dropped, not committed.
    };

    viewer_reads(0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      bob_site.apply(commits[static_cast<std::size_t>(order[k])]);
      viewer_reads(k + 1);
    }

    if (leaked) {
      ++report.leaks;
      if (!report.counterexample) {
        AliceBobReport::Counterexample ce;
        for (int i : order) ce.arrival.push_back(labels[static_cast<std::size_t>(i)]);
        ce.after_delivery = leaked_after;
        report.counterexample = std::move(ce);
      }
    }
  }
  return report;
}

/// The double-consultant conflict. Two administrators concurrently assign a
/// consultant disjoint responsibility grants on one shared policy entry.
/// Concurrent policy assignments read as their intersection, so after
/// convergence the consultant holds neither grant — and in no intermediate
/// visible state both. A later assignment that has seen both concurrent ones
/// supersedes them (last write wins).
struct CharlyReport {
  struct Observation {
    std::string stage;    // "divergent", "converged", "sequential"
    std::string replica;
    PermissionSet grants;

    friend bool operator==(const Observation&, const Observation&) = default;
  };
  std::vector<Observation> observations;
  bool ever_both = false;        // any visible state with both grants
  bool converged_equal = false;  // replicas agree after exchange
  PermissionSet converged;       // grants after the concurrent assigns merged
  PermissionSet after_sequential;

  friend bool operator==(const CharlyReport&, const CharlyReport&) = default;
};

inline nlohmann::json charly_json(const CharlyReport& r) {
  nlohmann::json j;
  j["scenario"] = "charly";
  j["ever_both"] = r.ever_both;
  j["converged_equal"] = r.converged_equal;
  j["converged"] = r.converged;
  j["after_sequential"] = r.after_sequential;
  j["observations"] = nlohmann::json::array();
  for (const auto& o : r.observations) {
    j["observations"].push_back({{"stage", o.stage},
                                 {"replica", o.replica},
                                 {"grants", o.grants}});
  }
  return j;
}

inline CharlyReport run_charly(std::uint64_t seed) {
  const BoundObject registry{"hr", "responsibilities", CrdtType::orset};
  const UserId admin_a("admin-a");
  const UserId admin_b("admin-b");
  const UserId charly("charly");
  const Bytes grant_a = "consultant-A";
  const Bytes grant_b = "consultant-B";

  Replica ra("hq-a", ConsistencyMode::causal);
  Replica rb("hq-b", ConsistencyMode::causal);
  SecuredRealm realm;
  TokenProcedure proc;

  const Commit setup = realm.bootstrap_policies(
      ra, {{registry, admin_a, {"admin", "read"}}, {registry, admin_b, {"admin", "read"}}});
  rb.apply(setup);

  CharlyReport report;
  auto observe = [&](const std::string& stage, Replica& r, const UserId& admin) {
    SecuredTransaction tx = realm.begin(r, admin, proc);
    auto grants = tx.read_policy(registry, charly);
    if (!grants) throw std::logic_error("administrator policy read unexpectedly denied");
    if (grants->count(grant_a) && grants->count(grant_b)) report.ever_both = true;
    report.observations.push_back({stage, r.id(), *grants});
    return *grants;
  };

  // Concurrent disjoint grants: both transactions begin before either commit
  // is exchanged.
  SecuredTransaction ta = realm.begin(ra, admin_a, proc);
  SecuredTransaction tb = realm.begin(rb, admin_b, proc);
  if (!ta.assign_policy(registry, charly, {grant_a}) ||
      !tb.assign_policy(registry, charly, {grant_b})) {
    throw std::logic_error("administrator grant unexpectedly denied");
  }
  const Commit ca = ta.commit();
  const Commit cb = tb.commit();

  observe("divergent", ra, admin_a);
  observe("divergent", rb, admin_b);

  Rng rng(seed);
  if (rng.chance(0.5)) {
    ra.apply(cb);
    rb.apply(ca);
  } else {
    rb.apply(ca);
    ra.apply(cb);
  }

  const PermissionSet via_a = observe("converged", ra, admin_a);
  const PermissionSet via_b = observe("converged", rb, admin_b);
  report.converged_equal = via_a == via_b;
  report.converged = via_a;

  // A grant issued after convergence has observed both concurrent entries
  // and therefore replaces them outright.
  SecuredTransaction tseq = realm.begin(ra, admin_a, proc);
  if (!tseq.assign_policy(registry, charly, {grant_a})) {
    throw std::logic_error("administrator grant unexpectedly denied");
  }
  const Commit cseq = tseq.commit();
  rb.apply(cseq);

  const PermissionSet seq_a = observe("sequential", ra, admin_a);
  const PermissionSet seq_b = observe("sequential", rb, admin_b);
  report.converged_equal = report.converged_equal && seq_a == seq_b;
  report.after_sequential = seq_a;
  return report;
}

}  // namespace gatekv::harness

#endif  // GATEKV_HARNESS_SCENARIOS_HPP
