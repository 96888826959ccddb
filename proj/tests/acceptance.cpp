/// Acceptance gate: one self-contained check per release criterion, each
/// printing a single [PASS]/[FAIL] line. The process exits nonzero if any
/// criterion fails. Tolerances and time limits are pinned here, next to the
/// checks that use them.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gatekv/crdt/oracle.hpp"
#include "gatekv/harness/bench.hpp"
#include "gatekv/harness/model_check.hpp"
#include "gatekv/harness/scenarios.hpp"
#include "gatekv/stats/workload.hpp"
#include "gatekv/util/rng.hpp"

#include "support/history_gen.hpp"
#include "support/stats_world.hpp"

namespace {

using namespace gatekv;
using namespace gatekv::harness;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f s", s);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Convergence: random causally closed histories of up to 7 effects per
//    type; every admissible application order must produce the same state.
//    The order enumeration is exhaustive per history. Pinned: 50 histories
//    per (type, size), 10 s budget.
bool check_convergence(std::string& detail) {
  const auto start = Clock::now();
  const CrdtType types[] = {CrdtType::mvreg, CrdtType::policy, CrdtType::orset, CrdtType::map};
  std::size_t histories = 0;
  Rng rng(20260815);
  try {
    for (CrdtType type : types) {
      gatekv::testing::HistoryGen gen(rng, type, 3);
      for (std::size_t size = 1; size <= 7; ++size) {
        for (int rep = 0; rep < 50; ++rep) {
          merge_equivalence_oracle(gen.generate(size), type);
          ++histories;
        }
      }
    }
  } catch (const std::exception& e) {
    detail = std::string("order-dependent state after ") + std::to_string(histories) +
             " histories: " + e.what();
    return false;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << histories << " histories x all delivery orders agreed (" << fmt_seconds(elapsed) << ")";
  detail = os.str();
  return elapsed < 10.0;
}

// --------------------------------------------------------------------------
// 2. Permission merge: concurrent assigns read as the n-ary intersection
//    (checked against a container-level oracle); sequential assigns read as
//    the last-written set. Pinned: 10,000 random cases, zero failures.
ByteSet intersection_oracle(const std::vector<PermissionSet>& sets) {
  if (sets.empty()) return {};
  ByteSet acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    ByteSet next;
    std::set_intersection(acc.begin(), acc.end(), sets[i].begin(), sets[i].end(),
                          std::inserter(next, next.begin()));
    acc = std::move(next);
  }
  return acc;
}

bool check_policy_intersection(std::string& detail) {
  static const Bytes tokens[] = {"admin", "read", "write", "grade", "audit"};
  Rng rng(97);
  auto random_set = [&] {
    PermissionSet s;
    for (const Bytes& t : tokens) {
      if (rng.chance(0.5)) s.insert(t);
    }
    return s;
  };

  for (int c = 0; c < 10'000; ++c) {
    // Concurrent case: optional shared predecessor, then 2 or 3 assigns
    // issued from distinct replicas against the same observed state.
    CrdtState base = empty_state(CrdtType::policy);
    std::vector<Effect> effects;
    if (rng.chance(0.5)) {
      Effect prior = generate_effect(base, assign_policy_op(random_set()), Dot{"P", 1, 0});
      apply_effect(base, prior);
      effects.push_back(std::move(prior));
    }
    const std::size_t width = rng.chance(0.5) ? 2 : 3;
    std::vector<PermissionSet> concurrent;
    for (std::size_t i = 0; i < width; ++i) {
      concurrent.push_back(random_set());
      effects.push_back(
          generate_effect(base, assign_policy_op(concurrent.back()), Dot{ReplicaId(1, char('A' + i)), 1, 0}));
    }
    const ByteSet got = merge_equivalence_oracle(effects, CrdtType::policy).values;
    const ByteSet want = intersection_oracle(concurrent);
    if (got != want) {
      detail = "concurrent case " + std::to_string(c) + ": read differs from the intersection";
      return false;
    }

    // Sequential case: a chain of assigns on one replica reads as the last.
    CrdtState s = empty_state(CrdtType::policy);
    PermissionSet last;
    const std::size_t chain = 2 + rng.below(3);
    for (std::size_t i = 0; i < chain; ++i) {
      last = random_set();
      Effect e = generate_effect(s, assign_policy_op(last), Dot{"S", i + 1, 0});
      apply_effect(s, e);
    }
    if (read_value(s).values != last) {
      detail = "sequential case " + std::to_string(c) + ": read is not the last-written set";
      return false;
    }
  }
  detail = "10000 random concurrent pairs/triples and sequential chains matched the oracle";
  return true;
}

// --------------------------------------------------------------------------
// 3. Protection: exhaustive 5-commit histories on 3 replicas. Causal
//    delivery admits zero violations; eventual delivery must yield at least
//    one counterexample. Pinned: 60 s budget for both sweeps.
bool check_protection(std::string& detail) {
  const auto start = Clock::now();
  const ProtectionVerdict causal = model_check_protection(Mode::local, 5, 3);
  const ProtectionVerdict eventual = model_check_protection(Mode::eventual, 5, 3);
  const double elapsed = seconds_since(start);

  std::ostringstream os;
  os << "causal: " << causal.violations << " violations / " << causal.leaks << " leaks over "
     << causal.schedules << " schedules; eventual: " << eventual.violations << " violations, "
     << (eventual.counterexample ? "counterexample " + eventual.counterexample->history
                                 : std::string("no counterexample"))
     << " (" << fmt_seconds(elapsed) << ")";
  detail = os.str();
  return causal.violations == 0 && causal.leaks == 0 && !causal.counterexample &&
         eventual.violations >= 1 && eventual.counterexample.has_value() && elapsed < 60.0;
}

// --------------------------------------------------------------------------
// 4. Revoked viewer: grant, revoke, then a confidential upload. Causal
//    delivery leaks in none of the 6 exhaustive schedules; eventual delivery
//    leaks in at least one.
bool check_revoked_viewer(std::string& detail) {
  const AliceBobReport causal = run_alice_bob(Mode::local, 6, 1);
  const AliceBobReport eventual = run_alice_bob(Mode::eventual, 6, 1);
  std::ostringstream os;
  os << "causal: " << causal.leaks << "/" << causal.schedules << " schedules leaked; eventual: "
     << eventual.leaks << "/" << eventual.schedules;
  detail = os.str();
  return causal.schedules == 6 && causal.leaks == 0 && !causal.counterexample &&
         eventual.leaks >= 1 && eventual.counterexample.has_value();
}

// --------------------------------------------------------------------------
// 5. Concurrent disjoint grants: the subject never holds both, every
//    intermediate visible state holds at most one, and after convergence
//    both replicas agree on the empty intersection.
bool check_concurrent_grants(std::string& detail) {
  const CharlyReport r = run_charly(1);
  bool converged_stage_empty = true;
  for (const auto& o : r.observations) {
    if (o.stage == "converged" && !o.grants.empty()) converged_stage_empty = false;
  }
  std::ostringstream os;
  os << (r.ever_both ? "a visible state held both grants" : "no visible state held both grants")
     << "; converged=" << (r.converged.empty() ? "{}" : "non-empty")
     << "; replicas " << (r.converged_equal ? "agree" : "disagree");
  detail = os.str();
  return !r.ever_both && r.converged_equal && r.converged.empty() && converged_stage_empty;
}

// --------------------------------------------------------------------------
// 6. Atomic visibility: transactions write two objects; across every arrival
//    order at every replica and every delivery prefix, a snapshot read sees
//    either all of a commit or none of it. Also checks that an open
//    transaction is immune to deliveries after it began.
bool check_atomic_visibility(std::string& detail) {
  const BoundObject x{"data", "x", CrdtType::mvreg};
  const BoundObject y{"data", "y", CrdtType::mvreg};

  // Three replicas: a sequential pair of commits from the first, one commit
  // from the second concurrent with both, a pure observer as the third.
  Replica a("a", ConsistencyMode::causal);
  Replica b("b", ConsistencyMode::causal);
  std::vector<Commit> commits;
  for (const Bytes& v : {Bytes("a1"), Bytes("a2")}) {
    Transaction t = a.begin();
    t.update(x, assign_register(v));
    t.update(y, assign_register(v));
    commits.push_back(t.commit());
  }
  {
    Transaction t = b.begin();
    t.update(x, assign_register("b1"));
    t.update(y, assign_register("b1"));
    commits.push_back(t.commit());
  }

  std::size_t schedules = 0, reads = 0;
  auto agrees = [&](Replica& obs) -> bool {
    // Expected register content given which commits the replica has applied:
    // the later chain write supersedes the earlier, the concurrent write
    // coexists. Both objects must show exactly this set in one snapshot.
    ByteSet expected;
    if (obs.has_applied("a", commits[1].serial())) {
      expected.insert("a2");
    } else if (obs.has_applied("a", commits[0].serial())) {
      expected.insert("a1");
    }
    if (obs.has_applied("b", commits[2].serial())) expected.insert("b1");

    Transaction t = obs.begin();
    const ByteSet sx = t.read(x).values;
    const ByteSet sy = t.read(y).values;
    ++reads;
    return sx == sy && sx == expected;
  };

  std::vector<std::size_t> order{0, 1, 2};
  do {
    ++schedules;
    Replica obs("obs", ConsistencyMode::causal);
    if (!agrees(obs)) {
      detail = "partial commit visible at the observer (schedule " + std::to_string(schedules) + ")";
      return false;
    }
    for (std::size_t k : order) {
      obs.apply(commits[k]);
      if (!agrees(obs)) {
        detail = "partial commit visible after delivering commit " + std::to_string(k);
        return false;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));

  // The writers also observe each other's commits; both arrival orders of
  // the remote chain at the concurrent writer.
  for (int flip = 0; flip < 2; ++flip) {
    Replica w("b", ConsistencyMode::causal);
    Transaction t = w.begin();
    t.update(x, assign_register("b1"));
    t.update(y, assign_register("b1"));
    Commit own = t.commit();
    (void)own;
    ++schedules;
    w.apply(commits[flip ? 1 : 0]);
    w.apply(commits[flip ? 0 : 1]);
    Transaction check = w.begin();
    const ByteSet sx = check.read(x).values;
    const ByteSet sy = check.read(y).values;
    ++reads;
    if (sx != sy || sx != ByteSet{"a2", "b1"}) {
      detail = "writer replica saw a partial commit after exchanging with the other writer";
      return false;
    }
  }

  // Snapshot stability: deliveries after begin() stay invisible, so both
  // reads of an open transaction agree with each other.
  Replica obs("obs", ConsistencyMode::causal);
  obs.apply(commits[0]);
  Transaction t = obs.begin();
  const ByteSet sx = t.read(x).values;
  obs.apply(commits[1]);
  obs.apply(commits[2]);
  const ByteSet sy = t.read(y).values;
  ++reads;
  if (sx != sy || sx != ByteSet{"a1"}) {
    detail = "open transaction observed commits delivered after it began";
    return false;
  }

  std::ostringstream os;
  os << schedules << " schedules, " << reads << " two-object snapshot reads, no partial commit";
  detail = os.str();
  return true;
}

// --------------------------------------------------------------------------
// 7. Role decision table: every enumerated (role, operation, target) cell —
//    including the registration-flag and publish-flag dependent ones — must
//    decide as documented. Pinned: at least 40 cells.
bool check_decision_matrix(std::string& detail) {
  ::testing::World world;
  const auto cells = ::testing::decision_matrix();
  std::size_t mismatches = 0;
  std::string first_bad;
  for (const auto& cell : cells) {
    if (cell.run(world) != cell.expected) {
      ++mismatches;
      if (first_bad.empty()) first_bad = cell.label;
    }
  }
  std::ostringstream os;
  os << cells.size() << " cells";
  if (mismatches) {
    os << ", " << mismatches << " mismatched (first: " << first_bad << ")";
  } else {
    os << ", all decided as documented";
  }
  detail = os.str();
  return mismatches == 0 && cells.size() >= 40;
}

// --------------------------------------------------------------------------
// 8. Throughput model: central-mode throughput falls with the request delay;
//    adjacent-delay ratios stay within 20% of the reference measurements
//    (1257.9 : 75.9 : 16.3 : 8.3 at 0/10/50/100 ms); local mode varies by
//    less than 1% across the same delays.
bool check_throughput_ratios(std::string& detail) {
  ScenarioConfig cfg;
  cfg.network.base_delay_ms = 0.3;
  cfg.workload = stats::config_for_target_ops(1000, 7);

  const double delays[] = {0.0, 10.0, 50.0, 100.0};
  const double reference[] = {1257.9, 75.9, 16.3, 8.3};
  std::vector<double> central, local;
  for (double net : delays) {
    cfg.network.net_delay_ms = net;
    cfg.mode = Mode::central;
    central.push_back(run_benchmark(cfg).throughput_ops_per_s);
    cfg.mode = Mode::local;
    local.push_back(run_benchmark(cfg).throughput_ops_per_s);
  }

  double worst = 0.0;
  bool ordered = true;
  for (std::size_t i = 0; i + 1 < central.size(); ++i) {
    if (central[i] <= central[i + 1]) ordered = false;
    const double got = central[i] / central[i + 1];
    const double want = reference[i] / reference[i + 1];
    worst = std::max(worst, std::abs(got - want) / want);
  }
  const auto [lo, hi] = std::minmax_element(local.begin(), local.end());
  const double local_spread = (*hi - *lo) / *lo;

  std::ostringstream os;
  os << "central ratio deviation <= " << static_cast<int>(worst * 100.0 + 0.5)
     << "% (limit 20%), local spread " << local_spread * 100.0 << "% (limit 1%)";
  detail = os.str();
  return ordered && worst < 0.20 && local_spread < 0.01;
}

// --------------------------------------------------------------------------
// 9. Workload shape: the generated stream at the 1,000-operation scale keeps
//    a read:update ratio of 3.12 +/- 0.3 and replays without a single
//    denial; the mediation read counts are reported under both candidate
//    overhead definitions (vs all operations, vs data reads).
bool check_workload_shape(std::string& detail) {
  const stats::WorkloadConfig cfg = stats::config_for_target_ops(1000, 3);
  const stats::Workload w = stats::generate_workload(cfg);
  const double ratio = w.read_update_ratio();

  Replica replica("r1", ConsistencyMode::causal);
  SecuredRealm realm;
  stats::StatsDecisionProcedure proc;
  realm.bootstrap_policies(replica, w.bootstrap);
  const std::uint64_t denials = stats::replay_workload(realm, replica, proc, w);
  const MediationCounters& mc = realm.counters();

  std::ostringstream os;
  os << w.ops.size() << " ops, read:update " << ratio << " (target 3.12 +/- 0.3), " << denials
     << " denials; " << mc.decision_reads << " decision reads = "
     << static_cast<double>(mc.decision_reads) / static_cast<double>(w.ops.size())
     << "x all ops / " << static_cast<double>(mc.decision_reads) / static_cast<double>(w.reads())
     << "x data reads";
  detail = os.str();
  return w.ops.size() >= 1000 && std::abs(ratio - 3.12) <= 0.3 && denials == 0;
}

// --------------------------------------------------------------------------
// 10. Determinism: every scenario, run twice with the same seed, serializes
//     to byte-identical JSON.
bool check_determinism(std::string& detail) {
  ScenarioConfig cfg;
  cfg.mode = Mode::central;
  cfg.network.net_delay_ms = 10.0;
  cfg.workload.students = 8;
  cfg.workload.seed = 9;

  const bool bench_ok =
      metrics_json(run_benchmark(cfg)).dump() == metrics_json(run_benchmark(cfg)).dump();
  const bool workload_ok = stats::workload_jsonl(stats::generate_workload(cfg.workload)) ==
                           stats::workload_jsonl(stats::generate_workload(cfg.workload));
  const bool viewer_ok = alice_bob_json(run_alice_bob(Mode::eventual, 6, 9)).dump() ==
                         alice_bob_json(run_alice_bob(Mode::eventual, 6, 9)).dump();
  const bool grants_ok = charly_json(run_charly(9)).dump() == charly_json(run_charly(9)).dump();
  const bool check_ok = verdict_json(model_check_protection(Mode::eventual, 3, 2)).dump() ==
                        verdict_json(model_check_protection(Mode::eventual, 3, 2)).dump();

  std::ostringstream os;
  os << "bench " << (bench_ok ? "ok" : "DIFFERS") << ", workload " << (workload_ok ? "ok" : "DIFFERS")
     << ", viewer " << (viewer_ok ? "ok" : "DIFFERS") << ", grants " << (grants_ok ? "ok" : "DIFFERS")
     << ", model check " << (check_ok ? "ok" : "DIFFERS");
  detail = os.str();
  return bench_ok && workload_ok && viewer_ok && grants_ok && check_ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {"crdt-convergence", check_convergence},
      {"policy-intersection", check_policy_intersection},
      {"protection-model-check", check_protection},
      {"revoked-viewer-schedules", check_revoked_viewer},
      {"concurrent-grant-merge", check_concurrent_grants},
      {"atomic-visibility", check_atomic_visibility},
      {"role-decision-matrix", check_decision_matrix},
      {"throughput-ratio-fit", check_throughput_ratios},
      {"workload-shape", check_workload_shape},
      {"determinism", check_determinism},
  };

  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("[%s] %02d %s: %s\n", ok ? "PASS" : "FAIL", index, c.name, detail.c_str());
  }
  if (failed) std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
