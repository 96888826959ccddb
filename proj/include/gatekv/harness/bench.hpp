#ifndef GATEKV_HARNESS_BENCH_HPP
#define GATEKV_HARNESS_BENCH_HPP

#include <cstdint>

#include "gatekv/acl/procedures.hpp"
#include "gatekv/harness/metrics.hpp"
#include "gatekv/stats/policy.hpp"
#include "gatekv/stats/workload.hpp"
#include "gatekv/store/replica.hpp"

namespace gatekv::harness {

/// Replays the course-administration workload on one replica under the given
/// deployment mode and prices every operation on the virtual clock:
///
///   - every application-level store operation costs kStoreOpCostNs;
///   - central: each decision additionally costs one request round trip of
///     exactly net_delay + base_delay (policy lookups happen server-side,
///     inside that request);
///   - local/eventual: each decision read costs one local store operation,
///     network delay does not appear anywhere;
///   - no-ac: the permissive procedure reads nothing, no extra cost.
///
/// Throughput is computed over application operations only.
inline Metrics run_benchmark(const ScenarioConfig& cfg) {
  cfg.validate();
  const stats::Workload w = stats::generate_workload(cfg.workload);

  const ConsistencyMode store_mode =
      cfg.mode == Mode::eventual ? ConsistencyMode::eventual : ConsistencyMode::causal;
  Replica replica("bench", store_mode);
  SecuredRealm realm;
  stats::StatsDecisionProcedure stats_proc;
  AllowAllProcedure allow_all;
  DecisionProcedure& proc = cfg.mode == Mode::no_ac
                                ? static_cast<DecisionProcedure&>(allow_all)
                                : static_cast<DecisionProcedure&>(stats_proc);
  realm.bootstrap_policies(replica, w.bootstrap);

  SimClock clock;
  const std::int64_t request_delay = cfg.network.request_delay_ns();
  std::uint64_t denials = 0;

  std::size_t i = 0;
  while (i < w.ops.size()) {
    const std::uint64_t tx_id = w.ops[i].tx;
    SecuredTransaction stx = realm.begin(replica, UserId(w.ops[i].actor), proc);
    while (i < w.ops.size() && w.ops[i].tx == tx_id) {
      const MediationCounters before = realm.counters();
      if (!stats::apply_app_operation(stx, w.ops[i])) ++denials;
      const MediationCounters after = realm.counters();

      clock.advance(kStoreOpCostNs);  // the application operation itself
      const std::uint64_t decided = (after.decisions - before.decisions) +
                                    (after.policy_decisions - before.policy_decisions);
      const std::uint64_t extra_reads = after.decision_reads - before.decision_reads;
      switch (cfg.mode) {
        case Mode::central:
          clock.advance(static_cast<std::int64_t>(decided) * request_delay);
          break;
        case Mode::local:
        case Mode::eventual:
          clock.advance(static_cast<std::int64_t>(extra_reads) * kStoreOpCostNs);
          break;
        case Mode::no_ac:
          break;
      }
      ++i;
    }
    stx.commit();
  }

  const MediationCounters& mc = realm.counters();
  Metrics m;
  m.mode = to_string(cfg.mode);
  m.net_delay_ms = cfg.network.net_delay_ms;
  m.base_delay_ms = cfg.network.base_delay_ms;
  m.request_delay_ms = cfg.network.request_delay_ms();
  m.app_ops = w.ops.size();
  m.app_reads = w.reads();
  m.app_updates = w.updates();
  m.decisions = mc.decisions + mc.policy_decisions;
  m.decision_reads = mc.decision_reads;
  m.denials = denials;
  m.leaks_detected = 0;
  m.wall_duration_s = clock.seconds();
  m.throughput_ops_per_s = static_cast<double>(m.app_ops) / clock.seconds();
  if (m.app_ops > 0) {
    m.overhead_reads_vs_total =
        static_cast<double>(m.decision_reads) / static_cast<double>(m.app_ops);
  }
  if (m.app_reads > 0) {
    m.overhead_reads_vs_app_reads =
        static_cast<double>(m.decision_reads) / static_cast<double>(m.app_reads);
  }
  return m;
}

}  // namespace gatekv::harness

#endif  // GATEKV_HARNESS_BENCH_HPP
