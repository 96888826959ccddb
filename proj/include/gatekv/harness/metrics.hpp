#ifndef GATEKV_HARNESS_METRICS_HPP
#define GATEKV_HARNESS_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "gatekv/stats/workload.hpp"

namespace gatekv::harness {

/// How decisions are priced and how the store propagates commits.
///
///  - local:    decisions read policy from the local replica snapshot; each
///              decision read costs one local store operation.
///  - central:  decisions go through one logical access-control server; each
///              decision costs one request round trip (net + base delay) and
///              the server's own policy lookups are part of that request.
///  - no_ac:    no mediation at all: the permissive procedure decides without
///              reading anything. Baseline for the overhead comparison.
///  - eventual: like local, but the store applies commits on arrival with no
///              causal delivery guard (the anomaly-prone weak mode).
enum class Mode { local, central, no_ac, eventual };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::local: return "local";
    case Mode::central: return "central";
    case Mode::no_ac: return "no-ac";
    case Mode::eventual: return "eventual";
  }
  return "?";
}

inline std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "local") return Mode::local;
  if (s == "central") return Mode::central;
  if (s == "no-ac") return Mode::no_ac;
  if (s == "eventual") return Mode::eventual;
  return std::nullopt;
}

/// Simulated cost of one local store operation: 0.4 ms. Together with the
/// default base delay this puts the central no-delay configuration near the
/// reference deployment's throughput ordering.
inline constexpr std::int64_t kStoreOpCostNs = 400'000;

inline std::int64_t ms_to_ns(double ms) { return std::llround(ms * 1e6); }

/// Fixed-latency network: one mediated request costs the full link round
/// trip plus the server's processing time.
struct NetworkModel {
  double net_delay_ms = 0.0;   // round-trip link delay per request
  double base_delay_ms = 0.3;  // per-request processing delay

  double request_delay_ms() const { return net_delay_ms + base_delay_ms; }
  std::int64_t request_delay_ns() const { return ms_to_ns(request_delay_ms()); }

  void validate() const {
    if (net_delay_ms < 0 || base_delay_ms < 0) {
      throw std::invalid_argument("network delays must be non-negative");
    }
  }
};

struct ScenarioConfig {
  Mode mode = Mode::local;
  NetworkModel network;
  stats::WorkloadConfig workload;
  std::uint64_t seed = 1;
  std::size_t schedule_count = 24;  // delivery schedules for anomaly runs

  void validate() const {
    network.validate();
    if (schedule_count == 0) {
      throw std::invalid_argument("schedule_count must be at least 1");
    }
  }
};

/// Virtual time. The pipeline is strictly sequential (decisions are not
/// pipelined), so a full timestamped event queue degenerates to a single
/// monotone counter that each operation advances.
class SimClock {
 public:
  void advance(std::int64_t ns) { ns_ += ns; }
  std::int64_t nanoseconds() const { return ns_; }
  double seconds() const { return static_cast<double>(ns_) / 1e9; }

 private:
  std::int64_t ns_ = 0;
};

/// Outcome of one benchmark run. Durations are simulated time. decision_reads
/// counts only the snapshot reads issued on behalf of decisions; app_ops is
/// the plain workload length, excluding those.
struct Metrics {
  std::string mode;
  double net_delay_ms = 0.0;
  double base_delay_ms = 0.0;
  double request_delay_ms = 0.0;

  std::uint64_t app_ops = 0;
  std::uint64_t app_reads = 0;
  std::uint64_t app_updates = 0;
  std::uint64_t decisions = 0;
  std::uint64_t decision_reads = 0;
  std::uint64_t denials = 0;
  std::uint64_t leaks_detected = 0;

  double wall_duration_s = 0.0;
  double throughput_ops_per_s = 0.0;

  // The two candidate definitions of the read-overhead ratio: extra reads
  // over all application operations, and extra reads over application reads.
  double overhead_reads_vs_total = 0.0;
  double overhead_reads_vs_app_reads = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

inline nlohmann::json metrics_json(const Metrics& m) {
  nlohmann::json j;
  j["mode"] = m.mode;
  j["net_delay_ms"] = m.net_delay_ms;
  j["base_delay_ms"] = m.base_delay_ms;
  j["request_delay_ms"] = m.request_delay_ms;
  j["app_ops"] = m.app_ops;
  j["app_reads"] = m.app_reads;
  j["app_updates"] = m.app_updates;
  j["decisions"] = m.decisions;
  j["decision_reads"] = m.decision_reads;
  j["denials"] = m.denials;
  j["leaks_detected"] = m.leaks_detected;
  j["wall_duration_s"] = m.wall_duration_s;
  j["throughput_ops_per_s"] = m.throughput_ops_per_s;
  j["overhead_reads_vs_total"] = m.overhead_reads_vs_total;
  j["overhead_reads_vs_app_reads"] = m.overhead_reads_vs_app_reads;
  return j;
}

}  // namespace gatekv::harness

#endif  // GATEKV_HARNESS_METRICS_HPP
