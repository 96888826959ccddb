#ifndef GATEKV_UTIL_RNG_HPP
#define GATEKV_UTIL_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace gatekv {

/// Deterministic RNG facade. Bounded draws and shuffles are hand-rolled so
/// that identical seeds produce identical streams on every platform; the
/// standard distributions leave that implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform draw from [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) {
    return static_cast<double>(engine_() >> 11) / 9007199254740992.0 < p;  // 53-bit mantissa
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gatekv

#endif  // GATEKV_UTIL_RNG_HPP
