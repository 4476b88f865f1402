#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace iifs {

// Derives an independent stream seed from a base seed and a salt
// (splitmix64 finalizer). Every random draw in the toolkit descends from
// one user-supplied seed through this function.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

// Deterministic random source. std::mt19937_64's output sequence is fully
// specified by the standard; the conversions below avoid
// std::uniform_*_distribution, whose results are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_open01() { return 1.0 - uniform01(); }

  // uniform over [0, n), unbiased by rejection
  int uniform_int(int n);

  // k distinct values from [0, n), order not meaningful
  std::vector<int> sample_without_replacement(int n, int k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<std::size_t>(i)],
                v[static_cast<std::size_t>(uniform_int(i + 1))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace iifs
