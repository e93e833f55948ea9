#pragma once

#include <cstdint>

namespace tailvar {

// Counter-based generator: output i of stream s under seed k is a pure
// function hash(k, s, i).  Streams can be consumed in any order (or in
// parallel) and always reproduce bit-identically, which is the contract the
// samplers and the multi-start solver rely on.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() {
    return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
  }

  // uniform in [0, 1), 53 random bits
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  std::uint64_t counter() const { return counter_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tailvar
