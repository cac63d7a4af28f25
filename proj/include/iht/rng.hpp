#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace iht {

// Seed-indexed random stream.
//
// Engine is std::mt19937_64, whose output sequence is fixed by the standard.
// The distribution transforms below are written out rather than taken from
// <random> because std::normal_distribution and friends are
// implementation-defined, and experiment outputs must be byte-identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Derives a stream seed from a base seed and a path of integer keys, e.g.
// derive_seed(init_seed, {kStreamMonteCarlo, trial}).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Stream tags. Each seed of a run feeds its own named stream.
inline constexpr std::uint64_t kStreamData = 0x64617461;       // "data"
inline constexpr std::uint64_t kStreamInit = 0x696e6974;       // "init"
inline constexpr std::uint64_t kStreamSupport = 0x73757070;    // "supp"
inline constexpr std::uint64_t kStreamMonteCarlo = 0x6d6f6e74; // "mont"
inline constexpr std::uint64_t kStreamSweep = 0x73776570;      // "swep"

}  // namespace iht
