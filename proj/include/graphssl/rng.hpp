#pragma once

// Deterministic randomness utilities.
//
// Every random decision in the library flows from a single 64-bit root seed
// through an explicit splitting scheme:
//
//   child_seed = mix_seed(root, role_tag, index...)
//
// where role_tag is one of the kRole* constants below and the indices
// identify the repetition / iteration / cell the stream belongs to.  Streams
// never share state, so work items can run in any order (or on any thread)
// and still produce bit-identical results.
//
// Two kinds of generators are used:
//   * SplitRng — a sequential engine (std::mt19937_64, whose raw output
//     sequence is fully pinned by the C++ standard) for sampling tasks such
//     as seed-set selection and graph generation.  Distribution mappings are
//     hand-rolled because <random> distributions are not portable.
//   * splitmix64_at(stream, k) — a counter-based stream for per-arc edge
//     lengths: the k-th draw is a pure hash of (stream, k), so a Dijkstra
//     relaxation can draw lazily, in any visit order, and still see exactly
//     the value a materialized length array would hold.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace graphssl {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9e3779b97f4a7c15ull;

// SplitMix64 output finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// k-th output of the SplitMix64 sequence seeded with `stream`.
constexpr std::uint64_t splitmix64_at(std::uint64_t stream, std::uint64_t k) {
  return splitmix64_mix(stream + (k + 1) * kSplitMix64Gamma);
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  return splitmix64_at(x, 0);
}

// Hash-combines a root seed with any number of integer parts (role tags,
// repetition indices, step indices, ...) into an independent child seed.
template <class... Parts>
constexpr std::uint64_t mix_seed(std::uint64_t root, Parts... parts) {
  std::uint64_t h = splitmix64(root);
  ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(parts)))), ...);
  return h;
}

// Role tags for mix_seed.  Arbitrary distinct constants; fixed forever so
// that a root seed reproduces the same experiment on every build.
inline constexpr std::uint64_t kRoleGraphGen = 0x01;
inline constexpr std::uint64_t kRoleSeedSample = 0x02;
inline constexpr std::uint64_t kRoleValSample = 0x03;
inline constexpr std::uint64_t kRoleNearestSeedIter = 0x04;
inline constexpr std::uint64_t kRoleBootstrapStep = 0x05;
inline constexpr std::uint64_t kRoleSweepCell = 0x06;
inline constexpr std::uint64_t kRoleAbSplit = 0x07;

// Maps 64 random bits to a double in (0, 1]: take the top 53 bits and shift
// into (0,1] so that log(u) is always finite.  Bit-exact on every platform.
constexpr double to_unit_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Sequential deterministic generator over a pinned engine.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_bits() { return engine_(); }

  // Uniform double in (0, 1].
  double uniform() { return to_unit_open_closed(next_bits()); }

  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitRng::below: bound == 0");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_bits();
      if (r >= threshold) return r % bound;
    }
  }

  // Exponential with the given mean (inverse transform; u in (0,1]).
  double exponential(double mean) { return -mean * std::log(uniform()); }

 private:
  std::mt19937_64 engine_;
};

// Draws k distinct elements from `pool` uniformly without replacement via a
// partial Fisher-Yates shuffle; the pool is copied, not mutated.  Result
// order is the draw order (deterministic for a given rng state).
std::vector<std::int32_t> sample_without_replacement(
    const std::vector<std::int32_t>& pool, std::size_t k, SplitRng& rng);

}  // namespace graphssl
