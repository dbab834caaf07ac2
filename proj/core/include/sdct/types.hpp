#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace sdct {

using NodeId = std::uint32_t;
using HouseholdId = std::uint32_t;
using Day = std::int32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Day kNever = std::numeric_limits<Day>::max();

using Rng = std::mt19937_64;

/// Raised when a parameter set violates its documented invariants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for queries about nodes that do not exist (or are not infected).
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// SplitMix64 finalizer; used to turn (base seed, index) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Replicate seed: base seed xor replicate index, then mixed.
constexpr std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index) {
  return mix_seed(base ^ index);
}

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace sdct
