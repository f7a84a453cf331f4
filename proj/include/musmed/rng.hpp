#pragma once

#include <cstdint>
#include <random>

namespace musmed {

// Seeded randomness is derived the same way everywhere so that golden
// outputs survive reimplementation:
//
//   splitmix64(x)          the reference SplitMix64 finalizer on x + golden gamma
//   stream_seed(s, i)      splitmix64(s ^ splitmix64(i))
//   generator              std::mt19937_64 seeded with a single stream_seed value
//   uniform01(g)           (g() >> 11) * 2^-53, in [0, 1)
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// Domain constants keep the transition and generation streams disjoint.
inline constexpr std::uint64_t kTransitionDomain = 0x7472616e73697469ULL;  // "transiti"
inline constexpr std::uint64_t kGenerationDomain = 0x67656e6572617465ULL;  // "generate"

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

double uniform01(std::mt19937_64& gen);

}  // namespace musmed
