#pragma once

#include <cstdint>
#include <random>

namespace ntn {

using RandomStream = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-run stream: a pure function of (root seed, run index), so adding runs
/// never changes the streams of existing ones.
inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t run_index) {
    return RandomStream(mix64(mix64(seed) ^ mix64(run_index ^ 0xa0761d6478bd642fULL)));
}

} // namespace ntn
