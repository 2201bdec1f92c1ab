#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ropuf {

/// splitmix64 step. Pure integer arithmetic, identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Folds a list of 64-bit words into one well-mixed seed. Used to derive
/// independent per-chip and per-measurement streams so that results do not
/// depend on evaluation order or thread count.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t state = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t p : parts) {
        state ^= splitmix64(state) ^ p;
        (void)splitmix64(state);
    }
    return splitmix64(state);
}

inline std::mt19937_64 make_engine(std::uint64_t seed)
{
    std::uint64_t state = seed;
    return std::mt19937_64(splitmix64(state));
}

} // namespace ropuf
