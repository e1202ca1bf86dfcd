#ifndef SCCKM_RNG_HPP
#define SCCKM_RNG_HPP

#include <cstdint>
#include <random>

namespace scckm {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for substream (a, b) of a master seed. Counter-based, so the value
/// depends only on the coordinates and not on the order streams are opened.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(mix64(master) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

inline Rng make_substream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return Rng(substream_seed(master, a, b));
}

}  // namespace scckm

#endif  // SCCKM_RNG_HPP
