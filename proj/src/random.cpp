#include "pgt/random.hpp"

namespace pgt {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis)
{
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key)
{
    return splitmix64(splitmix64(seed) ^ fnv1a(key));
}

std::size_t Rng::uniform_index(std::size_t n)
{
    // Multiply-shift reduction; bias is below 2^-40 for the sizes used here.
    const unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::size_t>(m >> 64);
}

double Rng::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace pgt
