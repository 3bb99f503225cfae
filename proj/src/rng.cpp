#include "windsim/rng.hpp"

namespace windsim {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, StreamRole role, std::uint64_t index,
                                std::uint64_t replicate) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(role));
    h = mix64(h ^ index);
    h = mix64(h ^ (replicate + 0x5851f42d4c957f2dULL));
    return h;
}

} // namespace windsim
