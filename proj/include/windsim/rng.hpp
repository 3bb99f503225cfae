// Seeded random substreams.
//
// Every random consumer (slow wind, turbulence of turbine i, ...) draws from
// its own engine whose seed is a hash of (campaign seed, role, index,
// replicate). Streams therefore do not depend on scheduling or thread count.
#pragma once

#include <cstdint>
#include <random>

namespace windsim {

enum class StreamRole : std::uint64_t {
    SlowWind = 1,
    Turbulence = 2,
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the substream identified by (seed, role, index, replicate).
[[nodiscard]] std::uint64_t derive_stream_key(std::uint64_t seed, StreamRole role,
                                              std::uint64_t index,
                                              std::uint64_t replicate = 0) noexcept;

/// Standard normal draws from one substream.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t key) : engine_(key) {}

    double operator()() { return dist_(engine_); }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

} // namespace windsim
