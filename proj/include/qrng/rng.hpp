#pragma once

#include <cstdint>
#include <random>

#include "qrng/bitblock.hpp"

namespace qrng {

// Deterministic random streams. The distributions are implemented here
// rather than taken from <random> so that identical seeds give identical
// streams under every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via the Marsaglia polar method; pairs are cached.
    double normal();

    // count random bits, packed.
    BitBlock bits(std::size_t count);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream splitting: derives an independent seed for a named substream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id);

}  // namespace qrng
