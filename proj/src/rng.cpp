#include "qrng/rng.hpp"

#include <cmath>

namespace qrng {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

BitBlock Rng::bits(std::size_t count) {
    BitBlock b(count);
    if (count == 0) return b;
    std::uint64_t* w = b.word_data();
    for (std::size_t i = 0; i < b.word_size(); ++i) w[i] = engine_();
    w[b.word_size() - 1] &= BitBlock::tail_mask(count);
    return b;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id) {
    // splitmix64 finalization over the pair.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace qrng
