#if defined(__aarch64__)

#include "qrng/gf2_kernels.hpp"

#include <bit>
#include <arm_neon.h>

// NEON lane widths give a smaller win than AVX2 here; the shift-window
// kernels stay scalar on this path and only the plain XOR/popcount loops
// are vectorized.

namespace qrng::gf2 {
namespace {

void xor_words_neon(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords) {
    std::size_t w = 0;
    for (; w + 2 <= nwords; w += 2) {
        uint64x2_t d = vld1q_u64(dst + w);
        uint64x2_t s = vld1q_u64(src + w);
        vst1q_u64(dst + w, veorq_u64(d, s));
    }
    for (; w < nwords; ++w) dst[w] ^= src[w];
}

std::uint64_t popcount_neon(const std::uint64_t* a, std::size_t nbits) {
    const std::size_t nwords = nbits / 64;
    std::uint64_t count = 0;
    std::size_t w = 0;
    for (; w + 2 <= nwords; w += 2) {
        uint8x16_t v = vreinterpretq_u8_u64(vld1q_u64(a + w));
        count += vaddvq_u8(vcntq_u8(v));
    }
    for (; w < nwords; ++w) count += std::popcount(a[w]);
    if (nbits & 63)
        count += std::popcount(a[nwords] & ((std::uint64_t{1} << (nbits & 63)) - 1));
    return count;
}

}  // namespace

const KernelTable& neon_kernels() {
    static const KernelTable t{"neon",
                               xor_words_neon,
                               scalar_kernels().xor_shifted,
                               scalar_kernels().xor_windows,
                               scalar_kernels().and_shifted_popcount,
                               popcount_neon};
    return t;
}

}  // namespace qrng::gf2

#endif  // aarch64
