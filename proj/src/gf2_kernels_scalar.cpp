#include "qrng/gf2_kernels.hpp"

#include <bit>

// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against; keep them simple.

namespace qrng::gf2 {
namespace {

void xor_words_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords) {
    for (std::size_t i = 0; i < nwords; ++i) dst[i] ^= src[i];
}

inline std::uint64_t window_word(const std::uint64_t* src, std::size_t base,
                                 unsigned r, std::size_t w) {
    if (r == 0) return src[base + w];
    return (src[base + w] >> r) | (src[base + w + 1] << (64 - r));
}

void xor_shifted_scalar(std::uint64_t* dst, const std::uint64_t* src,
                        std::size_t off, std::size_t nwords) {
    const std::size_t base = off >> 6;
    const unsigned r = off & 63;
    for (std::size_t w = 0; w < nwords; ++w)
        dst[w] ^= window_word(src, base, r, w);
}

void xor_windows_scalar(std::uint64_t* dst, const std::uint64_t* src,
                        const std::uint32_t* offs, std::size_t noffs,
                        std::size_t nwords) {
    for (std::size_t i = 0; i < noffs; ++i)
        xor_shifted_scalar(dst, src, offs[i], nwords);
}

std::uint64_t and_shifted_popcount_scalar(const std::uint64_t* a, std::size_t off,
                                          std::size_t nbits) {
    // Shifted operand bits run off .. off+nbits-1; highest referenced word
    // of the window is (off + nbits - 1 + 63) adjusted below so no word past
    // the referenced range is touched.
    std::uint64_t count = 0;
    const std::size_t base = off >> 6;
    const unsigned r = off & 63;
    const std::size_t nwords = (nbits + 63) / 64;
    const std::size_t last_ref = nbits == 0 ? 0 : (off + nbits - 1) >> 6;
    for (std::size_t w = 0; w < nwords; ++w) {
        std::uint64_t hi = 0;
        if (r != 0 && base + w + 1 <= last_ref) hi = a[base + w + 1];
        std::uint64_t win = r == 0 ? a[base + w] : (a[base + w] >> r) | (hi << (64 - r));
        std::uint64_t v = a[w] & win;
        if (w + 1 == nwords) v &= nbits & 63 ? (std::uint64_t{1} << (nbits & 63)) - 1 : ~std::uint64_t{0};
        count += std::popcount(v);
    }
    return count;
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t nbits) {
    std::uint64_t count = 0;
    const std::size_t nwords = nbits / 64;
    for (std::size_t w = 0; w < nwords; ++w) count += std::popcount(a[w]);
    if (nbits & 63)
        count += std::popcount(a[nwords] & ((std::uint64_t{1} << (nbits & 63)) - 1));
    return count;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable t{"scalar",
                               xor_words_scalar,
                               xor_shifted_scalar,
                               xor_windows_scalar,
                               and_shifted_popcount_scalar,
                               popcount_scalar};
    return t;
}

}  // namespace qrng::gf2
