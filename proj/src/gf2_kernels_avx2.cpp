#if defined(__x86_64__) || defined(_M_X64)

#include "qrng/gf2_kernels.hpp"

#include <algorithm>
#include <bit>
#include <immintrin.h>

namespace qrng::gf2 {
namespace {

void xor_words_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords) {
    std::size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + w));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + w));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), _mm256_xor_si256(d, s));
    }
    for (; w < nwords; ++w) dst[w] ^= src[w];
}

// Window of the src bitstream starting at bit offset base*64 + r, expressed
// per 64-bit lane; the cross-lane carry comes from the unaligned hi load.
inline __m256i window_vec(const std::uint64_t* src, std::size_t base, unsigned r,
                          std::size_t w) {
    __m256i lo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + base + w));
    if (r == 0) return lo;
    __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + base + w + 1));
    return _mm256_or_si256(_mm256_srli_epi64(lo, static_cast<int>(r)),
                           _mm256_slli_epi64(hi, static_cast<int>(64 - r)));
}

void xor_shifted_avx2(std::uint64_t* dst, const std::uint64_t* src,
                      std::size_t off, std::size_t nwords) {
    const std::size_t base = off >> 6;
    const unsigned r = off & 63;
    std::size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + w));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w),
                            _mm256_xor_si256(d, window_vec(src, base, r, w)));
    }
    for (; w < nwords; ++w) {
        std::uint64_t v = src[base + w] >> r;
        if (r != 0) v |= src[base + w + 1] << (64 - r);
        dst[w] ^= v;
    }
}

void xor_windows_avx2(std::uint64_t* dst, const std::uint64_t* src,
                      const std::uint32_t* offs, std::size_t noffs,
                      std::size_t nwords) {
    // Accumulate each 256-bit stripe of dst across all offsets before
    // touching the next stripe, so the accumulator stays in a register.
    std::size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + w));
        for (std::size_t i = 0; i < noffs; ++i) {
            const std::size_t base = offs[i] >> 6;
            const unsigned r = offs[i] & 63;
            acc = _mm256_xor_si256(acc, window_vec(src, base, r, w));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + w), acc);
    }
    for (; w < nwords; ++w) {
        std::uint64_t acc = dst[w];
        for (std::size_t i = 0; i < noffs; ++i) {
            const std::size_t base = offs[i] >> 6;
            const unsigned r = offs[i] & 63;
            std::uint64_t v = src[base + w] >> r;
            if (r != 0) v |= src[base + w + 1] << (64 - r);
            acc ^= v;
        }
        dst[w] = acc;
    }
}

// Mula's AVX2 popcount: per-nibble table lookups summed with sad.
inline __m256i popcount_vec(__m256i v) {
    const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                           0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo),
                                  _mm256_shuffle_epi8(table, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

std::uint64_t and_shifted_popcount_avx2(const std::uint64_t* a, std::size_t off,
                                        std::size_t nbits) {
    const std::size_t base = off >> 6;
    const unsigned r = off & 63;
    const std::size_t nwords = (nbits + 63) / 64;
    // The vector body stops where the window's hi load could reach past the
    // last referenced word; the scalar tail guards that edge.
    const std::size_t last_ref = nbits == 0 ? 0 : (off + nbits - 1) >> 6;
    // Stripe at w reads hi words up to a[base + w + 4]; keep that within the
    // referenced range, and leave the tail-masked word to the scalar loop.
    std::size_t safe = nwords;
    if (r != 0) safe = last_ref > base ? std::min(nwords, last_ref - base) : 0;
    if ((nbits & 63) && safe == nwords) --safe;
    __m256i acc = _mm256_setzero_si256();
    std::size_t w = 0;
    for (; w + 4 <= safe; w += 4) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        __m256i v = _mm256_and_si256(x, window_vec(a, base, r, w));
        acc = _mm256_add_epi64(acc, popcount_vec(v));
    }
    std::uint64_t count = 0;
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; w < nwords; ++w) {
        std::uint64_t hi = 0;
        if (r != 0 && base + w + 1 <= last_ref) hi = a[base + w + 1];
        std::uint64_t win = r == 0 ? a[base + w] : (a[base + w] >> r) | (hi << (64 - r));
        std::uint64_t v = a[w] & win;
        if (w + 1 == nwords && (nbits & 63))
            v &= (std::uint64_t{1} << (nbits & 63)) - 1;
        count += std::popcount(v);
    }
    return count;
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t nbits) {
    const std::size_t nwords = nbits / 64;
    __m256i acc = _mm256_setzero_si256();
    std::size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        acc = _mm256_add_epi64(acc, popcount_vec(v));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; w < nwords; ++w) count += std::popcount(a[w]);
    if (nbits & 63)
        count += std::popcount(a[nwords] & ((std::uint64_t{1} << (nbits & 63)) - 1));
    return count;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

const KernelTable& avx2_kernels() {
    static const KernelTable t{"avx2",
                               xor_words_avx2,
                               xor_shifted_avx2,
                               xor_windows_avx2,
                               and_shifted_popcount_avx2,
                               popcount_avx2};
    return t;
}

}  // namespace qrng::gf2

#endif  // x86_64
