#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

// Word-parallel GF(2) primitives behind the extractor and the bit-level
// statistics. Each kernel has a scalar reference implementation and, where
// the platform provides them, SIMD variants selected at runtime. All
// variants are bit-exact equivalents of the scalar reference.
//
// Bit addressing follows BitBlock: bit i of a stream is bit (i mod 64) of
// word i/64.

namespace qrng::gf2 {

struct KernelTable {
    const char* name;

    // dst[i] ^= src[i] for i < nwords.
    void (*xor_words)(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);

    // dst[w] ^= bits [off + 64w, off + 64w + 63] of the stream in src.
    // src must be readable for off/64 + nwords + 1 words.
    void (*xor_shifted)(std::uint64_t* dst, const std::uint64_t* src,
                        std::size_t off, std::size_t nwords);

    // Batched xor_shifted over many offsets into the same destination; the
    // offsets share one dispatch and keep the accumulator in registers.
    void (*xor_windows)(std::uint64_t* dst, const std::uint64_t* src,
                        const std::uint32_t* offs, std::size_t noffs,
                        std::size_t nwords);

    // popcount over i < nbits of a[i] AND a[i + off] (bit indexing).
    // Reads only words containing referenced bits.
    std::uint64_t (*and_shifted_popcount)(const std::uint64_t* a, std::size_t off,
                                          std::size_t nbits);

    // popcount of the first nbits of a.
    std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t nbits);
};

const KernelTable& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const KernelTable& avx2_kernels();
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels();
#endif

// Best table for this machine (scalar unless a SIMD variant is supported).
const KernelTable& active();

// Forces a backend by name ("scalar", "avx2", "neon", "auto"). Returns false
// if the backend is unknown or unsupported on this machine.
bool set_backend(const std::string& name);
std::string active_backend();
std::vector<std::string> available_backends();

}  // namespace qrng::gf2
