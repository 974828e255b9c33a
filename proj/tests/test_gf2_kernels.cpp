#include <doctest.h>

#include <bit>
#include <random>
#include <vector>

#include "qrng/gf2_kernels.hpp"

using namespace qrng;

namespace {

// Bit-level model of the window kernels, independent of any word tricks.
bool stream_bit(const std::vector<std::uint64_t>& words, std::size_t i) {
    return (words[i >> 6] >> (i & 63)) & 1u;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint64_t> w(n);
    for (auto& v : w) v = rng();
    return w;
}

std::vector<const gf2::KernelTable*> tables_under_test() {
    std::vector<const gf2::KernelTable*> t{&gf2::scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
    if (gf2::avx2_supported()) t.push_back(&gf2::avx2_kernels());
#endif
#if defined(__aarch64__)
    t.push_back(&gf2::neon_kernels());
#endif
    return t;
}

}  // namespace

TEST_CASE("xor_shifted matches the bit-level model") {
    std::mt19937_64 rng(101);
    for (const auto* kern : tables_under_test()) {
        CAPTURE(kern->name);
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t nwords = 1 + rng() % 24;
            const std::size_t off = rng() % 512;
            const auto src = random_words(rng, (off + 63) / 64 + nwords + 2);
            auto dst = random_words(rng, nwords);
            auto expect = dst;
            for (std::size_t w = 0; w < nwords; ++w)
                for (unsigned b = 0; b < 64; ++b)
                    if (stream_bit(src, off + 64 * w + b))
                        expect[w] ^= std::uint64_t{1} << b;
            kern->xor_shifted(dst.data(), src.data(), off, nwords);
            CHECK(dst == expect);
        }
    }
}

TEST_CASE("xor_words and xor_windows agree with scalar reference") {
    std::mt19937_64 rng(102);
    const auto& ref = gf2::scalar_kernels();
    for (const auto* kern : tables_under_test()) {
        CAPTURE(kern->name);
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t nwords = 1 + rng() % 40;
            const auto src = random_words(rng, nwords + 40);
            auto a = random_words(rng, nwords);
            auto b = a;
            kern->xor_words(a.data(), src.data(), nwords);
            ref.xor_words(b.data(), src.data(), nwords);
            CHECK(a == b);

            const std::size_t noffs = rng() % 90;
            std::vector<std::uint32_t> offs(noffs);
            for (auto& o : offs) o = static_cast<std::uint32_t>(rng() % (39 * 64));
            auto c = random_words(rng, nwords);
            auto d = c;
            kern->xor_windows(c.data(), src.data(), offs.data(), offs.size(), nwords);
            ref.xor_windows(d.data(), src.data(), offs.data(), offs.size(), nwords);
            CHECK(c == d);
        }
    }
}

TEST_CASE("popcount kernels match a per-bit count") {
    std::mt19937_64 rng(103);
    for (const auto* kern : tables_under_test()) {
        CAPTURE(kern->name);
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t nbits = 1 + rng() % 4000;
            const auto a = random_words(rng, (nbits + 63) / 64);
            std::uint64_t expect = 0;
            for (std::size_t i = 0; i < nbits; ++i) expect += stream_bit(a, i);
            CHECK(kern->popcount(a.data(), nbits) == expect);
        }
    }
}

TEST_CASE("and_shifted_popcount matches the bit-level model") {
    std::mt19937_64 rng(104);
    for (const auto* kern : tables_under_test()) {
        CAPTURE(kern->name);
        for (int rep = 0; rep < 300; ++rep) {
            const std::size_t total_bits = 64 + rng() % 6000;
            const std::size_t off = rng() % (total_bits - 32);
            const std::size_t nbits = 1 + rng() % (total_bits - off);
            const auto a = random_words(rng, (total_bits + 63) / 64);
            std::uint64_t expect = 0;
            for (std::size_t i = 0; i < nbits; ++i)
                expect += (stream_bit(a, i) && stream_bit(a, i + off)) ? 1 : 0;
            CHECK(kern->and_shifted_popcount(a.data(), off, nbits) == expect);
        }
    }
}

TEST_CASE("backend selection") {
    const std::string before = gf2::active_backend();
    REQUIRE(gf2::set_backend("scalar"));
    CHECK(gf2::active_backend() == "scalar");
    CHECK_FALSE(gf2::set_backend("no-such-backend"));
    REQUIRE(gf2::set_backend("auto"));
#if defined(__x86_64__) || defined(_M_X64)
    if (gf2::avx2_supported()) CHECK(gf2::active_backend() == "avx2");
#endif
    gf2::set_backend(before);
}
