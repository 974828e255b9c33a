#include <doctest.h>

#include <random>

#include "qrng/rng.hpp"
#include "qrng/toeplitz.hpp"

using namespace qrng;

namespace {

ToeplitzSeed random_seed(const ToeplitzParams& p, std::uint64_t s) {
    Rng rng(s);
    return ToeplitzSeed(rng.bits(p.seed_bits()), p);
}

BitBlock random_input(const ToeplitzParams& p, std::uint64_t s) {
    Rng rng(s ^ 0xabcdef);
    return rng.bits(p.n);
}

}  // namespace

TEST_CASE("params validation") {
    CHECK_NOTHROW(ToeplitzParams{}.validate());
    CHECK(ToeplitzParams{}.steps() == 19);
    CHECK(ToeplitzParams{}.seed_bits() == 2543);
    CHECK_THROWS_AS(ToeplitzParams{.m = 1520, .n = 1520}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(ToeplitzParams{.m = 8, .n = 24, .k = 7}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(ToeplitzParams{.m = 8, .n = 24, .k = 8, .epsilon_exponent = 0}.validate(),
                    std::invalid_argument);
    const ToeplitzParams p{.m = 4, .n = 8, .k = 4};
    CHECK_THROWS_AS(ToeplitzSeed(BitBlock(10), p), std::invalid_argument);
}

TEST_CASE("matrix indexing convention") {
    // m=2, n=2: [[s1, s0], [s2, s1]]
    const ToeplitzParams p{.m = 2, .n = 2, .k = 2};
    for (int v = 0; v < 8; ++v) {
        BitBlock seed(3);
        for (int i = 0; i < 3; ++i) seed.set(i, (v >> i) & 1);
        const ToeplitzMatrix mat = build_matrix(ToeplitzSeed(seed, p), p);
        CHECK(mat.at(0, 0) == seed.get(1));
        CHECK(mat.at(0, 1) == seed.get(0));
        CHECK(mat.at(1, 0) == seed.get(2));
        CHECK(mat.at(1, 1) == seed.get(1));
    }
}

TEST_CASE("zero seed gives the zero matrix") {
    const ToeplitzParams p{.m = 2, .n = 3, .k = 3};
    const ToeplitzMatrix mat = build_matrix(ToeplitzSeed(BitBlock(4), p), p);
    for (std::uint32_t i = 0; i < p.m; ++i)
        for (std::uint32_t j = 0; j < p.n; ++j) CHECK_FALSE(mat.at(i, j));
}

TEST_CASE("descending diagonals are constant and every seed bit is used") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    const ToeplitzSeed seed = random_seed(p, 7);
    const ToeplitzMatrix mat = build_matrix(seed, p);
    for (std::uint32_t i = 0; i + 1 < p.m; ++i)
        for (std::uint32_t j = 0; j + 1 < p.n; ++j)
            CHECK(mat.at(i, j) == mat.at(i + 1, j + 1));
    // index (n-1)+i-j covers 0 .. m+n-2
    std::vector<bool> used(p.seed_bits(), false);
    for (std::uint32_t i = 0; i < p.m; ++i)
        for (std::uint32_t j = 0; j < p.n; ++j) used[p.n - 1 + i - j] = true;
    for (bool u : used) CHECK(u);
}

TEST_CASE("dense extraction against the hand-evaluated 2x3 example") {
    const ToeplitzParams p{.m = 2, .n = 3, .k = 3};
    const ToeplitzMatrix mat = build_matrix(ToeplitzSeed(BitBlock::from_string("1101"), p), p);
    // T = [[s2,s1,s0],[s3,s2,s1]] = [[0,1,1],[1,0,1]]; input 101 -> 10
    CHECK(extract_dense(mat, BitBlock::from_string("101")).to_string() == "10");
}

TEST_CASE("dense extraction basics") {
    const ToeplitzParams p{.m = 2, .n = 3, .k = 3};
    const ToeplitzSeed seed = random_seed(p, 3);
    const ToeplitzMatrix mat = build_matrix(seed, p);
    CHECK(extract_dense(mat, BitBlock(3)) == BitBlock(2));  // annihilator
    CHECK_THROWS_AS(extract_dense(mat, BitBlock(4)), std::invalid_argument);

    // identity matrix: m=2, n=2, seed 010 -> [[1,0],[0,1]]
    const ToeplitzParams p2{.m = 2, .n = 2, .k = 2};
    const ToeplitzMatrix eye = build_matrix(ToeplitzSeed(BitBlock::from_string("010"), p2), p2);
    CHECK(extract_dense(eye, BitBlock::from_string("10")).to_string() == "10");
    CHECK(extract_dense(eye, BitBlock::from_string("01")).to_string() == "01");
}

TEST_CASE("pipelined equals dense on randomized small geometry") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    for (std::uint64_t c = 0; c < 1000; ++c) {
        const ToeplitzSeed seed = random_seed(p, c);
        const BitBlock input = random_input(p, c);
        const BitBlock dense = extract_dense(build_matrix(seed, p), input);
        const BitBlock piped = extract_pipelined(seed, p, input);
        REQUIRE(dense == piped);
    }
}

TEST_CASE("pipelined equals dense on ragged-m geometries") {
    // m not a multiple of the word size exercises the tail masking
    for (const ToeplitzParams p : {ToeplitzParams{.m = 17, .n = 60, .k = 4},
                                   ToeplitzParams{.m = 63, .n = 70, .k = 5},
                                   ToeplitzParams{.m = 65, .n = 130, .k = 13}}) {
        for (std::uint64_t c = 0; c < 100; ++c) {
            const ToeplitzSeed seed = random_seed(p, c + 5000);
            const BitBlock input = random_input(p, c);
            REQUIRE(extract_dense(build_matrix(seed, p), input) ==
                    extract_pipelined(seed, p, input));
        }
    }
}

TEST_CASE("pipelined equals dense at the default geometry") {
    const ToeplitzParams p{};
    for (std::uint64_t c = 0; c < 20; ++c) {
        const ToeplitzSeed seed = random_seed(p, c + 99);
        const BitBlock input = random_input(p, c);
        REQUIRE(extract_dense(build_matrix(seed, p), input) ==
                extract_pipelined(seed, p, input));
    }
}

TEST_CASE("one-hot input selects a matrix column") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    const ToeplitzSeed seed = random_seed(p, 21);
    const ToeplitzMatrix mat = build_matrix(seed, p);
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const std::uint32_t j = rng() % p.n;
        BitBlock input(p.n);
        input.set(j, true);
        const BitBlock out = extract_pipelined(seed, p, input);
        for (std::uint32_t i = 0; i < p.m; ++i) CHECK(out.get(i) == mat.at(i, j));
    }
}

TEST_CASE("extraction is GF(2)-linear in the input") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    const ToeplitzSeed seed = random_seed(p, 13);
    for (std::uint64_t c = 0; c < 200; ++c) {
        const BitBlock x = random_input(p, 2 * c);
        const BitBlock y = random_input(p, 2 * c + 1);
        CHECK(extract_pipelined(seed, p, xor_accumulate(x, y)) ==
              xor_accumulate(extract_pipelined(seed, p, x),
                             extract_pipelined(seed, p, y)));
    }
}

TEST_CASE("stream extraction: per-block definition and refresh schedule") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    const ToeplitzSeed seed_a = random_seed(p, 1);
    const ToeplitzSeed seed_b = random_seed(p, 2);

    SUBCASE("refresh never") {
        StreamExtractor ext(p, seed_a);
        for (std::uint64_t c = 0; c < 3; ++c) {
            const BitBlock input = random_input(p, c);
            CHECK(ext.process_block(input) == extract_pipelined(seed_a, p, input));
        }
        CHECK(ext.stats().blocks_out == 3);
        CHECK(ext.stats().bits_in == 3 * p.n);
        CHECK(ext.stats().bits_out == 3 * p.m);
        CHECK(ext.stats().seeds_used == 1);
    }

    SUBCASE("refresh_period=2 over 4 blocks: A A B B") {
        int handed_out = 0;
        SeedSource source = [&]() -> std::optional<BitBlock> {
            ++handed_out;
            return seed_b.bits();
        };
        StreamExtractor ext(p, seed_a, 2, source);
        std::vector<BitBlock> inputs;
        for (std::uint64_t c = 0; c < 4; ++c) inputs.push_back(random_input(p, 10 + c));
        CHECK(ext.process_block(inputs[0]) == extract_pipelined(seed_a, p, inputs[0]));
        CHECK(ext.process_block(inputs[1]) == extract_pipelined(seed_a, p, inputs[1]));
        CHECK(ext.process_block(inputs[2]) == extract_pipelined(seed_b, p, inputs[2]));
        CHECK(ext.process_block(inputs[3]) == extract_pipelined(seed_b, p, inputs[3]));
        CHECK(handed_out == 1);
        CHECK(ext.stats().seeds_used == 2);
    }

    SUBCASE("exhausted seed source raises") {
        SeedSource source = []() -> std::optional<BitBlock> { return std::nullopt; };
        StreamExtractor ext(p, seed_a, 1, source);
        CHECK_NOTHROW(ext.process_block(random_input(p, 0)));
        CHECK_THROWS_AS(ext.process_block(random_input(p, 1)), std::runtime_error);
    }
}

TEST_CASE("block framer emits n-bit blocks and tracks the residual") {
    BlockFramer framer(48);
    Rng rng(3);
    const BitBlock stream = rng.bits(48 * 3 + 17);
    // feed in awkward chunks
    std::size_t pos = 0;
    std::vector<std::size_t> chunks{5, 64, 1, 90, 7, 10000};
    std::vector<BitBlock> blocks;
    for (std::size_t c : chunks) {
        const std::size_t len = std::min(c, stream.size() - pos);
        framer.feed(stream.slice(pos, len));
        pos += len;
        while (framer.has_block()) blocks.push_back(framer.take_block());
    }
    REQUIRE(blocks.size() == 3);
    for (std::size_t b = 0; b < 3; ++b) CHECK(blocks[b] == stream.slice(48 * b, 48));
    CHECK(framer.pending_bits() == 17);
}

TEST_CASE("worker count does not change the output stream") {
    const ToeplitzParams p{.m = 32, .n = 48, .k = 8};
    const ToeplitzSeed seed = random_seed(p, 4);
    std::vector<BitBlock> blocks;
    for (std::uint64_t c = 0; c < 64; ++c) blocks.push_back(random_input(p, c));
    const auto ref = extract_blocks(seed, p, blocks, 1);
    for (unsigned workers : {2u, 8u}) {
        const auto out = extract_blocks(seed, p, blocks, workers);
        REQUIRE(out.size() == ref.size());
        for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == ref[i]);
    }
}

TEST_CASE("extraction ratio at the default geometry") {
    const ToeplitzParams p{};
    CHECK(static_cast<double>(p.m) / p.n == doctest::Approx(0.674).epsilon(0.01));
}
