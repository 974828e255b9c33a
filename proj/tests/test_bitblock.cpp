#include <doctest.h>

#include <random>

#include "qrng/bitblock.hpp"

using namespace qrng;

TEST_CASE("pack/unpack round-trips and bit addressing") {
    // bit i of the stream = bit (i mod 8) of byte i/8
    BitBlock b = BitBlock::from_string("10000000" "01000000");
    auto bytes = b.to_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0x01);
    CHECK(bytes[1] == 0x02);
    CHECK(BitBlock::from_bytes(bytes, 16) == b);
}

TEST_CASE("pack/unpack is bijective on random byte sequences") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::uint8_t> bytes(rng() % 64);
        for (auto& v : bytes) v = static_cast<std::uint8_t>(rng());
        BitBlock b = BitBlock::from_bytes(bytes, bytes.size() * 8);
        CHECK(b.to_bytes() == bytes);
        // and through the string representation
        CHECK(BitBlock::from_string(b.to_string()) == b);
    }
}

TEST_CASE("partial final byte is zero-padded") {
    BitBlock b = BitBlock::from_string("111");
    auto bytes = b.to_bytes();
    REQUIRE(bytes.size() == 1);
    CHECK(bytes[0] == 0x07);
}

TEST_CASE("append and slice keep bit order across word boundaries") {
    std::mt19937_64 rng(17);
    BitBlock all;
    std::string expect;
    for (int rep = 0; rep < 40; ++rep) {
        std::string part;
        const std::size_t len = rng() % 97;
        for (std::size_t i = 0; i < len; ++i) part.push_back(rng() & 1 ? '1' : '0');
        all.append(BitBlock::from_string(part));
        expect += part;
    }
    REQUIRE(all.size() == expect.size());
    CHECK(all.to_string() == expect);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t pos = rng() % expect.size();
        const std::size_t count = rng() % (expect.size() - pos);
        CHECK(all.slice(pos, count).to_string() == expect.substr(pos, count));
    }
}

TEST_CASE("append_bits matches push_back") {
    std::mt19937_64 rng(23);
    BitBlock a, b;
    for (int rep = 0; rep < 300; ++rep) {
        const unsigned count = rng() % 17;
        const std::uint64_t bits = rng();
        a.append_bits(bits, count);
        for (unsigned i = 0; i < count; ++i) b.push_back((bits >> i) & 1);
    }
    CHECK(a == b);
}

TEST_CASE("xor_accumulate truth table and algebra") {
    const BitBlock a = BitBlock::from_string("1010");
    const BitBlock b = BitBlock::from_string("0110");
    CHECK(xor_accumulate(a, b).to_string() == "1100");

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t len = 1 + rng() % 200;
        auto random_block = [&] {
            BitBlock x(len);
            for (std::size_t i = 0; i < len; ++i) x.set(i, rng() & 1);
            return x;
        };
        const BitBlock x = random_block(), y = random_block(), z = random_block();
        CHECK(xor_accumulate(x, x) == BitBlock(len));              // self-inverse
        CHECK(xor_accumulate(x, BitBlock(len)) == x);              // identity
        CHECK(xor_accumulate(x, y) == xor_accumulate(y, x));       // commutative
        CHECK(xor_accumulate(xor_accumulate(x, y), z) ==
              xor_accumulate(x, xor_accumulate(y, z)));            // associative
    }

    CHECK_THROWS_AS(xor_accumulate(a, BitBlock::from_string("10101")),
                    std::invalid_argument);
}

TEST_CASE("select_sample_bits default mask") {
    CHECK(select_sample_bits({0xff}).to_string() == "11111");
    // only the dropped positions (7, 6, 0) set
    CHECK(select_sample_bits({0b11000001}).to_string() == "00000");
    // hand-evaluated: keep positions 5..1 of 0b00101010, MSB first
    CHECK(select_sample_bits({0b00101010}).to_string() == "10101");
}

TEST_CASE("select_sample_bits output length equals popcount(mask)") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const auto mask = static_cast<std::uint8_t>(1 + rng() % 255);
        const auto value = static_cast<std::uint8_t>(rng());
        CHECK(select_sample_bits({value}, mask).size() ==
              static_cast<std::size_t>(std::popcount(mask)));
    }
    CHECK_THROWS_AS(select_sample_bits({0x12}, 0), std::invalid_argument);
}

TEST_CASE("batched bit selection matches per-sample selection") {
    std::mt19937_64 rng(31);
    std::vector<std::uint8_t> samples(1000);
    for (auto& s : samples) s = static_cast<std::uint8_t>(rng());
    for (std::uint8_t mask : {kDefaultKeepMask, std::uint8_t{0xff}, std::uint8_t{0x81}}) {
        BitBlock batched;
        select_sample_bits_into(samples, mask, batched);
        BitBlock single;
        for (auto s : samples) single.append(select_sample_bits({s}, mask));
        CHECK(batched == single);
    }
}
