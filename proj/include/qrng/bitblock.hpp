#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrng {

// One 8-bit ADC code.
struct RawSample {
    std::uint8_t value = 0;
};

// Default bit selection: drop the two most significant bits and the least
// significant bit, keep positions 5..1 (bit 7 = MSB).
inline constexpr std::uint8_t kDefaultKeepMask = 0x3e;

// Packed bit vector. Bit i of the stream lives at bit (i mod 64) of word
// i/64; serialized form is bytes with LSB-first bit order, so bit i of the
// stream is bit (i mod 8) of byte i/8. Bits past size() in the last word are
// always zero, which makes equality a plain word compare.
class BitBlock {
public:
    BitBlock() = default;
    explicit BitBlock(std::size_t len) : words_(word_count(len)), len_(len) {}

    // s consists of '0'/'1'; s[i] becomes bit i.
    static BitBlock from_string(std::string_view s);
    // Unpacks `len` bits from LSB-first bytes. len must fit in the bytes.
    static BitBlock from_bytes(std::span<const std::uint8_t> bytes, std::size_t len);

    std::vector<std::uint8_t> to_bytes() const;
    std::string to_string() const;

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void push_back(bool v);
    void append(const BitBlock& other);
    // Appends the low `count` bits of `bits`, LSB first.
    void append_bits(std::uint64_t bits, unsigned count);
    BitBlock slice(std::size_t pos, std::size_t count) const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::uint64_t* word_data() { return words_.data(); }
    const std::uint64_t* word_data() const { return words_.data(); }
    std::size_t word_size() const { return words_.size(); }

    void clear() { words_.clear(); len_ = 0; }

    bool operator==(const BitBlock&) const = default;

    static std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }
    // Mask selecting the valid bits of the final word of an n-bit stream.
    static std::uint64_t tail_mask(std::size_t bits) {
        const unsigned r = bits & 63;
        return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
    }

private:
    void mask_tail();

    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

// Bitwise XOR of two equal-length blocks. Throws std::invalid_argument on
// length mismatch.
BitBlock xor_accumulate(const BitBlock& acc, const BitBlock& v);

// Extracts the sample bits selected by keep_mask, emitted MSB-to-LSB of the
// kept positions. Throws std::invalid_argument if keep_mask is zero.
BitBlock select_sample_bits(RawSample s, std::uint8_t keep_mask = kDefaultKeepMask);

// Batched form of select_sample_bits: appends popcount(keep_mask) bits per
// sample to `out`.
void select_sample_bits_into(std::span<const std::uint8_t> samples,
                             std::uint8_t keep_mask, BitBlock& out);

}  // namespace qrng
