#include "qrng/bitblock.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace qrng {

BitBlock BitBlock::from_string(std::string_view s) {
    BitBlock b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            b.set(i, true);
        else if (s[i] != '0')
            throw std::invalid_argument("BitBlock::from_string: expected '0' or '1'");
    }
    return b;
}

BitBlock BitBlock::from_bytes(std::span<const std::uint8_t> bytes, std::size_t len) {
    if (len > bytes.size() * 8)
        throw std::invalid_argument("BitBlock::from_bytes: length exceeds byte capacity");
    BitBlock b(len);
    const std::size_t nbytes = (len + 7) / 8;
    for (std::size_t i = 0; i < nbytes; ++i)
        b.words_[i >> 3] |= std::uint64_t{bytes[i]} << ((i & 7) * 8);
    b.mask_tail();
    return b;
}

std::vector<std::uint8_t> BitBlock::to_bytes() const {
    std::vector<std::uint8_t> out((len_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> ((i & 7) * 8));
    return out;
}

std::string BitBlock::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

void BitBlock::push_back(bool v) {
    if ((len_ & 63) == 0) words_.push_back(0);
    ++len_;
    if (v) set(len_ - 1, true);
}

void BitBlock::append(const BitBlock& other) {
    const unsigned shift = len_ & 63;
    if (shift == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        len_ += other.len_;
        return;
    }
    words_.resize(word_count(len_ + other.len_));
    std::size_t w = len_ >> 6;
    for (std::size_t i = 0; i < other.words_.size(); ++i) {
        words_[w + i] |= other.words_[i] << shift;
        if (w + i + 1 < words_.size())
            words_[w + i + 1] = other.words_[i] >> (64 - shift);
    }
    len_ += other.len_;
    mask_tail();
}

void BitBlock::append_bits(std::uint64_t bits, unsigned count) {
    if (count == 0) return;
    if (count < 64) bits &= (std::uint64_t{1} << count) - 1;
    const unsigned shift = len_ & 63;
    words_.resize(word_count(len_ + count));
    words_[len_ >> 6] |= bits << shift;
    if (shift != 0 && shift + count > 64)
        words_[(len_ >> 6) + 1] = bits >> (64 - shift);
    len_ += count;
}

BitBlock BitBlock::slice(std::size_t pos, std::size_t count) const {
    if (pos + count > len_)
        throw std::out_of_range("BitBlock::slice: out of range");
    BitBlock out(count);
    const std::size_t base = pos >> 6;
    const unsigned r = pos & 63;
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        std::uint64_t v = words_[base + w] >> r;
        if (r != 0 && base + w + 1 < words_.size())
            v |= words_[base + w + 1] << (64 - r);
        out.words_[w] = v;
    }
    out.mask_tail();
    return out;
}

void BitBlock::mask_tail() {
    if (!words_.empty()) words_.back() &= tail_mask(len_);
}

BitBlock xor_accumulate(const BitBlock& acc, const BitBlock& v) {
    if (acc.size() != v.size())
        throw std::invalid_argument("xor_accumulate: length mismatch");
    BitBlock out = acc;
    std::uint64_t* d = out.word_data();
    const std::uint64_t* s = v.word_data();
    for (std::size_t i = 0; i < out.word_size(); ++i) d[i] ^= s[i];
    return out;
}

BitBlock select_sample_bits(RawSample s, std::uint8_t keep_mask) {
    if (keep_mask == 0)
        throw std::invalid_argument("select_sample_bits: keep_mask must be nonzero");
    BitBlock out;
    for (int pos = 7; pos >= 0; --pos)
        if (keep_mask & (1u << pos)) out.push_back((s.value >> pos) & 1u);
    return out;
}

void select_sample_bits_into(std::span<const std::uint8_t> samples,
                             std::uint8_t keep_mask, BitBlock& out) {
    if (keep_mask == 0)
        throw std::invalid_argument("select_sample_bits_into: keep_mask must be nonzero");
    const unsigned kept = std::popcount(keep_mask);
    // Per-byte lookup of the kept bits, already in emission order (MSB-first
    // kept position becomes the lowest appended bit).
    std::array<std::uint8_t, 256> lut;
    for (unsigned v = 0; v < 256; ++v) {
        unsigned packed = 0, idx = 0;
        for (int pos = 7; pos >= 0; --pos)
            if (keep_mask & (1u << pos)) {
                if (v & (1u << pos)) packed |= 1u << idx;
                ++idx;
            }
        lut[v] = static_cast<std::uint8_t>(packed);
    }
    for (std::uint8_t s : samples) out.append_bits(lut[s], kept);
}

}  // namespace qrng
