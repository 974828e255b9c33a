#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qrng/bitblock.hpp"

namespace qrng {

// Extractor geometry. epsilon is 2^-epsilon_exponent.
struct ToeplitzParams {
    std::uint32_t m = 1024;
    std::uint32_t n = 1520;
    std::uint32_t k = 80;
    std::uint32_t epsilon_exponent = 20;

    std::size_t seed_bits() const { return std::size_t{m} + n - 1; }
    std::uint32_t steps() const { return n / k; }
    // Throws std::invalid_argument when m >= n, k does not divide n, or any
    // field is zero.
    void validate() const;
};

// The m+n-1 matrix building seed bits. Keeps a word copy padded with two
// zero words so the shifted-window kernels can always load one word past
// the seed tail.
class ToeplitzSeed {
public:
    ToeplitzSeed(BitBlock bits, const ToeplitzParams& params);

    const BitBlock& bits() const { return bits_; }
    const std::uint64_t* padded_words() const { return padded_.data(); }

private:
    BitBlock bits_;
    std::vector<std::uint64_t> padded_;
};

// Lazy m x n Toeplitz view: entry (i, j) = seed[(n-1) + i - j], so every
// descending diagonal is constant and row 0 is the reversed seed prefix.
class ToeplitzMatrix {
public:
    ToeplitzMatrix(ToeplitzSeed seed, ToeplitzParams params);

    bool at(std::uint32_t i, std::uint32_t j) const {
        return seed_.bits().get(params_.n - 1 + i - j);
    }
    const ToeplitzParams& params() const { return params_; }
    const ToeplitzSeed& seed() const { return seed_; }

private:
    ToeplitzSeed seed_;
    ToeplitzParams params_;
};

ToeplitzMatrix build_matrix(ToeplitzSeed seed, const ToeplitzParams& params);

// Reference GF(2) matrix-vector product, evaluated entry by entry. This is
// the oracle the pipelined path is tested against; it deliberately shares no
// code with the kernel-based implementation.
BitBlock extract_dense(const ToeplitzMatrix& mat, const BitBlock& input);

// The staged extraction: for each of the n/k steps, the m x k submatrix is
// applied to its k input bits (an XOR of seed-shifted column windows)
// producing a temporary m-bit vector; the n/k temporaries are then
// XOR-accumulated. Bit-exact equal to extract_dense for every seed/input.
BitBlock extract_pipelined(const ToeplitzSeed& seed, const ToeplitzParams& params,
                           const BitBlock& input);

// Supplies a fresh seed when the refresh schedule requires one; empty
// optional means the source is exhausted.
using SeedSource = std::function<std::optional<BitBlock>()>;

struct StreamStats {
    std::uint64_t blocks_in = 0;
    std::uint64_t blocks_out = 0;
    std::uint64_t bits_in = 0;
    std::uint64_t bits_out = 0;
    std::uint64_t residual_bits = 0;  // trailing input shorter than n
    std::uint64_t seeds_used = 1;
};

// Per-block streaming extraction with optional periodic seed refresh.
// refresh_period == nullopt means the initial seed is kept for the whole
// stream. Blocks are processed strictly in order.
class StreamExtractor {
public:
    StreamExtractor(ToeplitzParams params, ToeplitzSeed seed,
                    std::optional<std::uint64_t> refresh_period = std::nullopt,
                    SeedSource seed_source = nullptr);

    // input.size() must equal n.
    BitBlock process_block(const BitBlock& input);
    // Records a dropped short trailing input.
    void note_residual(std::size_t bits) { stats_.residual_bits += bits; }

    const StreamStats& stats() const { return stats_; }
    const ToeplitzParams& params() const { return params_; }

private:
    ToeplitzParams params_;
    ToeplitzSeed seed_;
    std::optional<std::uint64_t> refresh_period_;
    SeedSource seed_source_;
    StreamStats stats_;
};

// Accumulates arbitrary bit runs and emits fixed n-bit blocks.
class BlockFramer {
public:
    explicit BlockFramer(std::uint32_t n) : n_(n) {}

    void feed(const BitBlock& bits);
    bool has_block() const { return buffer_.size() - cursor_ >= n_; }
    BitBlock take_block();
    std::size_t pending_bits() const;

private:
    std::uint32_t n_;
    BitBlock buffer_;
    std::size_t cursor_ = 0;
};

// Extracts a batch of n-bit blocks under one fixed seed, optionally across
// worker threads. Output order always matches input order regardless of the
// worker count.
std::vector<BitBlock> extract_blocks(const ToeplitzSeed& seed, const ToeplitzParams& params,
                                     std::span<const BitBlock> blocks, unsigned workers = 1);

}  // namespace qrng
