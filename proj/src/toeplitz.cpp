#include "qrng/toeplitz.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "qrng/gf2_kernels.hpp"

namespace qrng {

void ToeplitzParams::validate() const {
    if (m == 0 || n == 0 || k == 0 || epsilon_exponent == 0)
        throw std::invalid_argument("toeplitz: m, n, k, epsilon_exponent must be positive");
    if (m >= n)
        throw std::invalid_argument("toeplitz: m must be smaller than n");
    if (n % k != 0)
        throw std::invalid_argument("toeplitz: k must divide n");
}

ToeplitzSeed::ToeplitzSeed(BitBlock bits, const ToeplitzParams& params) : bits_(std::move(bits)) {
    params.validate();
    if (bits_.size() != params.seed_bits())
        throw std::invalid_argument("toeplitz: seed must have m+n-1 bits");
    padded_.assign(bits_.words().begin(), bits_.words().end());
    padded_.resize(padded_.size() + 2, 0);
}

ToeplitzMatrix::ToeplitzMatrix(ToeplitzSeed seed, ToeplitzParams params)
    : seed_(std::move(seed)), params_(params) {}

ToeplitzMatrix build_matrix(ToeplitzSeed seed, const ToeplitzParams& params) {
    return ToeplitzMatrix(std::move(seed), params);
}

BitBlock extract_dense(const ToeplitzMatrix& mat, const BitBlock& input) {
    const auto& p = mat.params();
    if (input.size() != p.n)
        throw std::invalid_argument("extract_dense: input must have n bits");
    BitBlock out(p.m);
    for (std::uint32_t i = 0; i < p.m; ++i) {
        bool acc = false;
        for (std::uint32_t j = 0; j < p.n; ++j)
            acc ^= mat.at(i, j) && input.get(j);
        out.set(i, acc);
    }
    return out;
}

BitBlock extract_pipelined(const ToeplitzSeed& seed, const ToeplitzParams& params,
                           const BitBlock& input) {
    params.validate();
    if (seed.bits().size() != params.seed_bits())
        throw std::invalid_argument("extract_pipelined: seed/params mismatch");
    if (input.size() != params.n)
        throw std::invalid_argument("extract_pipelined: input must have n bits");

    const auto& kern = gf2::active();
    const std::size_t mw = BitBlock::word_count(params.m);
    BitBlock out(params.m);
    std::vector<std::uint64_t> temp(mw);
    std::vector<std::uint32_t> offs(params.k);

    for (std::uint32_t step = 0; step < params.steps(); ++step) {
        // Submatrix multiplication: column t*k+j of the matrix is the m-bit
        // seed window starting at bit (n-1) - (t*k+j); AND with the input
        // bit selects it, XOR accumulates it into the temporary vector.
        std::fill(temp.begin(), temp.end(), 0);
        std::size_t cnt = 0;
        for (std::uint32_t j = 0; j < params.k; ++j) {
            const std::uint32_t col = step * params.k + j;
            if (input.get(col)) offs[cnt++] = params.n - 1 - col;
        }
        kern.xor_windows(temp.data(), seed.padded_words(), offs.data(), cnt, mw);
        // Vector accumulation.
        kern.xor_words(out.word_data(), temp.data(), mw);
    }
    out.word_data()[mw - 1] &= BitBlock::tail_mask(params.m);
    return out;
}

StreamExtractor::StreamExtractor(ToeplitzParams params, ToeplitzSeed seed,
                                 std::optional<std::uint64_t> refresh_period,
                                 SeedSource seed_source)
    : params_(params),
      seed_(std::move(seed)),
      refresh_period_(refresh_period),
      seed_source_(std::move(seed_source)) {
    params_.validate();
    if (refresh_period_ && *refresh_period_ == 0)
        throw std::invalid_argument("StreamExtractor: refresh period must be positive");
}

BitBlock StreamExtractor::process_block(const BitBlock& input) {
    if (input.size() != params_.n)
        throw std::invalid_argument("StreamExtractor: input must have n bits");
    if (refresh_period_ && stats_.blocks_in > 0 && stats_.blocks_in % *refresh_period_ == 0) {
        if (!seed_source_)
            throw std::runtime_error("StreamExtractor: seed refresh due but no seed source");
        auto fresh = seed_source_();
        if (!fresh)
            throw std::runtime_error("StreamExtractor: seed source exhausted while refresh due");
        seed_ = ToeplitzSeed(std::move(*fresh), params_);
        ++stats_.seeds_used;
    }
    BitBlock out = extract_pipelined(seed_, params_, input);
    ++stats_.blocks_in;
    ++stats_.blocks_out;
    stats_.bits_in += params_.n;
    stats_.bits_out += params_.m;
    return out;
}

void BlockFramer::feed(const BitBlock& bits) {
    // Compact consumed bits away before the buffer doubles up.
    if (cursor_ >= n_ && cursor_ >= buffer_.size() / 2) {
        buffer_ = buffer_.slice(cursor_, buffer_.size() - cursor_);
        cursor_ = 0;
    }
    buffer_.append(bits);
}

BitBlock BlockFramer::take_block() {
    if (!has_block())
        throw std::logic_error("BlockFramer: no complete block available");
    BitBlock out = buffer_.slice(cursor_, n_);
    cursor_ += n_;
    if (cursor_ == buffer_.size()) {
        buffer_.clear();
        cursor_ = 0;
    }
    return out;
}

std::size_t BlockFramer::pending_bits() const { return buffer_.size() - cursor_; }

std::vector<BitBlock> extract_blocks(const ToeplitzSeed& seed, const ToeplitzParams& params,
                                     std::span<const BitBlock> blocks, unsigned workers) {
    std::vector<BitBlock> out(blocks.size());
    if (workers <= 1 || blocks.size() < 2) {
        for (std::size_t i = 0; i < blocks.size(); ++i)
            out[i] = extract_pipelined(seed, params, blocks[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= blocks.size()) break;
            out[i] = extract_pipelined(seed, params, blocks[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace qrng
