#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qrng/config.hpp"
#include "qrng/toeplitz.hpp"

namespace qrng {

// Exact counts and provenance of one pipeline run. The count identity
// bits_out = floor(samples * popcount(keep_mask) / n) * m always holds.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::uint64_t config_hash = 0;
    std::uint64_t sim_config_hash = 0;
    std::string seed_source;
    std::uint64_t samples_in = 0;
    std::uint64_t kept_bits = 0;
    std::uint64_t blocks = 0;
    std::uint64_t bits_out = 0;
    std::uint64_t residual_bits = 0;
    std::uint64_t seeds_used = 0;
    std::uint32_t m = 0, n = 0, k = 0;
    std::uint8_t keep_mask = 0;
    unsigned workers = 1;
    std::string kernel_backend;
    double elapsed_s = 0.0;
    double in_rate_bps = 0.0;   // extractor input side, blocks * n / elapsed
    double out_rate_bps = 0.0;  // bits_out / elapsed

    KeyValues to_kv() const;
};

// Deterministic per-epoch seed supply. Epoch e covers blocks
// [e * refresh_period, (e+1) * refresh_period). A file origin provides only
// epoch 0; asking for more is the "seed source exhausted" error.
class SeedSchedule {
public:
    explicit SeedSchedule(const PipelineSettings& settings);

    const ToeplitzSeed& seed_for_epoch(std::uint64_t epoch);
    std::uint64_t seeds_used() const { return cache_.size(); }
    const std::string& description() const { return description_; }

private:
    ToeplitzParams params_;
    SeedOrigin origin_;
    std::unique_ptr<Rng> prng_;
    std::vector<ToeplitzSeed> cache_;
    std::string description_;
};

// samples -> select_sample_bits -> n-bit framing -> pipelined Toeplitz
// extraction -> m-bit blocks, deterministically and independent of the
// chunk sizes and worker count.
class PipelineStream {
public:
    // Simulator-driven; unbounded when max_samples is empty.
    PipelineStream(const PipelineSettings& settings, std::optional<std::uint64_t> max_samples);
    // Driven from pre-recorded samples.
    PipelineStream(const PipelineSettings& settings, std::vector<std::uint8_t> samples);
    ~PipelineStream();
    PipelineStream(PipelineStream&&) noexcept;

    // Next extracted m-bit block; empty when the source is exhausted.
    std::optional<BitBlock> next_block();

    // Packed-byte view of the same stream for transport; returns the number
    // of bytes written, 0 at end of stream. The final sub-byte remainder of
    // a bounded stream is dropped (bits_out in the manifest stays exact).
    std::size_t read(std::span<std::uint8_t> out);

    RunManifest manifest() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PipelineResult {
    RunManifest manifest;
    BitBlock bits;
};

// Runs the bounded pipeline to completion and returns the extracted bits.
PipelineResult run_pipeline(const PipelineSettings& settings, std::uint64_t n_samples);

// Sleep-paced token budget: acquire() returns once the running total stays
// under bits_per_second. A zero rate never blocks.
class RateLimiter {
public:
    explicit RateLimiter(double bits_per_second);
    void acquire(std::uint64_t bits);

private:
    double rate_;
    std::uint64_t total_bits_ = 0;
    std::chrono::steady_clock::time_point start_;
};

struct BenchReport {
    std::string kernel_backend;
    // extractor-only, pre-generated input blocks
    double extractor_out_bps = 0.0;
    double extractor_in_bps = 0.0;
    std::uint64_t extractor_blocks = 0;
    // simulator -> extraction -> packed bytes
    double end_to_end_out_bps = 0.0;
    double ratio_out_in = 0.0;
    // delivery rate through the limiter; equals the cap when one is set
    double delivered_bps = 0.0;
    double rate_cap_bps = 0.0;

    KeyValues to_kv() const;
};

// Reference rates of the hardware the pipeline models, reported alongside
// measurements (informational, never pass/fail).
inline constexpr double kFpgaPostProcessingBps = 5.0e9;
inline constexpr double kFpgaFinalRateCeilingBps = 5.0e9 * 1024.0 / 1520.0;  // ~3.36 Gbps
inline constexpr double kSfpRateBps = 3.2e9;
inline constexpr double kEthernetRateBps = 968.7e6;
inline constexpr double kUsbRateBps = 259.5e6;

BenchReport bench(const PipelineSettings& settings, double seconds);

}  // namespace qrng
