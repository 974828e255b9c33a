#include "qrng/pipeline.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <thread>

#include "qrng/gf2_kernels.hpp"
#include "qrng/io.hpp"
#include "qrng/rng.hpp"
#include "qrng/source_sim.hpp"

namespace qrng {

KeyValues RunManifest::to_kv() const {
    KeyValues kv;
    kv.set("tool_version", tool_version);
    char hex[32];
    std::snprintf(hex, sizeof(hex), "0x%016llx", static_cast<unsigned long long>(config_hash));
    kv.set("config_hash", hex);
    std::snprintf(hex, sizeof(hex), "0x%016llx",
                  static_cast<unsigned long long>(sim_config_hash));
    kv.set("sim_config_hash", hex);
    kv.set("seed_source", seed_source);
    kv.set_u64("samples_in", samples_in);
    kv.set_u64("kept_bits", kept_bits);
    kv.set_u64("blocks", blocks);
    kv.set_u64("bits_out", bits_out);
    kv.set_u64("residual_bits", residual_bits);
    kv.set_u64("seeds_used", seeds_used);
    kv.set_u64("m", m);
    kv.set_u64("n", n);
    kv.set_u64("k", k);
    kv.set_u64("keep_mask", keep_mask);
    kv.set_u64("workers", workers);
    kv.set("kernel_backend", kernel_backend);
    kv.set_double("elapsed_s", elapsed_s);
    kv.set_double("in_rate_bps", in_rate_bps);
    kv.set_double("out_rate_bps", out_rate_bps);
    return kv;
}

SeedSchedule::SeedSchedule(const PipelineSettings& settings)
    : params_(settings.extractor), origin_(settings.seed_origin) {
    if (origin_ == SeedOrigin::Prng) {
        prng_ = std::make_unique<Rng>(settings.seed_prng);
        description_ = "prng:" + std::to_string(settings.seed_prng);
    } else {
        cache_.push_back(read_seed_file(settings.seed_file, params_));
        description_ = "file:" + settings.seed_file;
    }
}

const ToeplitzSeed& SeedSchedule::seed_for_epoch(std::uint64_t epoch) {
    while (cache_.size() <= epoch) {
        if (origin_ != SeedOrigin::Prng)
            throw std::runtime_error("pipeline: seed source exhausted while refresh due");
        cache_.emplace_back(prng_->bits(params_.seed_bits()), params_);
    }
    return cache_[epoch];
}

struct PipelineStream::Impl {
    PipelineSettings settings;
    std::optional<SourceSimulator> simulator;
    std::vector<std::uint8_t> file_samples;
    std::size_t file_pos = 0;
    std::optional<std::uint64_t> samples_budget;  // empty = unbounded simulator

    SeedSchedule seeds;
    BlockFramer framer;
    std::deque<BitBlock> ready;  // extracted, in order
    bool source_done = false;

    // packed transport view
    BitBlock byte_carry;

    std::uint64_t samples_in = 0;
    std::uint64_t kept_bits = 0;
    std::uint64_t blocks_done = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    static constexpr std::size_t kChunkSamples = 1 << 15;

    Impl(const PipelineSettings& s, std::optional<std::uint64_t> max_samples,
         std::vector<std::uint8_t> samples, bool from_file)
        : settings(s), samples_budget(max_samples), seeds(s), framer(s.extractor.n) {
        settings.validate();
        if (settings.kernel_backend != "auto" && !gf2::set_backend(settings.kernel_backend))
            throw std::runtime_error("pipeline: kernel backend '" + settings.kernel_backend +
                                     "' is not available on this machine");
        if (from_file) {
            file_samples = std::move(samples);
            samples_budget = file_samples.size();
        } else {
            simulator.emplace(settings.sim);
        }
        // Touch epoch 0 so an invalid seed file fails before any work.
        seeds.seed_for_epoch(0);
    }

    std::uint64_t epoch_of_block(std::uint64_t block_idx) const {
        return settings.refresh_period == 0 ? 0 : block_idx / settings.refresh_period;
    }

    // Pulls source samples until at least one block is framed or the source
    // ends, then extracts every framed block (in parallel when allowed).
    void refill() {
        std::vector<std::uint8_t> chunk;
        while (!framer.has_block() && !source_done) {
            std::size_t want = kChunkSamples;
            if (samples_budget)
                want = static_cast<std::size_t>(
                    std::min<std::uint64_t>(want, *samples_budget - samples_in));
            if (want == 0) {
                source_done = true;
                break;
            }
            chunk.resize(want);
            if (simulator) {
                simulator->generate(chunk);
            } else {
                std::copy_n(file_samples.begin() + static_cast<std::ptrdiff_t>(file_pos), want,
                            chunk.begin());
                file_pos += want;
            }
            samples_in += want;
            BitBlock kept;
            select_sample_bits_into(chunk, settings.keep_mask, kept);
            framer.feed(kept);
        }
        if (!framer.has_block()) return;

        // Collect every complete block, then extract them in input order.
        std::vector<BitBlock> batch;
        while (framer.has_block()) batch.push_back(framer.take_block());

        std::size_t i = 0;
        while (i < batch.size()) {
            // One extraction batch never crosses a seed-refresh boundary.
            const std::uint64_t epoch = epoch_of_block(blocks_done);
            std::size_t end = batch.size();
            if (settings.refresh_period != 0) {
                const std::uint64_t left =
                    settings.refresh_period - blocks_done % settings.refresh_period;
                end = std::min(end, i + static_cast<std::size_t>(left));
            }
            const auto out =
                extract_blocks(seeds.seed_for_epoch(epoch), settings.extractor,
                               std::span(batch).subspan(i, end - i), settings.workers);
            for (auto& b : out) ready.push_back(std::move(b));
            blocks_done += end - i;
            i = end;
        }
    }

    std::optional<BitBlock> next_block() {
        if (ready.empty()) refill();
        if (ready.empty()) return std::nullopt;
        BitBlock b = std::move(ready.front());
        ready.pop_front();
        return b;
    }
};

void select_sample_bits_into(std::span<const std::uint8_t>, std::uint8_t, BlockFramer&);

PipelineStream::PipelineStream(const PipelineSettings& settings,
                               std::optional<std::uint64_t> max_samples)
    : impl_(std::make_unique<Impl>(settings, max_samples, std::vector<std::uint8_t>{}, false)) {}

PipelineStream::PipelineStream(const PipelineSettings& settings,
                               std::vector<std::uint8_t> samples)
    : impl_(std::make_unique<Impl>(settings, std::nullopt, std::move(samples), true)) {}

PipelineStream::~PipelineStream() = default;
PipelineStream::PipelineStream(PipelineStream&&) noexcept = default;

std::optional<BitBlock> PipelineStream::next_block() { return impl_->next_block(); }

std::size_t PipelineStream::read(std::span<std::uint8_t> out) {
    auto& carry = impl_->byte_carry;
    std::size_t written = 0;
    while (written < out.size()) {
        while (carry.size() < 8 * (out.size() - written)) {
            auto block = impl_->next_block();
            if (!block) break;
            carry.append(*block);
        }
        const std::size_t whole = std::min(carry.size() / 8, out.size() - written);
        if (whole == 0) break;
        const auto bytes = carry.slice(0, whole * 8).to_bytes();
        std::copy(bytes.begin(), bytes.end(), out.begin() + static_cast<std::ptrdiff_t>(written));
        carry = carry.slice(whole * 8, carry.size() - whole * 8);
        written += whole;
    }
    return written;
}

RunManifest PipelineStream::manifest() const {
    const auto& im = *impl_;
    RunManifest m;
    m.config_hash = im.settings.config_hash();
    m.sim_config_hash = sim_config_hash(im.settings.sim);
    m.seed_source = im.seeds.description();
    m.samples_in = im.samples_in;
    m.kept_bits = im.samples_in * static_cast<unsigned>(std::popcount(im.settings.keep_mask));
    m.blocks = im.blocks_done;
    m.bits_out = im.blocks_done * im.settings.extractor.m;
    m.residual_bits = m.kept_bits - m.blocks * im.settings.extractor.n;
    m.seeds_used = im.seeds.seeds_used();
    m.m = im.settings.extractor.m;
    m.n = im.settings.extractor.n;
    m.k = im.settings.extractor.k;
    m.keep_mask = im.settings.keep_mask;
    m.workers = im.settings.workers;
    m.kernel_backend = gf2::active_backend();
    m.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - im.start).count();
    if (m.elapsed_s > 0.0) {
        m.in_rate_bps = static_cast<double>(m.blocks) * im.settings.extractor.n / m.elapsed_s;
        m.out_rate_bps = static_cast<double>(m.bits_out) / m.elapsed_s;
    }
    return m;
}

PipelineResult run_pipeline(const PipelineSettings& settings, std::uint64_t n_samples) {
    PipelineStream stream(settings, n_samples);
    PipelineResult result;
    while (auto block = stream.next_block()) result.bits.append(*block);
    result.manifest = stream.manifest();
    return result;
}

RateLimiter::RateLimiter(double bits_per_second)
    : rate_(bits_per_second), start_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire(std::uint64_t bits) {
    total_bits_ += bits;
    if (rate_ <= 0.0) return;
    const auto due = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(total_bits_ / rate_));
    std::this_thread::sleep_until(due);
}

KeyValues BenchReport::to_kv() const {
    KeyValues kv;
    kv.set("kernel_backend", kernel_backend);
    kv.set_double("extractor_out_bps", extractor_out_bps);
    kv.set_double("extractor_in_bps", extractor_in_bps);
    kv.set_u64("extractor_blocks", extractor_blocks);
    kv.set_double("end_to_end_out_bps", end_to_end_out_bps);
    kv.set_double("ratio_out_in", ratio_out_in);
    kv.set_double("rate_cap_bps", rate_cap_bps);
    kv.set_double("delivered_bps", delivered_bps);
    kv.set_double("reference.fpga_post_processing_bps", kFpgaPostProcessingBps);
    kv.set_double("reference.fpga_final_ceiling_bps", kFpgaFinalRateCeilingBps);
    kv.set_double("reference.sfp_bps", kSfpRateBps);
    kv.set_double("reference.ethernet_bps", kEthernetRateBps);
    kv.set_double("reference.usb_bps", kUsbRateBps);
    return kv;
}

BenchReport bench(const PipelineSettings& settings, double seconds) {
    settings.validate();
    if (settings.kernel_backend != "auto" && !gf2::set_backend(settings.kernel_backend))
        throw std::runtime_error("bench: kernel backend unavailable");
    BenchReport report;
    report.kernel_backend = gf2::active_backend();
    report.rate_cap_bps = settings.rate_cap_bps;

    const auto& p = settings.extractor;
    {
        // Extractor-only: cycle over pre-generated random input blocks.
        Rng rng(42);
        const ToeplitzSeed seed(rng.bits(p.seed_bits()), p);
        std::vector<BitBlock> inputs;
        for (int i = 0; i < 64; ++i) inputs.push_back(rng.bits(p.n));
        const auto t0 = std::chrono::steady_clock::now();
        const auto deadline = t0 + std::chrono::duration<double>(seconds / 2.0);
        std::uint64_t blocks = 0;
        while (std::chrono::steady_clock::now() < deadline) {
            for (const auto& in : inputs) {
                extract_pipelined(seed, p, in);
                ++blocks;
            }
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.extractor_blocks = blocks;
        report.extractor_out_bps = static_cast<double>(blocks) * p.m / dt;
        report.extractor_in_bps = static_cast<double>(blocks) * p.n / dt;
    }
    {
        // End to end, through the packed transport view and the limiter.
        PipelineStream stream(settings, std::nullopt);
        RateLimiter limiter(settings.rate_cap_bps);
        std::vector<std::uint8_t> buf(16384);
        if (settings.rate_cap_bps > 0.0) {
            const double chunk_bits = settings.rate_cap_bps / 100.0;
            buf.resize(std::max<std::size_t>(static_cast<std::size_t>(chunk_bits / 8.0), 64));
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto deadline = t0 + std::chrono::duration<double>(seconds / 2.0);
        std::uint64_t bytes = 0;
        while (std::chrono::steady_clock::now() < deadline) {
            const std::size_t got = stream.read(buf);
            if (got == 0) break;
            limiter.acquire(8 * got);
            bytes += got;
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.delivered_bps = 8.0 * static_cast<double>(bytes) / dt;
        const auto m = stream.manifest();
        report.end_to_end_out_bps = m.out_rate_bps;
        report.ratio_out_in =
            m.in_rate_bps > 0.0 ? m.out_rate_bps / m.in_rate_bps : 0.0;
    }
    return report;
}

}  // namespace qrng
