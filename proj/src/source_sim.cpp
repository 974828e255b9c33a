#include "qrng/source_sim.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "qrng/randomness.hpp"
#include "qrng/rng.hpp"

namespace qrng {

namespace {

// Substream ids for the independent deterministic generators.
constexpr std::uint64_t kPhaseStream = 0;
constexpr std::uint64_t kPilotStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

std::uint64_t mix_field(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t mix_double(std::uint64_t h, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    return mix_field(h, bits);
}

// Wiener phase walk emitting dphi(t) = phi(t) - phi(t - tau) on the substep
// grid. The ring holds the last delay+1 phase values.
class PhaseDifferencer {
public:
    PhaseDifferencer(const SimConfig& config, std::uint64_t seed)
        : rng_(seed),
          delay_(config.tau_substeps()),
          step_sigma_(std::sqrt(2.0 * config.phase_diffusion * config.substep_dt())),
          ring_(delay_ + 1, 0.0) {
        // Prefill so a full differencing window exists at the first output.
        for (std::uint32_t s = 0; s < delay_; ++s) advance();
    }

    double next() {
        advance();
        const double newest = ring_[head_];
        const double oldest = ring_[(head_ + 1) % ring_.size()];
        return newest - oldest;
    }

private:
    void advance() {
        const double nxt = ring_[head_] + step_sigma_ * rng_.normal();
        head_ = (head_ + 1) % ring_.size();
        ring_[head_] = nxt;
    }

    Rng rng_;
    std::uint32_t delay_;
    double step_sigma_;
    std::vector<double> ring_;
    std::size_t head_ = 0;
};

class Welford {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / n_;
        m2_ += d * (x - mean_);
    }
    double mean() const { return mean_; }
    double variance() const { return n_ > 0 ? m2_ / n_ : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace

void SimConfig::validate() const {
    if (!(sample_rate > 0.0) || !(tau > 0.0) || !(phase_diffusion >= 0.0) ||
        !(amplitude_mv >= 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("sim: rates, tau and gamma must be positive");
    if (substeps_per_sample < 2)
        throw std::invalid_argument("sim: substeps_per_sample must be at least 2");
    if (detector_bandwidth_hz && !(*detector_bandwidth_hz > 0.0))
        throw std::invalid_argument("sim: detector bandwidth must be positive when set");
    if (pilot_samples < 1000)
        throw std::invalid_argument("sim: pilot_samples must be at least 1000");
    adc.validate();
    tau_substeps();  // throws when tau is off the substep grid
}

std::uint32_t SimConfig::tau_substeps() const {
    const double steps = tau / substep_dt();
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-6)
        throw std::invalid_argument(
            "sim: tau must be a positive integer multiple of the substep duration");
    return static_cast<std::uint32_t>(rounded);
}

std::uint64_t sim_config_hash(const SimConfig& c) {
    std::uint64_t h = 0x51ab6e3c0f1e2d4bULL;
    h = mix_double(h, c.sample_rate);
    h = mix_double(h, c.tau);
    h = mix_field(h, c.substeps_per_sample);
    h = mix_double(h, c.phase_diffusion);
    h = mix_double(h, c.amplitude_mv);
    h = mix_double(h, c.gamma);
    h = mix_double(h, c.detector_bandwidth_hz.value_or(0.0));
    h = mix_field(h, c.adc.bits);
    h = mix_double(h, c.adc.full_scale_mv);
    h = mix_double(h, c.adc.offset_mv);
    h = mix_field(h, c.rng_seed);
    h = mix_field(h, c.pilot_samples);
    return h;
}

std::vector<double> simulate_phase(const SimConfig& config, std::size_t n_samples) {
    config.validate();
    PhaseDifferencer phase(config, derive_seed(config.rng_seed, kPhaseStream));
    std::vector<double> out;
    out.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double dphi = 0.0;
        for (std::uint32_t s = 0; s < config.substeps_per_sample; ++s) dphi = phase.next();
        out.push_back(dphi);
    }
    return out;
}

struct SourceSimulator::Impl {
    SimConfig config;
    PhaseDifferencer phase;
    Rng noise;
    double sigma_c = 0.0;
    double alpha = 0.0;  // single-pole filter coefficient, 0 when disabled
    bool filtered = false;
    bool filter_primed = false;
    double yq = 0.0, yc = 0.0;
    Welford wq, wc, wv;
    std::uint64_t saturated = 0;

    explicit Impl(const SimConfig& cfg)
        : config(cfg),
          phase(cfg, derive_seed(cfg.rng_seed, kPhaseStream)),
          noise(derive_seed(cfg.rng_seed, kNoiseStream)) {
        // Var[A sin(dphi)] has no simple closed form at large phase variance,
        // so sigma_c comes from a pilot run on its own stream.
        PhaseDifferencer pilot(cfg, derive_seed(cfg.rng_seed, kPilotStream));
        Welford w;
        for (std::uint32_t i = 0; i < cfg.pilot_samples; ++i) {
            double dphi = 0.0;
            for (std::uint32_t s = 0; s < cfg.substeps_per_sample; ++s) dphi = pilot.next();
            w.add(cfg.amplitude_mv * std::sin(dphi));
        }
        sigma_c = std::sqrt(w.variance() / cfg.gamma);
        filtered = cfg.detector_bandwidth_hz.has_value();
        if (filtered)
            alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * *cfg.detector_bandwidth_hz *
                                   cfg.substep_dt());
    }

    std::uint8_t next_code() {
        double q = 0.0, c = 0.0;
        if (!filtered) {
            double dphi = 0.0;
            for (std::uint32_t s = 0; s < config.substeps_per_sample; ++s) dphi = phase.next();
            q = config.amplitude_mv * std::sin(dphi);
            c = sigma_c * noise.normal();
        } else {
            // Classical noise enters per substep and rides through the same
            // single-pole response as the interference signal.
            for (std::uint32_t s = 0; s < config.substeps_per_sample; ++s) {
                const double qs = config.amplitude_mv * std::sin(phase.next());
                const double cs = sigma_c * noise.normal();
                if (!filter_primed) {
                    yq = qs;
                    yc = cs;
                    filter_primed = true;
                } else {
                    yq += alpha * (qs - yq);
                    yc += alpha * (cs - yc);
                }
            }
            q = yq;
            c = yc;
        }
        const double v = q + c;
        wq.add(q);
        wc.add(c);
        wv.add(v);

        const std::uint32_t max_code = config.adc.codes() - 1;
        double code_f = std::floor((v - config.adc.offset_mv) / config.adc.lsb_mv());
        if (code_f < 0.0) code_f = 0.0;
        if (code_f > max_code) code_f = static_cast<double>(max_code);
        const auto code = static_cast<std::uint8_t>(code_f);
        if (code == 0 || code == max_code) ++saturated;
        return code;
    }
};

SourceSimulator::SourceSimulator(const SimConfig& config) {
    config.validate();
    impl_ = std::make_unique<Impl>(config);
}

SourceSimulator::~SourceSimulator() = default;
SourceSimulator::SourceSimulator(SourceSimulator&&) noexcept = default;
SourceSimulator& SourceSimulator::operator=(SourceSimulator&&) noexcept = default;

void SourceSimulator::generate(std::span<std::uint8_t> out) {
    for (auto& o : out) o = impl_->next_code();
}

SourceTaps SourceSimulator::taps() const {
    SourceTaps t;
    t.var_quantum_mv2 = impl_->wq.variance();
    t.var_classical_mv2 = impl_->wc.variance();
    t.var_total_mv2 = impl_->wv.variance();
    t.sigma_c_mv = impl_->sigma_c;
    t.mean_mv = impl_->wv.mean();
    t.saturated = impl_->saturated;
    return t;
}

const SimConfig& SourceSimulator::config() const { return impl_->config; }

SimulateResult simulate_raw(const SimConfig& config, std::size_t n_samples) {
    SourceSimulator sim(config);
    SimulateResult res;
    res.record.samples.resize(n_samples);
    sim.generate(res.record.samples);
    res.record.count = n_samples;
    res.record.config_hash = sim_config_hash(config);
    res.taps = sim.taps();
    return res;
}

std::vector<double> empirical_autocorrelation_profile(const RawRecord& record,
                                                      std::size_t max_lag) {
    if (record.samples.size() <= max_lag * 10)
        throw std::invalid_argument("autocorrelation profile: record too short for max_lag");
    std::vector<double> series(record.samples.begin(), record.samples.end());
    return autocorrelation(series, max_lag);
}

}  // namespace qrng
