#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qrng/entropy.hpp"

namespace qrng {

// Physics of the modeled source: a Wiener-process laser phase, differenced
// over the interferometer delay tau, converted to intensity about the
// quadrature point, mixed with classical noise at power ratio gamma, and
// quantized.
struct SimConfig {
    double sample_rate = 1e9;         // samples/s
    double tau = 0.8e-9;              // s, interferometer arm delay
    std::uint32_t substeps_per_sample = 10;
    double phase_diffusion = 6.25e9;  // rad^2/s; Var[phi(t+d)-phi(t)] = 2 D d
    double amplitude_mv = 120.5;      // interference swing A
    double gamma = 6.87;              // target quantum/classical power ratio
    std::optional<double> detector_bandwidth_hz;  // single-pole low-pass; off by default
    AdcGeometry adc;
    std::uint64_t rng_seed = 1;
    std::uint32_t pilot_samples = 100000;  // calibration block for sigma_c

    double substep_dt() const { return 1.0 / (sample_rate * substeps_per_sample); }
    // Throws std::invalid_argument unless tau is a positive integer multiple
    // of the substep duration and rates/variances are positive.
    void validate() const;
    std::uint32_t tau_substeps() const;
};

struct RawRecord {
    std::vector<std::uint8_t> samples;
    std::uint64_t config_hash = 0;
    std::uint64_t count = 0;
};

// Simulator-internal measurements, exposed for validation.
struct SourceTaps {
    double var_quantum_mv2 = 0.0;    // Var[A sin(dphi)] at the sample instants
    double var_classical_mv2 = 0.0;  // realized classical-noise variance
    double var_total_mv2 = 0.0;      // Var[V] before quantization
    double sigma_c_mv = 0.0;         // calibrated classical sigma
    double mean_mv = 0.0;
    std::uint64_t saturated = 0;     // samples clipped to code 0 or max
};

// Phase difference dphi(t_i) = phi(t_i) - phi(t_i - tau) at each sample
// instant. Values at overlapping differencing windows share Wiener
// increments and are correlated by construction.
std::vector<double> simulate_phase(const SimConfig& config, std::size_t n_samples);

struct SimulateResult {
    RawRecord record;
    SourceTaps taps;
};

// Full chain to ADC codes. sigma_c is calibrated from a pilot block so the
// realized quantum/classical variance ratio matches config.gamma.
// Deterministic for a fixed config (including rng_seed).
SimulateResult simulate_raw(const SimConfig& config, std::size_t n_samples);

// Stateful form of simulate_raw: generate() may be called repeatedly and the
// emitted stream does not depend on the chunking. Construction runs the
// pilot calibration.
class SourceSimulator {
public:
    explicit SourceSimulator(const SimConfig& config);
    ~SourceSimulator();
    SourceSimulator(SourceSimulator&&) noexcept;
    SourceSimulator& operator=(SourceSimulator&&) noexcept;

    void generate(std::span<std::uint8_t> out);
    // Taps cover everything generated so far.
    SourceTaps taps() const;
    const SimConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Normalized autocorrelation r(1..max_lag) of the sample codes; thin wrapper
// over the randomness-suite estimator for simulator validation.
std::vector<double> empirical_autocorrelation_profile(const RawRecord& record,
                                                      std::size_t max_lag);

// Digest over every physics field, recorded in sidecars and manifests.
std::uint64_t sim_config_hash(const SimConfig& config);

}  // namespace qrng
