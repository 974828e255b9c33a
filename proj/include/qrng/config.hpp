#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrng/source_sim.hpp"
#include "qrng/toeplitz.hpp"

namespace qrng {

// Flat key = value store used for config files, sidecar metadata and
// manifests. Serialization is canonical: keys in insertion order, one
// "key = value" per line.
class KeyValues {
public:
    void set(const std::string& key, const std::string& value);
    void set_u64(const std::string& key, std::uint64_t value);
    void set_double(const std::string& key, double value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // throws if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string serialize(const std::string& separator = " = ") const;
    // Accepts "key = value" lines, blank lines and '#' comments.
    static KeyValues parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::size_t> index_;
};

std::uint64_t fnv1a64(const std::string& data);

// Where the extractor seed bits come from.
enum class SeedOrigin { Prng, File };

// Everything needed to run the end-to-end pipeline. Mirrors the config file
// one to one; unknown keys in a file are an error.
struct PipelineSettings {
    SimConfig sim;
    double entropy_mean_square_mv2 = 8311.0;
    ToeplitzParams extractor;
    SeedOrigin seed_origin = SeedOrigin::Prng;
    std::uint64_t seed_prng = 7;
    std::string seed_file;
    std::uint64_t refresh_period = 0;  // blocks; 0 = never
    std::uint8_t keep_mask = kDefaultKeepMask;
    unsigned workers = 1;
    double rate_cap_bps = 0.0;  // 0 = unlimited
    std::string kernel_backend = "auto";

    // gamma and the ADC geometry are shared with the simulator config.
    EntropyModel entropy_model() const;
    // Validates every sub-config and enforces the budget gate:
    // m <= leftover_hash_m(n, h_per_raw_bit, epsilon_exponent).
    void validate() const;

    KeyValues to_kv() const;
    std::string canonical_text() const { return to_kv().serialize(); }
    std::uint64_t config_hash() const { return fnv1a64(canonical_text()); }

    static PipelineSettings from_kv(const KeyValues& kv);
    static PipelineSettings from_file(const std::string& path);
};

inline constexpr const char* kToolVersion = "qrng 0.1.0";

}  // namespace qrng
