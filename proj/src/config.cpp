#include "qrng/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qrng/entropy.hpp"

namespace qrng {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void KeyValues::set(const std::string& key, const std::string& value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
        entries_[it->second].second = value;
        return;
    }
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
}

void KeyValues::set_u64(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

void KeyValues::set_double(const std::string& key, double value) {
    set(key, format_double(value));
}

bool KeyValues::has(const std::string& key) const { return index_.count(key) > 0; }

const std::string& KeyValues::get(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end())
        throw std::invalid_argument("config: missing key '" + key + "'");
    return entries_[it->second].second;
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

std::uint64_t KeyValues::get_u64(const std::string& key) const {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
    const char* first = s.data() + (hex ? 2 : 0);
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v, hex ? 16 : 10);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("config: key '" + key + "' is not an integer: " + s);
    return v;
}

double KeyValues::get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
    }
}

std::string KeyValues::serialize(const std::string& separator) const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << separator << v << '\n';
    return out.str();
}

KeyValues KeyValues::parse(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        kv.set(key, value);
    }
    return kv;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EntropyModel PipelineSettings::entropy_model() const {
    EntropyModel m;
    m.gamma = sim.gamma;
    m.mean_square_voltage_mv2 = entropy_mean_square_mv2;
    m.adc = sim.adc;
    return m;
}

void PipelineSettings::validate() const {
    sim.validate();
    extractor.validate();
    entropy_model().validate();
    if (keep_mask == 0)
        throw std::invalid_argument("pipeline: keep_mask must be nonzero");
    if (workers == 0)
        throw std::invalid_argument("pipeline: workers must be at least 1");
    if (rate_cap_bps < 0.0)
        throw std::invalid_argument("pipeline: rate cap must be nonnegative");
    if (kernel_backend != "auto" && kernel_backend != "scalar" && kernel_backend != "avx2" &&
        kernel_backend != "neon")
        throw std::invalid_argument("pipeline: unknown kernel backend '" + kernel_backend + "'");
    if (seed_origin == SeedOrigin::File && seed_file.empty())
        throw std::invalid_argument("pipeline: seed_source = file requires a seed_file path");

    // Budget gate: never extract more than the modeled entropy supports.
    const auto budget = compute_budget(entropy_model(), keep_mask, extractor.n,
                                       extractor.epsilon_exponent);
    if (extractor.m > budget.m)
        throw std::invalid_argument(
            "pipeline: extractor m = " + std::to_string(extractor.m) +
            " exceeds the entropy budget (leftover hash bound m = " + std::to_string(budget.m) +
            ")");
}

KeyValues PipelineSettings::to_kv() const {
    KeyValues kv;
    kv.set_double("sim.sample_rate", sim.sample_rate);
    kv.set_double("sim.tau", sim.tau);
    kv.set_u64("sim.substeps", sim.substeps_per_sample);
    kv.set_double("sim.phase_diffusion", sim.phase_diffusion);
    kv.set_double("sim.amplitude_mv", sim.amplitude_mv);
    kv.set_double("sim.gamma", sim.gamma);
    kv.set_double("sim.detector_bandwidth", sim.detector_bandwidth_hz.value_or(0.0));
    kv.set_u64("sim.rng_seed", sim.rng_seed);
    kv.set_u64("sim.pilot_samples", sim.pilot_samples);
    kv.set_u64("adc.bits", sim.adc.bits);
    kv.set_double("adc.full_scale_mv", sim.adc.full_scale_mv);
    kv.set_double("adc.offset_mv", sim.adc.offset_mv);
    kv.set_double("entropy.mean_square_mv2", entropy_mean_square_mv2);
    kv.set_u64("extractor.m", extractor.m);
    kv.set_u64("extractor.n", extractor.n);
    kv.set_u64("extractor.k", extractor.k);
    kv.set_u64("extractor.epsilon_exponent", extractor.epsilon_exponent);
    kv.set("extractor.seed_source", seed_origin == SeedOrigin::Prng ? "prng" : "file");
    kv.set_u64("extractor.seed_prng", seed_prng);
    kv.set("extractor.seed_file", seed_file);
    kv.set_u64("extractor.refresh_period", refresh_period);
    kv.set_u64("pipeline.keep_mask", keep_mask);
    kv.set_u64("pipeline.workers", workers);
    kv.set_double("pipeline.rate_cap_bps", rate_cap_bps);
    kv.set("pipeline.kernel_backend", kernel_backend);
    return kv;
}

PipelineSettings PipelineSettings::from_kv(const KeyValues& kv) {
    PipelineSettings s;
    const KeyValues defaults = s.to_kv();
    std::set<std::string> known;
    for (const auto& [k, v] : defaults.entries()) known.insert(k);
    for (const auto& [k, v] : kv.entries())
        if (!known.count(k))
            throw std::invalid_argument("config: unknown key '" + k + "'");

    auto u64 = [&](const char* key, std::uint64_t fallback) {
        return kv.has(key) ? kv.get_u64(key) : fallback;
    };
    auto dbl = [&](const char* key, double fallback) {
        return kv.has(key) ? kv.get_double(key) : fallback;
    };

    s.sim.sample_rate = dbl("sim.sample_rate", s.sim.sample_rate);
    s.sim.tau = dbl("sim.tau", s.sim.tau);
    s.sim.substeps_per_sample = static_cast<std::uint32_t>(u64("sim.substeps", s.sim.substeps_per_sample));
    s.sim.phase_diffusion = dbl("sim.phase_diffusion", s.sim.phase_diffusion);
    s.sim.amplitude_mv = dbl("sim.amplitude_mv", s.sim.amplitude_mv);
    s.sim.gamma = dbl("sim.gamma", s.sim.gamma);
    const double bw = dbl("sim.detector_bandwidth", 0.0);
    s.sim.detector_bandwidth_hz = bw > 0.0 ? std::optional<double>(bw) : std::nullopt;
    s.sim.rng_seed = u64("sim.rng_seed", s.sim.rng_seed);
    s.sim.pilot_samples = static_cast<std::uint32_t>(u64("sim.pilot_samples", s.sim.pilot_samples));
    s.sim.adc.bits = static_cast<std::uint32_t>(u64("adc.bits", s.sim.adc.bits));
    s.sim.adc.full_scale_mv = dbl("adc.full_scale_mv", s.sim.adc.full_scale_mv);
    s.sim.adc.offset_mv = dbl("adc.offset_mv", s.sim.adc.offset_mv);
    s.entropy_mean_square_mv2 = dbl("entropy.mean_square_mv2", s.entropy_mean_square_mv2);
    s.extractor.m = static_cast<std::uint32_t>(u64("extractor.m", s.extractor.m));
    s.extractor.n = static_cast<std::uint32_t>(u64("extractor.n", s.extractor.n));
    s.extractor.k = static_cast<std::uint32_t>(u64("extractor.k", s.extractor.k));
    s.extractor.epsilon_exponent =
        static_cast<std::uint32_t>(u64("extractor.epsilon_exponent", s.extractor.epsilon_exponent));
    const std::string origin = kv.get_or("extractor.seed_source", "prng");
    if (origin == "prng")
        s.seed_origin = SeedOrigin::Prng;
    else if (origin == "file")
        s.seed_origin = SeedOrigin::File;
    else
        throw std::invalid_argument("config: extractor.seed_source must be 'prng' or 'file'");
    s.seed_prng = u64("extractor.seed_prng", s.seed_prng);
    s.seed_file = kv.get_or("extractor.seed_file", "");
    s.refresh_period = u64("extractor.refresh_period", 0);
    s.keep_mask = static_cast<std::uint8_t>(u64("pipeline.keep_mask", s.keep_mask));
    s.workers = static_cast<unsigned>(u64("pipeline.workers", s.workers));
    s.rate_cap_bps = dbl("pipeline.rate_cap_bps", 0.0);
    s.kernel_backend = kv.get_or("pipeline.kernel_backend", "auto");
    return s;
}

PipelineSettings PipelineSettings::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_kv(KeyValues::parse(buf.str()));
}

}  // namespace qrng
