#include "qrng/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrng {

namespace {

std::vector<std::uint8_t> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

void write_all(const std::string& path, const std::uint8_t* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot create '" + path + "'");
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

}  // namespace

std::string meta_path(const std::string& path) { return path + ".meta"; }

void write_sidecar(const std::string& payload_path, const KeyValues& meta) {
    const std::string text = meta.serialize(": ");
    std::ofstream out(meta_path(payload_path), std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot create '" + meta_path(payload_path) + "'");
    out << text;
}

KeyValues read_sidecar(const std::string& payload_path) {
    std::ifstream in(meta_path(payload_path));
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    // Sidecars use "key: value"; normalize to the parser's "key = value".
    std::string text = buf.str();
    std::istringstream lines(text);
    std::ostringstream norm;
    std::string line;
    while (std::getline(lines, line)) {
        const auto colon = line.find(':');
        if (colon != std::string::npos && line.find('=') == std::string::npos)
            line[colon] = '=';
        norm << line << '\n';
    }
    return KeyValues::parse(norm.str());
}

void write_raw_samples(const std::string& path, std::span<const std::uint8_t> samples) {
    write_all(path, samples.data(), samples.size());
}

std::vector<std::uint8_t> read_raw_samples(const std::string& path) { return read_all(path); }

void write_packed_bits(const std::string& path, const BitBlock& bits) {
    const auto bytes = bits.to_bytes();
    write_all(path, bytes.data(), bytes.size());
}

BitBlock read_packed_bits(const std::string& path) {
    const auto bytes = read_all(path);
    std::size_t nbits = bytes.size() * 8;
    const KeyValues meta = read_sidecar(path);
    if (meta.has("bits")) {
        nbits = meta.get_u64("bits");
        if ((nbits + 7) / 8 != bytes.size())
            throw std::runtime_error("io: sidecar bit count does not match '" + path + "'");
    }
    return BitBlock::from_bytes(bytes, nbits);
}

void write_seed_file(const std::string& path, const ToeplitzSeed& seed,
                     const ToeplitzParams& params) {
    write_packed_bits(path, seed.bits());
    KeyValues meta;
    meta.set("format", "seed-bits");
    meta.set_u64("bits", seed.bits().size());
    meta.set_u64("m", params.m);
    meta.set_u64("n", params.n);
    write_sidecar(path, meta);
}

ToeplitzSeed read_seed_file(const std::string& path, const ToeplitzParams& params) {
    const auto bytes = read_all(path);
    if (bytes.size() != (params.seed_bits() + 7) / 8)
        throw std::runtime_error("io: seed file '" + path + "' has " +
                                 std::to_string(bytes.size()) + " bytes, expected " +
                                 std::to_string((params.seed_bits() + 7) / 8));
    const KeyValues meta = read_sidecar(path);
    if (meta.has("m") && (meta.get_u64("m") != params.m || meta.get_u64("n") != params.n))
        throw std::runtime_error("io: seed file '" + path + "' was written for different (m, n)");
    return ToeplitzSeed(BitBlock::from_bytes(bytes, params.seed_bits()), params);
}

}  // namespace qrng
