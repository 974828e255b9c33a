#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrng/bitblock.hpp"
#include "qrng/config.hpp"
#include "qrng/toeplitz.hpp"

namespace qrng {

// File layout: payload files are headerless (raw bytes, or packed bits in
// the LSB-first order of BitBlock); a "<path>.meta" sidecar carries the
// description as key: value lines.

std::string meta_path(const std::string& path);
void write_sidecar(const std::string& payload_path, const KeyValues& meta);
KeyValues read_sidecar(const std::string& payload_path);  // empty when absent

void write_raw_samples(const std::string& path, std::span<const std::uint8_t> samples);
std::vector<std::uint8_t> read_raw_samples(const std::string& path);

// Bit count comes from the sidecar when present, otherwise 8 * file size.
void write_packed_bits(const std::string& path, const BitBlock& bits);
BitBlock read_packed_bits(const std::string& path);

// Seed files are exactly ceil((m+n-1)/8) bytes, final partial byte
// zero-padded; the sidecar records m and n.
void write_seed_file(const std::string& path, const ToeplitzSeed& seed,
                     const ToeplitzParams& params);
ToeplitzSeed read_seed_file(const std::string& path, const ToeplitzParams& params);

}  // namespace qrng
