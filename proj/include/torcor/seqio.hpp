#pragma once

// TSEQ sequence files.
//
//   offset 0   4 bytes  magic "TSEQ"
//   offset 4   1 byte   format version (1)
//   offset 5   8 bytes  N, little endian
//   offset 13  8*N      point words, little endian
//
// Provenance lives next to the data file in "<path>.json".

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "torcor/sequence.hpp"

namespace torcor {

inline constexpr std::uint8_t kTseqVersion = 1;
inline constexpr std::size_t kTseqHeaderSize = 13;

std::vector<std::uint8_t> encode_tseq(std::span<const TorusPoint> points);
std::vector<TorusPoint> decode_tseq(std::span<const std::uint8_t> bytes);

std::string provenance_to_json(const GeneratorSpec& spec, int indent = 2);
GeneratorSpec provenance_from_json(const std::string& text);

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);

/// Writes the TSEQ file and its JSON sidecar.
void save_sequence(const TorusSequence& seq, const std::filesystem::path& path);

/// Reads a TSEQ file; the sidecar is optional (missing means `external` provenance).
TorusSequence load_sequence(const std::filesystem::path& path);

}  // namespace torcor
