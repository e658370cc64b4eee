#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "hcconf/raster.hpp"

namespace hcconf {

/// Binary PGM ("P5"). Masks: maxval 255 with samples 0 / 255. Soft maps:
/// maxval 65535, big-endian 16-bit, p = value / 65535.
using PgmImage = std::variant<BinaryMask, SoftMask>;

/// Throws MalformedHeader, InvalidMaskValue, UnsupportedMaxval or IoError (truncated data).
PgmImage decode_pgm(std::string_view bytes);
PgmImage read_pgm(const std::filesystem::path& path);

/// Throws the read_pgm errors, plus UnsupportedMaxval if the file holds the other kind.
BinaryMask read_mask_pgm(const std::filesystem::path& path);
SoftMask read_soft_pgm(const std::filesystem::path& path);

/// Canonical header "P5\n<w> <h>\n<maxval>\n" followed by the samples.
std::string encode_pgm(const BinaryMask& mask);
std::string encode_pgm(const SoftMask& soft);

void write_pgm(const BinaryMask& mask, const std::filesystem::path& path);
void write_pgm(const SoftMask& soft, const std::filesystem::path& path);

}  // namespace hcconf
