#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mrftrack/geometry.hpp"

namespace mrftrack {

/// Binary PGM (P5), 8-bit. Samples are mapped to intensities as v / maxval.
/// Throws IoError on unreadable or malformed files.
[[nodiscard]] Frame read_pgm(const std::filesystem::path& path);

/// Writes P5 with maxval 255; intensities are rounded to the nearest level.
void write_pgm(const std::filesystem::path& path, const Frame& frame);

/// Nearest 8-bit level of an intensity in [0, 1].
[[nodiscard]] std::uint8_t quantize_intensity(double value) noexcept;

/// Writes a length x width patch (patch order as produced by sample_patch)
/// as a length-wide, width-tall image.
void write_patch_pgm(const std::filesystem::path& path, const std::vector<double>& patch,
                     const PatchDims& dims);

} // namespace mrftrack
