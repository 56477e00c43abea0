#pragma once

#include <filesystem>

#include "dplab/image.hpp"

namespace dplab {

/// Binary 8-bit PGM ("P5", maxval 255). Intensities map to v / 255.
Image load_pgm(const std::filesystem::path& path);

/// Writes round(v * 255) clamped to [0, 255], rounding half away from zero.
void save_pgm(const Image& image, const std::filesystem::path& path);

/// DPLF container: "DPLF", version byte 0x01, u32 LE width, u32 LE height,
/// then width * height little-endian IEEE-754 floats, row-major.
Image load_raw(const std::filesystem::path& path);
void save_raw(const Image& image, const std::filesystem::path& path);

inline constexpr std::size_t kRawHeaderBytes = 13;

}  // namespace dplab
