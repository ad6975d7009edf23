/**
 * @file raster_io.h
 * @brief PGM (P2/P5) and IMGF32 raster files
 *
 * IMGF32 layout: the ASCII header "IMGF32 <width> <height>\n" followed by
 * width*height little-endian IEEE-754 binary32 values in row-major order.
 * Doubles are narrowed to float on write.
 */
#pragma once

#include <astroimg/image.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace astroimg {

enum class RasterFormat { Pgm8, F32Raw };

/// Pgm8 for ".pgm", F32Raw otherwise.
RasterFormat formatFromPath(const std::filesystem::path& path);

/// Decodes P2, P5 (maxval 255, values / 255) or IMGF32 bytes. Throws ParseError.
Image decodeImage(const std::vector<std::uint8_t>& bytes);

/// Pgm8 writes binary P5 with round(clamp(v, 0, 1) * 255).
std::vector<std::uint8_t> encodeImage(const Image& img, RasterFormat format);

/// ASCII P2 encoding of the same quantized pixels.
std::vector<std::uint8_t> encodePgmAscii(const Image& img);

Image readImage(const std::filesystem::path& path);
void writeImage(const std::filesystem::path& path, const Image& img, RasterFormat format);
void writeImage(const std::filesystem::path& path, const Image& img);

/// Binary P6 colour image (used for the HSV orientation export); rgb holds 3 bytes per pixel.
void writePpm(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& rgb);

std::vector<std::uint8_t> readBytes(const std::filesystem::path& path);
void writeBytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace astroimg
