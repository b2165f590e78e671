#pragma once

#include <filesystem>

#include "entromin/common.hpp"

namespace entromin {

struct GrayImage {
  Index width = 0;
  Index height = 0;
  Vector pixels;  // row-major, 0..255
};

/// Binary 8-bit PGM (P5, maxval <= 255).
GrayImage read_pgm(const std::filesystem::path& path);
/// Values are rounded and clamped to 0..255.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Top-left side x side crop.
GrayImage crop_square(const GrayImage& image, Index side);

}  // namespace entromin
