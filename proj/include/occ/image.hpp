// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace occ {

/// Interleaved 8-bit RGB image, row-major from the top-left pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width * height * 3

  static RgbImage filled(int width, int height, std::uint8_t r,
                         std::uint8_t g, std::uint8_t b);

  std::uint8_t* at(int row, int col) {
    return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  const std::uint8_t* at(int row, int col) const {
    return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
};

/// Binary PPM (P6, maxval 255). The reader accepts arbitrary whitespace and
/// '#' comments in the header, the writer emits a single canonical form.
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

}  // namespace occ
