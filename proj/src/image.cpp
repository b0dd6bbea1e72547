// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/image.hpp"

#include <cctype>
#include <string>

#include "occ/binio.hpp"

namespace occ {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::vector<std::uint8_t>& bytes,
                       std::size_t& pos, const std::string& context) {
  while (pos < bytes.size()) {
    if (std::isspace(bytes[pos])) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') {
        ++pos;
      }
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos])) {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  if (token.empty()) {
    throw FormatError(context + ": truncated PPM header at byte " +
                      std::to_string(pos));
  }
  return token;
}

int parse_dim(const std::string& token, const std::string& context,
              const char* what) {
  try {
    const int v = std::stoi(token);
    if (v <= 0) {
      throw std::invalid_argument("non-positive");
    }
    return v;
  } catch (const std::exception&) {
    throw FormatError(context + ": bad PPM " + std::string(what) + " '" +
                      token + "'");
  }
}

}  // namespace

RgbImage RgbImage::filled(int width, int height, std::uint8_t r,
                          std::uint8_t g, std::uint8_t b) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const std::string context = path.string();
  std::size_t pos = 0;
  if (next_token(bytes, pos, context) != "P6") {
    throw FormatError(context + ": not a binary PPM (P6) file");
  }
  RgbImage img;
  img.width = parse_dim(next_token(bytes, pos, context), context, "width");
  img.height = parse_dim(next_token(bytes, pos, context), context, "height");
  const std::string maxval = next_token(bytes, pos, context);
  if (maxval != "255") {
    throw FormatError(context + ": unsupported PPM maxval '" + maxval + "'");
  }
  ++pos;  // single whitespace byte after the header
  const std::size_t need =
      static_cast<std::size_t>(img.width) * img.height * 3;
  if (bytes.size() - pos < need) {
    throw FormatError(context + ": truncated PPM payload at byte " +
                      std::to_string(pos) + ", needed " +
                      std::to_string(need) + " byte(s)");
  }
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  std::vector<std::uint8_t> bytes;
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  bytes.insert(bytes.end(), header.begin(), header.end());
  bytes.insert(bytes.end(), image.pixels.begin(), image.pixels.end());
  write_file_bytes(path, bytes);
}

}  // namespace occ
