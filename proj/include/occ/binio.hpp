// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "occ/errors.hpp"

namespace occ {

/// Appends little-endian scalars to a byte buffer. All occkit container
/// formats are written through this so the on-disk encoding never depends on
/// host endianness or struct padding.
class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }

  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v & 0xff));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
  }

  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  void magic(const char tag[5]) {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<std::uint8_t>(tag[i]));
    }
  }

  void bytes(const std::uint8_t* data, std::size_t n) {
    out_.insert(out_.end(), data, data + n);
  }

 private:
  std::vector<std::uint8_t>& out_;
};

/// Reads little-endian scalars from a byte buffer, tracking the offset so
/// format errors can name the exact byte that failed.
class ByteReader {
 public:
  ByteReader(const std::vector<std::uint8_t>& data, std::string context)
      : data_(data), context_(std::move(context)) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint8_t u8() {
    need(1, "u8");
    return data_[pos_++];
  }

  std::uint16_t u16() {
    need(2, "u16");
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                      static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    need(4, "u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

  void expect_magic(const char tag[5]) {
    need(4, "magic");
    if (std::memcmp(data_.data() + pos_, tag, 4) != 0) {
      throw FormatError(context_ + ": bad magic at byte " +
                        std::to_string(pos_) + ", expected '" +
                        std::string(tag, 4) + "'");
    }
    pos_ += 4;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(context_ + ": " + what + " at byte " +
                      std::to_string(pos_));
  }

 private:
  void need(std::size_t n, const char* what) {
    if (pos_ + n > data_.size()) {
      throw FormatError(context_ + ": truncated file, needed " +
                        std::to_string(n) + " byte(s) for " + what +
                        " at byte " + std::to_string(pos_) + " but only " +
                        std::to_string(data_.size()) + " byte(s) present");
    }
  }

  const std::vector<std::uint8_t>& data_;
  std::string context_;
  std::size_t pos_ = 0;
};

/// Reads a whole file. Throws FormatError when the file cannot be opened.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Writes a whole file. Throws FormatError when the file cannot be written.
void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& bytes);

}  // namespace occ
