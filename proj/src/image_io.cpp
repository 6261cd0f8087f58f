// Copyright 2026 The stillmotion Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "error.hpp"

namespace stillmotion {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool IsPng(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0;
}

bool IsPpm(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6';
}

ImageBuffer DecodePng(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kDecode, "undecodable PNG: " + msg);
  }
  if (img.width == 0 || img.height == 0) {
    png_image_free(&img);
    throw Error(ErrorCode::kInvalidArgument, "PNG has zero dimension");
  }
  img.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kDecode, "undecodable PNG: " + msg);
  }
  return ImageBuffer(static_cast<int>(img.width), static_cast<int>(img.height),
                     std::move(pixels));
}

// Minimal P6 reader: header tokens separated by whitespace, '#' comments,
// maxval <= 255.
ImageBuffer DecodePpm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw Error(ErrorCode::kDecode, "undecodable PPM: malformed header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1 << 24) throw Error(ErrorCode::kDecode, "undecodable PPM: header value too large");
      ++pos;
    }
    return value;
  };
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::kDecode, "undecodable PPM: malformed header");
  }
  ++pos;
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "PPM has zero dimension");
  }
  if (maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::kDecode, "undecodable PPM: unsupported maxval " + std::to_string(maxval));
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < count * 3) {
    throw Error(ErrorCode::kDecode, "undecodable PPM: truncated pixel data");
  }
  std::vector<std::uint8_t> rgba(count * 4);
  for (std::size_t i = 0; i < count; ++i) {
    for (int c = 0; c < 3; ++c) {
      unsigned v = bytes[pos + i * 3 + c];
      if (maxval != 255) v = (v * 255 + static_cast<unsigned>(maxval) / 2) / static_cast<unsigned>(maxval);
      rgba[i * 4 + c] = static_cast<std::uint8_t>(std::min(v, 255u));
    }
    rgba[i * 4 + 3] = 255;
  }
  return ImageBuffer(static_cast<int>(width), static_cast<int>(height), std::move(rgba));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kNotFound, "file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

ImageBuffer DecodeImage(std::span<const std::uint8_t> bytes) {
  if (IsPng(bytes)) return DecodePng(bytes);
  if (IsPpm(bytes)) return DecodePpm(bytes);
  throw Error(ErrorCode::kDecode, "undecodable image: unrecognized format");
}

ImageBuffer LoadImage(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  try {
    return DecodeImage(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodePng(const ImageBuffer& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  const auto* data = image.bytes().data();
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, data, 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kIo, "PNG encode failed: " + msg);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, data, 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kIo, "PNG encode failed: " + msg);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> EncodePpm(const ImageBuffer& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixel_count() * 3);
  const auto px = image.bytes();
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    out.insert(out.end(), px.begin() + static_cast<std::ptrdiff_t>(i * 4),
               px.begin() + static_cast<std::ptrdiff_t>(i * 4 + 3));
  }
  return out;
}

void SaveImage(const ImageBuffer& image, const std::filesystem::path& path) {
  if (Lower(path.extension().string()) == ".ppm") {
    WriteFileBytes(path, EncodePpm(image));
  } else {
    WriteFileBytes(path, EncodePng(image));
  }
}

}  // namespace stillmotion
