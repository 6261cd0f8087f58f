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

#include "gif.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "error.hpp"

namespace stillmotion {

namespace {

std::uint32_t PackRgb(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 16) | (static_cast<std::uint32_t>(p[1]) << 8) | p[2];
}

std::uint8_t Channel(std::uint32_t rgb, int c) {
  return static_cast<std::uint8_t>((rgb >> (16 - 8 * c)) & 0xff);
}

struct ColorCount {
  std::uint32_t rgb;
  std::uint32_t count;
};

struct Box {
  std::size_t begin;
  std::size_t end;  // exclusive range into the colour list
  int channel = 0;  // widest channel
  int range = 0;

  std::size_t size() const { return end - begin; }
};

void MeasureBox(Box& box, const std::vector<ColorCount>& colors) {
  box.range = 0;
  box.channel = 0;
  for (int c = 0; c < 3; ++c) {
    int lo = 255, hi = 0;
    for (std::size_t i = box.begin; i < box.end; ++i) {
      lo = std::min<int>(lo, Channel(colors[i].rgb, c));
      hi = std::max<int>(hi, Channel(colors[i].rgb, c));
    }
    if (hi - lo > box.range) {
      box.range = hi - lo;
      box.channel = c;
    }
  }
}

class BitWriter {
 public:
  void Write(std::uint32_t code, int bits) {
    buffer_ |= static_cast<std::uint64_t>(code) << used_;
    used_ += bits;
    while (used_ >= 8) {
      out_.push_back(static_cast<std::uint8_t>(buffer_ & 0xff));
      buffer_ >>= 8;
      used_ -= 8;
    }
  }
  std::vector<std::uint8_t> Finish() {
    if (used_ > 0) out_.push_back(static_cast<std::uint8_t>(buffer_ & 0xff));
    buffer_ = 0;
    used_ = 0;
    return std::move(out_);
  }

 private:
  std::vector<std::uint8_t> out_;
  std::uint64_t buffer_ = 0;
  int used_ = 0;
};

void PutU16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

}  // namespace

Palette QuantizeMedianCut(const ImageBuffer& image, int max_colors) {
  if (max_colors < 1 || max_colors > 256) {
    throw Error(ErrorCode::kInvalidArgument, "palette size must lie in [1, 256]");
  }
  std::map<std::uint32_t, std::uint32_t> histogram;
  const std::size_t n = image.pixel_count();
  const auto px = image.bytes();
  for (std::size_t i = 0; i < n; ++i) ++histogram[PackRgb(&px[i * 4])];

  std::vector<ColorCount> colors;
  colors.reserve(histogram.size());
  for (const auto& [rgb, count] : histogram) colors.push_back({rgb, count});

  std::vector<Box> boxes;
  if (colors.size() <= static_cast<std::size_t>(max_colors)) {
    // Few enough colours: one box each, so indexing is lossless.
    for (std::size_t i = 0; i < colors.size(); ++i) boxes.push_back({i, i + 1});
  } else {
    boxes.push_back({0, colors.size()});
    MeasureBox(boxes[0], colors);
    while (boxes.size() < static_cast<std::size_t>(max_colors)) {
      // Split the box with the widest channel range.
      int best_box = -1;
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (boxes[b].size() < 2 || boxes[b].range == 0) continue;
        if (best_box < 0 || boxes[b].range > boxes[static_cast<std::size_t>(best_box)].range) {
          best_box = static_cast<int>(b);
        }
      }
      if (best_box < 0) break;
      const int best_channel = boxes[static_cast<std::size_t>(best_box)].channel;
      Box& box = boxes[static_cast<std::size_t>(best_box)];
      const auto first = colors.begin() + static_cast<std::ptrdiff_t>(box.begin);
      const auto last = colors.begin() + static_cast<std::ptrdiff_t>(box.end);
      std::sort(first, last, [c = best_channel](const ColorCount& a, const ColorCount& b) {
        const auto ca = Channel(a.rgb, c);
        const auto cb = Channel(b.rgb, c);
        return ca != cb ? ca < cb : a.rgb < b.rgb;
      });
      std::uint64_t total = 0;
      for (auto it = first; it != last; ++it) total += it->count;
      std::uint64_t running = 0;
      std::size_t split = box.begin + 1;
      for (std::size_t i = box.begin; i + 1 < box.end; ++i) {
        running += colors[i].count;
        split = i + 1;
        if (running * 2 >= total) break;
      }
      Box upper{split, box.end};
      box.end = split;
      MeasureBox(box, colors);
      MeasureBox(upper, colors);
      boxes.push_back(upper);
    }
  }

  Palette palette;
  std::unordered_map<std::uint32_t, std::uint8_t> lookup;
  lookup.reserve(colors.size());
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    double sum[3] = {0, 0, 0};
    double weight = 0;
    for (std::size_t i = boxes[b].begin; i < boxes[b].end; ++i) {
      for (int c = 0; c < 3; ++c) sum[c] += static_cast<double>(Channel(colors[i].rgb, c)) * colors[i].count;
      weight += colors[i].count;
      lookup[colors[i].rgb] = static_cast<std::uint8_t>(b);
    }
    std::array<std::uint8_t, 3> mean{};
    for (int c = 0; c < 3; ++c) mean[c] = static_cast<std::uint8_t>(std::lround(sum[c] / weight));
    palette.colors.push_back(mean);
  }
  palette.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) palette.indices[i] = lookup.at(PackRgb(&px[i * 4]));
  return palette;
}

std::vector<std::uint8_t> LzwEncode(const std::vector<std::uint8_t>& indices, int min_code_size) {
  const std::uint32_t clear = 1u << min_code_size;
  const std::uint32_t eoi = clear + 1;
  BitWriter writer;
  int code_size = min_code_size + 1;
  std::uint32_t next = clear + 2;
  std::unordered_map<std::uint32_t, std::uint32_t> table;
  table.reserve(4096);

  writer.Write(clear, code_size);
  if (indices.empty()) {
    writer.Write(eoi, code_size);
    return writer.Finish();
  }
  std::uint32_t prefix = indices[0];
  for (std::size_t i = 1; i < indices.size(); ++i) {
    const std::uint32_t k = indices[i];
    const std::uint32_t key = (prefix << 8) | k;
    if (auto it = table.find(key); it != table.end()) {
      prefix = it->second;
      continue;
    }
    writer.Write(prefix, code_size);
    table.emplace(key, next++);
    if (next > (1u << code_size) && code_size < 12) ++code_size;
    if (next >= 4095) {
      writer.Write(clear, code_size);
      table.clear();
      code_size = min_code_size + 1;
      next = clear + 2;
    }
    prefix = k;
  }
  writer.Write(prefix, code_size);
  // The decoder adds a table entry after this code too; follow its width.
  if (next < 4096 && next + 1 > (1u << code_size) && code_size < 12) ++code_size;
  writer.Write(eoi, code_size);
  return writer.Finish();
}

std::vector<std::uint8_t> EncodeGif(const std::vector<Frame>& frames, int delay_cs) {
  if (frames.empty()) throw Error(ErrorCode::kInvalidArgument, "GIF needs at least one frame");
  if (delay_cs < 0 || delay_cs > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "GIF delay must lie in [0, 65535] centiseconds");
  }
  const int w = frames[0].image.width();
  const int h = frames[0].image.height();
  for (const Frame& f : frames) {
    if (f.image.width() != w || f.image.height() != h) {
      throw Error(ErrorCode::kInvalidArgument, "GIF frames have mixed dimensions");
    }
  }
  if (w > 65535 || h > 65535) throw Error(ErrorCode::kInvalidArgument, "GIF dimensions exceed 65535");

  std::vector<std::uint8_t> out = {'G', 'I', 'F', '8', '9', 'a'};
  PutU16(out, w);
  PutU16(out, h);
  out.insert(out.end(), {0x00, 0x00, 0x00});
  const char* netscape = "NETSCAPE2.0";
  out.insert(out.end(), {0x21, 0xff, 0x0b});
  out.insert(out.end(), netscape, netscape + 11);
  out.insert(out.end(), {0x03, 0x01, 0x00, 0x00, 0x00});

  for (const Frame& f : frames) {
    const Palette palette = QuantizeMedianCut(f.image);
    int table_bits = 1;
    while ((1u << table_bits) < palette.colors.size()) ++table_bits;

    // Graphic control: disposal "do not dispose", no transparency.
    out.insert(out.end(), {0x21, 0xf9, 0x04, 0x04});
    PutU16(out, delay_cs);
    out.insert(out.end(), {0x00, 0x00});

    out.push_back(0x2c);
    PutU16(out, 0);
    PutU16(out, 0);
    PutU16(out, w);
    PutU16(out, h);
    out.push_back(static_cast<std::uint8_t>(0x80 | (table_bits - 1)));
    for (std::size_t i = 0; i < (1u << table_bits); ++i) {
      if (i < palette.colors.size()) {
        out.insert(out.end(), palette.colors[i].begin(), palette.colors[i].end());
      } else {
        out.insert(out.end(), {0, 0, 0});
      }
    }

    const int min_code_size = std::max(2, table_bits);
    out.push_back(static_cast<std::uint8_t>(min_code_size));
    const std::vector<std::uint8_t> data = LzwEncode(palette.indices, min_code_size);
    for (std::size_t pos = 0; pos < data.size(); pos += 255) {
      const std::size_t len = std::min<std::size_t>(255, data.size() - pos);
      out.push_back(static_cast<std::uint8_t>(len));
      out.insert(out.end(), data.begin() + static_cast<std::ptrdiff_t>(pos),
                 data.begin() + static_cast<std::ptrdiff_t>(pos + len));
    }
    out.push_back(0x00);
  }
  out.push_back(0x3b);
  return out;
}

}  // namespace stillmotion
