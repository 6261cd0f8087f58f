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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "error.hpp"
#include "gif.hpp"
#include "image_io.hpp"
#include "render.hpp"
#include "support/gif_reader.hpp"
#include "support/oracles.hpp"

using namespace stillmotion;

namespace {

Mesh Shifted(Mesh m, double dx, double dy) {
  for (auto& v : m.vertices) {
    v.x += dx;
    v.y += dy;
  }
  return m;
}

// Subject disc over a random background, with a matching random plate.
struct Fixture {
  ImageBuffer image;
  Mask mask;
  ImageBuffer plate;
};

Fixture MakeFixture(unsigned seed, int w, int h) {
  std::mt19937 rng(seed);
  Fixture f{oracle::RandomImage(rng, w, h), Mask(w, h), oracle::RandomImage(rng, w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - w / 2.0, dy = y - h / 2.0;
      f.mask.set(x, y, dx * dx + dy * dy < (w / 4.0) * (h / 4.0));
    }
  }
  return f;
}

Rgba RgbAt(const gifread::Frame& f, int x, int y) {
  const std::size_t i = std::size_t(y * f.width + x) * 3;
  return {f.rgb[i], f.rgb[i + 1], f.rgb[i + 2], 255};
}

}  // namespace

TEST_CASE("identity render and fill-rule coverage") {
  std::mt19937 rng(1);
  for (int density = 1; density <= 64; ++density) {
    const int w = 64, h = 48 + density % 7;
    const ImageBuffer tex = oracle::RandomImage(rng, w, h);
    const Mesh mesh = MakeGridMesh({0, 0, double(w), double(h)}, density, 1 + (density * 7) % 64);
    ImageBuffer target(w, h);
    RasterizeMesh(mesh, tex, target, Sampling::kNearest);
    REQUIRE(target == tex);
    for (int c : CoverageCounts(mesh, w, h)) REQUIRE(c == 1);
  }
}

TEST_CASE("identity render through a uv window") {
  std::mt19937 rng(2);
  const ImageBuffer tex = oracle::RandomImage(rng, 40, 30);
  const Rect box{7, 5, 19, 13};
  const Mesh mesh = MakeGridMesh(box, 5, 4, {7 / 40.0, 5 / 30.0, 19 / 40.0, 13 / 30.0});
  ImageBuffer target(40, 30);
  RasterizeMesh(mesh, tex, target);
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) {
      const bool inside = x >= 7 && x < 26 && y >= 5 && y < 18;
      CHECK(target.at(x, y) == (inside ? tex.at(x, y) : Rgba{}));
    }
  }
}

TEST_CASE("translated mesh shifts the texture") {
  std::mt19937 rng(3);
  const ImageBuffer tex = oracle::RandomImage(rng, 32, 24);
  const Mesh mesh = Shifted(MakeGridMesh({0, 0, 32, 24}, 6, 5), 5, 0);
  ImageBuffer target(32, 24);
  RasterizeMesh(mesh, tex, target);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 32; ++x) CHECK(target.at(x, y) == (x >= 5 ? tex.at(x - 5, y) : Rgba{}));
  }
}

TEST_CASE("transparent texture leaves the target unchanged") {
  std::mt19937 rng(4);
  const ImageBuffer before = oracle::RandomImage(rng, 16, 16);
  ImageBuffer target = before;
  for (Sampling s : {Sampling::kNearest, Sampling::kBilinear}) {
    RasterizeMesh(MakeGridMesh({0, 0, 16, 16}, 3, 3), ImageBuffer(16, 16), target, s);
    CHECK(target == before);
  }
}

TEST_CASE("coverage is exact on deformed and non-integer meshes") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + int(rng() % 12);
    Mesh m = MakeGridMesh({0.5, 0.25, 40, 30}, n, n);
    // Move interior vertices only, so the outer boundary stays put.
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        auto& v = m.vertices[std::size_t(j * (n + 1) + i)];
        v.x += jitter(rng) * 40.0 / n;
        v.y += jitter(rng) * 30.0 / n;
      }
    }
    for (std::size_t t = 0; t < m.triangles.size(); ++t) REQUIRE(SignedArea2(m, t) > 0);
    const auto counts = CoverageCounts(m, 48, 36);
    for (int y = 0; y < 36; ++y) {
      for (int x = 0; x < 48; ++x) {
        const double cx = x + 0.5, cy = y + 0.5;
        // A centre on the left boundary is owned by it (top-left rule).
        const bool inside = cx >= 0.5 && cx < 40.5 && cy > 0.25 && cy < 30.25;
        REQUIRE(counts[std::size_t(y * 48 + x)] == (inside ? 1 : 0));
      }
    }
  }
}

TEST_CASE("bilinear identity on a constant texture") {
  const ImageBuffer tex(20, 20, Rgba{30, 60, 90, 255});
  ImageBuffer target(20, 20);
  RasterizeMesh(MakeGridMesh({0, 0, 20, 20}, 4, 4), tex, target, Sampling::kBilinear);
  CHECK(target == tex);
}

TEST_CASE("blend over matches the source-over formula exhaustively") {
  for (int a = 0; a < 256; ++a) {
    for (int s = 0; s < 256; s += 3) {
      for (int d = 0; d < 256; d += 5) {
        const double alpha = a / 255.0;
        const int expect = int(std::lround(s * alpha + d * (1 - alpha)));
        const Rgba out = BlendOver({std::uint8_t(s), 0, 0, std::uint8_t(a)}, {std::uint8_t(d), 0, 0, 255});
        REQUIRE(int(out.r) == expect);
      }
    }
  }
}

TEST_CASE("composite frame") {
  const Fixture f = MakeFixture(6, 40, 32);
  const Scene scene = BuildScene(f.image, f.mask, f.plate, {8, 8}, Sampling::kNearest);
  CHECK(scene.subject_texture.width() == 40);

  SUBCASE("rest mesh gives subject over plate") {
    const Frame base = CompositeFrame(scene, scene.subject_rest_mesh);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 40; ++x) CHECK(base.image.at(x, y) == (f.mask.at(x, y) ? f.image.at(x, y) : f.plate.at(x, y)));
    }
  }
  SUBCASE("subject moved off canvas leaves the plate") {
    CHECK(CompositeFrame(scene, Shifted(scene.subject_rest_mesh, 500, 0)).image == f.plate);
    CHECK(CompositeFrame(scene, Shifted(scene.subject_rest_mesh, 0, -200)).image == f.plate);
  }
  SUBCASE("half-transparent subject pixel") {
    Scene s = scene;
    const int x = 20, y = 16;
    REQUIRE(f.mask.at(x, y));
    s.subject_texture.pixel(x, y)[3] = 128;
    const Frame fr = CompositeFrame(s, s.subject_rest_mesh);
    const Rgba a = f.image.at(x, y), b = f.plate.at(x, y);
    const double al = 128 / 255.0;
    CHECK(int(fr.image.at(x, y).r) == std::lround(a.r * al + b.r * (1 - al)));
    CHECK(int(fr.image.at(x, y).g) == std::lround(a.g * al + b.g * (1 - al)));
    CHECK(int(fr.image.at(x, y).b) == std::lround(a.b * al + b.b * (1 - al)));
  }
  SUBCASE("topology mismatch") {
    CHECK_THROWS_AS(CompositeFrame(scene, MakeGridMesh({0, 0, 10, 10}, 2, 2)), Error);
  }
  SUBCASE("empty mask") {
    CHECK_THROWS_AS(BuildScene(f.image, Mask(40, 32), f.plate), Error);
  }
}

TEST_CASE("rendering is deterministic and stays in gamut") {
  const Fixture f = MakeFixture(7, 48, 40);
  for (Sampling s : {Sampling::kNearest, Sampling::kBilinear}) {
    const Scene scene = BuildScene(f.image, f.mask, f.plate, {12, 12}, s);
    Animation a;
    a.frames = 6;
    for (AnimationKind kind : {AnimationKind::kJump, AnimationKind::kHorizontalWave, AnimationKind::kVerticalWave}) {
      a.kind = kind;
      a.wave.amplitude = 30;  // large enough to fold the mesh
      const auto one = RenderAnimation(scene, a);
      const auto two = RenderAnimation(scene, a);
      REQUIRE(one.size() == 6);
      for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].index == int(i));
        CHECK(one[i].image == two[i].image);
        CHECK(one[i].image.width() == 48);
      }
    }
  }
}

TEST_CASE("jump endpoints render identically") {
  const Fixture f = MakeFixture(8, 36, 36);
  const Scene scene = BuildScene(f.image, f.mask, f.plate, {}, Sampling::kBilinear);
  Animation a;
  a.frames = 9;
  const auto frames = RenderAnimation(scene, a);
  CHECK(frames.front().image == frames.back().image);
  CHECK(frames.front().image == CompositeFrame(scene, scene.subject_rest_mesh).image);
  CHECK_FALSE(frames[3].image == frames.front().image);
}

TEST_CASE("median cut") {
  ImageBuffer few(4, 4, Rgba{1, 2, 3, 255});
  few.set(1, 1, {200, 100, 50, 255});
  const Palette p = QuantizeMedianCut(few);
  CHECK(p.colors.size() == 2);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const auto c = p.colors[p.indices[std::size_t(y * 4 + x)]];
      const Rgba src = few.at(x, y);
      CHECK((c == std::array<std::uint8_t, 3>{src.r, src.g, src.b}));
    }
  }
  std::mt19937 rng(9);
  const ImageBuffer many = oracle::RandomImage(rng, 40, 40);
  for (int cap : {1, 2, 16, 256}) {
    const Palette q = QuantizeMedianCut(many, cap);
    CHECK(int(q.colors.size()) <= cap);
    for (auto i : q.indices) CHECK(i < q.colors.size());
  }
  CHECK_THROWS_AS(QuantizeMedianCut(many, 0), Error);
  CHECK_THROWS_AS(QuantizeMedianCut(many, 257), Error);
}

TEST_CASE("LZW stream decodes with an independent decoder") {
  std::mt19937 rng(10);
  for (int min_code = 2; min_code <= 8; ++min_code) {
    for (std::size_t len : {std::size_t(1), std::size_t(2), std::size_t(300), std::size_t(5000), std::size_t(70000)}) {
      std::vector<std::uint8_t> idx(len);
      const unsigned alphabet = 1u << min_code;
      // Mix of noise and long runs so both dictionary growth and resets occur.
      for (std::size_t i = 0; i < len; ++i) idx[i] = std::uint8_t((i / 37) % 3 == 0 ? rng() % alphabet : (i / 500) % alphabet);
      const auto code = LzwEncode(idx, min_code);
      CHECK(gifread::Reader::Decompress(code, min_code, len) == idx);
    }
  }
}

TEST_CASE("GIF encoding") {
  SUBCASE("single solid frame") {
    const auto bytes = EncodeGif({{0, ImageBuffer(5, 3, Rgba{12, 34, 56, 255})}}, 10);
    const auto anim = gifread::Decode(bytes);
    REQUIRE(anim.frames.size() == 1);
    CHECK(anim.width == 5);
    CHECK(anim.height == 3);
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 5; ++x) CHECK(RgbAt(anim.frames[0], x, y) == Rgba{12, 34, 56, 255});
    }
  }
  SUBCASE("three frames with delay 4") {
    std::vector<Frame> frames;
    for (int i = 0; i < 3; ++i) frames.push_back({i, ImageBuffer(8, 6, Rgba{std::uint8_t(i * 80), 0, 0, 255})});
    const auto anim = gifread::Decode(EncodeGif(frames, 4));
    REQUIRE(anim.frames.size() == 3);
    CHECK(anim.loops_forever);
    for (const auto& fr : anim.frames) {
      CHECK(fr.delay_cs * 10 == 40);
      CHECK(fr.width == 8);
      CHECK(fr.height == 6);
    }
    CHECK(RgbAt(anim.frames[2], 3, 3) == Rgba{160, 0, 0, 255});
  }
  SUBCASE("frames with up to 256 colours survive exactly") {
    std::mt19937 rng(11);
    std::vector<Frame> frames;
    for (int i = 0; i < 4; ++i) {
      ImageBuffer img(33, 17);
      std::vector<Rgba> pal;
      for (int c = 0; c < 256; ++c) pal.push_back({std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng()), 255});
      for (int y = 0; y < 17; ++y) {
        for (int x = 0; x < 33; ++x) img.set(x, y, pal[rng() % (i == 3 ? 256 : 7)]);
      }
      frames.push_back({i, img});
    }
    const auto anim = gifread::Decode(EncodeGif(frames, 7));
    REQUIRE(anim.frames.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (int y = 0; y < 17; ++y) {
        for (int x = 0; x < 33; ++x) REQUIRE(RgbAt(anim.frames[i], x, y) == frames[i].image.at(x, y));
      }
    }
  }
  SUBCASE("many colours still decode") {
    std::mt19937 rng(12);
    const auto anim = gifread::Decode(EncodeGif({{0, oracle::RandomImage(rng, 64, 64)}}, 1));
    CHECK(anim.frames.size() == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(EncodeGif({}, 4), Error);
    CHECK_THROWS_AS(EncodeGif({{0, ImageBuffer(2, 2)}, {1, ImageBuffer(3, 2)}}, 4), Error);
  }
}

TEST_CASE("frame sequence") {
  oracle::TempDir dir("frames");
  std::mt19937 rng(13);
  const std::vector<Frame> frames = {{0, oracle::RandomImage(rng, 6, 5)}, {1, oracle::RandomImage(rng, 6, 5)}};
  const auto paths = WriteFrameSequence(frames, dir.path(), "clip");
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].filename() == "clip_0000.png");
  CHECK(paths[1].filename() == "clip_0001.png");
  CHECK(LoadImage(paths[0]) == frames[0].image);
  CHECK(LoadImage(paths[1]) == frames[1].image);

  const std::vector<Frame> too_many(10000, Frame{0, ImageBuffer(1, 1)});
  try {
    WriteFrameSequence(too_many, dir.path(), "big");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("frame index exceeds padding") != std::string::npos);
  }
  CHECK_THROWS_AS(WriteFrameSequence(frames, dir.path() / "absent", "x"), Error);
}
