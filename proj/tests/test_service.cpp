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

#include <httplib.h>

#include <atomic>
#include <thread>

#include "image_io.hpp"
#include "json_io.hpp"
#include "pipeline.hpp"
#include "service.hpp"
#include "support/fixtures.hpp"
#include "support/gif_reader.hpp"
#include "support/oracles.hpp"

using namespace stillmotion;
using nlohmann::json;

namespace {

std::string PngBody(const ImageBuffer& img) {
  const auto bytes = EncodePng(img);
  return std::string(bytes.begin(), bytes.end());
}

ImageBuffer DecodeBody(const std::string& body) {
  return DecodeImage(std::span(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
}

std::string ErrorCodeOf(const HttpResponse& r) { return json::parse(r.body)["code"]; }

std::string NewSession(SessionService& svc, const ImageBuffer& img) {
  const HttpResponse r = svc.CreateSession(PngBody(img));
  REQUIRE(r.status == 200);
  return json::parse(r.body)["id"];
}

struct FakeClock {
  std::chrono::steady_clock::time_point now{};
  SessionService::Clock fn() {
    return [this] { return now; };
  }
};

}  // namespace

TEST_CASE("create session") {
  SessionService svc;
  const ImageBuffer img = fixtures::TwoRegionImage(64, 64);
  const std::string a = NewSession(svc, img);
  const std::string b = NewSession(svc, img);
  CHECK(a != b);
  CHECK(svc.SessionCount() == 2);

  const HttpResponse bad = svc.CreateSession("hi");
  CHECK(bad.status == 400);
  CHECK(ErrorCodeOf(bad) == "undecodable_image");
  CHECK(json::parse(bad.body)["message"].get<std::string>().find("undecodable image") == 0);

  ServiceOptions small;
  small.max_image_bytes = 100;
  SessionService capped(small);
  CHECK(capped.CreateSession(PngBody(img)).status == 413);
}

TEST_CASE("click updates and error statuses") {
  SessionService svc;
  const ImageBuffer img = fixtures::TwoRegionImage(48, 48);
  const std::string id = NewSession(svc, img);

  CHECK(svc.PreviewInpaint(id).status == 409);
  CHECK(svc.RenderAnimation(id, "{}").status == 409);
  CHECK(svc.PreviewFrame(id, std::nullopt, std::nullopt).status == 409);
  CHECK(svc.UpdateClicks("nope", R"({"positives": [[1, 1]]})").status == 404);
  CHECK(svc.PreviewInpaint("nope").status == 404);
  CHECK(svc.UpdateClicks(id, "{not json").status == 400);
  CHECK(svc.UpdateClicks(id, R"({"positives": "x"})").status == 400);

  const HttpResponse none = svc.UpdateClicks(id, R"({"negatives": [[1, 1]]})");
  CHECK(none.status == 422);
  CHECK(json::parse(none.body)["message"].get<std::string>().find("at least one positive click") !=
        std::string::npos);
  CHECK(svc.UpdateClicks(id, R"({"positives": [[99, 1]]})").status == 422);
  CHECK(svc.UpdateClicks(id, R"({"positives": [[3, 3]], "negatives": [[3, 3]]})").status == 422);

  const HttpResponse ok = svc.UpdateClicks(id, R"({"positives": [[24, 24]]})");
  REQUIRE(ok.status == 200);
  CHECK(ok.content_type == "image/png");
  const Mask mask = ImageToMask(DecodeBody(ok.body));
  const Mask expect = SegmentSubject(img, {{{24, 24}}, {}}, svc.options().segmentation).mask;
  CHECK(mask == expect);
  CHECK(mask.at(24, 24));
  CHECK_FALSE(mask.at(1, 1));

  CHECK(svc.RenderAnimation(id, R"({"kind": "spin"})").status == 422);
  CHECK(svc.PreviewFrame(id, "1.5", std::nullopt).status == 422);
  CHECK(svc.PreviewFrame(id, "abc", std::nullopt).status == 422);
  CHECK(svc.PreviewFrame(id, "0.5", "{bad").status == 422);

  CHECK(svc.DeleteSession(id).status == 200);
  CHECK(svc.DeleteSession(id).status == 404);
  CHECK(svc.PreviewInpaint(id).status == 404);
}

TEST_CASE("previews and animation") {
  SessionService svc;
  const ImageBuffer img = fixtures::TwoRegionImage(40, 40);
  const std::string id = NewSession(svc, img);
  REQUIRE(svc.UpdateClicks(id, R"({"positives": [[20, 20]]})").status == 200);

  const HttpResponse gif = svc.RenderAnimation(id, R"({"kind": "jump", "frames": 8})");
  REQUIRE(gif.status == 200);
  CHECK(gif.content_type == "image/gif");
  const auto anim = gifread::Decode(std::vector<std::uint8_t>(gif.body.begin(), gif.body.end()));
  CHECK(anim.frames.size() == 8);

  const HttpResponse t0 = svc.PreviewFrame(id, "0", R"({"kind": "jump"})");
  const HttpResponse t1 = svc.PreviewFrame(id, "1", R"({"kind": "jump"})");
  REQUIRE(t0.status == 200);
  CHECK(DecodeBody(t0.body) == DecodeBody(t1.body));
  const Mask mask = SegmentSubject(img, {{{20, 20}}, {}}, svc.options().segmentation).mask;
  const ImageBuffer plate = MakeBackground(img, mask, svc.options().inpaint).image;
  const Scene scene = BuildScene(img, mask, plate, svc.options().render.mesh, svc.options().render.sampling);
  CHECK(DecodeBody(t0.body) == CompositeFrame(scene, scene.subject_rest_mesh).image);
  // Without a spec the frame follows the last rendered animation.
  CHECK(svc.PreviewFrame(id, "0.5", std::nullopt).body ==
        svc.PreviewFrame(id, "0.5", R"({"kind": "jump", "frames": 8})").body);
}

TEST_CASE("cached plate always follows the latest clicks") {
  SessionService svc;
  const ImageBuffer img = fixtures::TwoRegionImage(48, 48);
  const std::string id = NewSession(svc, img);
  const ClickSet first{{{24, 24}}, {}};
  const ClickSet second{{{4, 40}}, {}};
  REQUIRE(svc.UpdateClicks(id, ClickSetToJson(first).dump()).status == 200);
  const ImageBuffer plate1 = DecodeBody(svc.PreviewInpaint(id).body);
  CHECK(plate1 == MakeBackground(img, SegmentSubject(img, first).mask).image);
  REQUIRE(svc.UpdateClicks(id, ClickSetToJson(second).dump()).status == 200);
  const ImageBuffer plate2 = DecodeBody(svc.PreviewInpaint(id).body);
  CHECK(plate2 == MakeBackground(img, SegmentSubject(img, second).mask).image);
  CHECK_FALSE(plate1 == plate2);
}

TEST_CASE("service artifacts match the command-line pipeline") {
  oracle::TempDir dir("parity");
  json doc = fixtures::PipelineDoc(dir.path(), 56, {{"kind", "hwave"}, {"frames", 6}, {"amplitude", 4}});
  doc.erase("segmentation");
  const PipelineConfig cfg = PipelineConfigFromJson(doc);
  RunPipeline(cfg);

  SessionService svc;
  const std::string id = NewSession(svc, LoadImage(cfg.input));
  const HttpResponse mask = svc.UpdateClicks(id, fixtures::ReadText(dir.path() / "clicks.json"));
  REQUIRE(mask.status == 200);
  CHECK(DecodeBody(mask.body) == LoadImage(cfg.MaskPath()));
  CHECK(DecodeBody(svc.PreviewInpaint(id).body) == LoadImage(cfg.BackgroundPath()));
  const HttpResponse gif = svc.RenderAnimation(id, AnimationToJson(cfg.animation).dump());
  REQUIRE(gif.status == 200);
  const auto file = ReadFileBytes(cfg.GifPath());
  CHECK(std::vector<std::uint8_t>(gif.body.begin(), gif.body.end()) == file);
}

TEST_CASE("idle sessions expire") {
  FakeClock clock;
  ServiceOptions opts;
  opts.session_ttl = std::chrono::seconds(60);
  SessionService svc(opts, clock.fn());
  const std::string a = NewSession(svc, fixtures::TwoRegionImage(16, 16));
  clock.now += std::chrono::seconds(40);
  const std::string b = NewSession(svc, fixtures::TwoRegionImage(16, 16));
  clock.now += std::chrono::seconds(30);
  svc.ExpireIdle();
  CHECK(svc.SessionCount() == 1);
  CHECK(svc.PreviewInpaint(a).status == 404);
  CHECK(svc.PreviewInpaint(b).status == 409);
}

TEST_CASE("environment overrides") {
  setenv("SESSION_TTL_SECS", "5", 1);
  setenv("MAX_IMAGE_BYTES", "1234", 1);
  const ServiceOptions o = ServiceOptions::FromEnvironment();
  CHECK(o.session_ttl == std::chrono::seconds(5));
  CHECK(o.max_image_bytes == 1234);
  unsetenv("SESSION_TTL_SECS");
  unsetenv("MAX_IMAGE_BYTES");
}

TEST_CASE("persisted sessions survive a restart") {
  oracle::TempDir dir("persist");
  ServiceOptions opts;
  opts.persist_dir = dir.path();
  const ImageBuffer img = fixtures::TwoRegionImage(32, 32);
  std::string id;
  std::string mask_body;
  {
    SessionService svc(opts);
    id = NewSession(svc, img);
    mask_body = svc.UpdateClicks(id, R"({"positives": [[16, 16]]})").body;
  }
  SessionService restored(opts);
  CHECK(restored.SessionCount() == 1);
  const HttpResponse plate = restored.PreviewInpaint(id);
  REQUIRE(plate.status == 200);
  CHECK(DecodeBody(plate.body) == MakeBackground(img, ImageToMask(DecodeBody(mask_body))).image);
  CHECK(restored.DeleteSession(id).status == 200);
  CHECK_FALSE(std::filesystem::exists(dir.path() / id));
}

TEST_CASE("HTTP transport") {
  SessionService svc;
  HttpServer server(svc);
  const int port = server.Bind("127.0.0.1", 0);
  server.Start();
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);

  const ImageBuffer img = fixtures::TwoRegionImage(64, 64);
  auto created = client.Post("/sessions", PngBody(img), "image/png");
  REQUIRE(created);
  REQUIRE(created->status == 200);
  const std::string id = json::parse(created->body)["id"];

  auto early = client.Get("/sessions/" + id + "/inpaint");
  REQUIRE(early);
  CHECK(early->status == 409);
  CHECK(json::parse(early->body)["code"] == "no_mask");

  auto clicks = client.Put("/sessions/" + id + "/clicks", R"({"positives": [[32, 32]]})", "application/json");
  REQUIRE(clicks);
  CHECK(clicks->status == 200);
  CHECK(clicks->get_header_value("Content-Type") == "image/png");
  CHECK(ImageToMask(DecodeBody(clicks->body)).at(32, 32));

  auto plate = client.Get("/sessions/" + id + "/inpaint");
  REQUIRE(plate);
  CHECK(plate->status == 200);

  auto gif = client.Post("/sessions/" + id + "/animation", R"({"frames": 8})", "application/json");
  REQUIRE(gif);
  CHECK(gif->status == 200);
  CHECK(gifread::Decode(std::vector<std::uint8_t>(gif->body.begin(), gif->body.end())).frames.size() == 8);

  auto frame0 = client.Get("/sessions/" + id + "/frame?t=0");
  auto frame1 = client.Get("/sessions/" + id + "/frame?t=1");
  REQUIRE(frame0);
  REQUIRE(frame1);
  CHECK(frame0->status == 200);
  CHECK(frame0->body == frame1->body);
  auto spec = client.Get("/sessions/" + id + "/frame?t=0.5&spec=%7B%22kind%22%3A%22vwave%22%7D");
  REQUIRE(spec);
  CHECK(spec->status == 200);
  CHECK(spec->body == svc.PreviewFrame(id, "0.5", R"({"kind":"vwave"})").body);

  auto bad = client.Post("/sessions", "xx", "image/png");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto missing = client.Get("/sessions/unknown/inpaint");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto route = client.Get("/nothing/here");
  REQUIRE(route);
  CHECK(route->status == 404);
  CHECK(json::parse(route->body)["code"] == "not_found");

  auto gone = client.Delete("/sessions/" + id);
  REQUIRE(gone);
  CHECK(gone->status == 200);
  server.Stop();
}

TEST_CASE("concurrent sessions do not interfere") {
  SessionService svc;
  HttpServer server(svc);
  const int port = server.Bind("127.0.0.1", 0);
  server.Start();
  constexpr int kClients = 6;
  std::vector<std::string> masks(kClients), expected(kClients);
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int c = 0; c < kClients; ++c) {
    const ImageBuffer img = fixtures::TwoRegionImage(40, 40, unsigned(c + 1));
    const ClickSet clicks{{{20, 20}, {18 + c % 3, 21}}, {{1, 1 + c}}};
    expected[std::size_t(c)] = PngBody(MaskToImage(SegmentSubject(img, clicks).mask));
    threads.emplace_back([&, c, img, clicks] {
      httplib::Client client("127.0.0.1", port);
      client.set_read_timeout(30, 0);
      auto created = client.Post("/sessions", PngBody(img), "image/png");
      if (!created || created->status != 200) {
        ++failures;
        return;
      }
      const std::string id = json::parse(created->body)["id"];
      for (int round = 0; round < 3; ++round) {
        auto r = client.Put("/sessions/" + id + "/clicks", ClickSetToJson(clicks).dump(), "application/json");
        if (!r || r->status != 200) {
          ++failures;
          return;
        }
        masks[std::size_t(c)] = r->body;
      }
    });
  }
  for (auto& t : threads) t.join();
  server.Stop();
  CHECK(failures == 0);
  for (int c = 0; c < kClients; ++c) {
    CHECK(DecodeBody(masks[std::size_t(c)]) == DecodeBody(expected[std::size_t(c)]));
  }
}
