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

#include "service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "error.hpp"
#include "image_io.hpp"
#include "json_io.hpp"

namespace stillmotion {

using nlohmann::json;

struct SessionService::Session {
  Session(std::string session_id, ImageBuffer source, std::chrono::steady_clock::time_point now)
      : id(std::move(session_id)),
        image(std::move(source)),
        created_at(std::chrono::system_clock::now()),
        last_access(now) {}

  std::string id;
  ImageBuffer image;
  ClickSet clicks;
  std::optional<Mask> mask;
  std::optional<ImageBuffer> plate;  // derived from `mask`, dropped with it
  std::optional<Animation> last_animation;
  std::chrono::system_clock::time_point created_at;
  std::chrono::steady_clock::time_point last_access;
  std::mutex mutex;
};

namespace {

HttpResponse ErrorResponse(int status, const std::string& code, const std::string& message) {
  return {status, "application/json", json{{"code", code}, {"message", message}}.dump()};
}

HttpResponse FromError(const Error& e, int fallback_status) {
  int status = fallback_status;
  switch (e.code()) {
    case ErrorCode::kDecode: status = 400; break;
    case ErrorCode::kConflict:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kNoBoundary:
    case ErrorCode::kInvalidArgument: status = 422; break;
    case ErrorCode::kState: status = 409; break;
    case ErrorCode::kNotFound: status = 404; break;
    case ErrorCode::kIo:
    case ErrorCode::kInternal: status = 500; break;
    default: break;
  }
  return ErrorResponse(status, ErrorCodeName(e.code()), e.what());
}

HttpResponse Png(const ImageBuffer& image) {
  const auto bytes = EncodePng(image);
  return {200, "image/png", std::string(bytes.begin(), bytes.end())};
}

std::string NewSessionId() {
  static std::mutex mu;
  static std::random_device device;
  static std::mt19937_64 rng((static_cast<std::uint64_t>(device()) << 32) ^ device());
  std::lock_guard lock(mu);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int part = 0; part < 2; ++part) {
    std::uint64_t v = rng();
    for (int i = 0; i < 16; ++i, v >>= 4) id.push_back(kHex[v & 0xf]);
  }
  return id;
}

std::span<const std::uint8_t> AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

ServiceOptions ServiceOptions::FromEnvironment() {
  ServiceOptions options;
  if (const char* ttl = std::getenv("SESSION_TTL_SECS")) {
    options.session_ttl = std::chrono::seconds(std::strtoll(ttl, nullptr, 10));
  }
  if (const char* cap = std::getenv("MAX_IMAGE_BYTES")) {
    options.max_image_bytes = static_cast<std::size_t>(std::strtoull(cap, nullptr, 10));
  }
  if (const char* dir = std::getenv("SESSION_DIR"); dir && *dir) options.persist_dir = dir;
  return options;
}

SessionService::SessionService(ServiceOptions options, Clock clock)
    : options_(std::move(options)), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  if (options_.persist_dir) Restore();
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Session> SessionService::Find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_access = clock_();
  return it->second;
}

void SessionService::ExpireIdle() {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_access > options_.session_ttl) {
      if (options_.persist_dir) {
        std::error_code ec;
        std::filesystem::remove_all(*options_.persist_dir / it->first, ec);
      }
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::size_t SessionService::SessionCount() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionService::Persist(const Session& session) const {
  if (!options_.persist_dir) return;
  const auto dir = *options_.persist_dir / session.id;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  SaveImage(session.image, dir / "source.png");
  const std::string clicks = ClickSetToJson(session.clicks).dump();
  WriteFileBytes(dir / "clicks.json", AsBytes(clicks));
}

// Reloads persisted sessions; masks are recomputed from their clicks.
void SessionService::Restore() {
  std::error_code ec;
  std::filesystem::create_directories(*options_.persist_dir, ec);
  for (const auto& entry : std::filesystem::directory_iterator(*options_.persist_dir, ec)) {
    if (!entry.is_directory()) continue;
    try {
      auto session = std::make_shared<Session>(entry.path().filename().string(),
                                               LoadImage(entry.path() / "source.png"), clock_());
      const auto clicks_path = entry.path() / "clicks.json";
      if (std::filesystem::is_regular_file(clicks_path)) {
        const auto bytes = ReadFileBytes(clicks_path);
        session->clicks = ClickSetFromJson(ParseJson(std::string(bytes.begin(), bytes.end())));
        if (!session->clicks.positives.empty()) {
          session->mask = SegmentSubject(session->image, session->clicks, options_.segmentation).mask;
        }
      }
      sessions_.emplace(session->id, std::move(session));
    } catch (const std::exception&) {
      // Unreadable session directories are skipped.
    }
  }
}

HttpResponse SessionService::CreateSession(std::string_view image_bytes) {
  ExpireIdle();
  if (image_bytes.size() > options_.max_image_bytes) {
    return ErrorResponse(413, "too_large",
                         "image of " + std::to_string(image_bytes.size()) + " bytes exceeds the " +
                             std::to_string(options_.max_image_bytes) + " byte limit");
  }
  std::optional<ImageBuffer> image;
  try {
    image = DecodeImage(AsBytes(image_bytes));
  } catch (const Error& e) {
    return ErrorResponse(400, "undecodable_image", std::string("undecodable image: ") + e.what());
  }
  auto session = std::make_shared<Session>(NewSessionId(), std::move(*image), clock_());
  try {
    Persist(*session);
  } catch (const Error& e) {
    return FromError(e, 500);
  }
  const std::string id = session->id;
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, std::move(session));
  }
  return {200, "application/json", json{{"id", id}}.dump()};
}

HttpResponse SessionService::UpdateClicks(const std::string& id, std::string_view clicks_json) {
  ExpireIdle();
  auto session = Find(id);
  if (!session) return ErrorResponse(404, "not_found", "unknown session " + id);
  ClickSet clicks;
  try {
    clicks = ClickSetFromJson(ParseJson(std::string(clicks_json)));
  } catch (const Error& e) {
    return ErrorResponse(400, "malformed_clicks", e.what());
  }
  std::lock_guard lock(session->mutex);
  if (clicks.positives.empty()) {
    return ErrorResponse(422, "invalid_argument", "at least one positive click is required");
  }
  try {
    ValidateClicks(clicks, session->image.width(), session->image.height());
    Mask mask = SegmentSubject(session->image, clicks, options_.segmentation).mask;
    session->clicks = std::move(clicks);
    session->mask = std::move(mask);
    session->plate.reset();
    Persist(*session);
    return Png(MaskToImage(*session->mask));
  } catch (const Error& e) {
    return FromError(e, 422);
  }
}

HttpResponse SessionService::PreviewInpaint(const std::string& id) {
  ExpireIdle();
  auto session = Find(id);
  if (!session) return ErrorResponse(404, "not_found", "unknown session " + id);
  std::lock_guard lock(session->mutex);
  if (!session->mask) return ErrorResponse(409, "no_mask", "session has no mask yet; send clicks first");
  try {
    if (!session->plate) session->plate = MakeBackground(session->image, *session->mask, options_.inpaint).image;
    return Png(*session->plate);
  } catch (const Error& e) {
    return FromError(e, 500);
  }
}

HttpResponse SessionService::RenderAnimation(const std::string& id, std::string_view spec_json) {
  ExpireIdle();
  auto session = Find(id);
  if (!session) return ErrorResponse(404, "not_found", "unknown session " + id);
  std::optional<Animation> animation;
  try {
    animation = AnimationFromJson(ParseJson(std::string(spec_json)));
  } catch (const Error& e) {
    return ErrorResponse(422, "invalid_spec", e.what());
  }
  std::lock_guard lock(session->mutex);
  if (!session->mask) return ErrorResponse(409, "no_mask", "session has no mask yet; send clicks first");
  try {
    if (!session->plate) session->plate = MakeBackground(session->image, *session->mask, options_.inpaint).image;
    session->last_animation = animation;
    const auto gif = RenderGif(session->image, *session->mask, *session->plate, *animation, options_.render);
    return {200, "image/gif", std::string(gif.begin(), gif.end())};
  } catch (const Error& e) {
    return FromError(e, 500);
  }
}

HttpResponse SessionService::PreviewFrame(const std::string& id, const std::optional<std::string>& t,
                                          const std::optional<std::string>& spec_json) {
  ExpireIdle();
  auto session = Find(id);
  if (!session) return ErrorResponse(404, "not_found", "unknown session " + id);
  double time = 0.0;
  if (t) {
    char* end = nullptr;
    time = std::strtod(t->c_str(), &end);
    if (t->empty() || *end != '\0' || !(time >= 0.0 && time <= 1.0)) {
      return ErrorResponse(422, "invalid_argument", "query parameter t must be a number in [0, 1]");
    }
  }
  std::optional<Animation> animation;
  if (spec_json) {
    try {
      animation = AnimationFromJson(ParseJson(*spec_json));
    } catch (const Error& e) {
      return ErrorResponse(422, "invalid_spec", e.what());
    }
  }
  std::lock_guard lock(session->mutex);
  if (!session->mask) return ErrorResponse(409, "no_mask", "session has no mask yet; send clicks first");
  if (!animation) animation = session->last_animation.value_or(Animation{});
  try {
    if (!session->plate) session->plate = MakeBackground(session->image, *session->mask, options_.inpaint).image;
    return Png(stillmotion::PreviewFrame(session->image, *session->mask, *session->plate, *animation,
                                         options_.render, time)
                   .image);
  } catch (const Error& e) {
    return FromError(e, 500);
  }
}

HttpResponse SessionService::DeleteSession(const std::string& id) {
  std::shared_ptr<Session> removed;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return ErrorResponse(404, "not_found", "unknown session " + id);
    removed = std::move(it->second);
    sessions_.erase(it);
  }
  if (options_.persist_dir) {
    std::error_code ec;
    std::filesystem::remove_all(*options_.persist_dir / id, ec);
  }
  return {200, "application/json", json{{"deleted", id}}.dump()};
}

HttpServer::HttpServer(SessionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->set_payload_max_length(service_.options().max_image_bytes + 1);
  server_->Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service_.CreateSession(req.body));
  });
  server_->Put(R"(/sessions/([0-9a-zA-Z_-]+)/clicks)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service_.UpdateClicks(req.matches[1], req.body));
               });
  server_->Get(R"(/sessions/([0-9a-zA-Z_-]+)/inpaint)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service_.PreviewInpaint(req.matches[1]));
               });
  server_->Post(R"(/sessions/([0-9a-zA-Z_-]+)/animation)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service_.RenderAnimation(req.matches[1], req.body));
                });
  server_->Get(R"(/sessions/([0-9a-zA-Z_-]+)/frame)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 std::optional<std::string> t, spec;
                 if (req.has_param("t")) t = req.get_param_value("t");
                 if (req.has_param("spec")) spec = req.get_param_value("spec");
                 reply(res, service_.PreviewFrame(req.matches[1], t, spec));
               });
  server_->Delete(R"(/sessions/([0-9a-zA-Z_-]+))",
                  [this, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, service_.DeleteSession(req.matches[1]));
                  });
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const int status = res.status;
    std::string code = status == 404 ? "not_found" : status == 413 ? "too_large" : "http_error";
    res.set_content(json{{"code", code}, {"message", "HTTP " + std::to_string(status)}}.dump(),
                    "application/json");
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::Run() { server_->listen_after_bind(); }

void HttpServer::Start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::Wait() {
  std::lock_guard lock(join_mutex_);
  if (thread_.joinable()) thread_.join();
}

void HttpServer::Stop() {
  server_->stop();
  Wait();
}

}  // namespace stillmotion
