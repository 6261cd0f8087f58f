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

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>

#include "pipeline.hpp"

namespace httplib {
class Server;
}

namespace stillmotion {

struct ServiceOptions {
  std::size_t max_image_bytes = 32u << 20;
  std::chrono::seconds session_ttl{1800};
  std::optional<std::filesystem::path> persist_dir;
  SegmentParams segmentation;
  InpaintConfig inpaint;
  RenderSettings render;

  // Defaults overridden by SESSION_TTL_SECS, MAX_IMAGE_BYTES and SESSION_DIR.
  static ServiceOptions FromEnvironment();
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Session state and request handlers, independent of the transport. Requests
// on one session are serialized; different sessions proceed concurrently.
class SessionService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionService(ServiceOptions options = {}, Clock clock = nullptr);
  ~SessionService();

  HttpResponse CreateSession(std::string_view image_bytes);
  HttpResponse UpdateClicks(const std::string& id, std::string_view clicks_json);
  HttpResponse PreviewInpaint(const std::string& id);
  HttpResponse RenderAnimation(const std::string& id, std::string_view spec_json);
  HttpResponse PreviewFrame(const std::string& id, const std::optional<std::string>& t,
                            const std::optional<std::string>& spec_json);
  HttpResponse DeleteSession(const std::string& id);

  std::size_t SessionCount();
  // Drops sessions idle for longer than the configured TTL.
  void ExpireIdle();

  const ServiceOptions& options() const { return options_; }

 private:
  struct Session;

  std::shared_ptr<Session> Find(const std::string& id);
  void Persist(const Session& session) const;
  void Restore();

  ServiceOptions options_;
  Clock clock_;
  std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

// Binds the REST routes of a SessionService onto an HTTP listener.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  // Returns the bound port; port 0 picks a free one.
  int Bind(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Run();
  // Serves on a background thread.
  void Start();
  // Blocks until the background thread started by Start() exits.
  void Wait();
  void Stop();

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex join_mutex_;
};

}  // namespace stillmotion
