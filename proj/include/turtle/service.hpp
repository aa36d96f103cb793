#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "turtle/api.hpp"

namespace httplib {
class Server;
}

namespace turtle {

struct ServiceConfig {
  std::int64_t max_budget = 200000;
  int max_cost = 8;
  int workers = 2;
  std::chrono::seconds job_ttl{600};
  std::string cors_origin = "*";
  RenderConfig render;
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

/// Stateless interpretation plus a polling job queue for synthesis. Handlers
/// take raw request bodies so they can be exercised without a socket.
class SynthesisService {
 public:
  explicit SynthesisService(ServiceConfig cfg = {});
  ~SynthesisService();

  SynthesisService(const SynthesisService&) = delete;
  SynthesisService& operator=(const SynthesisService&) = delete;

  HttpReply health() const;
  HttpReply interpret(const std::string& body) const;
  /// Validates and queues a synthesis job; answers 202 with `{"job_id"}`.
  HttpReply submit(const std::string& body);
  /// `{"job_id", "status": queued|running|done|failed, "result"?, "error"?}`;
  /// 404 for unknown or expired ids.
  HttpReply job(const std::string& id);

  /// Blocks until the job is done or failed, or the timeout passes.
  bool wait(const std::string& id, std::chrono::milliseconds timeout);

  /// Registers the /api routes and CORS headers on `server`.
  void mount(httplib::Server& server);

  const ServiceConfig& config() const { return cfg_; }

 private:
  using Clock = std::chrono::steady_clock;

  struct Job {
    std::string id;
    SynthesisRequest request;
    std::string status = "queued";
    nlohmann::json result;
    std::string error;
    Clock::time_point finished{};
  };

  void work();
  void expire_locked();
  nlohmann::json describe_locked(const Job& job) const;

  ServiceConfig cfg_;
  mutable std::mutex mutex_;
  std::condition_variable queue_cv_;
  std::condition_variable done_cv_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// Serves until the process is stopped. Returns non-zero if binding fails.
int run_server(SynthesisService& service, const std::string& host, int port);

}  // namespace turtle
