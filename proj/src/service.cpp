#include "turtle/service.hpp"

#include <iostream>

#include <httplib.h>

namespace turtle {

namespace {

HttpReply error_reply(const RequestError& e) { return {e.status(), e.to_json()}; }

nlohmann::json parse_body(const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw RequestError(400, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

SynthesisService::SynthesisService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  const int n = std::max(cfg_.workers, 1);
  for (int i = 0; i < n; ++i) workers_.emplace_back([this] { work(); });
}

SynthesisService::~SynthesisService() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

HttpReply SynthesisService::health() const { return {200, {{"status", "ok"}}}; }

HttpReply SynthesisService::interpret(const std::string& body) const {
  try {
    const nlohmann::json req = parse_body(body);
    if (!req.is_object()) throw RequestError(400, "request body must be a JSON object");
    const RenderConfig cfg = render_config_from(req, cfg_.render);
    return {200, interpret_response(parse_commands(req.value("commands", nlohmann::json::array())), cfg)};
  } catch (const RequestError& e) {
    return error_reply(e);
  }
}

HttpReply SynthesisService::submit(const std::string& body) {
  SynthesisRequest request;
  try {
    request = parse_synthesis_request(parse_body(body), cfg_.render);
    if (request.budget > cfg_.max_budget) {
      throw RequestError(422, "budget " + std::to_string(request.budget) + " exceeds the limit of " +
                                  std::to_string(cfg_.max_budget));
    }
    if (request.cost > cfg_.max_cost) {
      throw RequestError(422, "cost " + std::to_string(request.cost) + " exceeds the limit of " +
                                  std::to_string(cfg_.max_cost));
    }
  } catch (const RequestError& e) {
    return error_reply(e);
  }
  std::string id;
  {
    std::lock_guard lock(mutex_);
    expire_locked();
    id = "job-" + std::to_string(next_job_++);
    Job job;
    job.id = id;
    job.request = std::move(request);
    jobs_.emplace(id, std::move(job));
    queue_.push_back(id);
  }
  queue_cv_.notify_one();
  return {202, {{"job_id", id}, {"status", "queued"}}};
}

HttpReply SynthesisService::job(const std::string& id) {
  std::lock_guard lock(mutex_);
  expire_locked();
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return {404, {{"error", "no job '" + id + "'"}}};
  return {200, describe_locked(it->second)};
}

bool SynthesisService::wait(const std::string& id, std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return done_cv_.wait_for(lock, timeout, [&] {
    auto it = jobs_.find(id);
    return it == jobs_.end() || it->second.status == "done" || it->second.status == "failed";
  });
}

nlohmann::json SynthesisService::describe_locked(const Job& job) const {
  nlohmann::json out = {{"job_id", job.id}, {"status", job.status}};
  if (job.status == "done") out["result"] = job.result;
  if (job.status == "failed") out["error"] = job.error;
  return out;
}

void SynthesisService::expire_locked() {
  const auto now = Clock::now();
  std::erase_if(jobs_, [&](const auto& entry) {
    const Job& j = entry.second;
    return (j.status == "done" || j.status == "failed") && now - j.finished > cfg_.job_ttl;
  });
}

void SynthesisService::work() {
  for (;;) {
    std::unique_lock lock(mutex_);
    queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
    if (stopping_) return;
    const std::string id = queue_.front();
    queue_.pop_front();
    auto it = jobs_.find(id);
    if (it == jobs_.end()) continue;
    it->second.status = "running";
    const SynthesisRequest request = it->second.request;
    lock.unlock();

    nlohmann::json result;
    std::string error;
    try {
      result = synthesize(request);
    } catch (const std::exception& e) {
      error = e.what();
    }

    lock.lock();
    it = jobs_.find(id);
    if (it != jobs_.end()) {
      it->second.status = error.empty() ? "done" : "failed";
      it->second.result = std::move(result);
      it->second.error = std::move(error);
      it->second.finished = Clock::now();
    }
    lock.unlock();
    done_cv_.notify_all();
  }
}

void SynthesisService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", cfg_.cors_origin},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Post("/api/interpret", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, interpret(req.body));
  });
  server.Post("/api/synthesize", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, submit(req.body));
  });
  server.Get(R"(/api/jobs/([A-Za-z0-9\-]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, job(req.matches[1].str()));
  });
}

int run_server(SynthesisService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  std::clog << "listening on " << host << ':' << port << '\n';
  return server.listen(host, port) ? 0 : 1;
}

}  // namespace turtle
