#include "turtle/api.hpp"

#include <chrono>

namespace turtle {

namespace {

nlohmann::json command_list(std::span<const EditCommand> commands) {
  nlohmann::json out = nlohmann::json::array();
  for (const EditCommand& c : commands) out.push_back(format_command(c));
  return out;
}

nlohmann::json chain_listing(const Workspace& w, BlockId first) {
  nlohmann::json chain = nlohmann::json::array();
  for (BlockId cur = first; cur != kNoBlock; cur = w.at(cur).next) {
    const Block& b = w.at(cur);
    nlohmann::json entry = {{"id", b.id}, {"type", to_string(b.kind)}};
    if (b.kind != BlockKind::Move) entry["value"] = b.value;
    if (b.kind == BlockKind::Repeat) entry["body"] = chain_listing(w, b.body);
    chain.push_back(std::move(entry));
  }
  return chain;
}

template <typename T>
T require(const nlohmann::json& body, const char* key, const char* type) {
  if (!body.contains(key)) throw RequestError(400, std::string("missing field '") + key + "'");
  try {
    return body.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw RequestError(400, std::string("field '") + key + "' must be " + type);
  }
}

}  // namespace

nlohmann::json RequestError::to_json() const {
  nlohmann::json j = {{"error", what()}};
  if (index_ >= 0) j["index"] = index_;
  return j;
}

nlohmann::json points_to_json(std::span<const Point> points) {
  nlohmann::json out = nlohmann::json::array();
  for (const Point& p : points) out.push_back({p.x, p.y});
  return out;
}

std::vector<Point> points_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw RequestError(400, "trajectory must be an array of [x, y] pairs");
  std::vector<Point> points;
  points.reserve(j.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw RequestError(400, "trajectory must be an array of [x, y] pairs");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

std::vector<EditCommand> parse_commands(const nlohmann::json& list) {
  if (!list.is_array()) throw RequestError(400, "commands must be an array of strings");
  std::vector<EditCommand> out;
  out.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto index = static_cast<std::ptrdiff_t>(i);
    if (!list[i].is_string()) throw RequestError(400, "command " + std::to_string(i) + " is not a string", index);
    try {
      out.push_back(parse_command(list[i].get<std::string>()));
    } catch (const CommandSyntaxError& e) {
      throw RequestError(400, "command " + std::to_string(i) + ": " + e.what(), index);
    }
  }
  return out;
}

Workspace replay_request(const std::vector<EditCommand>& commands) {
  try {
    return replay(commands);
  } catch (const InfeasibleCommand& e) {
    throw RequestError(400, e.what(), e.index());
  }
}

RenderConfig render_config_from(const nlohmann::json& body, const RenderConfig& defaults) {
  RenderConfig cfg = defaults;
  if (body.contains("move_length")) cfg.move_length = require<double>(body, "move_length", "a number");
  if (body.contains("sample_step")) cfg.sample_step = require<double>(body, "sample_step", "a number");
  if (!(cfg.move_length > 0.0) || !(cfg.sample_step > 0.0)) {
    throw RequestError(400, "move_length and sample_step must be positive");
  }
  return cfg;
}

SynthesisRequest parse_synthesis_request(const nlohmann::json& body, const RenderConfig& defaults) {
  if (!body.is_object()) throw RequestError(400, "request body must be a JSON object");
  SynthesisRequest req;
  req.render = render_config_from(body, defaults);
  req.commands = parse_commands(body.value("commands", nlohmann::json::array()));
  replay_request(req.commands);
  if (!body.contains("trajectory")) throw RequestError(400, "missing field 'trajectory'");
  req.stroke = points_from_json(body["trajectory"]);
  if (req.stroke.empty()) throw RequestError(400, "trajectory is empty");

  const auto algorithm = body.value("algorithm", std::string("idps"));
  const auto parsed = parse_algorithm(algorithm);
  if (!parsed) throw RequestError(400, "unknown algorithm '" + algorithm + "'");
  req.algorithm = *parsed;
  if (body.contains("budget")) req.budget = require<std::int64_t>(body, "budget", "an integer");
  if (body.contains("cost")) req.cost = require<int>(body, "cost", "an integer");
  if (req.budget < 1) throw RequestError(400, "budget must be at least 1");
  if (req.cost < 1) throw RequestError(400, "cost must be at least 1");
  if (body.contains("seed")) req.seed = require<std::uint64_t>(body, "seed", "a non-negative integer");
  if (req.algorithm != Algorithm::Idps && !req.seed) {
    throw RequestError(400, "sampling algorithms require an explicit seed");
  }
  if (body.contains("model")) {
    try {
      req.model = model_from_json(body["model"]);
    } catch (const std::invalid_argument& e) {
      throw RequestError(400, e.what());
    }
  }
  return req;
}

nlohmann::json synthesize(const SynthesisRequest& req, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  SynthesisProblem problem;
  problem.start = replay_request(req.commands);
  problem.last_tag = req.commands.empty() ? CommandTag::Start : coarsen(req.commands.back());
  problem.target = target_from_stroke(req.stroke, req.render);
  problem.max_edits = req.cost;
  problem.budget = req.budget;

  const SearchResult result =
      run_algorithm(req.algorithm, problem, req.model, req.seed.value_or(0), req.render, workers);

  nlohmann::json candidates = nlohmann::json::array();
  for (const Candidate& c : result.candidates) {
    std::vector<EditCommand> full = req.commands;
    full.insert(full.end(), c.edits.begin(), c.edits.end());
    candidates.push_back({{"edits", command_list(c.edits)},
                          {"commands", command_list(full)},
                          {"program", to_string(c.program)},
                          {"trajectory", points_to_json(trace(c.program, req.render))},
                          {"distance", c.distance},
                          {"depth", c.depth()},
                          {"states", c.states}});
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {{"algorithm", to_string(req.algorithm)},
          {"budget", req.budget},
          {"cost", req.cost},
          {"seed", req.seed ? nlohmann::json(*req.seed) : nlohmann::json(nullptr)},
          {"candidates", candidates},
          {"states", result.states},
          {"elapsed_seconds", elapsed}};
}

nlohmann::json workspace_listing(const Workspace& w) {
  nlohmann::json roots = nlohmann::json::array();
  for (BlockId r : w.roots()) roots.push_back(chain_listing(w, r));
  return {{"next_id", w.next_id()}, {"roots", roots}};
}

nlohmann::json interpret_response(const std::vector<EditCommand>& commands, const RenderConfig& cfg) {
  const Workspace w = replay_request(commands);
  return {{"program", to_string(w)}, {"workspace", workspace_listing(w)}, {"trajectory", points_to_json(trace(w, cfg))}};
}

}  // namespace turtle
