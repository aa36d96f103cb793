#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "turtle/eval.hpp"

namespace turtle {

/// A rejected request. `status` is the HTTP status the service answers with
/// (400 malformed, 422 outside configured limits).
class RequestError : public std::invalid_argument {
 public:
  RequestError(int status, const std::string& message, std::ptrdiff_t index = -1)
      : std::invalid_argument(message), status_(status), index_(index) {}

  int status() const { return status_; }
  /// Offending command index, or -1.
  std::ptrdiff_t index() const { return index_; }
  nlohmann::json to_json() const;

 private:
  int status_;
  std::ptrdiff_t index_;
};

struct SynthesisRequest {
  std::vector<EditCommand> commands;  // the user's program so far
  std::vector<Point> stroke;          // drawn target, as a polyline
  Algorithm algorithm = Algorithm::Idps;
  std::int64_t budget = 50000;
  int cost = 6;
  std::optional<std::uint64_t> seed;
  CommandModel model;
  RenderConfig render;
};

/// Parses text commands, reporting the first bad one by index (status 400).
std::vector<EditCommand> parse_commands(const nlohmann::json& list);
/// Replays commands, reporting the first infeasible one by index (status 400).
Workspace replay_request(const std::vector<EditCommand>& commands);

/// Reads optional `move_length` / `sample_step` fields over `defaults`.
RenderConfig render_config_from(const nlohmann::json& body, const RenderConfig& defaults = {});

/// Validates the JSON body of a synthesis request. Throws RequestError(400).
SynthesisRequest parse_synthesis_request(const nlohmann::json& body, const RenderConfig& defaults = {});

/// Runs the request and builds the response document:
///   {"algorithm", "candidates": [{"edits", "commands", "trajectory",
///    "distance", "depth", "states"}], "states", "elapsed_seconds"}
/// `elapsed_seconds` is the only field that varies between identical runs.
nlohmann::json synthesize(const SynthesisRequest& request, int workers = 1);

/// `{"program", "workspace", "trajectory"}` for a replayed command list.
nlohmann::json interpret_response(const std::vector<EditCommand>& commands, const RenderConfig& cfg);

/// Nested listing of roots: `[[{"id", "type", "value", "body": [...]}, ...], ...]`.
nlohmann::json workspace_listing(const Workspace& w);

nlohmann::json points_to_json(std::span<const Point> points);
/// Throws RequestError(400) unless `j` is an array of [x, y] pairs.
std::vector<Point> points_from_json(const nlohmann::json& j);

}  // namespace turtle
