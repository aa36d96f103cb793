#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "turtle/editing.hpp"
#include "turtle/interpret.hpp"

namespace turtle {

/// One recorded program: the editing commands that build it from an empty
/// workspace, and the stroke the author drew as its intended output.
struct CorpusItem {
  std::string id;
  std::vector<EditCommand> commands;
  std::vector<Point> trajectory;  // ordered polyline as drawn
  nlohmann::json metadata = nlohmann::json::object();

  bool operator==(const CorpusItem&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { Parse, Replay };

  /// `position` is a 1-based line for JSON syntax errors, 0 when the
  /// document is well-formed but has the wrong shape, and the 0-based command
  /// index for command syntax and replay errors.
  CorpusError(Kind kind, std::string file, std::ptrdiff_t position, const std::string& message);

  Kind kind() const { return kind_; }
  const std::string& file() const { return file_; }
  std::ptrdiff_t position() const { return position_; }

 private:
  Kind kind_;
  std::string file_;
  std::ptrdiff_t position_;
};

/// JSON document `{"id", "commands": [...], "trajectory": [[x, y], ...], "metadata": {}}`.
nlohmann::json to_json(const CorpusItem& item);
/// Parses and replay-validates one item. `file` is only used in error messages.
CorpusItem item_from_json(const nlohmann::json& j, const std::string& file = "<memory>");

CorpusItem load_item(const std::filesystem::path& path);
void save_item(const CorpusItem& item, const std::filesystem::path& path);

/// Every `*.json` file in `dir` except `manifest.json`, in file-name order.
std::vector<CorpusItem> load_corpus(const std::filesystem::path& dir);
/// Writes `<id>.json` per item into `dir`, creating it if needed.
void save_corpus(const std::vector<CorpusItem>& items, const std::filesystem::path& dir);

struct SyntheticSpec {
  std::uint64_t seed = 1;
  int min_motifs = 2;         // each motif adds one block (get, connect, change)
  int max_motifs = 6;
  double noise_sigma = 0.0;   // stroke jitter, canvas units
  double detour_rate = 0.1;   // chance per motif of an extra remove/disconnect/change detour
};

/// Random feasible command sequences built from get -> connect -> change
/// motifs. Each stroke is the traced path with Gaussian jitter on every sample
/// except the first, which stays on the turtle origin.
std::vector<CorpusItem> generate_synthetic_corpus(const SyntheticSpec& spec, int n, const RenderConfig& cfg = {});

/// Target point set for an item (registered and densified stroke).
Trajectory item_target(const CorpusItem& item, const RenderConfig& cfg = {});

/// Stable 64-bit FNV-1a fingerprint of a corpus, as 16 hex digits.
std::string corpus_fingerprint(const std::vector<CorpusItem>& items);
std::string fingerprint_bytes(std::string_view bytes);

}  // namespace turtle
