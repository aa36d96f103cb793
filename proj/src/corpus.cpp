#include "turtle/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "turtle/random.hpp"

namespace turtle {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxSyntheticTrace = 600;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(CorpusError::Kind::Parse, path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ptrdiff_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n');
}

int repeat_nesting(const Workspace& w, BlockId id) {
  int depth = 0;
  for (BlockId cur = id; cur != kNoBlock; cur = w.at(cur).parent) {
    if (w.at(cur).kind == BlockKind::Repeat) ++depth;
  }
  return depth;
}

BlockKind random_kind(Rng& rng) {
  const double u = rng.unit();
  if (u < 0.45) return BlockKind::Move;
  if (u < 0.80) return BlockKind::Turn;
  return BlockKind::Repeat;
}

int random_other_value(BlockKind kind, int current, Rng& rng) {
  std::vector<int> options;
  for (int v : value_domain(kind)) {
    if (v != current) options.push_back(v);
  }
  return options[rng.index(options.size())];
}

class SequenceBuilder {
 public:
  bool apply(const EditCommand& c) {
    if (infeasibility(w_, c)) return false;
    w_ = apply_command(w_, c);
    commands_.push_back(c);
    return true;
  }

  const Workspace& workspace() const { return w_; }
  std::vector<EditCommand> take() { return std::move(commands_); }

 private:
  Workspace w_;
  std::vector<EditCommand> commands_;
};

void add_motif(SequenceBuilder& b, Rng& rng) {
  const BlockKind kind = random_kind(rng);
  const bool had_blocks = !b.workspace().empty();
  b.apply(EditCommand::get(kind));
  const Workspace& w = b.workspace();
  const BlockId added = w.blocks().back().id;

  if (had_blocks) {
    BlockId dest = w.blocks()[w.size() - 2].id;
    if (!rng.bernoulli(0.85)) dest = w.blocks()[rng.index(w.size() - 1)].id;
    const Block& d = w.at(dest);
    const bool inside = d.kind == BlockKind::Repeat && d.body == kNoBlock && repeat_nesting(w, dest) <= 1 &&
                        rng.bernoulli(0.8);
    if (inside) {
      b.apply(EditCommand::connect_inside(added, dest));
    } else {
      b.apply(EditCommand::connect_under(added, dest));
    }
  }

  if (kind == BlockKind::Turn && rng.bernoulli(0.9)) {
    b.apply(EditCommand::change(added, 30, random_other_value(kind, 30, rng)));
  } else if (kind == BlockKind::Repeat && rng.bernoulli(0.6)) {
    b.apply(EditCommand::change(added, 2, random_other_value(kind, 2, rng)));
  }
}

void add_detour(SequenceBuilder& b, Rng& rng) {
  const Workspace& w = b.workspace();
  std::vector<BlockId> tunable;
  for (const Block& blk : w.blocks()) {
    if (blk.kind != BlockKind::Move) tunable.push_back(blk.id);
  }
  if (!tunable.empty() && rng.bernoulli(0.5)) {
    const Block& blk = w.at(tunable[rng.index(tunable.size())]);
    b.apply(EditCommand::change(blk.id, blk.value, random_other_value(blk.kind, blk.value, rng)));
    return;
  }
  b.apply(EditCommand::get(BlockKind::Move));
  b.apply(EditCommand::remove(b.workspace().blocks().back().id));
}

}  // namespace

CorpusError::CorpusError(Kind kind, std::string file, std::ptrdiff_t position, const std::string& message)
    : std::runtime_error(file + (kind == Kind::Parse ? ": parse error" : ": replay error") +
                         (position > 0 || kind == Kind::Replay ? " at " + std::to_string(position) : "") + ": " +
                         message),
      kind_(kind),
      file_(std::move(file)),
      position_(position) {}

nlohmann::json to_json(const CorpusItem& item) {
  nlohmann::json commands = nlohmann::json::array();
  for (const EditCommand& c : item.commands) commands.push_back(format_command(c));
  nlohmann::json points = nlohmann::json::array();
  for (const Point& p : item.trajectory) points.push_back({p.x, p.y});
  return {{"id", item.id}, {"commands", commands}, {"trajectory", points}, {"metadata", item.metadata}};
}

CorpusItem item_from_json(const nlohmann::json& j, const std::string& file) {
  auto shape_error = [&file](const std::string& what) {
    return CorpusError(CorpusError::Kind::Parse, file, 0, what);
  };
  if (!j.is_object()) throw shape_error("item must be a JSON object");
  CorpusItem item;
  if (!j.contains("id") || !j["id"].is_string()) throw shape_error("missing string field 'id'");
  item.id = j["id"].get<std::string>();

  if (!j.contains("commands") || !j["commands"].is_array()) throw shape_error("missing array field 'commands'");
  const auto& commands = j["commands"];
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!commands[i].is_string()) {
      throw CorpusError(CorpusError::Kind::Parse, file, static_cast<std::ptrdiff_t>(i), "command is not a string");
    }
    try {
      item.commands.push_back(parse_command(commands[i].get<std::string>()));
    } catch (const CommandSyntaxError& e) {
      throw CorpusError(CorpusError::Kind::Parse, file, static_cast<std::ptrdiff_t>(i), e.what());
    }
  }

  if (!j.contains("trajectory") || !j["trajectory"].is_array()) throw shape_error("missing array field 'trajectory'");
  for (const auto& p : j["trajectory"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw shape_error("trajectory points must be [x, y] pairs");
    }
    item.trajectory.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  if (item.trajectory.empty()) throw shape_error("trajectory is empty");

  if (j.contains("metadata")) item.metadata = j["metadata"];

  try {
    replay(item.commands);
  } catch (const InfeasibleCommand& e) {
    throw CorpusError(CorpusError::Kind::Replay, file, e.index(), e.reason());
  }
  return item;
}

CorpusItem load_item(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorpusError(CorpusError::Kind::Parse, path.string(), line_of_offset(text, e.byte), e.what());
  }
  return item_from_json(j, path.string());
}

void save_item(const CorpusItem& item, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(item).dump(2) << '\n';
}

std::vector<CorpusItem> load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw CorpusError(CorpusError::Kind::Parse, dir.string(), 0, "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.filename() != "manifest.json") files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusItem> items;
  items.reserve(files.size());
  for (const auto& f : files) items.push_back(load_item(f));
  return items;
}

void save_corpus(const std::vector<CorpusItem>& items, const fs::path& dir) {
  fs::create_directories(dir);
  for (const CorpusItem& item : items) save_item(item, dir / (item.id + ".json"));
}

std::vector<CorpusItem> generate_synthetic_corpus(const SyntheticSpec& spec, int n, const RenderConfig& cfg) {
  std::vector<CorpusItem> items;
  items.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const int span = std::max(spec.max_motifs - spec.min_motifs, 0) + 1;
  std::uint64_t stream = 0;
  while (static_cast<int>(items.size()) < n) {
    Rng rng(derive_seed(spec.seed, stream++));
    SequenceBuilder builder;
    const int motifs = std::max(spec.min_motifs, 1) + static_cast<int>(rng.index(static_cast<std::uint64_t>(span)));
    for (int m = 0; m < motifs; ++m) {
      add_motif(builder, rng);
      if (rng.bernoulli(spec.detour_rate)) add_detour(builder, rng);
    }
    std::vector<Point> path = trace(builder.workspace(), cfg);
    // Nothing drawn, or too large to search comfortably: draw again.
    if (path.size() < 2 || path.size() > kMaxSyntheticTrace) continue;
    for (std::size_t i = 1; i < path.size() && spec.noise_sigma > 0.0; ++i) {
      path[i].x += spec.noise_sigma * rng.normal();
      path[i].y += spec.noise_sigma * rng.normal();
    }
    char id[32];
    std::snprintf(id, sizeof id, "syn-%04zu", items.size() + 1);
    CorpusItem item;
    item.id = id;
    item.commands = builder.take();
    item.trajectory = std::move(path);
    item.metadata = {{"generator", "synthetic"}, {"seed", spec.seed}, {"noise_sigma", spec.noise_sigma}};
    items.push_back(std::move(item));
  }
  return items;
}

Trajectory item_target(const CorpusItem& item, const RenderConfig& cfg) {
  return target_from_stroke(item.trajectory, cfg);
}

std::string fingerprint_bytes(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string corpus_fingerprint(const std::vector<CorpusItem>& items) {
  std::string all;
  for (const CorpusItem& item : items) {
    all += to_json(item).dump();
    all += '\n';
  }
  return fingerprint_bytes(all);
}

}  // namespace turtle
