#include "turtle/models.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

#include "turtle/corpus.hpp"

namespace turtle {

namespace {

// Row order used in the serialized matrix.
constexpr std::array<CommandTag, BigramTable::kRows> kRowOrder = {
    CommandTag::Start, CommandTag::Get, CommandTag::Remove, CommandTag::Connect, CommandTag::Change,
    CommandTag::Separate};

template <typename T>
T pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.index(items.size())];
}

// Chooses `anchor` with probability `lambda` when it is a candidate, spreading
// the rest uniformly over the other candidates.
BlockId pick_with_anchor(const std::vector<BlockId>& candidates, BlockId anchor, double lambda, Rng& rng) {
  if (std::find(candidates.begin(), candidates.end(), anchor) == candidates.end()) return pick(candidates, rng);
  if (candidates.size() == 1) return anchor;
  if (rng.bernoulli(lambda)) return anchor;
  std::vector<BlockId> others;
  others.reserve(candidates.size() - 1);
  for (BlockId id : candidates) {
    if (id != anchor) others.push_back(id);
  }
  return pick(others, rng);
}

// Second-largest live id, or kNoBlock.
BlockId next_to_last_block(const Workspace& w) {
  auto blocks = w.blocks();
  return blocks.size() >= 2 ? blocks[blocks.size() - 2].id : kNoBlock;
}

BlockId last_block(const Workspace& w) { return w.empty() ? kNoBlock : w.blocks().back().id; }

EditCommand sample_connect_nonuniform(const std::vector<EditCommand>& connects, const Workspace& w,
                                      const ArgumentModel& args, Rng& rng) {
  std::vector<BlockId> sources;
  for (const EditCommand& c : connects) sources.push_back(c.target);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  const BlockId source = pick_with_anchor(sources, sources.back(), args.lambda_last, rng);

  std::vector<BlockId> dests;
  for (const EditCommand& c : connects) {
    if (c.target == source) dests.push_back(c.dest);
  }
  std::sort(dests.begin(), dests.end());
  dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
  const BlockId dest = pick_with_anchor(dests, next_to_last_block(w), args.lambda_next_to_last, rng);

  std::vector<EditCommand> variants;
  for (const EditCommand& c : connects) {
    if (c.target == source && c.dest == dest) variants.push_back(c);
  }
  return pick(variants, rng);
}

}  // namespace

BigramTable::BigramTable() {
  for (auto& row : rows_) row.fill(1.0 / static_cast<double>(kTagCount));
}

std::string_view to_string(ArgumentMode mode) { return mode == ArgumentMode::Uniform ? "uniform" : "nonuniform"; }

BigramTable fit_bigram(std::span<const CorpusItem> corpus) {
  std::array<std::array<double, kTagCount>, BigramTable::kRows> counts{};
  for (const CorpusItem& item : corpus) {
    CommandTag prev = CommandTag::Start;
    for (const EditCommand& c : item.commands) {
      const CommandTag next = coarsen(c);
      counts[BigramTable::row_index(prev)][static_cast<std::size_t>(next)] += 1.0;
      prev = next;
    }
  }
  BigramTable table;
  for (CommandTag prev : kRowOrder) {
    const auto& row_counts = counts[BigramTable::row_index(prev)];
    double total = 0.0;
    for (double c : row_counts) total += c;
    std::array<double, kTagCount> row{};
    for (std::size_t i = 0; i < kTagCount; ++i) row[i] = (row_counts[i] + 1.0) / (total + kTagCount);
    table.set_row(prev, row);
  }
  return table;
}

LambdaEstimate fit_lambdas(std::span<const CorpusItem> corpus) {
  std::size_t connects = 0;
  std::size_t source_hits = 0;
  std::size_t dest_hits = 0;
  for (const CorpusItem& item : corpus) {
    Workspace w;
    for (const EditCommand& c : item.commands) {
      if (coarsen(c) == CommandTag::Connect) {
        ++connects;
        if (c.target == last_block(w)) ++source_hits;
        if (c.dest == next_to_last_block(w)) ++dest_hits;
      }
      w = apply_command(w, c);
    }
  }
  if (connects == 0) {
    std::clog << "warning: corpus has no connect commands; using lambda defaults 0.5/0.5\n";
    return {};
  }
  return {static_cast<double>(source_hits) / static_cast<double>(connects),
          static_cast<double>(dest_hits) / static_cast<double>(connects), connects};
}

CommandModel fit_model(std::span<const CorpusItem> corpus, ArgumentMode mode) {
  CommandModel m;
  m.bigram = fit_bigram(corpus);
  const LambdaEstimate lambdas = fit_lambdas(corpus);
  m.args = {mode, lambdas.last, lambdas.next_to_last};
  m.corpus_fingerprint = corpus_fingerprint({corpus.begin(), corpus.end()});
  return m;
}

EditCommand sample_command(const CommandModel& m, const Workspace& w, CommandTag prev, Rng& rng) {
  const auto& row = m.bigram.row(prev);
  std::array<double, kTagCount> weights{};
  double total = 0.0;
  for (std::size_t i = 0; i < kTagCount; ++i) {
    if (has_feasible(w, kTags[i])) {
      weights[i] = row[i];
      total += row[i];
    }
  }
  // Only reachable with a table that gives every feasible tag zero weight.
  if (total <= 0.0) {
    for (std::size_t i = 0; i < kTagCount; ++i) {
      if (has_feasible(w, kTags[i])) {
        weights[i] = 1.0;
        total += 1.0;
      }
    }
  }
  double u = rng.unit() * total;
  std::size_t chosen = kTagCount;
  for (std::size_t i = 0; i < kTagCount; ++i) {
    if (weights[i] <= 0.0) continue;
    chosen = i;
    if (u < weights[i]) break;
    u -= weights[i];
  }
  const CommandTag tag = kTags[chosen];
  const std::vector<EditCommand> commands = enumerate_commands(w, tag);
  if (tag == CommandTag::Connect && m.args.mode == ArgumentMode::Nonuniform) {
    return sample_connect_nonuniform(commands, w, m.args, rng);
  }
  return pick(commands, rng);
}

nlohmann::json to_json(const CommandModel& m) {
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (CommandTag prev : kRowOrder) {
    labels.push_back(to_string(prev));
    rows.push_back(m.bigram.row(prev));
  }
  nlohmann::json tags = nlohmann::json::array();
  for (CommandTag t : kTags) tags.push_back(to_string(t));
  return {
      {"format", "turtle-command-model/1"},
      {"mode", to_string(m.args.mode)},
      {"lambda_last", m.args.lambda_last},
      {"lambda_next_to_last", m.args.lambda_next_to_last},
      {"row_tags", labels},
      {"column_tags", tags},
      {"transitions", rows},
      {"corpus_fingerprint", m.corpus_fingerprint},
  };
}

CommandModel model_from_json(const nlohmann::json& j) {
  try {
    CommandModel m;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "uniform") {
      m.args.mode = ArgumentMode::Uniform;
    } else if (mode == "nonuniform") {
      m.args.mode = ArgumentMode::Nonuniform;
    } else {
      throw std::invalid_argument("unknown argument mode '" + mode + "'");
    }
    m.args.lambda_last = j.at("lambda_last").get<double>();
    m.args.lambda_next_to_last = j.at("lambda_next_to_last").get<double>();
    for (double l : {m.args.lambda_last, m.args.lambda_next_to_last}) {
      if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("lambda outside [0, 1]");
    }
    const auto& labels = j.at("row_tags");
    const auto& rows = j.at("transitions");
    if (labels.size() != BigramTable::kRows || rows.size() != BigramTable::kRows) {
      throw std::invalid_argument("transition matrix must have 6 rows");
    }
    for (std::size_t r = 0; r < BigramTable::kRows; ++r) {
      auto tag = parse_tag(labels[r].get<std::string>());
      if (!tag) throw std::invalid_argument("unknown row tag " + labels[r].dump());
      auto row = rows[r].get<std::array<double, kTagCount>>();
      for (double p : row) {
        if (!(p >= 0.0)) throw std::invalid_argument("negative transition probability");
      }
      m.bigram.set_row(*tag, row);
    }
    m.corpus_fingerprint = j.value("corpus_fingerprint", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace turtle
