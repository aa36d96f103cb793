#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include <json.hpp>

#include "turtle/editing.hpp"
#include "turtle/random.hpp"

namespace turtle {

struct CorpusItem;

/// P(next tag | previous tag). Rows are indexed by the previous tag, with
/// `CommandTag::Start` as the row used before the first command.
class BigramTable {
 public:
  static constexpr std::size_t kRows = kTagCount + 1;

  /// Every entry 1/5.
  BigramTable();

  double probability(CommandTag prev, CommandTag next) const {
    return rows_[row_index(prev)][static_cast<std::size_t>(next)];
  }
  const std::array<double, kTagCount>& row(CommandTag prev) const { return rows_[row_index(prev)]; }
  void set_row(CommandTag prev, const std::array<double, kTagCount>& row) { rows_[row_index(prev)] = row; }

  static std::size_t row_index(CommandTag prev) { return static_cast<std::size_t>(prev); }

 private:
  std::array<std::array<double, kTagCount>, kRows> rows_;
};

enum class ArgumentMode { Uniform, Nonuniform };

std::string_view to_string(ArgumentMode mode);

struct ArgumentModel {
  ArgumentMode mode = ArgumentMode::Uniform;
  double lambda_last = 0.5;          // P(connect source is the newest block)
  double lambda_next_to_last = 0.5;  // P(connect dest is the second-newest block)
};

struct CommandModel {
  BigramTable bigram;
  ArgumentModel args;
  std::string corpus_fingerprint;
};

/// Transition counts over each item's coarsened command sequence (one START
/// transition per item), smoothed with a pseudo-count of 1.
BigramTable fit_bigram(std::span<const CorpusItem> corpus);

struct LambdaEstimate {
  double last = 0.5;
  double next_to_last = 0.5;
  std::size_t connects = 0;  // 0 means the defaults were returned
};

/// Fraction of Connect commands whose source is the newest live block, and
/// whose destination is the second-newest live block, found by replay.
LambdaEstimate fit_lambdas(std::span<const CorpusItem> corpus);

/// Bigram table plus fitted lambdas, in the requested argument mode.
CommandModel fit_model(std::span<const CorpusItem> corpus, ArgumentMode mode = ArgumentMode::Nonuniform);

/// Draws one feasible command: a tag from the bigram row for `prev`,
/// renormalised over tags that have a feasible command in `w`, then its
/// arguments according to `m.args`.
EditCommand sample_command(const CommandModel& m, const Workspace& w, CommandTag prev, Rng& rng);

nlohmann::json to_json(const CommandModel& m);
/// Throws std::invalid_argument on a malformed document.
CommandModel model_from_json(const nlohmann::json& j);

}  // namespace turtle
