#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "turtle/corpus.hpp"
#include "turtle/models.hpp"
#include "turtle/search.hpp"

namespace turtle {

enum class Algorithm { Idps, Uniform, Nonuniform };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Runs `algorithm` on `problem`. Sampling variants use `model` with its
/// argument mode forced to match the algorithm; IDPS ignores model and seed.
SearchResult run_algorithm(Algorithm algorithm, const SynthesisProblem& problem, const CommandModel& model,
                           std::uint64_t seed, const RenderConfig& cfg = {}, int workers = 1);

class PrefixInfeasible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvalSettings {
  std::int64_t budget = 50000;
  int max_edits = 6;
  std::uint64_t seed = 0;
  RenderConfig render;
  CommandModel model;
};

/// Outcome of completing one item after deleting its final k commands.
struct KAheadResult {
  std::string item_id;
  int k = 0;
  Algorithm algorithm = Algorithm::Idps;
  int acc = 0;                 // completion draws the same as the full program
  double err = 0.0;            // d_H(stroke, completion)
  double delta = 0.0;          // relative error reduction from the truncated program
  double runtime_seconds = 0.0;
  std::int64_t states = 0;
  double initial_err = 0.0;    // d_H(stroke, truncated program)
  double reference_err = 0.0;  // d_H(stroke, full program)
  std::vector<EditCommand> edits;
};

/// Throws PrefixInfeasible when k is negative or exceeds the command count.
KAheadResult k_ahead(const CorpusItem& item, Algorithm algorithm, int k, const EvalSettings& settings,
                     std::uint64_t seed);

/// Seed used for (item, k); shared by all algorithms so they face the same draws.
std::uint64_t task_seed(std::uint64_t seed, std::string_view item_id, int k);

/// Every (item, algorithm, k) combination with k <= item length, in that
/// nesting order. Tasks run on `workers` threads; results do not depend on it
/// apart from runtimes.
std::vector<KAheadResult> run_evaluation(const std::vector<CorpusItem>& corpus, std::span<const Algorithm> algorithms,
                                         std::span<const int> ks, const EvalSettings& settings, int workers = 1);

struct AggregateRow {
  Algorithm algorithm = Algorithm::Idps;
  int k = 0;
  std::size_t count = 0;
  double acc = 0.0;
  double err = 0.0;
  double delta = 0.0;
  double runtime_seconds = 0.0;
  double states = 0.0;
};

struct EvalSummary {
  std::vector<AggregateRow> rows;  // ordered by algorithm, then k
  double baseline_err = 0.0;       // mean d_H(stroke, full program) over distinct items
  std::size_t items = 0;
};

EvalSummary aggregate(std::span<const KAheadResult> results);
const AggregateRow* find_row(const EvalSummary& s, Algorithm a, int k);

void write_results_csv(std::ostream& out, std::span<const KAheadResult> results);
nlohmann::json to_json(const EvalSummary& s);

enum class Metric { Accuracy, Error, Delta };
/// Grouped bar chart of one metric against k, one bar per algorithm.
std::string metric_chart_svg(const EvalSummary& s, Metric metric);

/// results.csv, summary.json and acc.svg / err.svg / delta.svg under `dir`.
void write_report(const std::filesystem::path& dir, std::span<const KAheadResult> results, const EvalSummary& s);

}  // namespace turtle
