#pragma once

#include <cstdint>
#include <vector>

#include "turtle/editing.hpp"
#include "turtle/interpret.hpp"
#include "turtle/models.hpp"

namespace turtle {

/// Find the workspace within `max_edits` editing commands of `start` whose
/// drawing is closest (Hausdorff) to `target`, evaluating at most `budget`
/// states.
struct SynthesisProblem {
  Workspace start;
  /// Coarse tag of the last command that built `start` (Start if none).
  CommandTag last_tag = CommandTag::Start;
  Trajectory target;
  int max_edits = 6;
  std::int64_t budget = 50000;
};

struct Candidate {
  Workspace program;
  std::vector<EditCommand> edits;  // path from the start workspace
  double distance = 0.0;
  std::int64_t states = 0;  // states generated when this candidate was found

  int depth() const { return static_cast<int>(edits.size()); }
};

struct SearchResult {
  /// IDPS: the start workspace followed by every strictly better candidate.
  /// Sampling: the single incumbent.
  std::vector<Candidate> candidates;
  std::int64_t states = 0;

  const Candidate& best() const { return candidates.back(); }
};

/// Iterative deepening over the editing graph. Iteration d runs a depth-limited
/// DFS that skips any state already on the current path and scores only the
/// states at depth exactly d; a state is emitted when it beats the best
/// distance so far. Every generated successor counts against the budget.
SearchResult idps(const SynthesisProblem& problem, const RenderConfig& cfg = {});

/// floor(budget / max_edits) rollouts, each restarting at `start` and sampling
/// `max_edits` commands from `model`; the best state seen is kept. Round r
/// draws from its own stream derived from (seed, r), so `workers` > 1 gives
/// the same result as a sequential run.
SearchResult sampling_search(const SynthesisProblem& problem, const CommandModel& model, std::uint64_t seed,
                             const RenderConfig& cfg = {}, int workers = 1);

}  // namespace turtle
