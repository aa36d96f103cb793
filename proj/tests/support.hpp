#pragma once

// Random generators and brute-force oracles shared by the unit and acceptance
// tests. Nothing here calls the search code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "turtle/corpus.hpp"
#include "turtle/editing.hpp"
#include "turtle/interpret.hpp"
#include "turtle/random.hpp"
#include "turtle/search.hpp"

namespace testing {

using namespace turtle;

inline std::vector<Point> random_points(Rng& rng, int n, double lo = -500.0, double hi = 500.0) {
  std::vector<Point> out(static_cast<std::size_t>(n));
  for (auto& p : out) p = {lo + (hi - lo) * rng.unit(), lo + (hi - lo) * rng.unit()};
  return out;
}

/// Explicit distance matrix, then the larger of the two directed max-min terms.
/// Distances are rounded as sqrt(dx*dx + dy*dy) so results compare exactly.
inline double oracle_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dx = a[i].x - b[j].x;
      const double dy = a[i].y - b[j].y;
      d[i][j] = std::sqrt(dx * dx + dy * dy);
    }
  }
  double ab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ab = std::max(ab, *std::min_element(d[i].begin(), d[i].end()));
  double ba = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) best = std::min(best, d[i][j]);
    ba = std::max(ba, best);
  }
  return std::max(ab, ba);
}

inline int pick_value(Rng& rng, BlockKind kind) {
  const auto dom = value_domain(kind);
  return dom.empty() ? 0 : dom[rng.index(dom.size())];
}

inline BlockKind pick_kind(Rng& rng) { return static_cast<BlockKind>(rng.index(3)); }

/// Random statement list with nesting depth at most `depth` (1 = no repeats).
inline Chain random_chain(Rng& rng, int depth, int max_len = 3) {
  Chain out;
  const int len = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_len)));
  for (int i = 0; i < len; ++i) {
    const int roll = static_cast<int>(rng.index(depth > 1 ? 3 : 2));
    if (roll == 0) {
      out.push_back(Statement::move());
    } else if (roll == 1) {
      out.push_back(Statement::turn(pick_value(rng, BlockKind::Turn)));
    } else {
      out.push_back(Statement::repeat(pick_value(rng, BlockKind::Repeat), random_chain(rng, depth - 1, 2)));
    }
  }
  return out;
}

/// Every repeat replaced by that many copies of its body.
inline Chain unroll(const Chain& chain) {
  Chain out;
  for (const Statement& s : chain) {
    if (s.kind != BlockKind::Repeat) {
      out.push_back(s);
      continue;
    }
    const Chain body = unroll(s.body);
    for (int i = 0; i < s.value; ++i) out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

/// Workspace reached by random feasible commands, kept to at most `max_blocks`.
inline Workspace random_workspace(Rng& rng, std::size_t max_blocks, int steps) {
  Workspace w;
  for (int s = 0; s < steps; ++s) {
    std::vector<EditCommand> cmds = enumerate_commands(w);
    if (w.size() >= max_blocks) {
      std::erase_if(cmds, [](const EditCommand& c) { return c.kind == CommandKind::Get; });
    }
    if (cmds.empty()) break;
    w = apply_command(w, cmds[rng.index(cmds.size())]);
  }
  return w;
}

/// One to three random root chains with at most `max_blocks` blocks in total.
inline Workspace random_program(Rng& rng, std::size_t max_blocks) {
  for (;;) {
    std::vector<Chain> chains;
    const int n = 1 + static_cast<int>(rng.index(3));
    for (int i = 0; i < n; ++i) chains.push_back(random_chain(rng, 2, 3));
    Workspace w = Workspace::from_chains(chains);
    if (w.size() <= max_blocks) return w;
  }
}

/// Applies `edits` random feasible commands.
inline Workspace random_edits(Rng& rng, Workspace w, int edits) {
  for (int i = 0; i < edits; ++i) {
    const auto cmds = enumerate_commands(w);
    w = apply_command(w, cmds[rng.index(cmds.size())]);
  }
  return w;
}

/// A command with arbitrary, possibly nonsensical, arguments.
inline EditCommand fuzz_command(Rng& rng, const Workspace& w) {
  const auto id = [&] { return static_cast<BlockId>(rng.index(static_cast<std::size_t>(w.next_id()) + 2)) - 1; };
  const auto value = [&] {
    static constexpr int kValues[] = {-30, 0, 1, 2, 3, 4, 5, 6, 15, 30, 60, 90, 120, 150, 180, 210, 240, 270, 300, 330, 360};
    return kValues[rng.index(std::size(kValues))];
  };
  switch (rng.index(6)) {
    case 0:
      return EditCommand::get(pick_kind(rng));
    case 1:
      return EditCommand::remove(id());
    case 2:
      return EditCommand::connect_under(id(), id());
    case 3:
      return EditCommand::connect_inside(id(), id());
    case 4:
      return EditCommand::disconnect(id());
    default: {
      const BlockId t = id();
      // Mostly use the true current value so the check exercises the new value.
      const Block* b = w.find(t);
      const int old = (b && rng.bernoulli(0.8)) ? b->value : value();
      return EditCommand::change(t, old, value());
    }
  }
}

/// Smallest distance to `target` over every workspace within `depth` edits
/// of `start`, by exhaustive breadth-first expansion.
inline double brute_force_optimum(const Workspace& start, const Trajectory& target, int depth,
                                  const RenderConfig& cfg = {}) {
  double best = oracle_hausdorff(interpret(start, cfg), target);
  std::vector<Workspace> frontier{start};
  for (int d = 0; d < depth; ++d) {
    std::vector<Workspace> next;
    for (const Workspace& w : frontier) {
      for (const EditCommand& c : enumerate_commands(w)) {
        Workspace s = apply_command(w, c);
        best = std::min(best, oracle_hausdorff(interpret(s, cfg), target));
        next.push_back(std::move(s));
      }
    }
    frontier = std::move(next);
  }
  return best;
}

/// Replays the candidate's edits from the start workspace; empty string when
/// the path is valid, at most `max_edits` long and ends at the candidate.
inline std::string audit_path(const Workspace& start, const Candidate& c, int max_edits) {
  if (c.depth() > max_edits) return "path longer than the edit budget";
  try {
    const Workspace end = replay_from(start, c.edits);
    if (!end.same_structure(c.program)) return "path does not reproduce the candidate";
  } catch (const InfeasibleCommand& e) {
    return std::string("path not replayable: ") + e.what();
  }
  return {};
}

}  // namespace testing
