#include "turtle/search.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

#include "turtle/hausdorff.hpp"

namespace turtle {

namespace {

void check_problem(const SynthesisProblem& p) {
  if (p.max_edits < 1) throw std::invalid_argument("edit budget must be at least 1");
  if (p.budget < 1) throw std::invalid_argument("state budget must be at least 1");
  if (p.target.empty()) throw EmptySet();
}

class DepthLimitedSearch {
 public:
  DepthLimitedSearch(const SynthesisProblem& problem, const RenderConfig& cfg) : problem_(problem), cfg_(cfg) {}

  SearchResult run() {
    const double initial = hausdorff(interpret(problem_.start, cfg_), problem_.target);
    result_.candidates.push_back({problem_.start, {}, initial, 0});
    best_ = initial;
    for (int limit = 1; limit <= problem_.max_edits && !exhausted_ && best_ > 0.0; ++limit) {
      path_.assign(1, problem_.start);
      expand(problem_.start, 0, limit);
    }
    result_.states = states_;
    return std::move(result_);
  }

 private:
  bool on_path(const Workspace& w) const {
    return std::any_of(path_.begin(), path_.end(), [&w](const Workspace& p) { return p.same_structure(w); });
  }

  void expand(const Workspace& w, int depth, int limit) {
    for (const EditCommand& c : enumerate_commands(w)) {
      if (exhausted_ || best_ <= 0.0) return;
      Workspace next = apply_command(w, c);
      if (++states_ >= problem_.budget) exhausted_ = true;
      if (on_path(next)) continue;
      edits_.push_back(c);
      if (depth + 1 == limit) {
        score(next);
      } else if (!exhausted_) {
        path_.push_back(next);
        expand(next, depth + 1, limit);
        path_.pop_back();
      }
      edits_.pop_back();
    }
  }

  void score(const Workspace& w) {
    const Trajectory drawn = interpret(w, cfg_);
    if (!hausdorff_below(drawn, problem_.target, best_)) return;
    best_ = hausdorff(drawn, problem_.target);
    result_.candidates.push_back({w, edits_, best_, states_});
  }

  const SynthesisProblem& problem_;
  const RenderConfig& cfg_;
  SearchResult result_;
  std::vector<Workspace> path_;
  std::vector<EditCommand> edits_;
  double best_ = 0.0;
  std::int64_t states_ = 0;
  bool exhausted_ = false;
};

struct RolloutBest {
  bool found = false;
  Candidate candidate;
};

// Runs rounds [first, last). Keeps the first sample that attains the minimum
// distance below `initial`, which is also what a sequential run would keep.
RolloutBest run_rounds(const SynthesisProblem& problem, const CommandModel& model, std::uint64_t seed,
                       const RenderConfig& cfg, std::int64_t first, std::int64_t last, double initial) {
  RolloutBest best;
  double threshold = initial;
  const int steps = problem.max_edits;
  for (std::int64_t round = first; round < last && threshold > 0.0; ++round) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(round)));
    Workspace w = problem.start;
    CommandTag prev = problem.last_tag;
    std::vector<EditCommand> edits;
    for (int j = 0; j < steps; ++j) {
      const EditCommand c = sample_command(model, w, prev, rng);
      w = apply_command(w, c);
      prev = coarsen(c);
      edits.push_back(c);
      const Trajectory drawn = interpret(w, cfg);
      if (hausdorff_below(drawn, problem.target, threshold)) {
        threshold = hausdorff(drawn, problem.target);
        best.found = true;
        best.candidate = {w, edits, threshold, round * steps + j + 1};
        if (threshold <= 0.0) break;
      }
    }
  }
  return best;
}

}  // namespace

SearchResult idps(const SynthesisProblem& problem, const RenderConfig& cfg) {
  check_problem(problem);
  return DepthLimitedSearch(problem, cfg).run();
}

SearchResult sampling_search(const SynthesisProblem& problem, const CommandModel& model, std::uint64_t seed,
                             const RenderConfig& cfg, int workers) {
  check_problem(problem);
  const double initial = hausdorff(interpret(problem.start, cfg), problem.target);
  const std::int64_t rounds = problem.budget / problem.max_edits;

  Candidate incumbent{problem.start, {}, initial, 0};
  if (rounds == 0 || initial <= 0.0) return {{incumbent}, 0};

  workers = static_cast<int>(std::clamp<std::int64_t>(workers, 1, rounds));
  std::vector<RolloutBest> partial(static_cast<std::size_t>(workers));
  if (workers == 1) {
    partial[0] = run_rounds(problem, model, seed, cfg, 0, rounds, initial);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(partial.size());
    for (int i = 0; i < workers; ++i) {
      const std::int64_t first = rounds * i / workers;
      const std::int64_t last = rounds * (i + 1) / workers;
      threads.emplace_back([&, i, first, last] {
        try {
          partial[static_cast<std::size_t>(i)] = run_rounds(problem, model, seed, cfg, first, last, initial);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (RolloutBest& p : partial) {
    if (p.found && p.candidate.distance < incumbent.distance) incumbent = std::move(p.candidate);
  }
  // A perfect fit ends the run early; report the samples a sequential run would have drawn.
  const std::int64_t states =
      (incumbent.distance <= 0.0 && incumbent.states > 0) ? incumbent.states : rounds * problem.max_edits;
  return {{incumbent}, states};
}

}  // namespace turtle
