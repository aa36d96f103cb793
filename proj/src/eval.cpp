#include "turtle/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "turtle/hausdorff.hpp"

namespace turtle {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const char* color_of(Algorithm a) {
  switch (a) {
    case Algorithm::Idps: return "#00008b";
    case Algorithm::Uniform: return "#ff0000";
    case Algorithm::Nonuniform: return "#ffff00";
  }
  return "#888888";
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Idps: return "idps";
    case Algorithm::Uniform: return "uniform";
    case Algorithm::Nonuniform: return "nonuniform";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::Idps, Algorithm::Uniform, Algorithm::Nonuniform}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

SearchResult run_algorithm(Algorithm algorithm, const SynthesisProblem& problem, const CommandModel& model,
                           std::uint64_t seed, const RenderConfig& cfg, int workers) {
  if (algorithm == Algorithm::Idps) return idps(problem, cfg);
  CommandModel m = model;
  m.args.mode = algorithm == Algorithm::Uniform ? ArgumentMode::Uniform : ArgumentMode::Nonuniform;
  return sampling_search(problem, m, seed, cfg, workers);
}

std::uint64_t task_seed(std::uint64_t seed, std::string_view item_id, int k) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : item_id) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return derive_seed(seed, h ^ mix_seed(static_cast<std::uint64_t>(k)));
}

KAheadResult k_ahead(const CorpusItem& item, Algorithm algorithm, int k, const EvalSettings& settings,
                     std::uint64_t seed) {
  const auto n = static_cast<int>(item.commands.size());
  if (k < 0 || k > n) {
    throw PrefixInfeasible("cannot drop " + std::to_string(k) + " of " + std::to_string(n) + " commands from " +
                           item.id);
  }
  const RenderConfig& cfg = settings.render;
  const std::span<const EditCommand> all(item.commands);
  const Workspace full = replay(all);
  const auto prefix = all.first(static_cast<std::size_t>(n - k));

  SynthesisProblem problem;
  problem.start = replay(prefix);
  problem.last_tag = prefix.empty() ? CommandTag::Start : coarsen(prefix.back());
  problem.target = item_target(item, cfg);
  problem.max_edits = settings.max_edits;
  problem.budget = settings.budget;

  const auto t0 = std::chrono::steady_clock::now();
  const SearchResult found = run_algorithm(algorithm, problem, settings.model, seed, cfg);
  const auto t1 = std::chrono::steady_clock::now();

  const Candidate& best = found.best();
  KAheadResult r;
  r.item_id = item.id;
  r.k = k;
  r.algorithm = algorithm;
  r.acc = semantically_equal(best.program, full, cfg) ? 1 : 0;
  r.err = hausdorff(problem.target, interpret(best.program, cfg));
  r.initial_err = hausdorff(problem.target, interpret(problem.start, cfg));
  r.reference_err = hausdorff(problem.target, interpret(full, cfg));
  // A truncated program that already fits perfectly leaves nothing to reduce.
  r.delta = r.initial_err > 0.0 ? (r.initial_err - r.err) / r.initial_err : 0.0;
  r.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
  r.states = found.states;
  r.edits = best.edits;
  return r;
}

std::vector<KAheadResult> run_evaluation(const std::vector<CorpusItem>& corpus, std::span<const Algorithm> algorithms,
                                         std::span<const int> ks, const EvalSettings& settings, int workers) {
  struct Task {
    const CorpusItem* item;
    Algorithm algorithm;
    int k;
  };
  std::vector<Task> tasks;
  for (const CorpusItem& item : corpus) {
    for (Algorithm a : algorithms) {
      for (int k : ks) {
        if (k >= 0 && k <= static_cast<int>(item.commands.size())) tasks.push_back({&item, a, k});
      }
    }
  }
  std::vector<KAheadResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        results[i] = k_ahead(*t.item, t.algorithm, t.k, settings, task_seed(settings.seed, t.item->id, t.k));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  workers = std::max(workers, 1);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

EvalSummary aggregate(std::span<const KAheadResult> results) {
  std::map<std::pair<Algorithm, int>, AggregateRow> rows;
  std::map<std::string, double> reference;
  for (const KAheadResult& r : results) {
    AggregateRow& row = rows[{r.algorithm, r.k}];
    row.algorithm = r.algorithm;
    row.k = r.k;
    ++row.count;
    row.acc += r.acc;
    row.err += r.err;
    row.delta += r.delta;
    row.runtime_seconds += r.runtime_seconds;
    row.states += static_cast<double>(r.states);
    reference.emplace(r.item_id, r.reference_err);
  }
  EvalSummary s;
  for (auto& [key, row] : rows) {
    const auto n = static_cast<double>(row.count);
    row.acc /= n;
    row.err /= n;
    row.delta /= n;
    row.runtime_seconds /= n;
    row.states /= n;
    s.rows.push_back(row);
  }
  for (const auto& [id, e] : reference) s.baseline_err += e;
  s.items = reference.size();
  if (s.items) s.baseline_err /= static_cast<double>(s.items);
  return s;
}

const AggregateRow* find_row(const EvalSummary& s, Algorithm a, int k) {
  for (const AggregateRow& r : s.rows) {
    if (r.algorithm == a && r.k == k) return &r;
  }
  return nullptr;
}

void write_results_csv(std::ostream& out, std::span<const KAheadResult> results) {
  out << "item_id,algorithm,k,acc,err,delta,runtime_seconds,states,initial_err,reference_err,edits\n";
  for (const KAheadResult& r : results) {
    std::string edits;
    for (const EditCommand& c : r.edits) {
      if (!edits.empty()) edits += ';';
      edits += format_command(c);
    }
    out << r.item_id << ',' << to_string(r.algorithm) << ',' << r.k << ',' << r.acc << ',' << number(r.err) << ','
        << number(r.delta) << ',' << number(r.runtime_seconds) << ',' << r.states << ',' << number(r.initial_err)
        << ',' << number(r.reference_err) << ",\"" << edits << "\"\n";
  }
}

nlohmann::json to_json(const EvalSummary& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const AggregateRow& r : s.rows) {
    rows.push_back({{"algorithm", to_string(r.algorithm)},
                    {"k", r.k},
                    {"count", r.count},
                    {"mean_acc", r.acc},
                    {"mean_err", r.err},
                    {"mean_delta", r.delta},
                    {"mean_runtime_seconds", r.runtime_seconds},
                    {"mean_states", r.states}});
  }
  return {{"items", s.items}, {"baseline_mean_err", s.baseline_err}, {"rows", rows}};
}

std::string metric_chart_svg(const EvalSummary& s, Metric metric) {
  std::vector<Algorithm> algos;
  std::set<int> ks;
  for (const AggregateRow& r : s.rows) {
    if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) algos.push_back(r.algorithm);
    ks.insert(r.k);
  }
  auto value = [metric](const AggregateRow& r) {
    switch (metric) {
      case Metric::Accuracy: return r.acc;
      case Metric::Error: return r.err;
      case Metric::Delta: return r.delta;
    }
    return 0.0;
  };
  double lo = 0.0;
  double hi = metric == Metric::Accuracy ? 1.0 : 0.0;
  for (const AggregateRow& r : s.rows) {
    hi = std::max(hi, value(r));
    lo = std::min(lo, value(r));
  }
  if (metric == Metric::Error) hi = std::max(hi, s.baseline_err);
  if (hi <= lo) hi = lo + 1.0;
  if (metric != Metric::Accuracy) hi *= 1.1;

  const double width = 520, height = 380, left = 60, right = 130, top = 30, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  const char* title = metric == Metric::Accuracy ? "Mean accuracy"
                      : metric == Metric::Error  ? "Mean Hausdorff distance"
                                                 : "Mean relative error reduction";
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << " vs. k</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << y_of(0) << "\" x2=\"" << left + plot_w << "\" y2=\"" << y_of(0)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4 << "\" text-anchor=\"end\">" << short_number(v)
        << "</text>\n";
  }
  const double group_w = ks.empty() ? plot_w : plot_w / static_cast<double>(ks.size());
  const double bar_w = algos.empty() ? 0 : group_w * 0.8 / static_cast<double>(algos.size());
  std::size_t gi = 0;
  for (int k : ks) {
    const double gx = left + group_w * static_cast<double>(gi) + group_w * 0.1;
    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
      const AggregateRow* r = find_row(s, algos[ai], k);
      if (!r) continue;
      const double v = value(*r);
      const double y0 = y_of(std::max(v, 0.0));
      const double y1 = y_of(std::min(v, 0.0));
      svg << "<rect x=\"" << gx + bar_w * static_cast<double>(ai) << "\" y=\"" << y0 << "\" width=\"" << bar_w
          << "\" height=\"" << y1 - y0 << "\" fill=\"" << color_of(algos[ai]) << "\" stroke=\"black\"><title>"
          << to_string(algos[ai]) << " k=" << k << ": " << number(v) << "</title></rect>\n";
    }
    svg << "<text x=\"" << gx + group_w * 0.4 << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << k
        << "</text>\n";
    ++gi;
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">k-ahead task</text>\n";
  if (metric == Metric::Error) {
    svg << "<line x1=\"" << left << "\" y1=\"" << y_of(s.baseline_err) << "\" x2=\"" << left + plot_w << "\" y2=\""
        << y_of(s.baseline_err) << "\" stroke=\"black\" stroke-dasharray=\"2 4\"/>\n";
  }
  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    const double ly = top + 10 + 20 * static_cast<double>(ai);
    svg << "<rect x=\"" << left + plot_w + 15 << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
        << color_of(algos[ai]) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left + plot_w + 33 << "\" y=\"" << ly + 11 << "\">" << to_string(algos[ai]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_report(const std::filesystem::path& dir, std::span<const KAheadResult> results, const EvalSummary& s) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("results.csv");
    write_results_csv(out, results);
  }
  open("summary.json") << to_json(s).dump(2) << '\n';
  open("acc.svg") << metric_chart_svg(s, Metric::Accuracy);
  open("err.svg") << metric_chart_svg(s, Metric::Error);
  open("delta.svg") << metric_chart_svg(s, Metric::Delta);
}

}  // namespace turtle
