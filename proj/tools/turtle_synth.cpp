#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "turtle/api.hpp"
#include "turtle/corpus.hpp"
#include "turtle/eval.hpp"
#include "turtle/files.hpp"
#include "turtle/hausdorff.hpp"
#include "turtle/models.hpp"
#include "turtle/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace turtle;

namespace {

constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kRuntime = 4;

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv) : start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "turtle-synth";
    doc_["version"] = kVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = std::vector<std::string>(argv, argv + argc);
    doc_["parameters"] = json::object();
    doc_["seeds"] = json::object();
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
  }

  json& parameters() { return doc_["parameters"]; }
  void seed(const std::string& name, std::uint64_t value) { doc_["seeds"][name] = value; }
  void input(const fs::path& path, const std::string& fingerprint) { doc_["inputs"][path.string()] = fingerprint; }
  void input_file(const fs::path& path) { input(path, fingerprint_bytes(read_text(path))); }
  void output(const fs::path& path) { doc_["outputs"].push_back(path.string()); }

  void write(const fs::path& path) {
    doc_["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_json(path, doc_);
  }

  static void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) throw Failure(kRuntime, "cannot write " + path.string());
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

fs::path manifest_beside(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

RenderConfig render_config(double move_length, double sample_step) {
  if (!(move_length > 0.0) || !(sample_step > 0.0)) {
    throw Failure(kUsage, "--move-length and --sample-step must be positive");
  }
  return {move_length, sample_step};
}

void record_render(Manifest& m, const RenderConfig& cfg) {
  m.parameters()["move_length"] = cfg.move_length;
  m.parameters()["sample_step"] = cfg.sample_step;
}

CommandModel load_model(const std::optional<std::string>& path, Manifest& m) {
  if (!path) return {};
  m.input_file(*path);
  json j;
  try {
    j = json::parse(read_text(*path));
  } catch (const json::parse_error& e) {
    throw InputError(*path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw InputError(*path + ": " + e.what());
  }
}

std::vector<int> parse_ks(const std::string& text) {
  std::vector<int> ks;
  try {
    if (auto dots = text.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots));
      const int hi = std::stoi(text.substr(dots + 2));
      for (int k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
      std::stringstream s(text);
      std::string item;
      while (std::getline(s, item, ',')) ks.push_back(std::stoi(item));
    }
  } catch (const std::exception&) {
    throw Failure(kUsage, "--k expects 'lo..hi' or a comma-separated list, got '" + text + "'");
  }
  if (ks.empty()) throw Failure(kUsage, "--k selects no values");
  for (int k : ks) {
    if (k < 0) throw Failure(kUsage, "--k values must be non-negative");
  }
  return ks;
}

std::vector<Algorithm> parse_algos(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    const auto a = parse_algorithm(item);
    if (!a) throw Failure(kUsage, "unknown algorithm '" + item + "'");
    out.push_back(*a);
  }
  if (out.empty()) throw Failure(kUsage, "--algos selects no algorithms");
  return out;
}

struct Options {
  // shared
  double move_length = 50.0;
  double sample_step = 5.0;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> model;
  std::int64_t budget = 50000;
  int cost = 6;
  std::string out;

  // synth
  std::string algo = "idps";
  std::optional<std::string> program;
  std::string target;

  // eval / fit / corpus
  std::string corpus;
  std::string algos = "idps,uniform,nonuniform";
  std::string ks = "1..6";
  std::string mode = "nonuniform";
  int n = 50;
  double sigma = 0.0;
  int min_motifs = 2;
  int max_motifs = 6;

  // dist
  std::string traj_a, traj_b;

  // serve
  std::string host = "0.0.0.0";
  int port = 8080;
  std::int64_t max_budget = 200000;
  int max_cost = 8;
  int job_ttl = 600;
  std::string cors_origin = "*";
};

int cmd_synth(const Options& o, int argc, char** argv) {
  Manifest m("synth", argc, argv);
  SynthesisRequest req;
  const auto algo = parse_algorithm(o.algo);
  if (!algo) throw Failure(kUsage, "unknown algorithm '" + o.algo + "'");
  req.algorithm = *algo;
  if (req.algorithm != Algorithm::Idps && !o.seed) throw Failure(kUsage, "--seed is required for sampling algorithms");
  req.seed = o.seed;
  req.budget = o.budget;
  req.cost = o.cost;
  if (req.budget < 1 || req.cost < 1) throw Failure(kUsage, "--budget and --cost must be at least 1");
  req.render = render_config(o.move_length, o.sample_step);
  req.model = load_model(o.model, m);
  if (o.program) {
    req.commands = read_command_file(*o.program);
    m.input_file(*o.program);
  }
  replay_request(req.commands);
  req.stroke = read_trajectory_file(o.target);
  m.input_file(o.target);
  if (req.stroke.empty()) throw InputError(o.target + ": trajectory is empty");

  const json result = synthesize(req, o.workers);

  m.parameters() = {{"algo", o.algo}, {"budget", o.budget}, {"cost", o.cost}, {"workers", o.workers}};
  record_render(m, req.render);
  if (o.seed) m.seed("seed", *o.seed);
  if (o.out.empty()) {
    std::cout << result.dump(2) << '\n';
    return 0;
  }
  Manifest::write_json(o.out, result);
  m.output(o.out);
  m.write(manifest_beside(o.out));
  return 0;
}

int cmd_eval(const Options& o, int argc, char** argv) {
  Manifest m("eval", argc, argv);
  const auto algos = parse_algos(o.algos);
  const auto ks = parse_ks(o.ks);
  const bool sampling = std::any_of(algos.begin(), algos.end(), [](Algorithm a) { return a != Algorithm::Idps; });
  if (sampling && !o.seed) throw Failure(kUsage, "--seed is required when --algos includes a sampling algorithm");
  if (o.budget < 1 || o.cost < 1) throw Failure(kUsage, "--budget and --cost must be at least 1");

  EvalSettings settings;
  settings.budget = o.budget;
  settings.max_edits = o.cost;
  settings.seed = o.seed.value_or(0);
  settings.render = render_config(o.move_length, o.sample_step);
  settings.model = load_model(o.model, m);

  const auto corpus = load_corpus(o.corpus);
  m.input(o.corpus, corpus_fingerprint(corpus));
  const auto results = run_evaluation(corpus, algos, ks, settings, o.workers);
  const EvalSummary summary = aggregate(results);

  const fs::path dir = o.out;
  write_report(dir, results, summary);
  m.parameters() = {{"algos", o.algos}, {"k", ks},         {"budget", o.budget},
                    {"cost", o.cost},   {"workers", o.workers}, {"items", corpus.size()}};
  record_render(m, settings.render);
  if (o.seed) m.seed("seed", *o.seed);
  for (const char* name : {"results.csv", "summary.json", "acc.svg", "err.svg", "delta.svg"}) m.output(dir / name);
  m.write(dir / "manifest.json");

  for (const AggregateRow& r : summary.rows) {
    std::printf("%-10s k=%d  n=%zu  acc=%.3f  err=%.3f  delta=%.3f\n", std::string(to_string(r.algorithm)).c_str(),
                r.k, r.count, r.acc, r.err, r.delta);
  }
  return 0;
}

int cmd_fit(const Options& o, int argc, char** argv) {
  Manifest m("fit", argc, argv);
  ArgumentMode mode;
  if (o.mode == "uniform") {
    mode = ArgumentMode::Uniform;
  } else if (o.mode == "nonuniform") {
    mode = ArgumentMode::Nonuniform;
  } else {
    throw Failure(kUsage, "--mode must be uniform or nonuniform");
  }
  const auto corpus = load_corpus(o.corpus);
  m.input(o.corpus, corpus_fingerprint(corpus));
  const CommandModel model = fit_model(corpus, mode);
  Manifest::write_json(o.out, to_json(model));
  m.parameters() = {{"mode", o.mode}, {"items", corpus.size()}};
  m.output(o.out);
  m.write(manifest_beside(o.out));
  return 0;
}

int cmd_corpus_validate(const Options& o) {
  const auto corpus = load_corpus(o.corpus);
  std::size_t commands = 0;
  for (const CorpusItem& item : corpus) commands += item.commands.size();
  std::printf("%zu items, %zu commands, fingerprint %s\n", corpus.size(), commands,
              corpus_fingerprint(corpus).c_str());
  return 0;
}

int cmd_corpus_generate(const Options& o, int argc, char** argv) {
  Manifest m("corpus generate", argc, argv);
  if (!o.seed) throw Failure(kUsage, "--seed is required");
  if (o.n < 0) throw Failure(kUsage, "--n must be non-negative");
  if (o.sigma < 0.0) throw Failure(kUsage, "--sigma must be non-negative");
  if (o.min_motifs < 1 || o.max_motifs < o.min_motifs) throw Failure(kUsage, "need 1 <= --min-motifs <= --max-motifs");
  SyntheticSpec spec;
  spec.seed = *o.seed;
  spec.noise_sigma = o.sigma;
  spec.min_motifs = o.min_motifs;
  spec.max_motifs = o.max_motifs;
  const RenderConfig cfg = render_config(o.move_length, o.sample_step);
  const auto corpus = generate_synthetic_corpus(spec, o.n, cfg);
  save_corpus(corpus, o.out);
  m.parameters() = {{"n", o.n}, {"sigma", o.sigma}, {"min_motifs", o.min_motifs}, {"max_motifs", o.max_motifs}};
  record_render(m, cfg);
  m.seed("seed", *o.seed);
  for (const CorpusItem& item : corpus) m.output(fs::path(o.out) / (item.id + ".json"));
  m.parameters()["fingerprint"] = corpus_fingerprint(corpus);
  m.write(fs::path(o.out) / "manifest.json");
  return 0;
}

int cmd_dist(const Options& o) {
  const auto a = read_trajectory_file(o.traj_a);
  const auto b = read_trajectory_file(o.traj_b);
  if (a.empty() || b.empty()) throw InputError("trajectories must be non-empty");
  std::printf("%.17g\n", hausdorff(a, b));
  return 0;
}

int cmd_render(const Options& o, int argc, char** argv) {
  Manifest m("render", argc, argv);
  const RenderConfig cfg = render_config(o.move_length, o.sample_step);
  const auto commands = read_command_file(*o.program);
  m.input_file(*o.program);
  const Workspace w = replay_request(commands);
  write_trajectory_file(o.out, trace(w, cfg));
  record_render(m, cfg);
  m.output(o.out);
  m.write(manifest_beside(o.out));
  return 0;
}

int cmd_serve(const Options& o) {
  ServiceConfig cfg;
  cfg.max_budget = o.max_budget;
  cfg.max_cost = o.max_cost;
  cfg.workers = o.workers;
  cfg.job_ttl = std::chrono::seconds(o.job_ttl);
  cfg.cors_origin = o.cors_origin;
  cfg.render = render_config(o.move_length, o.sample_step);
  SynthesisService service(cfg);
  if (run_server(service, o.host, o.port) != 0) throw Failure(kRuntime, "cannot listen on port " + std::to_string(o.port));
  return 0;
}

int report(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", message}, {"kind", kind}, {"exit_code", code}}.dump() << '\n';
  return code;
}

void add_render_flags(CLI::App* app, Options& o) {
  app->add_option("--move-length", o.move_length, "Move block length in canvas units")->capture_default_str();
  app->add_option("--sample-step", o.sample_step, "Sampling step along a move")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Synthesizes turtle block programs that draw a target trajectory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Complete or repair a program to match a trajectory");
  synth->add_option("--algo", o.algo, "idps, uniform or nonuniform")->capture_default_str();
  synth->add_option("--budget", o.budget, "Maximum states generated")->capture_default_str();
  synth->add_option("--cost", o.cost, "Maximum editing commands added")->capture_default_str();
  synth->add_option("--seed", o.seed, "Seed; required for sampling algorithms");
  synth->add_option("--program", o.program, "Command file for the starting program (default: empty)");
  synth->add_option("--target", o.target, "Trajectory file with the drawn stroke")->required();
  synth->add_option("--model", o.model, "Command model JSON (default: uniform transitions, lambdas 0.5)");
  synth->add_option("--out", o.out, "Result JSON (default: stdout)");
  synth->add_option("--workers", o.workers, "Threads for sampling rollouts")->capture_default_str();
  add_render_flags(synth, o);

  auto* eval = app.add_subcommand("eval", "k-ahead evaluation over a corpus");
  eval->add_option("--corpus", o.corpus, "Corpus directory")->required();
  eval->add_option("--algos", o.algos, "Comma-separated algorithms")->capture_default_str();
  eval->add_option("--k", o.ks, "'lo..hi' or comma-separated list")->capture_default_str();
  eval->add_option("--budget", o.budget, "Maximum states per task")->capture_default_str();
  eval->add_option("--cost", o.cost, "Maximum editing commands per task")->capture_default_str();
  eval->add_option("--seed", o.seed, "Seed; required with sampling algorithms");
  eval->add_option("--model", o.model, "Command model JSON (default: uniform transitions, lambdas 0.5)");
  eval->add_option("--out", o.out, "Report directory")->required();
  eval->add_option("--workers", o.workers, "Tasks run in parallel")->capture_default_str();
  add_render_flags(eval, o);

  auto* fit = app.add_subcommand("fit", "Fit a command model from a corpus");
  fit->add_option("--corpus", o.corpus, "Corpus directory")->required();
  fit->add_option("--out", o.out, "Model JSON")->required();
  fit->add_option("--mode", o.mode, "Argument mode: uniform or nonuniform")->capture_default_str();

  auto* corpus = app.add_subcommand("corpus", "Corpus utilities");
  corpus->require_subcommand(1);
  auto* validate = corpus->add_subcommand("validate", "Load and replay every item");
  validate->add_option("--corpus", o.corpus, "Corpus directory")->required();
  auto* generate = corpus->add_subcommand("generate", "Write a synthetic corpus");
  generate->add_option("--seed", o.seed, "Seed (required)");
  generate->add_option("--n", o.n, "Number of items")->capture_default_str();
  generate->add_option("--sigma", o.sigma, "Stroke jitter standard deviation")->capture_default_str();
  generate->add_option("--min-motifs", o.min_motifs, "Fewest blocks per program")->capture_default_str();
  generate->add_option("--max-motifs", o.max_motifs, "Most blocks per program")->capture_default_str();
  generate->add_option("--out", o.out, "Output directory")->required();
  add_render_flags(generate, o);

  auto* dist = app.add_subcommand("dist", "Print the Hausdorff distance between two trajectory files");
  dist->add_option("a", o.traj_a, "First trajectory file")->required();
  dist->add_option("b", o.traj_b, "Second trajectory file")->required();

  auto* render = app.add_subcommand("render", "Trace a program into a trajectory file");
  render->add_option("--program", o.program, "Command file")->required();
  render->add_option("--out", o.out, "Trajectory file")->required();
  add_render_flags(render, o);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();
  serve->add_option("--port", o.port, "Port")->capture_default_str();
  serve->add_option("--max-budget", o.max_budget, "Largest budget accepted")->capture_default_str();
  serve->add_option("--max-cost", o.max_cost, "Largest cost accepted")->capture_default_str();
  serve->add_option("--workers", o.workers, "Synthesis jobs run at once")->capture_default_str();
  serve->add_option("--job-ttl", o.job_ttl, "Seconds a finished job stays available")->capture_default_str();
  serve->add_option("--cors-origin", o.cors_origin, "Allowed cross-origin requester")->capture_default_str();
  add_render_flags(serve, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kUsage;
  }
  if (o.workers < 1) return report(kUsage, "usage", "--workers must be at least 1");

  try {
    if (*synth) return cmd_synth(o, argc, argv);
    if (*eval) return cmd_eval(o, argc, argv);
    if (*fit) return cmd_fit(o, argc, argv);
    if (*validate) return cmd_corpus_validate(o);
    if (*generate) return cmd_corpus_generate(o, argc, argv);
    if (*dist) return cmd_dist(o);
    if (*render) return cmd_render(o, argc, argv);
    if (*serve) return cmd_serve(o);
  } catch (const Failure& e) {
    return report(e.code(), e.code() == kUsage ? "usage" : "runtime", e.what());
  } catch (const InputError& e) {
    return report(kInput, "input", e.what());
  } catch (const CorpusError& e) {
    return report(kInput, "input", e.what());
  } catch (const RequestError& e) {
    return report(kInput, "input", e.what());
  } catch (const std::exception& e) {
    return report(kRuntime, "runtime", e.what());
  }
  return kUsage;
}
