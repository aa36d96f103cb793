#include <doctest.h>

#include <map>
#include <numeric>

#include "support.hpp"
#include "turtle/models.hpp"

using namespace turtle;

namespace {

CorpusItem item(std::vector<EditCommand> commands) {
  CorpusItem it;
  it.id = "t";
  it.commands = std::move(commands);
  it.trajectory = {{0, 0}};
  return it;
}

CommandModel forced(CommandTag tag, ArgumentMode mode = ArgumentMode::Uniform) {
  CommandModel m;
  std::array<double, kTagCount> row{};
  row[static_cast<std::size_t>(tag)] = 1.0;
  for (CommandTag prev : {CommandTag::Start, CommandTag::Get, CommandTag::Remove, CommandTag::Connect,
                          CommandTag::Change, CommandTag::Separate}) {
    m.bigram.set_row(prev, row);
  }
  m.args.mode = mode;
  return m;
}

// Chi-square statistic of `counts` against equal expected frequencies.
double chi_square(const std::map<int, int>& counts, int draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (const auto& [k, n] : counts) stat += (n - expected) * (n - expected) / expected;
  return stat;
}

}  // namespace

TEST_CASE("empty corpus gives uniform transitions") {
  const BigramTable t = fit_bigram({});
  for (CommandTag prev : {CommandTag::Start, CommandTag::Get, CommandTag::Separate}) {
    for (CommandTag next : kTags) CHECK(t.probability(prev, next) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("pseudo-count fit on a single item") {
  const std::vector<CorpusItem> corpus = {item(
      {EditCommand::get(BlockKind::Move), EditCommand::get(BlockKind::Move), EditCommand::connect_under(2, 1)})};
  const BigramTable t = fit_bigram(corpus);
  CHECK(std::abs(t.probability(CommandTag::Get, CommandTag::Get) - 2.0 / 7.0) <= 1e-12);
  CHECK(std::abs(t.probability(CommandTag::Get, CommandTag::Connect) - 2.0 / 7.0) <= 1e-12);
  CHECK(std::abs(t.probability(CommandTag::Get, CommandTag::Remove) - 1.0 / 7.0) <= 1e-12);
  CHECK(std::abs(t.probability(CommandTag::Start, CommandTag::Get) - 2.0 / 6.0) <= 1e-12);
  CHECK(std::abs(t.probability(CommandTag::Start, CommandTag::Change) - 1.0 / 6.0) <= 1e-12);
  CHECK(std::abs(t.probability(CommandTag::Connect, CommandTag::Get) - 1.0 / 5.0) <= 1e-12);
}

TEST_CASE("fitted rows are positive and sum to one") {
  const auto corpus = generate_synthetic_corpus({}, 30);
  const BigramTable t = fit_bigram(corpus);
  for (CommandTag prev : {CommandTag::Start, CommandTag::Get, CommandTag::Remove, CommandTag::Connect,
                          CommandTag::Change, CommandTag::Separate}) {
    const auto& row = t.row(prev);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : row) CHECK(p > 0.0);
  }
}

TEST_CASE("lambda estimates") {
  const auto get = [] { return EditCommand::get(BlockKind::Move); };
  const std::vector<CorpusItem> three = {
      item({get(), get(), EditCommand::connect_under(2, 1)}),
      item({get(), EditCommand::get(BlockKind::Turn), EditCommand::connect_under(2, 1)}),
      item({get(), get(), EditCommand::connect_under(1, 2)}),
  };
  const LambdaEstimate l = fit_lambdas(three);
  CHECK(l.connects == 3);
  CHECK(l.last == doctest::Approx(2.0 / 3.0));
  CHECK(l.next_to_last == doctest::Approx(2.0 / 3.0));

  const std::vector<CorpusItem> one = {item({get(), get(), EditCommand::connect_under(2, 1)})};
  const LambdaEstimate single = fit_lambdas(one);
  CHECK(single.last == 1.0);
  CHECK(single.next_to_last == 1.0);

  const LambdaEstimate none = fit_lambdas({});
  CHECK(none.last == 0.5);
  CHECK(none.next_to_last == 0.5);
  CHECK(none.connects == 0);

  // Removed blocks no longer count as the newest.
  const std::vector<CorpusItem> removed = {
      item({get(), get(), get(), EditCommand::remove(3), EditCommand::connect_under(2, 1)})};
  CHECK(fit_lambdas(removed).last == 1.0);
}

TEST_CASE("lambda estimates stay in range") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    const auto l = fit_lambdas(generate_synthetic_corpus(spec, 20));
    CHECK(l.last >= 0.0);
    CHECK(l.last <= 1.0);
    CHECK(l.next_to_last >= 0.0);
    CHECK(l.next_to_last <= 1.0);
  }
}

TEST_CASE("empty workspace samples only gets") {
  const CommandModel m = forced(CommandTag::Connect);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) CHECK(sample_command(m, Workspace{}, CommandTag::Start, rng).kind == CommandKind::Get);
}

TEST_CASE("uniform change values pass a chi-square test") {
  const CommandModel m = forced(CommandTag::Change);
  const Workspace w = Workspace::from_chains({{Statement::turn(30)}});
  Rng rng(99);
  std::map<int, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const EditCommand c = sample_command(m, w, CommandTag::Get, rng);
    REQUIRE(c.kind == CommandKind::Change);
    REQUIRE(c.target == 1);
    REQUIRE(c.old_value == 30);
    ++counts[c.new_value];
  }
  CHECK(counts.size() == 10);
  // 99th percentile of chi-square with 9 degrees of freedom.
  CHECK(chi_square(counts, draws) < 21.666);
}

TEST_CASE("nonuniform connect with unit lambdas picks the anchors") {
  CommandModel m = forced(CommandTag::Connect, ArgumentMode::Nonuniform);
  m.args.lambda_last = 1.0;
  m.args.lambda_next_to_last = 1.0;
  const Workspace w = Workspace::from_chains({{Statement::move()}, {Statement::move()}, {Statement::move()}});
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const EditCommand c = sample_command(m, w, CommandTag::Get, rng);
    CHECK(c == EditCommand::connect_under(3, 2));
  }
}

TEST_CASE("nonuniform connect with zero lambdas avoids the anchors") {
  CommandModel m = forced(CommandTag::Connect, ArgumentMode::Nonuniform);
  m.args.lambda_last = 0.0;
  m.args.lambda_next_to_last = 0.0;
  const Workspace w = Workspace::from_chains({{Statement::move()}, {Statement::move()}, {Statement::move()}});
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const EditCommand c = sample_command(m, w, CommandTag::Get, rng);
    CHECK(c.target != 3);
    if (c.target == 1) CHECK(c.dest == 3);  // 2 is the anchor
  }
}

TEST_CASE("sampled commands are always feasible") {
  Rng world(7);
  const CommandModel uniform = fit_model(generate_synthetic_corpus({}, 20), ArgumentMode::Uniform);
  CommandModel nonuniform = uniform;
  nonuniform.args.mode = ArgumentMode::Nonuniform;
  for (int trial = 0; trial < 300; ++trial) {
    const Workspace w = testing::random_workspace(world, 10, static_cast<int>(world.index(20)));
    const CommandTag prev = static_cast<CommandTag>(world.index(6));
    for (const CommandModel* m : std::array<const CommandModel*, 2>{&uniform, &nonuniform}) {
      const EditCommand c = sample_command(*m, w, prev, world);
      CHECK_FALSE(infeasibility(w, c).has_value());
    }
  }
}

TEST_CASE("sampling is seed-deterministic") {
  const CommandModel m = fit_model(generate_synthetic_corpus({}, 10));
  Rng world(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Workspace w = testing::random_workspace(world, 8, 12);
    Rng a(1234 + static_cast<std::uint64_t>(trial));
    Rng b(1234 + static_cast<std::uint64_t>(trial));
    for (int i = 0; i < 10; ++i) CHECK(sample_command(m, w, CommandTag::Get, a) == sample_command(m, w, CommandTag::Get, b));
  }
}

TEST_CASE("model JSON round trip") {
  const CommandModel m = fit_model(generate_synthetic_corpus({}, 10));
  const nlohmann::json j = to_json(m);
  CHECK(j["transitions"].size() == 6);
  CHECK(j["row_tags"][0] == "START");
  const CommandModel back = model_from_json(j);
  CHECK(back.args.mode == m.args.mode);
  CHECK(back.args.lambda_last == m.args.lambda_last);
  CHECK(back.corpus_fingerprint == m.corpus_fingerprint);
  for (CommandTag prev : {CommandTag::Start, CommandTag::Get, CommandTag::Change}) CHECK(back.bigram.row(prev) == m.bigram.row(prev));

  nlohmann::json bad = j;
  bad["lambda_last"] = 1.5;
  CHECK_THROWS_AS(model_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), std::invalid_argument);
}
