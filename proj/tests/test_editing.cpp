#include <doctest.h>

#include <algorithm>
#include <map>

#include "support.hpp"

using namespace turtle;

namespace {

const Statement M = Statement::move();
Statement T(int deg) { return Statement::turn(deg); }
Statement R(int n, Chain body) { return Statement::repeat(n, std::move(body)); }

std::vector<EditCommand> triangle_commands() {
  return {EditCommand::get(BlockKind::Repeat), EditCommand::get(BlockKind::Move),
          EditCommand::connect_inside(2, 1),   EditCommand::get(BlockKind::Turn),
          EditCommand::connect_under(3, 2),    EditCommand::change(3, 30, 120)};
}

// Chains as a multiset, so root order does not matter.
std::multiset<std::string> chain_set(const Workspace& w) {
  std::multiset<std::string> out;
  for (const Chain& c : w.chains()) out.insert(to_string(c));
  return out;
}

}  // namespace

TEST_CASE("worked example builds the triangle program") {
  const Workspace w = replay(triangle_commands());
  w.validate();
  CHECK(to_string(w) == "[Repeat(2)[Move, Turn(120)]]");
  CHECK(w.chains() == std::vector<Chain>{{R(2, {M, T(120)})}});
  CHECK(w.next_id() == 4);
}

TEST_CASE("get on an empty workspace") {
  const Workspace w = apply_command(Workspace{}, EditCommand::get(BlockKind::Move));
  CHECK(w.roots() == std::vector<BlockId>{1});
  CHECK(w.at(1).kind == BlockKind::Move);
  CHECK(w.next_id() == 2);
  CHECK(apply_command(Workspace{}, EditCommand::get(BlockKind::Turn)).at(1).value == 30);
  CHECK(apply_command(Workspace{}, EditCommand::get(BlockKind::Repeat)).at(1).value == 2);
}

TEST_CASE("connect under appends the displaced child beneath the source") {
  // 1 -> 3, and 2 as a separate root.
  Workspace w = replay(std::vector<EditCommand>{EditCommand::get(BlockKind::Move), EditCommand::get(BlockKind::Turn),
                                                EditCommand::get(BlockKind::Move), EditCommand::connect_under(3, 1)});
  REQUIRE(w.at(1).next == 3);
  w = apply_command(w, EditCommand::connect_under(2, 1));
  w.validate();
  CHECK(w.roots() == std::vector<BlockId>{1});
  CHECK(w.at(1).next == 2);
  CHECK(w.at(2).next == 3);
  CHECK(w.at(3).next == kNoBlock);
}

TEST_CASE("connect inside pushes the old body below the moved stack") {
  Workspace w = Workspace::from_chains({{R(3, {T(90)})}, {M, M}});
  // ids: 1 repeat, 2 turn (body), 3 move, 4 move.
  w = apply_command(w, EditCommand::connect_inside(3, 1));
  w.validate();
  CHECK(to_string(w) == "[Repeat(3)[Move, Move, Turn(90)]]");
}

TEST_CASE("connect moves the source with everything below it") {
  Workspace w = Workspace::from_chains({{M, T(60), M}, {T(90)}});
  // Move block 2 (Turn 60 and the Move under it) under block 4.
  w = apply_command(w, EditCommand::connect_under(2, 4));
  CHECK(to_string(w) == "[Move] [Turn(90), Turn(60), Move]");
}

TEST_CASE("feasibility rules") {
  const Workspace w = Workspace::from_chains({{R(2, {M, T(90)})}, {M}});
  // 1 repeat, 2 move, 3 turn, 4 move.
  CHECK(infeasibility(w, EditCommand::remove(9)));
  CHECK_FALSE(infeasibility(w, EditCommand::remove(2)));
  CHECK(infeasibility(w, EditCommand::connect_under(1, 2)));    // into its own subtree
  CHECK(infeasibility(w, EditCommand::connect_under(1, 1)));
  CHECK(infeasibility(w, EditCommand::connect_inside(4, 2)));   // not a repeat
  CHECK(infeasibility(w, EditCommand::connect_under(3, 2)));    // already there
  CHECK(infeasibility(w, EditCommand::connect_inside(2, 1)));   // already there
  CHECK_FALSE(infeasibility(w, EditCommand::connect_inside(3, 1)));
  CHECK(infeasibility(w, EditCommand::disconnect(1)));          // already a root
  CHECK_FALSE(infeasibility(w, EditCommand::disconnect(3)));
  CHECK(infeasibility(w, EditCommand::change(2, 0, 30)));       // moves have no parameter
  CHECK(infeasibility(w, EditCommand::change(3, 30, 60)));      // stale old value
  CHECK(infeasibility(w, EditCommand::change(3, 90, 90)));      // no change
  CHECK(infeasibility(w, EditCommand::change(3, 90, 45)));
  CHECK(infeasibility(w, EditCommand::change(1, 2, 6)));
  CHECK_FALSE(infeasibility(w, EditCommand::change(1, 2, 5)));
  CHECK_THROWS_AS(apply_command(w, EditCommand::remove(9)), InfeasibleCommand);
}

TEST_CASE("remove takes the stack below and nested bodies") {
  const Workspace w = Workspace::from_chains({{M, R(2, {M, T(90)}), M}, {T(30)}});
  const Workspace after = apply_command(w, EditCommand::remove(2));
  after.validate();
  CHECK(to_string(after) == "[Move] [Turn(30)]");
  CHECK(after.next_id() == w.next_id());
}

TEST_CASE("enumeration on small workspaces") {
  CHECK(enumerate_commands(Workspace{}) ==
        std::vector<EditCommand>{EditCommand::get(BlockKind::Move), EditCommand::get(BlockKind::Turn),
                                 EditCommand::get(BlockKind::Repeat)});

  const Workspace move = Workspace::from_chains({{M}});
  const auto mc = enumerate_commands(move);
  CHECK(mc.size() == 4);
  CHECK(mc.back() == EditCommand::remove(1));

  const Workspace turn = Workspace::from_chains({{T(30)}});
  const auto tc = enumerate_commands(turn);
  CHECK(tc.size() == 14);
  std::vector<int> targets;
  for (const auto& c : tc) {
    if (c.kind == CommandKind::Change) targets.push_back(c.new_value);
  }
  CHECK(targets == std::vector<int>{60, 90, 120, 150, 180, 210, 240, 270, 300, 330});
}

TEST_CASE("enumeration order groups command families") {
  testing::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Workspace w = testing::random_workspace(rng, 8, 15);
    const auto cmds = enumerate_commands(w);
    for (std::size_t j = 1; j < cmds.size(); ++j) CHECK(cmds[j - 1].kind <= cmds[j].kind);
    for (CommandTag tag : kTags) {
      std::vector<EditCommand> filtered;
      std::copy_if(cmds.begin(), cmds.end(), std::back_inserter(filtered),
                   [tag](const EditCommand& c) { return coarsen(c) == tag; });
      CHECK(enumerate_commands(w, tag) == filtered);
      CHECK(has_feasible(w, tag) == !filtered.empty());
    }
  }
}

TEST_CASE("connect tag stays feasible when only the inside variant is") {
  // Block 2 sits under a repeat already; putting it inside the repeat is the only connect.
  const Workspace w = Workspace::from_chains({{R(2, {}), M}});
  CHECK(has_feasible(w, CommandTag::Connect));
  CHECK(enumerate_commands(w, CommandTag::Connect) == std::vector<EditCommand>{EditCommand::connect_inside(2, 1)});
}

TEST_CASE("replay never reuses ids") {
  const std::vector<EditCommand> cmds = {EditCommand::get(BlockKind::Move), EditCommand::remove(1),
                                         EditCommand::get(BlockKind::Turn)};
  const Workspace w = replay(cmds);
  CHECK(w.roots() == std::vector<BlockId>{2});
  CHECK(w.at(2).kind == BlockKind::Turn);
  CHECK(replay({}).empty());
}

TEST_CASE("replay reports the failing index") {
  const std::vector<EditCommand> cmds = {EditCommand::get(BlockKind::Move), EditCommand::get(BlockKind::Move),
                                         EditCommand::connect_under(5, 1)};
  try {
    replay(cmds);
    FAIL("expected InfeasibleCommand");
  } catch (const InfeasibleCommand& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("coarsening") {
  CHECK(coarsen(EditCommand::get(BlockKind::Turn)) == CommandTag::Get);
  CHECK(coarsen(EditCommand::remove(1)) == CommandTag::Remove);
  CHECK(coarsen(EditCommand::connect_under(2, 1)) == CommandTag::Connect);
  CHECK(coarsen(EditCommand::connect_inside(2, 1)) == CommandTag::Connect);
  CHECK(coarsen(EditCommand::disconnect(3)) == CommandTag::Separate);
  CHECK(coarsen(EditCommand::change(3, 30, 120)) == CommandTag::Change);
  for (CommandTag t : kTags) CHECK(parse_tag(to_string(t)) == t);
  CHECK(parse_tag("START") == CommandTag::Start);
}

TEST_CASE("enumeration is sound and complete under fuzzing") {
  testing::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Workspace w = testing::random_workspace(rng, 12, static_cast<int>(rng.index(30)));
    const auto cmds = enumerate_commands(w);
    for (const auto& c : cmds) {
      Workspace s;
      CHECK_NOTHROW(s = apply_command(w, c));
      CHECK_NOTHROW(s.validate());
    }
    for (int f = 0; f < 100; ++f) {
      const EditCommand c = testing::fuzz_command(rng, w);
      const bool listed = std::find(cmds.begin(), cmds.end(), c) != cmds.end();
      CHECK(listed == !infeasibility(w, c).has_value());
      if (!listed) CHECK_THROWS_AS(apply_command(w, c), InfeasibleCommand);
    }
  }
}

TEST_CASE("apply_command leaves its input alone and conserves blocks") {
  testing::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Workspace w = testing::random_workspace(rng, 10, 20);
    const Workspace copy = w;
    for (const auto& c : enumerate_commands(w)) {
      const Workspace s = apply_command(w, c);
      CHECK(w == copy);
      const auto before = static_cast<long>(w.size());
      const auto after = static_cast<long>(s.size());
      switch (c.kind) {
        case CommandKind::Get:
          CHECK(after == before + 1);
          CHECK(s.next_id() == w.next_id() + 1);
          break;
        case CommandKind::Remove:
          CHECK(after == before - static_cast<long>(w.subtree_size(c.target)));
          break;
        default:
          CHECK(after == before);
      }
    }
  }
}

TEST_CASE("disconnect undoes connect under a previous root") {
  testing::Rng rng(29);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Workspace w = testing::random_workspace(rng, 8, 12);
    for (const auto& c : enumerate_commands(w, CommandTag::Connect)) {
      if (c.kind != CommandKind::ConnectUnder || w.at(c.target).parent != kNoBlock) continue;
      const Workspace joined = apply_command(w, c);
      // The round trip holds when nothing was displaced from below the destination.
      if (w.at(c.dest).next != kNoBlock) continue;
      const Workspace split = apply_command(joined, EditCommand::disconnect(c.target));
      CHECK(chain_set(split) == chain_set(w));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("command text round trip") {
  const std::vector<std::pair<std::string, EditCommand>> cases = {
      {"get a repeat", EditCommand::get(BlockKind::Repeat)},
      {"Get Move", EditCommand::get(BlockKind::Move)},
      {"get turn", EditCommand::get(BlockKind::Turn)},
      {"remove 4", EditCommand::remove(4)},
      {"Connect block 2 inside block 1", EditCommand::connect_inside(2, 1)},
      {"connect 3 under 2", EditCommand::connect_under(3, 2)},
      {"disconnect 3", EditCommand::disconnect(3)},
      {"Change 30 in block 3 to 120.", EditCommand::change(3, 30, 120)},
  };
  for (const auto& [text, cmd] : cases) {
    CAPTURE(text);
    CHECK(parse_command(text) == cmd);
    CHECK(parse_command(format_command(cmd)) == cmd);
  }
  CHECK(format_command(EditCommand::change(3, 30, 120)) == "change 30 in 3 to 120");
  CHECK(format_command(EditCommand::connect_inside(2, 1)) == "connect 2 inside 1");
  for (const char* bad : {"", "get", "get circle", "remove x", "connect 2 over 1", "change 30 in 3", "jump 4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_command(bad), CommandSyntaxError);
  }
}
