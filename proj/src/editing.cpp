#include "turtle/editing.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace turtle {

namespace {

bool can_connect_under(const Workspace& w, BlockId source, BlockId dest) {
  return source != dest && !w.in_subtree(dest, source) && w.at(dest).next != source;
}

bool can_connect_inside(const Workspace& w, BlockId source, BlockId dest) {
  const Block& d = w.at(dest);
  return d.kind == BlockKind::Repeat && source != dest && !w.in_subtree(dest, source) && d.body != source;
}

std::string block_name(BlockId id) { return "block " + std::to_string(id); }

void append_family(const Workspace& w, CommandKind kind, std::vector<EditCommand>& out) {
  auto blocks = w.blocks();
  switch (kind) {
    case CommandKind::Get:
      for (BlockKind k : {BlockKind::Move, BlockKind::Turn, BlockKind::Repeat}) out.push_back(EditCommand::get(k));
      break;
    case CommandKind::Remove:
      for (const Block& b : blocks) out.push_back(EditCommand::remove(b.id));
      break;
    case CommandKind::ConnectUnder:
      for (const Block& s : blocks) {
        for (const Block& d : blocks) {
          if (can_connect_under(w, s.id, d.id)) out.push_back(EditCommand::connect_under(s.id, d.id));
        }
      }
      break;
    case CommandKind::ConnectInside:
      for (const Block& s : blocks) {
        for (const Block& d : blocks) {
          if (can_connect_inside(w, s.id, d.id)) out.push_back(EditCommand::connect_inside(s.id, d.id));
        }
      }
      break;
    case CommandKind::Disconnect:
      for (const Block& b : blocks) {
        if (b.parent != kNoBlock) out.push_back(EditCommand::disconnect(b.id));
      }
      break;
    case CommandKind::Change:
      for (const Block& b : blocks) {
        for (int v : value_domain(b.kind)) {
          if (v != b.value) out.push_back(EditCommand::change(b.id, b.value, v));
        }
      }
      break;
  }
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> command_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string tok = lowercase(text.substr(i, j - i));
      if (!tok.empty() && tok.back() == '.') tok.pop_back();
      if (!tok.empty() && tok != "a" && tok != "an" && tok != "block") tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

int parse_int(const std::string& tok, std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw CommandSyntaxError("expected a number, got '" + tok + "' in '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(CommandTag tag) {
  switch (tag) {
    case CommandTag::Get: return "Get";
    case CommandTag::Remove: return "Remove";
    case CommandTag::Connect: return "Connect";
    case CommandTag::Change: return "Change";
    case CommandTag::Separate: return "Separate";
    case CommandTag::Start: return "START";
  }
  return "?";
}

std::optional<CommandTag> parse_tag(std::string_view name) {
  for (CommandTag t : {CommandTag::Get, CommandTag::Remove, CommandTag::Connect, CommandTag::Change,
                       CommandTag::Separate, CommandTag::Start}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

CommandTag coarsen(const EditCommand& c) {
  switch (c.kind) {
    case CommandKind::Get: return CommandTag::Get;
    case CommandKind::Remove: return CommandTag::Remove;
    case CommandKind::ConnectUnder:
    case CommandKind::ConnectInside: return CommandTag::Connect;
    case CommandKind::Disconnect: return CommandTag::Separate;
    case CommandKind::Change: return CommandTag::Change;
  }
  return CommandTag::Get;
}

std::optional<std::string> infeasibility(const Workspace& w, const EditCommand& c) {
  if (c.kind == CommandKind::Get) return std::nullopt;
  const Block* target = w.find(c.target);
  if (!target) return block_name(c.target) + " does not exist";
  switch (c.kind) {
    case CommandKind::Get:
    case CommandKind::Remove: return std::nullopt;
    case CommandKind::ConnectUnder:
    case CommandKind::ConnectInside: {
      const Block* dest = w.find(c.dest);
      if (!dest) return block_name(c.dest) + " does not exist";
      if (c.target == c.dest) return "cannot connect a block to itself";
      if (w.in_subtree(c.dest, c.target)) return block_name(c.dest) + " lies inside the moved stack";
      if (c.kind == CommandKind::ConnectInside) {
        if (dest->kind != BlockKind::Repeat) return block_name(c.dest) + " is not a repeat block";
        if (dest->body == c.target) return block_name(c.target) + " is already at the top of that body";
      } else if (dest->next == c.target) {
        return block_name(c.target) + " is already connected there";
      }
      return std::nullopt;
    }
    case CommandKind::Disconnect:
      if (target->parent == kNoBlock) return block_name(c.target) + " is already a root";
      return std::nullopt;
    case CommandKind::Change:
      if (target->kind == BlockKind::Move) return block_name(c.target) + " has no parameter";
      if (target->value != c.old_value) {
        return block_name(c.target) + " holds " + std::to_string(target->value) + ", not " +
               std::to_string(c.old_value);
      }
      if (c.new_value == c.old_value) return "new value equals the old one";
      if (!is_valid_value(target->kind, c.new_value)) {
        return std::to_string(c.new_value) + " is not a legal " + std::string(to_string(target->kind)) + " value";
      }
      return std::nullopt;
  }
  return "unknown command";
}

Workspace apply_command(const Workspace& w, const EditCommand& c) {
  if (auto why = infeasibility(w, c)) throw InfeasibleCommand(*why);
  Workspace next = w;
  switch (c.kind) {
    case CommandKind::Get: next.add_root(c.block, default_value(c.block)); break;
    case CommandKind::Remove:
      next.detach(c.target);
      next.erase_subtree(c.target);
      break;
    case CommandKind::ConnectUnder:
      next.detach(c.target);
      next.attach_under(c.target, c.dest);
      break;
    case CommandKind::ConnectInside:
      next.detach(c.target);
      next.attach_inside(c.target, c.dest);
      break;
    case CommandKind::Disconnect:
      next.detach(c.target);
      next.push_root(c.target);
      break;
    case CommandKind::Change: next.set_value(c.target, c.new_value); break;
  }
  return next;
}

std::vector<EditCommand> enumerate_commands(const Workspace& w) {
  std::vector<EditCommand> out;
  out.reserve(8 + w.size() * (w.size() * 2 + 12));
  for (CommandKind k : {CommandKind::Get, CommandKind::Remove, CommandKind::ConnectUnder, CommandKind::ConnectInside,
                        CommandKind::Disconnect, CommandKind::Change}) {
    append_family(w, k, out);
  }
  return out;
}

std::vector<EditCommand> enumerate_commands(const Workspace& w, CommandTag tag) {
  std::vector<EditCommand> out;
  switch (tag) {
    case CommandTag::Get: append_family(w, CommandKind::Get, out); break;
    case CommandTag::Remove: append_family(w, CommandKind::Remove, out); break;
    case CommandTag::Connect:
      append_family(w, CommandKind::ConnectUnder, out);
      append_family(w, CommandKind::ConnectInside, out);
      break;
    case CommandTag::Change: append_family(w, CommandKind::Change, out); break;
    case CommandTag::Separate: append_family(w, CommandKind::Disconnect, out); break;
    case CommandTag::Start: break;
  }
  return out;
}

bool has_feasible(const Workspace& w, CommandTag tag) {
  auto blocks = w.blocks();
  switch (tag) {
    case CommandTag::Get: return true;
    case CommandTag::Remove: return !blocks.empty();
    case CommandTag::Change:
      return std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.kind != BlockKind::Move; });
    case CommandTag::Separate:
      return std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.parent != kNoBlock; });
    case CommandTag::Connect:
      for (const Block& s : blocks) {
        for (const Block& d : blocks) {
          if (can_connect_under(w, s.id, d.id) || can_connect_inside(w, s.id, d.id)) return true;
        }
      }
      return false;
    case CommandTag::Start: return false;
  }
  return false;
}

Workspace replay_from(Workspace start, std::span<const EditCommand> commands) {
  for (std::size_t i = 0; i < commands.size(); ++i) {
    try {
      start = apply_command(start, commands[i]);
    } catch (const InfeasibleCommand& e) {
      throw InfeasibleCommand(e.reason(), static_cast<std::ptrdiff_t>(i));
    }
  }
  return start;
}

Workspace replay(std::span<const EditCommand> commands) { return replay_from(Workspace{}, commands); }

EditCommand parse_command(std::string_view text) {
  const auto tokens = command_tokens(text);
  auto fail = [&text]() -> EditCommand {
    throw CommandSyntaxError("unrecognised command '" + std::string(text) + "'");
  };
  if (tokens.empty()) return fail();
  const std::string& verb = tokens[0];
  if (verb == "get" && tokens.size() == 2) {
    if (tokens[1] == "move") return EditCommand::get(BlockKind::Move);
    if (tokens[1] == "turn") return EditCommand::get(BlockKind::Turn);
    if (tokens[1] == "repeat") return EditCommand::get(BlockKind::Repeat);
    return fail();
  }
  if (verb == "remove" && tokens.size() == 2) return EditCommand::remove(parse_int(tokens[1], text));
  if (verb == "disconnect" && tokens.size() == 2) return EditCommand::disconnect(parse_int(tokens[1], text));
  if (verb == "connect" && tokens.size() == 4) {
    const int source = parse_int(tokens[1], text);
    const int dest = parse_int(tokens[3], text);
    if (tokens[2] == "under") return EditCommand::connect_under(source, dest);
    if (tokens[2] == "inside") return EditCommand::connect_inside(source, dest);
    return fail();
  }
  if (verb == "change" && tokens.size() == 6 && tokens[2] == "in" && tokens[4] == "to") {
    return EditCommand::change(parse_int(tokens[3], text), parse_int(tokens[1], text), parse_int(tokens[5], text));
  }
  return fail();
}

std::string format_command(const EditCommand& c) {
  switch (c.kind) {
    case CommandKind::Get: return "get " + std::string(to_string(c.block));
    case CommandKind::Remove: return "remove " + std::to_string(c.target);
    case CommandKind::ConnectUnder:
      return "connect " + std::to_string(c.target) + " under " + std::to_string(c.dest);
    case CommandKind::ConnectInside:
      return "connect " + std::to_string(c.target) + " inside " + std::to_string(c.dest);
    case CommandKind::Disconnect: return "disconnect " + std::to_string(c.target);
    case CommandKind::Change:
      return "change " + std::to_string(c.old_value) + " in " + std::to_string(c.target) + " to " +
             std::to_string(c.new_value);
  }
  return {};
}

}  // namespace turtle
