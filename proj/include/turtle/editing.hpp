#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "turtle/program.hpp"

namespace turtle {

enum class CommandKind : std::uint8_t { Get, Remove, ConnectUnder, ConnectInside, Disconnect, Change };

/// Coarse command family with arguments dropped. `Start` only ever appears as
/// the context before the first command of a sequence.
enum class CommandTag : std::uint8_t { Get, Remove, Connect, Change, Separate, Start };

inline constexpr std::size_t kTagCount = 5;
inline constexpr std::array<CommandTag, kTagCount> kTags = {
    CommandTag::Get, CommandTag::Remove, CommandTag::Connect, CommandTag::Change, CommandTag::Separate};

std::string_view to_string(CommandTag tag);
std::optional<CommandTag> parse_tag(std::string_view name);

/// One editor manipulation. Only the fields relevant to `kind` are meaningful:
///   Get            block
///   Remove         target
///   ConnectUnder   target (source), dest
///   ConnectInside  target (source), dest
///   Disconnect     target
///   Change         target, old_value, new_value
struct EditCommand {
  CommandKind kind = CommandKind::Get;
  BlockKind block = BlockKind::Move;
  BlockId target = kNoBlock;
  BlockId dest = kNoBlock;
  int old_value = 0;
  int new_value = 0;

  static EditCommand get(BlockKind k) { return {CommandKind::Get, k}; }
  static EditCommand remove(BlockId id) { return {CommandKind::Remove, BlockKind::Move, id}; }
  static EditCommand connect_under(BlockId source, BlockId dest) {
    return {CommandKind::ConnectUnder, BlockKind::Move, source, dest};
  }
  static EditCommand connect_inside(BlockId source, BlockId dest) {
    return {CommandKind::ConnectInside, BlockKind::Move, source, dest};
  }
  static EditCommand disconnect(BlockId id) { return {CommandKind::Disconnect, BlockKind::Move, id}; }
  static EditCommand change(BlockId id, int old_value, int new_value) {
    return {CommandKind::Change, BlockKind::Move, id, kNoBlock, old_value, new_value};
  }

  bool operator==(const EditCommand&) const = default;
};

CommandTag coarsen(const EditCommand& c);

class InfeasibleCommand : public std::runtime_error {
 public:
  explicit InfeasibleCommand(const std::string& reason, std::ptrdiff_t index = -1)
      : std::runtime_error(index < 0 ? reason : "command " + std::to_string(index) + ": " + reason),
        reason_(reason),
        index_(index) {}

  const std::string& reason() const { return reason_; }
  /// Position in a replayed sequence, or -1 for a lone command.
  std::ptrdiff_t index() const { return index_; }

 private:
  std::string reason_;
  std::ptrdiff_t index_;
};

/// Why `c` cannot be applied to `w`, or nullopt when it can.
std::optional<std::string> infeasibility(const Workspace& w, const EditCommand& c);

/// Successor workspace. Throws InfeasibleCommand.
Workspace apply_command(const Workspace& w, const EditCommand& c);

/// Every feasible command in `w`: Get, Remove, ConnectUnder, ConnectInside,
/// Disconnect, Change, each family ordered by ascending ids then values.
std::vector<EditCommand> enumerate_commands(const Workspace& w);
/// The feasible commands that coarsen to `tag`, in the same order.
std::vector<EditCommand> enumerate_commands(const Workspace& w, CommandTag tag);
/// Whether at least one command coarsening to `tag` is feasible.
bool has_feasible(const Workspace& w, CommandTag tag);

/// Applies `commands` in order starting from an empty workspace. Throws
/// InfeasibleCommand carrying the failing index.
Workspace replay(std::span<const EditCommand> commands);
Workspace replay_from(Workspace start, std::span<const EditCommand> commands);

class CommandSyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses the textual command form, e.g. `get repeat`, `connect 2 inside 1`,
/// `change 30 in 3 to 120`. Case-insensitive; the filler words `a`, `an` and
/// `block` may appear anywhere, so `Connect block 2 inside block 1` also parses.
EditCommand parse_command(std::string_view text);
/// Canonical lowercase text form.
std::string format_command(const EditCommand& c);

}  // namespace turtle
