#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace turtle {

enum class BlockKind : std::uint8_t { Move, Turn, Repeat };

using BlockId = std::int32_t;
inline constexpr BlockId kNoBlock = 0;

std::string_view to_string(BlockKind kind);

/// Legal parameter values for a block kind, ascending. Empty for Move.
std::span<const int> value_domain(BlockKind kind);
bool is_valid_value(BlockKind kind, int value);
/// Parameter a freshly created block starts with (Turn 30, Repeat 2, Move 0).
int default_value(BlockKind kind);

/// Tree-shaped statement as written in the grammar. Used to build workspaces
/// directly and to list them; the editor itself works on `Workspace`.
struct Statement {
  BlockKind kind = BlockKind::Move;
  int value = 0;
  std::vector<Statement> body;

  static Statement move() { return {BlockKind::Move, 0, {}}; }
  static Statement turn(int degrees) { return {BlockKind::Turn, degrees, {}}; }
  static Statement repeat(int count, std::vector<Statement> body) {
    return {BlockKind::Repeat, count, std::move(body)};
  }

  bool operator==(const Statement&) const = default;
};

/// A vertically connected stack of statements.
using Chain = std::vector<Statement>;

struct Block {
  BlockId id = kNoBlock;
  BlockKind kind = BlockKind::Move;
  int value = 0;
  BlockId next = kNoBlock;    // block connected vertically beneath
  BlockId body = kNoBlock;    // first block of a repeat body
  BlockId parent = kNoBlock;  // block this one hangs from; kNoBlock for roots

  bool operator==(const Block&) const = default;
};

class InvalidWorkspace : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An editor workspace: blocks with stable ids, arranged as an ordered list of
/// root chains. Each block sits in exactly one place: the roots list, under
/// another block (`next`), or at the top of a repeat body (`body`).
class Workspace {
 public:
  Workspace() = default;

  /// Builds a workspace whose blocks are numbered in pre-order, chain by chain.
  static Workspace from_chains(const std::vector<Chain>& chains);

  std::span<const Block> blocks() const { return blocks_; }
  const std::vector<BlockId>& roots() const { return roots_; }
  BlockId next_id() const { return next_id_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  const Block* find(BlockId id) const;
  const Block& at(BlockId id) const;
  bool contains(BlockId id) const { return find(id) != nullptr; }

  /// True when `id` is `root` or lies below/inside it.
  bool in_subtree(BlockId id, BlockId root) const;
  /// Last block of the vertical stack starting at `id`.
  BlockId stack_tail(BlockId id) const;
  /// Number of blocks in the subtree rooted at `id`.
  std::size_t subtree_size(BlockId id) const;

  std::vector<Chain> chains() const;

  // Structural primitives. Callers are responsible for the preconditions;
  // each one leaves the workspace invariants intact when they hold.
  BlockId add_root(BlockKind kind, int value);
  /// Unhooks `id` (together with everything under it) from its location.
  /// The block is left floating and must be re-attached or erased.
  void detach(BlockId id);
  void attach_under(BlockId source, BlockId dest);
  void attach_inside(BlockId source, BlockId dest);
  void push_root(BlockId id);
  void erase_subtree(BlockId id);
  void set_value(BlockId id, int value);

  /// Throws InvalidWorkspace describing the first broken invariant.
  void validate() const;

  /// Same blocks and roots; the id counter is ignored.
  bool same_structure(const Workspace& other) const {
    return blocks_ == other.blocks_ && roots_ == other.roots_;
  }
  bool operator==(const Workspace&) const = default;

 private:
  Block* find_mut(BlockId id);
  Block& at_mut(BlockId id);
  void collect_subtree(BlockId id, std::vector<BlockId>& out) const;

  std::vector<Block> blocks_;  // sorted by id
  std::vector<BlockId> roots_;
  BlockId next_id_ = 1;
};

/// Compact listing such as `[Repeat(2)[Move, Turn(120)]] [Move]`.
std::string to_string(const Workspace& w);
std::string to_string(const Chain& chain);

}  // namespace turtle
