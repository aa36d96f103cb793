#include "turtle/program.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace turtle {

namespace {

constexpr std::array<int, 11> kAngles = {30, 60, 90, 120, 150, 180, 210, 240, 270, 300, 330};
constexpr std::array<int, 4> kCounts = {2, 3, 4, 5};

void append_chain(std::string& out, const Chain& chain) {
  out += '[';
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += ", ";
    const Statement& s = chain[i];
    switch (s.kind) {
      case BlockKind::Move: out += "Move"; break;
      case BlockKind::Turn: out += "Turn(" + std::to_string(s.value) + ")"; break;
      case BlockKind::Repeat:
        out += "Repeat(" + std::to_string(s.value) + ")";
        append_chain(out, s.body);
        break;
    }
  }
  out += ']';
}

}  // namespace

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Move: return "move";
    case BlockKind::Turn: return "turn";
    case BlockKind::Repeat: return "repeat";
  }
  return "?";
}

std::span<const int> value_domain(BlockKind kind) {
  switch (kind) {
    case BlockKind::Turn: return kAngles;
    case BlockKind::Repeat: return kCounts;
    case BlockKind::Move: break;
  }
  return {};
}

bool is_valid_value(BlockKind kind, int value) {
  if (kind == BlockKind::Move) return value == 0;
  auto domain = value_domain(kind);
  return std::binary_search(domain.begin(), domain.end(), value);
}

int default_value(BlockKind kind) {
  switch (kind) {
    case BlockKind::Turn: return 30;
    case BlockKind::Repeat: return 2;
    case BlockKind::Move: break;
  }
  return 0;
}

const Block* Workspace::find(BlockId id) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), id,
                             [](const Block& b, BlockId v) { return b.id < v; });
  return (it != blocks_.end() && it->id == id) ? &*it : nullptr;
}

Block* Workspace::find_mut(BlockId id) { return const_cast<Block*>(std::as_const(*this).find(id)); }

const Block& Workspace::at(BlockId id) const {
  const Block* b = find(id);
  if (!b) throw InvalidWorkspace("no block with id " + std::to_string(id));
  return *b;
}

Block& Workspace::at_mut(BlockId id) { return const_cast<Block&>(std::as_const(*this).at(id)); }

bool Workspace::in_subtree(BlockId id, BlockId root) const {
  for (BlockId cur = id; cur != kNoBlock; cur = at(cur).parent) {
    if (cur == root) return true;
  }
  return false;
}

BlockId Workspace::stack_tail(BlockId id) const {
  BlockId cur = id;
  while (at(cur).next != kNoBlock) cur = at(cur).next;
  return cur;
}

void Workspace::collect_subtree(BlockId id, std::vector<BlockId>& out) const {
  for (BlockId cur = id; cur != kNoBlock; cur = at(cur).next) {
    out.push_back(cur);
    if (at(cur).body != kNoBlock) collect_subtree(at(cur).body, out);
  }
}

std::size_t Workspace::subtree_size(BlockId id) const {
  std::vector<BlockId> ids;
  collect_subtree(id, ids);
  return ids.size();
}

Workspace Workspace::from_chains(const std::vector<Chain>& chains) {
  Workspace w;
  // Returns the id of the first block of the chain.
  auto build = [&w](auto&& self, const Chain& chain) -> BlockId {
    BlockId first = kNoBlock;
    BlockId prev = kNoBlock;
    for (const Statement& s : chain) {
      if (!is_valid_value(s.kind, s.value)) {
        throw InvalidWorkspace("illegal value " + std::to_string(s.value) + " for " +
                               std::string(to_string(s.kind)));
      }
      BlockId id = w.next_id_++;
      w.blocks_.push_back({id, s.kind, s.value, kNoBlock, kNoBlock, prev});
      if (prev != kNoBlock) w.at_mut(prev).next = id;
      if (first == kNoBlock) first = id;
      if (s.kind == BlockKind::Repeat && !s.body.empty()) {
        BlockId body = self(self, s.body);
        w.at_mut(id).body = body;
        w.at_mut(body).parent = id;
      } else if (!s.body.empty()) {
        throw InvalidWorkspace("only repeat blocks have a body");
      }
      prev = id;
    }
    return first;
  };
  for (const Chain& chain : chains) {
    if (chain.empty()) continue;
    w.roots_.push_back(build(build, chain));
  }
  return w;
}

std::vector<Chain> Workspace::chains() const {
  auto build = [this](auto&& self, BlockId first) -> Chain {
    Chain chain;
    for (BlockId cur = first; cur != kNoBlock; cur = at(cur).next) {
      const Block& b = at(cur);
      Statement s{b.kind, b.value, {}};
      if (b.body != kNoBlock) s.body = self(self, b.body);
      chain.push_back(std::move(s));
    }
    return chain;
  };
  std::vector<Chain> out;
  out.reserve(roots_.size());
  for (BlockId r : roots_) out.push_back(build(build, r));
  return out;
}

BlockId Workspace::add_root(BlockKind kind, int value) {
  BlockId id = next_id_++;
  blocks_.push_back({id, kind, value, kNoBlock, kNoBlock, kNoBlock});
  roots_.push_back(id);
  return id;
}

void Workspace::detach(BlockId id) {
  Block& b = at_mut(id);
  if (b.parent == kNoBlock) {
    roots_.erase(std::find(roots_.begin(), roots_.end(), id));
    return;
  }
  Block& parent = at_mut(b.parent);
  if (parent.next == id) {
    parent.next = kNoBlock;
  } else {
    parent.body = kNoBlock;
  }
  b.parent = kNoBlock;
}

void Workspace::attach_under(BlockId source, BlockId dest) {
  BlockId displaced = at(dest).next;
  at_mut(dest).next = source;
  at_mut(source).parent = dest;
  if (displaced != kNoBlock) {
    BlockId tail = stack_tail(source);
    at_mut(tail).next = displaced;
    at_mut(displaced).parent = tail;
  }
}

void Workspace::attach_inside(BlockId source, BlockId dest) {
  BlockId displaced = at(dest).body;
  at_mut(dest).body = source;
  at_mut(source).parent = dest;
  if (displaced != kNoBlock) {
    BlockId tail = stack_tail(source);
    at_mut(tail).next = displaced;
    at_mut(displaced).parent = tail;
  }
}

void Workspace::push_root(BlockId id) { roots_.push_back(id); }

void Workspace::erase_subtree(BlockId id) {
  std::vector<BlockId> doomed;
  collect_subtree(id, doomed);
  std::sort(doomed.begin(), doomed.end());
  std::erase_if(blocks_, [&doomed](const Block& b) {
    return std::binary_search(doomed.begin(), doomed.end(), b.id);
  });
}

void Workspace::set_value(BlockId id, int value) { at_mut(id).value = value; }

void Workspace::validate() const {
  std::unordered_set<BlockId> seen;
  BlockId prev_id = kNoBlock;
  for (const Block& b : blocks_) {
    if (b.id <= prev_id) throw InvalidWorkspace("block ids not strictly increasing");
    if (b.id >= next_id_) throw InvalidWorkspace("next_id does not exceed block " + std::to_string(b.id));
    if (!is_valid_value(b.kind, b.value)) throw InvalidWorkspace("illegal value in block " + std::to_string(b.id));
    if (b.kind != BlockKind::Repeat && b.body != kNoBlock) {
      throw InvalidWorkspace("non-repeat block " + std::to_string(b.id) + " has a body");
    }
    prev_id = b.id;
  }
  // Every block must be reached exactly once walking down from the roots.
  auto walk = [&](auto&& self, BlockId first, BlockId parent) -> void {
    for (BlockId cur = first; cur != kNoBlock;) {
      const Block* b = find(cur);
      if (!b) throw InvalidWorkspace("dangling reference to block " + std::to_string(cur));
      if (!seen.insert(cur).second) throw InvalidWorkspace("block " + std::to_string(cur) + " placed twice");
      if (b->parent != parent) throw InvalidWorkspace("wrong parent link on block " + std::to_string(cur));
      if (b->body != kNoBlock) self(self, b->body, cur);
      parent = cur;
      cur = b->next;
    }
  };
  for (BlockId r : roots_) {
    const Block* b = find(r);
    if (!b) throw InvalidWorkspace("root " + std::to_string(r) + " does not exist");
    if (b->parent != kNoBlock) throw InvalidWorkspace("root " + std::to_string(r) + " has a parent");
    walk(walk, r, kNoBlock);
  }
  if (seen.size() != blocks_.size()) throw InvalidWorkspace("unreachable blocks in workspace");
}

std::string to_string(const Chain& chain) {
  std::string out;
  append_chain(out, chain);
  return out;
}

std::string to_string(const Workspace& w) {
  std::string out;
  for (const Chain& c : w.chains()) {
    if (!out.empty()) out += ' ';
    append_chain(out, c);
  }
  return out.empty() ? "[]" : out;
}

}  // namespace turtle
