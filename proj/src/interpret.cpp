#include "turtle/interpret.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "turtle/hausdorff.hpp"

namespace turtle {

namespace {

struct Direction {
  double dx;
  double dy;
};

constexpr double kHalfSqrt3 = 0.86602540378443864676;

// Unit steps for headings 0, 30, ..., 330 degrees clockwise from north. Kept
// exact where the trig values are exact so closed figures close exactly.
constexpr std::array<Direction, 12> kDirections = {{
    {0.0, 1.0},
    {0.5, kHalfSqrt3},
    {kHalfSqrt3, 0.5},
    {1.0, 0.0},
    {kHalfSqrt3, -0.5},
    {0.5, -kHalfSqrt3},
    {0.0, -1.0},
    {-0.5, -kHalfSqrt3},
    {-kHalfSqrt3, -0.5},
    {-1.0, 0.0},
    {-kHalfSqrt3, 0.5},
    {-0.5, kHalfSqrt3},
}};

class Tracer {
 public:
  Tracer(const Workspace& w, const RenderConfig& cfg, std::vector<Point>* out)
      : w_(w), cfg_(cfg), out_(out) {}

  void run() {
    emit({0.0, 0.0});
    for (BlockId root : w_.roots()) run_chain(root);
  }

  const TurtlePose& pose() const { return pose_; }

 private:
  void emit(Point p) {
    if (out_) out_->push_back(p);
  }

  void run_chain(BlockId first) {
    for (BlockId cur = first; cur != kNoBlock;) {
      const Block& b = w_.at(cur);
      switch (b.kind) {
        case BlockKind::Move: move(); break;
        case BlockKind::Turn: pose_.heading = (pose_.heading + b.value) % 360; break;
        case BlockKind::Repeat:
          if (b.body != kNoBlock) {
            for (int i = 0; i < b.value; ++i) run_chain(b.body);
          }
          break;
      }
      cur = b.next;
    }
  }

  void move() {
    const Direction d = kDirections[static_cast<std::size_t>(pose_.heading / 30)];
    const double length = cfg_.move_length;
    const double step = cfg_.sample_step;
    if (out_) {
      const double limit = length - 1e-9 * length;
      for (int k = 1; k * step < limit; ++k) {
        const double s = k * step;
        emit({pose_.x + d.dx * s, pose_.y + d.dy * s});
      }
    }
    pose_.x += d.dx * length;
    pose_.y += d.dy * length;
    emit({pose_.x, pose_.y});
  }

  const Workspace& w_;
  const RenderConfig& cfg_;
  std::vector<Point>* out_;
  TurtlePose pose_;
};

struct GridKey {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const GridKey&) const = default;
};

struct GridKeyHash {
  std::size_t operator()(const GridKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<Point> trace(const Workspace& w, const RenderConfig& cfg) {
  std::vector<Point> points;
  Tracer(w, cfg, &points).run();
  return points;
}

TurtlePose final_pose(const Workspace& w, const RenderConfig& cfg) {
  Tracer t(w, cfg, nullptr);
  t.run();
  return t.pose();
}

Trajectory fold_duplicates(std::span<const Point> points, double quantum) {
  Trajectory out;
  out.reserve(points.size());
  std::unordered_set<GridKey, GridKeyHash> seen;
  seen.reserve(points.size() * 2);
  for (const Point& p : points) {
    GridKey key{std::llround(p.x / quantum), std::llround(p.y / quantum)};
    if (seen.insert(key).second) out.push_back(p);
  }
  return out;
}

Trajectory interpret(const Workspace& w, const RenderConfig& cfg) {
  return fold_duplicates(trace(w, cfg), 1e-9 * cfg.move_length);
}

bool semantically_equal(const Workspace& p, const Workspace& q, const RenderConfig& cfg,
                        double tolerance) {
  if (tolerance < 0.0) tolerance = cfg.equality_tolerance();
  return hausdorff(interpret(p, cfg), interpret(q, cfg)) <= tolerance;
}

Trajectory target_from_stroke(std::span<const Point> stroke, const RenderConfig& cfg) {
  if (stroke.empty()) return {};
  const Point origin = stroke.front();
  std::vector<Point> dense;
  dense.reserve(stroke.size());
  Point prev{0.0, 0.0};
  dense.push_back(prev);
  for (std::size_t i = 1; i < stroke.size(); ++i) {
    const Point cur{stroke[i].x - origin.x, stroke[i].y - origin.y};
    const double gap = std::hypot(cur.x - prev.x, cur.y - prev.y);
    if (gap > cfg.sample_step * (1.0 + 1e-9)) {
      const int pieces = static_cast<int>(std::ceil(gap / cfg.sample_step));
      for (int j = 1; j < pieces; ++j) {
        const double f = static_cast<double>(j) / pieces;
        dense.push_back({prev.x + (cur.x - prev.x) * f, prev.y + (cur.y - prev.y) * f});
      }
    }
    dense.push_back(cur);
    prev = cur;
  }
  return fold_duplicates(dense, 1e-9 * cfg.move_length);
}

}  // namespace turtle
