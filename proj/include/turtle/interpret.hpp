#pragma once

#include <span>
#include <vector>

#include "turtle/program.hpp"

namespace turtle {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// A drawn point set in canvas units. Order carries no meaning for distances.
using Trajectory = std::vector<Point>;

struct RenderConfig {
  double move_length = 50.0;  // distance covered by one Move
  double sample_step = 5.0;   // arc-length spacing of samples along a segment

  /// Tolerance used to call two drawings the same.
  double equality_tolerance() const { return 1e-6 * move_length; }
};

/// Heading is in degrees clockwise from north (+y).
struct TurtlePose {
  double x = 0.0;
  double y = 0.0;
  int heading = 0;
};

/// The ordered path the turtle draws, starting at the origin. The pen never
/// lifts, so consecutive samples are at most `sample_step` apart.
std::vector<Point> trace(const Workspace& w, const RenderConfig& cfg = {});

/// Point set drawn by `w`: the traced samples with duplicates folded.
Trajectory interpret(const Workspace& w, const RenderConfig& cfg = {});

/// Final turtle pose after executing all roots in order.
TurtlePose final_pose(const Workspace& w, const RenderConfig& cfg = {});

/// Same drawing within `tolerance` Hausdorff distance. A negative tolerance
/// selects `cfg.equality_tolerance()`.
bool semantically_equal(const Workspace& p, const Workspace& q, const RenderConfig& cfg = {},
                        double tolerance = -1.0);

/// Drops repeated points (coordinates equal after snapping to a `quantum` grid),
/// keeping the first occurrence.
Trajectory fold_duplicates(std::span<const Point> points, double quantum);

/// Turns a freehand stroke into a target point set: translated so the first
/// sample sits at the turtle origin, then densified so no gap between
/// consecutive samples exceeds `cfg.sample_step`.
Trajectory target_from_stroke(std::span<const Point> stroke, const RenderConfig& cfg = {});

}  // namespace turtle
