#pragma once

#include <span>
#include <stdexcept>

#include "turtle/interpret.hpp"

namespace turtle {

class EmptySet : public std::invalid_argument {
 public:
  EmptySet() : std::invalid_argument("Hausdorff distance of an empty point set") {}
};

/// Symmetric Hausdorff distance, computed by the full quadratic double loop.
double hausdorff(std::span<const Point> a, std::span<const Point> b);

/// Decides `hausdorff(a, b) < alpha` without computing the distance. Stops at
/// the first point whose nearest neighbour is at least `alpha` away, and stops
/// scanning for a point's neighbour as soon as one closer than `alpha` is seen.
/// Agrees exactly with `hausdorff(a, b) < alpha` for every alpha > 0.
bool hausdorff_below(std::span<const Point> a, std::span<const Point> b, double alpha);

}  // namespace turtle
