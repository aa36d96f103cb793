#include "turtle/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace turtle {

namespace {

inline double squared_distance(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

double directed_squared(std::span<const Point> from, std::span<const Point> to) {
  double worst = 0.0;
  for (const Point& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : to) best = std::min(best, squared_distance(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

// Smallest t with sqrt(t) >= alpha. Since sqrt is monotone,
// sqrt(d2) < alpha exactly when d2 < t.
double squared_threshold(double alpha) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double t = alpha * alpha;
  while (std::sqrt(t) < alpha) t = std::nextafter(t, kInf);
  while (t > 0.0) {
    const double lower = std::nextafter(t, 0.0);
    if (std::sqrt(lower) < alpha) break;
    t = lower;
  }
  return t;
}

// True when every point of `from` has a neighbour in `to` closer than the
// threshold. Points are usually ordered along a path, so the scan for each
// point starts where the previous one found its neighbour.
bool directed_within(std::span<const Point> from, std::span<const Point> to, double threshold) {
  const std::size_t n = to.size();
  std::size_t start = 0;
  for (const Point& p : from) {
    bool found = false;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t j = start + k;
      if (j >= n) j -= n;
      if (squared_distance(p, to[j]) < threshold) {
        start = j;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw EmptySet();
  return std::sqrt(std::max(directed_squared(a, b), directed_squared(b, a)));
}

bool hausdorff_below(std::span<const Point> a, std::span<const Point> b, double alpha) {
  if (a.empty() || b.empty()) throw EmptySet();
  const double threshold = squared_threshold(alpha);
  return directed_within(a, b, threshold) && directed_within(b, a, threshold);
}

}  // namespace turtle
