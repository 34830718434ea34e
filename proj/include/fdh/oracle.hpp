#pragma once

// Brute-force reference used by the property tests and the harness cross-checks.
// Nothing here shares code paths with the optimized structures beyond `orientation`.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fdh/error.hpp"
#include "fdh/geometry.hpp"

namespace fdh {

/// Strict convex hull by gift wrapping, counter-clockwise from the lowest-leftmost
/// point. O(n h). Collinear boundary points are not vertices.
inline std::vector<Point> gift_wrap(std::span<const Point> input) {
  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;

  std::vector<Point> hull;
  const Point start = pts.front();  // smallest x, then smallest y: always a vertex
  Point current = start;
  do {
    hull.push_back(current);
    Point candidate = pts[0] == current ? pts[1] : pts[0];
    for (const Point& p : pts) {
      if (p == current) continue;
      const int o = orientation(current, candidate, p);
      // p clockwise of candidate, or collinear and farther: p wraps tighter.
      if (o < 0) {
        candidate = p;
      } else if (o == 0) {
        const Wide dc = static_cast<Wide>(candidate.x - current.x) * (candidate.x - current.x) +
                        static_cast<Wide>(candidate.y - current.y) * (candidate.y - current.y);
        const Wide dp = static_cast<Wide>(p.x - current.x) * (p.x - current.x) +
                        static_cast<Wide>(p.y - current.y) * (p.y - current.y);
        if (dp > dc) candidate = p;
      }
    }
    current = candidate;
  } while (current != start && hull.size() <= pts.size());
  return hull;
}

struct OracleHull {
  Chain upper;
  Chain lower;
  std::vector<Point> polygon;  // counter-clockwise vertices
};

/// Splits a counter-clockwise polygon into upper and lower chains.
inline OracleHull oracle_hull(std::span<const Point> live) {
  OracleHull out;
  out.polygon = gift_wrap(live);
  if (out.polygon.size() <= 1) {
    out.upper = out.lower = out.polygon;
    return out;
  }

  // Counter-clockwise from the leftmost-lowest vertex: the lower chain runs to the
  // rightmost-lowest vertex; the upper chain is the stretch from the
  // rightmost-highest vertex around to the leftmost-highest one, reversed.
  const auto& poly = out.polygon;
  const std::size_t n = poly.size();
  std::size_t right_low = 0, right_high = 0, left_high = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    if (p.x > poly[right_low].x || (p.x == poly[right_low].x && p.y < poly[right_low].y)) right_low = i;
    if (p.x > poly[right_high].x || (p.x == poly[right_high].x && p.y > poly[right_high].y)) right_high = i;
    if (p.x < poly[left_high].x || (p.x == poly[left_high].x && p.y > poly[left_high].y)) left_high = i;
  }
  for (std::size_t i = 0; i <= right_low; ++i) out.lower.push_back(poly[i]);
  const std::size_t stop = left_high == 0 ? n : left_high;
  for (std::size_t i = right_high; i <= stop; ++i) out.upper.push_back(poly[i % n]);
  std::reverse(out.upper.begin(), out.upper.end());
  return out;
}

/// Boundary-inclusive point-in-polygon by testing every edge.
inline bool polygon_contains(std::span<const Point> polygon, const Point& q) {
  if (polygon.empty()) return false;
  if (polygon.size() == 1) return polygon[0] == q;
  if (polygon.size() == 2) {
    const Point& a = polygon[0];
    const Point& b = polygon[1];
    return orientation(a, b, q) == 0 && std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    if (orientation(polygon[i], polygon[(i + 1) % polygon.size()], q) < 0) return false;
  }
  return true;
}

/// Live multiset replayed from an insert/delete log, with a lazily recomputed hull.
class OracleSet {
 public:
  void insert(const Point& p) {
    ++live_[p];
    ++size_;
    dirty_ = true;
  }

  void erase(const Point& p) {
    auto it = live_.find(p);
    if (it == live_.end()) throw Error(Errc::UnknownPoint, to_string(p));
    if (--it->second == 0) live_.erase(it);
    --size_;
    dirty_ = true;
  }

  std::size_t size() const { return size_; }

  std::vector<Point> live_points() const {
    std::vector<Point> out;
    out.reserve(live_.size());
    for (const auto& [p, count] : live_) out.push_back(p);
    return out;
  }

  const OracleHull& hull() const {
    if (dirty_) {
      const auto pts = live_points();
      cache_ = oracle_hull(pts);
      dirty_ = false;
    }
    return cache_;
  }

  bool contains(const Point& q) const { return polygon_contains(hull().polygon, q); }

  /// Best score in `direction` over all live points; empty set gives nullopt.
  std::optional<Wide> extreme_score(const Point& direction) const {
    std::optional<Wide> best;
    for (const auto& [p, count] : live_) {
      const Wide s = score(p, direction);
      if (!best || s > *best) best = s;
    }
    return best;
  }

  std::size_t hull_size() const { return hull().polygon.size(); }

 private:
  std::map<Point, std::size_t> live_;
  std::size_t size_ = 0;
  mutable OracleHull cache_;
  mutable bool dirty_ = false;
};

inline bool oracle_contains(std::span<const Point> live, const Point& q) {
  return polygon_contains(gift_wrap(live), q);
}

inline std::optional<Wide> oracle_extreme(std::span<const Point> live, const Point& direction) {
  std::optional<Wide> best;
  for (const Point& p : live) {
    const Wide s = score(p, direction);
    if (!best || s > *best) best = s;
  }
  return best;
}

}  // namespace fdh
