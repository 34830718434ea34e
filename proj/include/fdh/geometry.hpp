#pragma once

// Exact planar primitives on the integer grid.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdh/error.hpp"

namespace fdh {

using Coord = std::int64_t;
using Wide = __int128;

/// Largest admissible |coordinate|. Differences fit in 42 bits, so every
/// orientation determinant is exact in 128-bit arithmetic.
inline constexpr Coord kCoordBound = Coord{1} << 40;

struct Point {
  Coord x = 0;
  Coord y = 0;

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

inline std::string to_string(const Point& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(p.y) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline constexpr bool in_bounds(const Point& p) {
  return p.x >= -kCoordBound && p.x <= kCoordBound && p.y >= -kCoordBound && p.y <= kCoordBound;
}

/// Reflection through the x-axis. Lower hulls are upper hulls of mirrored sets.
inline constexpr Point mirror(const Point& p) { return {p.x, -p.y}; }

/// Sign of (b - a) x (c - a): +1 counter-clockwise, -1 clockwise, 0 collinear.
inline int orientation(const Point& a, const Point& b, const Point& c) {
  const Wide det = static_cast<Wide>(b.x - a.x) * static_cast<Wide>(c.y - a.y) -
                   static_cast<Wide>(b.y - a.y) * static_cast<Wide>(c.x - a.x);
  return (det > 0) - (det < 0);
}

/// Compares slope(a0,a1) against slope(b0,b1); both segments must run left to right.
inline int compare_slopes(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  const Wide lhs = static_cast<Wide>(a1.y - a0.y) * static_cast<Wide>(b1.x - b0.x);
  const Wide rhs = static_cast<Wide>(b1.y - b0.y) * static_cast<Wide>(a1.x - a0.x);
  return (lhs > rhs) - (lhs < rhs);
}

/// Score of p in direction d, exact.
inline Wide score(const Point& p, const Point& direction) {
  return static_cast<Wide>(direction.x) * p.x + static_cast<Wide>(direction.y) * p.y;
}

/// Vertices ordered by strictly increasing x. Upper chains turn clockwise at every
/// interior vertex, lower chains counter-clockwise.
using Chain = std::vector<Point>;

namespace detail {

inline void check_sorted_distinct(std::span<const Point> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].x == points[i - 1].x) {
      throw Error(Errc::DuplicateX, "x=" + std::to_string(points[i].x) + " at index " + std::to_string(i));
    }
    if (points[i].x < points[i - 1].x) {
      throw Error(Errc::NotSorted, "index " + std::to_string(i));
    }
  }
}

// turn = -1 keeps clockwise turns (upper), +1 keeps counter-clockwise turns (lower).
inline Chain monotone_chain(std::span<const Point> points, int turn) {
  check_sorted_distinct(points);
  Chain hull;
  hull.reserve(points.size());
  for (const Point& p : points) {
    while (hull.size() >= 2 && orientation(hull[hull.size() - 2], hull.back(), p) != turn) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

}  // namespace detail

/// Upper hull of x-sorted input with distinct x, one stack pass.
inline Chain upper_hull_sorted(std::span<const Point> points) { return detail::monotone_chain(points, -1); }

inline Chain lower_hull_sorted(std::span<const Point> points) { return detail::monotone_chain(points, +1); }

/// True iff consecutive triples of `c` turn strictly in the requested direction
/// and x increases strictly.
inline bool is_upper_chain(std::span<const Point> c) {
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].x <= c[i - 1].x) return false;
  }
  for (std::size_t i = 2; i < c.size(); ++i) {
    if (orientation(c[i - 2], c[i - 1], c[i]) != -1) return false;
  }
  return true;
}

inline bool is_lower_chain(std::span<const Point> c) {
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].x <= c[i - 1].x) return false;
  }
  for (std::size_t i = 2; i < c.size(); ++i) {
    if (orientation(c[i - 2], c[i - 1], c[i]) != 1) return false;
  }
  return true;
}

/// q lies on or below the upper chain `c` within its x-span. The boundary counts as inside.
inline bool point_below_chain(const Point& q, std::span<const Point> c) {
  if (c.empty() || q.x < c.front().x || q.x > c.back().x) return false;
  const auto it = std::lower_bound(c.begin(), c.end(), q.x, [](const Point& p, Coord x) { return p.x < x; });
  if (it->x == q.x) return q.y <= it->y;
  return orientation(*(it - 1), *it, q) <= 0;
}

/// q lies on or above the lower chain `c` within its x-span.
inline bool point_above_chain(const Point& q, std::span<const Point> c) {
  if (c.empty() || q.x < c.front().x || q.x > c.back().x) return false;
  const auto it = std::lower_bound(c.begin(), c.end(), q.x, [](const Point& p, Coord x) { return p.x < x; });
  if (it->x == q.x) return q.y >= it->y;
  return orientation(*(it - 1), *it, q) >= 0;
}

/// Neighbours of q on the upper hull of (chain vertices) + q.
struct Tangents {
  Point left;
  Point right;

  friend bool operator==(const Tangents&, const Tangents&) = default;
};

/// Neighbours of q on the upper hull of c + {q}, by binary search. Vertices sharing
/// q's x are hidden by q. When q sees contacts on one side only, both fields hold
/// that contact; when no vertex of c is visible at all the result is empty.
inline std::optional<Tangents> chain_tangents(const Point& q, std::span<const Point> c) {
  if (c.empty()) throw Error(Errc::Empty, "chain_tangents on empty chain");
  if (point_below_chain(q, c)) throw Error(Errc::QueryInsideHull, to_string(q));

  const auto by_x = [](const Point& p, Coord x) { return p.x < x; };
  const std::size_t left_end =
      static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), q.x, by_x) - c.begin());
  std::size_t right_begin = left_end;
  if (right_begin < c.size() && c[right_begin].x == q.x) ++right_begin;

  std::optional<Point> left;
  if (left_end > 0) {
    // First vertex whose successor (still left of q) does not rise above line(vertex, q).
    // A collinear successor is hidden behind the vertex on the hull of c + {q}.
    std::size_t lo = 0, hi = left_end - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (orientation(c[mid], q, c[mid + 1]) > 0) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    left = c[lo];
  }
  std::optional<Point> right;
  if (right_begin < c.size()) {
    // Last vertex whose predecessor (still right of q) does not rise above line(q, vertex).
    std::size_t lo = right_begin, hi = c.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (orientation(q, c[mid], c[mid - 1]) > 0) {
        hi = mid - 1;
      } else {
        lo = mid;
      }
    }
    right = c[lo];
  }
  if (!left && !right) return std::nullopt;
  if (!left) left = right;
  if (!right) right = left;
  return Tangents{*left, *right};
}

}  // namespace fdh
