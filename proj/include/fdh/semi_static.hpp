#pragma once

// Baseline: the point set in x-order plus the two hull chains as flat vectors. An
// update that provably leaves the hull unchanged costs one binary search; any other
// update rebuilds both chains with one linear scan over the store.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <absl/container/btree_map.h>

#include "fdh/error.hpp"
#include "fdh/geometry.hpp"

namespace fdh {

class SemiStatic {
 public:
  void insert(const Point& p) {
    ++store_[p];
    ++size_;
    if (size_ > 1 && contains(p)) return;
    rebuild();
  }

  /// Removes one copy of p; throws UnknownPoint if p is not live.
  void erase(const Point& p) {
    auto it = store_.find(p);
    if (it == store_.end()) throw Error(Errc::UnknownPoint, to_string(p));
    const bool copy_left = --it->second > 0;
    if (!copy_left) store_.erase(it);
    --size_;
    if (!copy_left && (is_vertex(p, upper_) || is_vertex(p, lower_))) rebuild();
  }

  std::size_t size() const { return size_; }

  bool contains(const Point& q) const {
    return !upper_.empty() && point_below_chain(q, upper_) && point_above_chain(q, lower_);
  }

  /// A live point maximizing direction.x * x + direction.y * y.
  std::optional<Point> extreme_point(const Point& direction) const {
    if (direction.x == 0 && direction.y == 0) throw std::invalid_argument("zero direction");
    if (upper_.empty()) return std::nullopt;
    if (direction.y == 0) return direction.x > 0 ? upper_.back() : upper_.front();
    // Along either chain the score rises and then falls, so the first edge that does
    // not gain is found by binary search.
    const Chain& c = direction.y > 0 ? upper_ : lower_;
    std::size_t lo = 0, hi = c.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (score(c[mid + 1], direction) > score(c[mid], direction)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return c[lo];
  }

  const Chain& upper() const { return upper_; }
  const Chain& lower() const { return lower_; }

  std::size_t hull_size() const {
    if (upper_.empty()) return 0;
    std::size_t n = upper_.size() + lower_.size();
    if (upper_.front() == lower_.front()) --n;
    if (upper_.back() == lower_.back()) --n;
    return std::max<std::size_t>(n, 1);
  }

  /// Number of full chain rebuilds so far.
  std::uint64_t rebuilds() const { return rebuilds_; }

 private:
  static bool is_vertex(const Point& p, const Chain& c) {
    const auto it = std::lower_bound(c.begin(), c.end(), p.x, [](const Point& a, Coord x) { return a.x < x; });
    return it != c.end() && *it == p;
  }

  // Andrew's monotone chain over the lowest (lower chain) and highest (upper chain)
  // point of every column; the store is ordered by x, then y.
  void rebuild() {
    ++rebuilds_;
    upper_.clear();
    lower_.clear();
    for (auto it = store_.begin(); it != store_.end();) {
      const Point lo = it->first;
      Point hi = lo;
      for (++it; it != store_.end() && it->first.x == lo.x; ++it) hi = it->first;
      while (upper_.size() >= 2 && orientation(upper_[upper_.size() - 2], upper_.back(), hi) >= 0) upper_.pop_back();
      upper_.push_back(hi);
      while (lower_.size() >= 2 && orientation(lower_[lower_.size() - 2], lower_.back(), lo) <= 0) lower_.pop_back();
      lower_.push_back(lo);
    }
  }

  absl::btree_map<Point, std::uint32_t> store_;  // point -> multiplicity
  std::size_t size_ = 0;
  Chain upper_;
  Chain lower_;
  std::uint64_t rebuilds_ = 0;
};

}  // namespace fdh
