#pragma once

// Fully dynamic convex hull by the logarithmic method over deletion-only hull trees.
//
// HalfHull maintains the upper hull. Bucket B_i has capacity base * 2^i and owns one
// UpperHullTree built from its x-sorted content. Insertions merge a prefix of non-empty
// buckets into the next one; a bucket that loses three quarters of its capacity is
// merged downward. FullyDynamicHull runs one HalfHull on the points and one on their
// mirror images (x, -y), which keeps the lower hull.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdh/dedup_index.hpp"
#include "fdh/error.hpp"
#include "fdh/geometry.hpp"
#include "fdh/hull_tree.hpp"
#include "fdh/loser_tree.hpp"

namespace fdh {

struct HullCounters {
  std::uint64_t merges = 0;
  std::uint64_t moves = 0;          // points written into rebuilt buckets
  std::uint64_t repair_steps = 0;   // deletion work inside hull trees
  std::uint64_t build_touches = 0;  // construction work inside hull trees
  std::uint64_t structural_inserts = 0;
  std::uint64_t structural_deletes = 0;

  HullCounters& operator+=(const HullCounters& o) {
    merges += o.merges;
    moves += o.moves;
    repair_steps += o.repair_steps;
    build_touches += o.build_touches;
    structural_inserts += o.structural_inserts;
    structural_deletes += o.structural_deletes;
    return *this;
  }
};

class HalfHull {
 public:
  explicit HalfHull(std::size_t base = 32) : base_(base) {
    if (base == 0 || !std::has_single_bit(base)) throw std::invalid_argument("bucket base must be a power of two");
  }

  std::size_t base() const { return base_; }
  std::size_t capacity(std::size_t i) const { return base_ << i; }
  std::size_t bucket_count() const { return buckets_.size(); }
  std::size_t bucket_size(std::size_t i) const { return i < buckets_.size() ? buckets_[i].tree.size() : 0; }
  std::size_t nonempty_buckets() const {
    return static_cast<std::size_t>(std::count_if(buckets_.begin(), buckets_.end(), [](const Bucket& b) { return !b.tree.empty(); }));
  }
  const UpperHullTree& tree(std::size_t i) const { return buckets_[i].tree; }

  /// Live points, with multiplicity.
  std::size_t size() const { return dedup_.points(); }
  /// Live representatives (distinct x).
  std::size_t representatives() const { return dedup_.distinct_x(); }
  const HullCounters& counters() const { return counters_; }
  const DedupIndex& dedup() const { return dedup_; }

  void insert(const Point& p) {
    const InsertResult r = dedup_.insert(p);
    switch (r.effect) {
      case InsertEffect::Shadowed:
        return;
      case InsertEffect::ReplaceRepresentative:
        structural_delete(*r.old_representative, *dedup_.locate(p.x));
        [[fallthrough]];
      case InsertEffect::NewRepresentative:
        structural_insert(p);
    }
  }

  void erase(const Point& p) {
    const DeleteResult r = dedup_.erase(p);
    if (r.effect == DeleteEffect::UnshadowOnly) return;
    structural_delete(p, static_cast<std::size_t>(r.bucket));
    if (r.successor) structural_insert(*r.successor);
  }

  /// q lies on or below the upper hull. `visits` counts descent nodes over all buckets.
  bool contains_below(const Point& q, QueryStats* stats = nullptr) const {
    std::vector<Point> x_set;
    bool any = false;
    for (const Bucket& b : buckets_) {
      if (b.tree.empty()) continue;
      any = true;
      const auto loc = b.tree.locate(q, stats);
      if (loc.inside) return true;
      if (const auto& t = loc.tangents) {
        x_set.push_back(t->left);
        if (t->right != t->left) x_set.push_back(t->right);
      }
    }
    if (!any || x_set.empty()) return false;
    std::sort(x_set.begin(), x_set.end());
    // Keep only the highest point of every x; the lower ones cannot support the chain.
    std::vector<Point> tops;
    for (std::size_t i = 0; i < x_set.size(); ++i) {
      if (i + 1 < x_set.size() && x_set[i + 1].x == x_set[i].x) continue;
      tops.push_back(x_set[i]);
    }
    return point_below_chain(q, upper_hull_sorted(tops));
  }

  /// Best point for direction.y >= 0.
  std::optional<Point> extreme(const Point& direction, QueryStats* stats = nullptr) const {
    std::optional<Point> best;
    Wide best_score = 0;
    for (const Bucket& b : buckets_) {
      if (b.tree.empty()) continue;
      const Point p = *b.tree.extreme(direction, stats);
      const Wide s = score(p, direction);
      if (!best || s > best_score) {
        best = p;
        best_score = s;
      }
    }
    return best;
  }

  /// Upper hull of all representatives.
  Chain materialize() const {
    std::vector<Chain> chains;
    std::vector<std::span<const Point>> runs;
    for (const Bucket& b : buckets_) {
      if (!b.tree.empty()) chains.push_back(b.tree.materialize());
    }
    for (const Chain& c : chains) runs.emplace_back(c);
    std::vector<Point> merged;
    LoserTree<Point, XLess>(std::move(runs)).drain(merged);
    return upper_hull_sorted(merged);
  }

  /// Checks the bucket invariants; used by tests.
  bool check_invariants() const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
      const Bucket& b = buckets_[i];
      if (b.tree.empty()) continue;
      total += b.tree.size();
      if (b.tree.capacity() > capacity(i)) return false;
      if (i > 0 && b.tree.capacity() < capacity(i) / 2) return false;
      if (i > 0 && b.tree.size() < capacity(i) / 4) return false;
      bool located = true;
      b.tree.for_each_live([&](const Point& p) { located = located && dedup_.locate(p.x) == static_cast<int>(i); });
      if (!located) return false;
    }
    return total == dedup_.distinct_x();
  }

 private:
  struct XLess {
    bool operator()(const Point& a, const Point& b) const { return a.x < b.x; }
  };

  struct Bucket {
    UpperHullTree tree;
  };

  void structural_insert(const Point& p) {
    ++counters_.structural_inserts;
    std::size_t j = 0;
    while (j < buckets_.size() && !buckets_[j].tree.empty()) ++j;
    // Buckets 0..j-1 are full of content and B_j is empty: Merge(j - 1).
    merge(j, &p);
  }

  void structural_delete(const Point& p, std::size_t i) {
    ++counters_.structural_deletes;
    UpperHullTree& t = buckets_[i].tree;
    const std::uint64_t before = t.repair_steps();
    t.erase(p);
    counters_.repair_steps += t.repair_steps() - before;
    if (i > 0 && t.size() < capacity(i) / 4) merge(i, nullptr);
  }

  // Merges B_0..B_top (plus the pending point) and redistributes.
  void merge(std::size_t top, const Point* pending) {
    ++counters_.merges;
    if (buckets_.size() <= top) buckets_.resize(top + 1);

    if (scratch_.size() <= top) scratch_.resize(top + 1);
    std::vector<std::span<const Point>> runs = merger_.release_runs();
    for (std::size_t i = 0; i <= top; ++i) {
      const UpperHullTree& t = buckets_[i].tree;
      if (t.empty()) continue;
      if (t.size() == t.capacity()) {
        runs.push_back(t.leaves());  // no deletions: merge straight from the tree
        continue;
      }
      std::vector<Point>& live = scratch_[i];
      live.clear();
      t.for_each_live([&](const Point& p) { live.push_back(p); });
      runs.emplace_back(live);
    }
    if (pending) runs.emplace_back(pending, 1);
    std::vector<Point>& stream = stream_;
    stream.clear();
    merger_.reset(std::move(runs));
    merger_.drain(stream);
    for (std::size_t i = 0; i <= top; ++i) buckets_[i].tree.clear();
    const std::size_t m = stream.size();
    if (m == 0) return;

    for (std::size_t a = 0; a <= top; ++a) {
      if ((a == 0 || capacity(a) / 2 <= m) && m <= capacity(a)) {
        place(a, stream);
        return;
      }
    }
    const std::size_t fill = capacity(top);
    if (m <= fill) throw Error(Errc::BucketOverflow, "no bucket fits a merge of " + std::to_string(m));
    const std::size_t r = m - fill;
    std::size_t b = 0;
    while (capacity(b) < r) ++b;
    if (b >= top) throw Error(Errc::BucketOverflow, "remainder of " + std::to_string(r) + " does not fit");
    place(top, std::span<const Point>(stream).first(fill));
    place(b, std::span<const Point>(stream).subspan(fill));
  }

  void place(std::size_t i, std::span<const Point> pts) {
    UpperHullTree& t = buckets_[i].tree;
    t.build(pts);
    counters_.build_touches += t.build_touches();
    counters_.moves += pts.size();
    for (const Point& p : pts) dedup_.set_bucket(p.x, static_cast<int>(i));
  }

  std::size_t base_;
  std::vector<Bucket> buckets_;
  std::vector<std::vector<Point>> scratch_;  // merge inputs, reused across merges
  std::vector<Point> stream_;
  LoserTree<Point, XLess> merger_;
  DedupIndex dedup_;
  HullCounters counters_;
};

class FullyDynamicHull {
 public:
  explicit FullyDynamicHull(std::size_t base = 32) : upper_(base), lower_(base) {}

  void insert(const Point& p) {
    upper_.insert(p);
    lower_.insert(mirror(p));
  }

  /// Removes one copy of p; throws UnknownPoint if p is not live.
  void erase(const Point& p) {
    upper_.erase(p);
    lower_.erase(mirror(p));
  }

  std::size_t size() const { return upper_.size(); }
  bool empty() const { return upper_.size() == 0; }

  /// Boundary-inclusive point-in-hull test.
  bool contains(const Point& q, QueryStats* stats = nullptr) const {
    return upper_.contains_below(q, stats) && lower_.contains_below(mirror(q), stats);
  }

  /// A live point maximizing direction.x * x + direction.y * y.
  std::optional<Point> extreme_point(const Point& direction, QueryStats* stats = nullptr) const {
    if (direction.x == 0 && direction.y == 0) throw std::invalid_argument("zero direction");
    if (direction.y >= 0) return upper_.extreme(direction, stats);
    const auto p = lower_.extreme(Point{direction.x, -direction.y}, stats);
    if (!p) return std::nullopt;
    return mirror(*p);
  }

  struct Hull {
    Chain upper;
    Chain lower;
  };

  Hull materialize_hull() const {
    Chain lower = lower_.materialize();
    for (Point& p : lower) p = mirror(p);
    return {upper_.materialize(), std::move(lower)};
  }

  /// Vertex count of the hull polygon.
  std::size_t hull_size() const { return polygon_size(materialize_hull()); }

  static std::size_t polygon_size(const Hull& h) {
    if (h.upper.empty()) return 0;
    std::size_t n = h.upper.size() + h.lower.size();
    if (h.upper.front() == h.lower.front()) --n;
    if (h.upper.back() == h.lower.back()) --n;
    return std::max<std::size_t>(n, 1);
  }

  HullCounters counters() const {
    HullCounters c = upper_.counters();
    c += lower_.counters();
    return c;
  }

  const HalfHull& upper_half() const { return upper_; }
  const HalfHull& lower_half() const { return lower_; }

 private:
  HalfHull upper_;
  HalfHull lower_;
};

}  // namespace fdh
