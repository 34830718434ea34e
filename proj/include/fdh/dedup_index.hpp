#pragma once

// Dictionary on x-coordinates. Every x keeps the multiset of live y values; only the
// point with maximal y (the representative) is visible to the hull structures.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "fdh/error.hpp"
#include "fdh/geometry.hpp"

namespace fdh {

enum class InsertEffect { NewRepresentative, ReplaceRepresentative, Shadowed };
enum class DeleteEffect { RemoveRepresentative, UnshadowOnly };

struct InsertResult {
  InsertEffect effect;
  std::optional<Point> old_representative;  // set for ReplaceRepresentative
};

struct DeleteResult {
  DeleteEffect effect;
  std::optional<Point> successor;  // new representative after RemoveRepresentative
  int bucket = -1;                 // bucket that held the removed representative
};

class DedupIndex {
 public:
  static constexpr int kNoBucket = -1;

  DedupIndex() = default;

  void reserve(std::size_t n) { entries_.reserve(n); }

  InsertResult insert(const Point& p) {
    ++points_;
    auto [it, fresh] = entries_.try_emplace(p.x);
    XEntry& e = it->second;
    if (fresh) {
      e.top = p.y;
      e.top_count = 1;
      return {InsertEffect::NewRepresentative, std::nullopt};
    }
    if (p.y > e.top) {
      const Point old{p.x, e.top};
      e.below.insert(e.below.end(), e.top_count, e.top);
      e.top = p.y;
      e.top_count = 1;
      return {InsertEffect::ReplaceRepresentative, old};
    }
    if (p.y == e.top) {
      ++e.top_count;
    } else {
      e.below.insert(std::upper_bound(e.below.begin(), e.below.end(), p.y), p.y);
    }
    return {InsertEffect::Shadowed, std::nullopt};
  }

  DeleteResult erase(const Point& p) {
    auto it = entries_.find(p.x);
    if (it == entries_.end()) throw Error(Errc::UnknownPoint, to_string(p));
    XEntry& e = it->second;
    if (p.y < e.top) {
      auto pos = std::lower_bound(e.below.begin(), e.below.end(), p.y);
      if (pos == e.below.end() || *pos != p.y) throw Error(Errc::UnknownPoint, to_string(p));
      e.below.erase(pos);
      --points_;
      return {DeleteEffect::UnshadowOnly, std::nullopt};
    }
    if (p.y > e.top) throw Error(Errc::UnknownPoint, to_string(p));
    --points_;
    const int bucket = e.bucket;
    if (e.top_count > 1) {
      // An identical copy remains as representative; the hull does not change.
      --e.top_count;
      return {DeleteEffect::UnshadowOnly, std::nullopt};
    }
    if (e.below.empty()) {
      entries_.erase(it);
      return {DeleteEffect::RemoveRepresentative, std::nullopt, bucket};
    }
    e.top = e.below.back();
    e.top_count = 0;
    while (!e.below.empty() && e.below.back() == e.top) {
      e.below.pop_back();
      ++e.top_count;
    }
    e.bucket = kNoBucket;
    return {DeleteEffect::RemoveRepresentative, Point{p.x, e.top}, bucket};
  }

  /// Bucket currently holding the representative of x.
  std::optional<int> locate(Coord x) const {
    auto it = entries_.find(x);
    if (it == entries_.end() || it->second.bucket == kNoBucket) return std::nullopt;
    return it->second.bucket;
  }

  void set_bucket(Coord x, int bucket) {
    auto it = entries_.find(x);
    if (it != entries_.end()) it->second.bucket = bucket;
  }

  std::optional<Point> representative(Coord x) const {
    auto it = entries_.find(x);
    if (it == entries_.end()) return std::nullopt;
    return Point{x, it->second.top};
  }

  /// Number of distinct live x values.
  std::size_t distinct_x() const { return entries_.size(); }
  /// Number of live points counted with multiplicity.
  std::size_t points() const { return points_; }

  template <class F>
  void for_each_representative(F&& f) const {
    for (const auto& [x, e] : entries_) f(Point{x, e.top});
  }

 private:
  struct XEntry {
    Coord top = 0;                // representative y
    std::uint32_t top_count = 0;  // identical copies of the representative
    std::vector<Coord> below;     // remaining ys, ascending, with multiplicity
    int bucket = kNoBucket;
  };

  absl::flat_hash_map<Coord, XEntry> entries_;
  std::size_t points_ = 0;
};

}  // namespace fdh
