#pragma once

// Deletion-only upper hull tree.
//
// Leaves are the x-sorted input, padded to a power of two and stored as an implicit
// complete binary tree (node 1 is the root, children of x are 2x and 2x+1). The tree
// never changes shape. Every live leaf carries one prev/next pair; at any moment the
// pairs encode the root hull as a doubly linked list, and every internal node x
// remembers where its bridge (bl, br) was spliced in:
//
//   hull(x) = hull(u)[.. bl] + hull(v)[br ..]
//   lsplit  = successor of bl on hull(u)   (head of the part hidden from x)
//   rsplit  = predecessor of br on hull(v) (tail of the part hidden from x)
//
// so the hidden stretches [lsplit .. last(u)] and [first(v) .. rsplit] are the per-node
// segments of points that are on a child hull but not on hull(x). Undoing a splice
// restores the children's lists in O(1).
//
// A deletion undoes the splices on the root-to-leaf path, kills the leaf, and redoes
// the splices bottom-up. Only a node whose bridge endpoint died needs a new bridge;
// it is found by walking over the points that fill the gap, which are exactly the
// points newly promoted onto the child or parent hull.

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fdh/error.hpp"
#include "fdh/geometry.hpp"

namespace fdh {

/// Node visits of one query descent.
struct QueryStats {
  std::uint64_t node_visits = 0;
};

class UpperHullTree {
 public:
  using Index = std::int32_t;
  static constexpr Index kNone = -1;

  UpperHullTree() = default;

  /// Builds from x-sorted points with distinct x in O(n).
  explicit UpperHullTree(std::span<const Point> sorted) { build(sorted); }

  void build(std::span<const Point> sorted) {
    if (sorted.empty()) throw Error(Errc::Empty, "hull tree needs at least one point");
    detail::check_sorted_distinct(sorted);

    pts_.assign(sorted.begin(), sorted.end());
    const std::size_t n = pts_.size();
    leaves_ = std::bit_ceil(n);
    height_ = static_cast<int>(std::countr_zero(leaves_));
    alive_.assign(n, 1);
    next_.assign(n, kNone);
    prev_.assign(n, kNone);
    nodes_.assign(2 * leaves_, Node{});
    live_ = n;
    build_touches_ = 0;
    repair_steps_ = 0;

    for (std::size_t i = 0; i < n; ++i) {
      nodes_[leaves_ + i].first = static_cast<Index>(i);
      nodes_[leaves_ + i].last = static_cast<Index>(i);
    }
    build_touches_ += n;
    for (std::size_t x = leaves_ - 1; x >= 1; --x) {
      ++build_touches_;
      build_node(x);
    }
  }

  /// Drops all points but keeps the allocated storage for the next build.
  void clear() {
    pts_.clear();
    alive_.clear();
    next_.clear();
    prev_.clear();
    nodes_.clear();
    leaves_ = 0;
    height_ = 0;
    live_ = 0;
  }

  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }
  /// Number of leaves given at construction.
  std::size_t capacity() const { return pts_.size(); }
  /// Root-to-leaf edge count; descents visit at most height() + 1 nodes.
  int height() const { return height_; }

  std::span<const Point> leaves() const { return pts_; }
  bool alive(Index leaf) const { return alive_[static_cast<std::size_t>(leaf)] != 0; }

  std::uint64_t build_touches() const { return build_touches_; }
  std::uint64_t repair_steps() const { return repair_steps_; }

  /// Leaf index of p, or kNone.
  Index find(const Point& p) const {
    const auto it = std::lower_bound(pts_.begin(), pts_.end(), p.x, [](const Point& a, Coord x) { return a.x < x; });
    if (it == pts_.end() || *it != p) return kNone;
    return static_cast<Index>(it - pts_.begin());
  }

  void erase(const Point& p) {
    const Index leaf = find(p);
    if (leaf == kNone) throw Error(Errc::UnknownPoint, to_string(p));
    erase_leaf(leaf);
  }

  void erase_leaf(Index leaf) {
    if (leaf < 0 || static_cast<std::size_t>(leaf) >= pts_.size()) {
      throw Error(Errc::UnknownPoint, "leaf " + std::to_string(leaf));
    }
    if (!alive(leaf)) throw Error(Errc::AlreadyDeleted, to_string(pts_[static_cast<std::size_t>(leaf)]));

    const std::size_t leaf_node = leaves_ + static_cast<std::size_t>(leaf);
    Index hints[64];

    // Top-down: restore the children's lists on every path node.
    for (int level = 0; level < height_; ++level) {
      const std::size_t x = leaf_node >> (height_ - level);
      Node& node = nodes_[x];
      ++repair_steps_;
      hints[level] = kNone;
      if (node.bl != kNone) {
        unsplice(node);
        if (leaf == node.bl) {
          hints[level] = prev_[static_cast<std::size_t>(leaf)];
        } else if (leaf == node.br) {
          hints[level] = next_[static_cast<std::size_t>(leaf)];
        }
      }
    }

    alive_[static_cast<std::size_t>(leaf)] = 0;
    next_[static_cast<std::size_t>(leaf)] = kNone;
    prev_[static_cast<std::size_t>(leaf)] = kNone;
    nodes_[leaf_node].first = kNone;
    nodes_[leaf_node].last = kNone;
    --live_;

    // Bottom-up: recompute bridges where an endpoint died and splice again.
    for (int level = height_ - 1; level >= 0; --level) {
      const std::size_t x = leaf_node >> (height_ - level);
      rejoin(x, leaf, hints[level]);
    }
  }

  /// q lies on or below the upper hull of the live points.
  bool contains_below(const Point& q, QueryStats* stats = nullptr) const {
    if (live_ == 0) return false;
    const Node& root = nodes_[1];
    if (q.x < pts_[idx(root.first)].x || q.x > pts_[idx(root.last)].x) return false;
    std::size_t x = 1;
    std::uint64_t visits = 0;
    bool result = false;
    while (true) {
      ++visits;
      if (x >= leaves_) {
        const Point& p = pts_[x - leaves_];
        result = q.x == p.x && q.y <= p.y;
        break;
      }
      const Node& node = nodes_[x];
      if (node.bl == kNone) {
        x = nodes_[2 * x].first != kNone ? 2 * x : 2 * x + 1;
        continue;
      }
      const Point& a = pts_[idx(node.bl)];
      const Point& b = pts_[idx(node.br)];
      if (q.x < a.x) {
        x = 2 * x;
      } else if (q.x > b.x) {
        x = 2 * x + 1;
      } else {
        result = orientation(a, b, q) <= 0;
        break;
      }
    }
    if (stats) stats->node_visits += visits;
    return result;
  }

  /// Neighbours of q on the upper hull of live + {q}; see chain_tangents for the
  /// one-sided and no-contact conventions. Throws QueryInsideHull when q is covered.
  std::optional<Tangents> tangents(const Point& q, QueryStats* stats = nullptr) const {
    if (live_ == 0) throw Error(Errc::Empty, "tangents on empty hull tree");
    if (contains_below(q, stats)) throw Error(Errc::QueryInsideHull, to_string(q));
    return tangents_outside(q, stats);
  }

  /// As tangents() but skips the containment check; q must be outside.
  std::optional<Tangents> tangents_outside(const Point& q, QueryStats* stats = nullptr) const {
    return tangents_from(1, q, stats);
  }

  struct Location {
    bool inside = false;
    std::optional<Tangents> tangents;  // set when q is outside and has a contact
  };

  /// Containment and, for an outside q, its tangents, in at most two descents.
  ///
  /// The two tangent descents share the containment path for as long as they agree
  /// with it. A tangent descent can only leave that path at a node whose bridge, when
  /// extended past q.x, passes on or below q; the node's hull then lies below q as well, so
  /// q is outside and the containment descent can stop there.
  Location locate(const Point& q, QueryStats* stats = nullptr) const {
    Location out;
    if (live_ == 0) return out;
    const Node& root = nodes_[1];
    if (q.x < pts_[idx(root.first)].x || q.x > pts_[idx(root.last)].x) {
      out.tangents = tangents_from(1, q, stats);
      return out;
    }
    std::size_t x = 1;
    std::uint64_t shared = 0;  // nodes passed by all three descents
    while (x < leaves_) {
      const Node& node = nodes_[x];
      if (node.bl == kNone) {
        x = nodes_[2 * x].first != kNone ? 2 * x : 2 * x + 1;
        ++shared;
        continue;
      }
      const Point& a = pts_[idx(node.bl)];
      const Point& b = pts_[idx(node.br)];
      if (q.x < a.x) {
        if (orientation(q, a, b) >= 0) break;  // right tangent turns away
        x = 2 * x;
      } else if (q.x > b.x) {
        if (orientation(b, q, a) >= 0) break;  // left tangent turns away
        x = 2 * x + 1;
      } else {
        if (orientation(a, b, q) <= 0) {
          if (stats) stats->node_visits += shared + 1;
          out.inside = true;
          return out;
        }
        break;
      }
      ++shared;
    }
    if (x >= leaves_) {
      const Point& p = pts_[x - leaves_];
      if (q.x == p.x && q.y <= p.y) {
        if (stats) stats->node_visits += shared + 1;
        out.inside = true;
        return out;
      }
    }
    if (stats) stats->node_visits += shared;
    out.tangents = tangents_from(x, q, stats);
    return out;
  }

  /// Live point maximizing direction.x * x + direction.y * y, for direction.y >= 0.
  std::optional<Point> extreme(const Point& direction, QueryStats* stats = nullptr) const {
    if (live_ == 0) return std::nullopt;
    std::size_t x = 1;
    std::uint64_t visits = 1;
    while (x < leaves_) {
      const Node& node = nodes_[x];
      if (node.bl == kNone) {
        x = nodes_[2 * x].first != kNone ? 2 * x : 2 * x + 1;
      } else {
        x = score(pts_[idx(node.br)], direction) > score(pts_[idx(node.bl)], direction) ? 2 * x + 1 : 2 * x;
      }
      ++visits;
    }
    if (stats) stats->node_visits += visits;
    return pts_[x - leaves_];
  }

  /// Upper hull of the live points, O(h).
  Chain materialize() const {
    Chain out;
    if (live_ == 0) return out;
    for (Index i = nodes_[1].first; i != kNone; i = next_[idx(i)]) out.push_back(pts_[idx(i)]);
    return out;
  }

  template <class F>
  void for_each_live(F&& f) const {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (alive_[i]) f(pts_[i]);
    }
  }

  /// Hull of node `x`'s subtree, recovered by undoing splices on a copy. Test aid, O(n).
  Chain node_hull(std::size_t x) const {
    UpperHullTree copy = *this;
    int depth = std::bit_width(x) - 1;
    for (int level = 0; level < depth; ++level) {
      Node& node = copy.nodes_[x >> (depth - level)];
      if (node.bl != kNone) copy.unsplice(node);
    }
    Chain out;
    for (Index i = copy.nodes_[x].first; i != kNone; i = copy.next_[idx(i)]) {
      out.push_back(copy.pts_[idx(i)]);
      if (i == copy.nodes_[x].last) break;
    }
    return out;
  }

  /// Depth (root = 0) of the highest node whose hull contains the live leaf.
  int owner_depth(Index leaf) const {
    const std::size_t leaf_node = leaves_ + static_cast<std::size_t>(leaf);
    const Point& p = pts_[idx(leaf)];
    for (int level = 0; level <= height_; ++level) {
      const Chain hull = node_hull(leaf_node >> (height_ - level));
      if (std::find(hull.begin(), hull.end(), p) != hull.end()) return level;
    }
    return -1;
  }

 private:
  struct Node {
    Index bl = kNone;
    Index br = kNone;
    Index lsplit = kNone;
    Index rsplit = kNone;
    Index first = kNone;  // leftmost live leaf of the subtree
    Index last = kNone;   // rightmost live leaf of the subtree
  };

  static std::size_t idx(Index i) { return static_cast<std::size_t>(i); }
  const Point& at(Index i) const { return pts_[idx(i)]; }

  void splice(Node& node, Index a, Index b) {
    node.bl = a;
    node.br = b;
    node.lsplit = next_[idx(a)];
    node.rsplit = prev_[idx(b)];
    next_[idx(a)] = b;
    prev_[idx(b)] = a;
  }

  void unsplice(const Node& node) {
    next_[idx(node.bl)] = node.lsplit;
    if (node.lsplit != kNone) prev_[idx(node.lsplit)] = node.bl;
    prev_[idx(node.br)] = node.rsplit;
    if (node.rsplit != kNone) next_[idx(node.rsplit)] = node.br;
  }

  // Children share no list cells; returns false when one side is empty.
  bool adopt_single_child(Node& node, const Node& u, const Node& v) {
    if (u.first != kNone && v.first != kNone) return false;
    const Node& only = u.first != kNone ? u : v;
    node.bl = node.br = node.lsplit = node.rsplit = kNone;
    node.first = only.first;
    node.last = only.last;
    return true;
  }

  void build_node(std::size_t x) {
    Node& node = nodes_[x];
    const Node& u = nodes_[2 * x];
    const Node& v = nodes_[2 * x + 1];
    if (adopt_single_child(node, u, v)) return;

    // Walk outward from the innermost pair; every step hides one point from x
    // and all its ancestors. Collinear candidates are skipped so that the bridge is
    // the longest one and hulls carry no collinear vertices.
    Index a = u.last;
    Index b = v.first;
    // Every orientation test touches one candidate point, including the failing
    // test that ends each walk.
    const auto hides = [&](Index cand) {
      if (cand == kNone) return false;
      ++build_touches_;
      return orientation(at(a), at(b), at(cand)) >= 0;
    };
    bool moved = true;
    while (moved) {
      moved = false;
      while (hides(prev_[idx(a)])) {
        a = prev_[idx(a)];
        moved = true;
      }
      while (hides(next_[idx(b)])) {
        b = next_[idx(b)];
        moved = true;
      }
    }
    splice(node, a, b);
    node.first = u.first;
    node.last = v.last;
  }

  void rejoin(std::size_t x, Index dead, Index hint) {
    Node& node = nodes_[x];
    const Node& u = nodes_[2 * x];
    const Node& v = nodes_[2 * x + 1];
    if (adopt_single_child(node, u, v)) return;

    Index a = node.bl;
    Index b = node.br;
    if (dead == a) {
      left_endpoint_lost(hint, u, at(dead), a, b);
    } else if (dead == b) {
      right_endpoint_lost(hint, v, at(dead), a, b);
    }
    splice(node, a, b);
    node.first = u.first;
    node.last = v.last;
  }

  // The left bridge endpoint p died. The new bridge is steeper: starting from the
  // slope of the old bridge, sweep the slope upward and move whichever tangent point
  // reaches its breakpoint first. `pred` is p's old predecessor on hull(u); it stays on
  // hull(x), so the left pointer never passes it.
  void left_endpoint_lost(Index pred, const Node& u, const Point& p, Index& a, Index& b) {
    a = pred != kNone ? pred : u.first;
    const Point& old_right = at(b);
    while (next_[idx(a)] != kNone && compare_slopes(at(a), at(next_[idx(a)]), p, old_right) > 0) {
      a = next_[idx(a)];
      ++repair_steps_;
    }
    while (true) {
      const Index pa = prev_[idx(a)];
      const Index pb = prev_[idx(b)];
      const bool move_a = pa != kNone && orientation(at(a), at(b), at(pa)) >= 0;
      const bool move_b = pb != kNone && orientation(at(a), at(b), at(pb)) > 0;
      if (move_a && move_b) {
        if (compare_slopes(at(pa), at(a), at(pb), at(b)) < 0) {
          a = pa;
        } else {
          b = pb;
        }
      } else if (move_a) {
        a = pa;
      } else if (move_b) {
        b = pb;
      } else {
        break;
      }
      ++repair_steps_;
    }
  }

  // Mirror image: the right endpoint died, the bridge flattens, both pointers move right.
  void right_endpoint_lost(Index succ, const Node& v, const Point& p, Index& a, Index& b) {
    b = succ != kNone ? succ : v.last;
    const Point& old_left = at(a);
    while (prev_[idx(b)] != kNone && compare_slopes(at(prev_[idx(b)]), at(b), old_left, p) < 0) {
      b = prev_[idx(b)];
      ++repair_steps_;
    }
    while (true) {
      const Index na = next_[idx(a)];
      const Index nb = next_[idx(b)];
      const bool move_a = na != kNone && orientation(at(a), at(b), at(na)) > 0;
      const bool move_b = nb != kNone && orientation(at(a), at(b), at(nb)) >= 0;
      if (move_a && move_b) {
        if (compare_slopes(at(b), at(nb), at(a), at(na)) > 0) {
          b = nb;
        } else {
          a = na;
        }
      } else if (move_a) {
        a = na;
      } else if (move_b) {
        b = nb;
      } else {
        break;
      }
      ++repair_steps_;
    }
  }

  // Among live points left of q.x: minimizes slope to q, ties to the farthest (collinear points are not hull vertices).
  // Both tangent descents started at node `start`, which must lie on both paths.
  std::optional<Tangents> tangents_from(std::size_t start, const Point& q, QueryStats* stats) const {
    const Index left = left_tangent(q, stats, start);
    const Index right = right_tangent(q, stats, start);
    if (left == kNone && right == kNone) return std::nullopt;
    const Point& l = pts_[idx(left != kNone ? left : right)];
    const Point& r = pts_[idx(right != kNone ? right : left)];
    return Tangents{l, r};
  }

  Index left_tangent(const Point& q, QueryStats* stats, std::size_t start = 1) const {
    std::size_t x = start;
    std::uint64_t visits = 0;
    Index result = kNone;
    while (true) {
      ++visits;
      if (x >= leaves_) {
        const Index leaf = static_cast<Index>(x - leaves_);
        if (alive_[idx(leaf)] && pts_[idx(leaf)].x < q.x) result = leaf;
        break;
      }
      const Node& node = nodes_[x];
      if (node.first == kNone) break;
      if (node.bl == kNone) {
        x = nodes_[2 * x].first != kNone ? 2 * x : 2 * x + 1;
        continue;
      }
      const Point& a = at(node.bl);
      const Point& b = at(node.br);
      if (q.x > b.x && orientation(b, q, a) < 0) {
        x = 2 * x + 1;
      } else {
        x = 2 * x;
      }
    }
    if (stats) stats->node_visits += visits;
    return result;
  }

  Index right_tangent(const Point& q, QueryStats* stats, std::size_t start = 1) const {
    std::size_t x = start;
    std::uint64_t visits = 0;
    Index result = kNone;
    while (true) {
      ++visits;
      if (x >= leaves_) {
        const Index leaf = static_cast<Index>(x - leaves_);
        if (alive_[idx(leaf)] && pts_[idx(leaf)].x > q.x) result = leaf;
        break;
      }
      const Node& node = nodes_[x];
      if (node.first == kNone) break;
      if (node.bl == kNone) {
        x = nodes_[2 * x].first != kNone ? 2 * x : 2 * x + 1;
        continue;
      }
      const Point& a = at(node.bl);
      const Point& b = at(node.br);
      if (q.x < a.x && orientation(q, a, b) < 0) {
        x = 2 * x;
      } else {
        x = 2 * x + 1;
      }
    }
    if (stats) stats->node_visits += visits;
    return result;
  }

  std::vector<Point> pts_;
  std::vector<std::uint8_t> alive_;
  std::vector<Index> next_;
  std::vector<Index> prev_;
  std::vector<Node> nodes_;
  std::size_t leaves_ = 0;
  int height_ = 0;
  std::size_t live_ = 0;
  std::uint64_t build_touches_ = 0;
  std::uint64_t repair_steps_ = 0;
};

/// Upper and lower deletion-only hulls over one point set. The lower side is an
/// upper tree over the mirrored points.
class HullTree {
 public:
  HullTree() = default;
  explicit HullTree(std::span<const Point> sorted) : upper_(sorted), lower_(mirrored(sorted)) {}

  std::size_t size() const { return upper_.size(); }
  bool empty() const { return upper_.empty(); }

  void erase(const Point& p) {
    upper_.erase(p);
    lower_.erase(mirror(p));
  }

  bool contains_below_upper(const Point& q, QueryStats* s = nullptr) const { return upper_.contains_below(q, s); }
  bool contains_above_lower(const Point& q, QueryStats* s = nullptr) const {
    return lower_.contains_below(mirror(q), s);
  }
  bool contains(const Point& q) const { return contains_below_upper(q) && contains_above_lower(q); }

  std::optional<Tangents> tangents_upper(const Point& q, QueryStats* s = nullptr) const {
    return upper_.tangents(q, s);
  }
  std::optional<Tangents> tangents_lower(const Point& q, QueryStats* s = nullptr) const {
    auto t = lower_.tangents(mirror(q), s);
    if (t) *t = Tangents{mirror(t->left), mirror(t->right)};
    return t;
  }

  std::optional<Point> extreme_point_upper(const Point& direction, QueryStats* s = nullptr) const {
    return upper_.extreme(direction, s);
  }
  /// For direction.y <= 0.
  std::optional<Point> extreme_point_lower(const Point& direction, QueryStats* s = nullptr) const {
    auto p = lower_.extreme(mirror(direction), s);
    if (p) *p = mirror(*p);
    return p;
  }

  Chain materialize_upper() const { return upper_.materialize(); }
  Chain materialize_lower() const {
    Chain c = lower_.materialize();
    for (Point& p : c) p = mirror(p);
    return c;
  }

  const UpperHullTree& upper() const { return upper_; }
  const UpperHullTree& lower_mirrored() const { return lower_; }

 private:
  static std::vector<Point> mirrored(std::span<const Point> pts) {
    std::vector<Point> out(pts.begin(), pts.end());
    for (Point& p : out) p = mirror(p);
    return out;
  }

  UpperHullTree upper_;
  UpperHullTree lower_;
};

}  // namespace fdh
