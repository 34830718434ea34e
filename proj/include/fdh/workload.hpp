#pragma once

// Point generators, workload synthesis and the workload text format.
//
// Randomness comes from SplitMix64:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// An integer in [0, k) is next() % k, a real in [0, 1) is (next() >> 11) * 2^-53.
//
// Workload file: a header line `!fdh-workload v1 <meta>` followed by one operation per
// line, `i x y` (insert), `d x y` (delete), `q x y` (containment query) and
// `e dx dy` (extreme-point query). Lines starting with `#` are comments; the comment
// `# checkpoint` marks the end of a round, where hull sizes are compared.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fdh/error.hpp"
#include "fdh/geometry.hpp"

namespace fdh {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t k) { return next() % k; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline constexpr Coord kDefaultQuantizer = 1'000'000;

enum class Generator { Box, Bell, Disk, Circle };

inline std::optional<Generator> parse_generator(std::string_view s) {
  if (s == "box") return Generator::Box;
  if (s == "bell") return Generator::Bell;
  if (s == "disk") return Generator::Disk;
  if (s == "circle") return Generator::Circle;
  return std::nullopt;
}

inline std::string_view generator_name(Generator g) {
  switch (g) {
    case Generator::Box: return "box";
    case Generator::Bell: return "bell";
    case Generator::Disk: return "disk";
    case Generator::Circle: return "circle";
  }
  return "?";
}

/// Uniform grid points in the square [0, 1000q]^2.
inline std::vector<Point> gen_box(std::size_t n, std::uint64_t seed, Coord q = kDefaultQuantizer) {
  SplitMix64 rng(seed);
  const std::uint64_t side = static_cast<std::uint64_t>(1000 * q) + 1;
  std::vector<Point> out(n);
  for (Point& p : out) {
    p.x = static_cast<Coord>(rng.below(side));
    p.y = static_cast<Coord>(rng.below(side));
  }
  return out;
}

/// Gaussian around the origin with sigma = 1000q / 4 (Box-Muller), rounded to the grid.
inline std::vector<Point> gen_bell(std::size_t n, std::uint64_t seed, Coord q = kDefaultQuantizer) {
  SplitMix64 rng(seed);
  const double sigma = 1000.0 * static_cast<double>(q) / 4.0;
  std::vector<Point> out(n);
  for (Point& p : out) {
    const double u1 = 1.0 - rng.unit();  // (0, 1]
    const double u2 = rng.unit();
    const double r = sigma * std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    p.x = std::llround(r * std::cos(t));
    p.y = std::llround(r * std::sin(t));
  }
  return out;
}

/// Uniform grid points in the disk of radius 1000q, by rejection from the square.
inline std::vector<Point> gen_disk(std::size_t n, std::uint64_t seed, Coord q = kDefaultQuantizer) {
  SplitMix64 rng(seed);
  const Coord r = 1000 * q;
  const Wide r2 = Wide{r} * r;
  std::vector<Point> out;
  out.reserve(n);
  while (out.size() < n) {
    const Coord x = static_cast<Coord>(rng.below(static_cast<std::uint64_t>(2 * r + 1))) - r;
    const Coord y = static_cast<Coord>(rng.below(static_cast<std::uint64_t>(2 * r + 1))) - r;
    if (Wide{x} * x + Wide{y} * y <= r2) out.push_back({x, y});
  }
  return out;
}

/// Points on the circle of radius 1000q, rounded to the grid. Points that share an x
/// are collapsed onto the one with the larger y; sampling continues until n distinct x.
inline std::vector<Point> gen_circle(std::size_t n, std::uint64_t seed, Coord q = kDefaultQuantizer) {
  SplitMix64 rng(seed);
  const double r = 1000.0 * static_cast<double>(q);
  std::vector<Point> out;
  out.reserve(n);
  std::unordered_map<Coord, std::size_t> slot;
  while (out.size() < n) {
    const double t = 2.0 * std::numbers::pi * rng.unit();
    const Point p{std::llround(r * std::cos(t)), std::llround(r * std::sin(t))};
    const auto [it, fresh] = slot.try_emplace(p.x, out.size());
    if (fresh) {
      out.push_back(p);
    } else if (out[it->second].y < p.y) {
      out[it->second].y = p.y;
    }
  }
  return out;
}

inline std::vector<Point> generate(Generator g, std::size_t n, std::uint64_t seed, Coord q = kDefaultQuantizer) {
  switch (g) {
    case Generator::Box: return gen_box(n, seed, q);
    case Generator::Bell: return gen_bell(n, seed, q);
    case Generator::Disk: return gen_disk(n, seed, q);
    case Generator::Circle: return gen_circle(n, seed, q);
  }
  return {};
}

/// Reads decimal "x,y" lines and scales them to the grid. Blank lines are skipped.
inline std::vector<Point> ingest_csv(std::istream& in, Coord quantizer = kDefaultQuantizer) {
  std::vector<Point> out;
  std::string line;
  std::size_t lineno = 0;
  const auto parse = [&](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
      throw Error(Errc::MalformedLine, "line " + std::to_string(lineno) + ": " + line);
    }
    const double scaled = v * static_cast<double>(quantizer);
    if (std::fabs(scaled) > static_cast<double>(kCoordBound)) {
      throw Error(Errc::CoordinateOutOfRange, "line " + std::to_string(lineno) + ": " + line);
    }
    return static_cast<Coord>(std::llround(scaled));
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::MalformedLine, "line " + std::to_string(lineno) + ": " + line);
    const std::string_view sv(line);
    out.push_back({parse(sv.substr(0, comma)), parse(sv.substr(comma + 1))});
  }
  return out;
}

inline std::vector<Point> ingest_csv_file(const std::string& path, Coord quantizer = kDefaultQuantizer) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ingest_csv(in, quantizer);
}

enum class OpKind : char { Insert = 'i', Delete = 'd', Query = 'q', Extreme = 'e', Checkpoint = 'c' };

struct Op {
  OpKind kind;
  Point p;  // point, or direction for Extreme
  friend bool operator==(const Op&, const Op&) = default;
};

struct Workload {
  std::string meta;
  std::vector<Op> ops;
};

struct Schema {
  enum class Kind { Rounds, Mixed, Scaling };
  Kind kind = Kind::Rounds;
  unsigned queries_per_update = 1;  // x in the 1:1:x mix
  unsigned delete_percent = 50;     // scaling schema only

  static std::optional<Schema> parse(std::string_view s) {
    const auto number = [](std::string_view t) -> std::optional<unsigned> {
      unsigned v = 0;
      const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || end != t.data() + t.size()) return std::nullopt;
      return v;
    };
    if (s == "rounds") return Schema{};
    if (s == "scaling") return Schema{Kind::Scaling, 1, 50};
    if (s.starts_with("scaling:")) {
      const auto v = number(s.substr(8));
      if (!v || *v > 100) return std::nullopt;
      return Schema{Kind::Scaling, 1, *v};
    }
    if (s == "mixed") return Schema{Kind::Mixed, 1, 50};
    if (s.starts_with("mixed:")) {
      const auto v = number(s.substr(6));
      if (!v) return std::nullopt;
      return Schema{Kind::Mixed, *v, 50};
    }
    return std::nullopt;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Rounds: return "rounds";
      case Kind::Mixed: return "mixed:" + std::to_string(queries_per_update);
      case Kind::Scaling: return "scaling:" + std::to_string(delete_percent);
    }
    return "?";
  }

  /// Points drawn from the generator for a workload of size n.
  std::size_t pool_size(std::size_t n) const { return kind == Kind::Rounds ? 2 * n : n; }
};

namespace detail {

// Live point set with O(1) uniform sampling and removal.
class LiveSet {
 public:
  void add(const Point& p) { pts_.push_back(p); }
  bool empty() const { return pts_.empty(); }
  std::size_t size() const { return pts_.size(); }
  const Point& sample(SplitMix64& rng) const { return pts_[rng.below(pts_.size())]; }
  Point take(SplitMix64& rng) {
    const std::size_t k = rng.below(pts_.size());
    const Point p = pts_[k];
    pts_[k] = pts_.back();
    pts_.pop_back();
    return p;
  }

 private:
  std::vector<Point> pts_;
};

// Query stream: every eighth query is an extreme-point query with a random direction;
// the rest alternate between a live point and a fresh generator point.
class QueryMaker {
 public:
  QueryMaker(std::span<const Point> fresh, SplitMix64& rng) : fresh_(fresh), rng_(rng) {}

  Op next(const LiveSet& live) {
    const std::uint64_t roll = rng_.below(8);
    if (roll == 0) {
      Point d{0, 0};
      while (d.x == 0 && d.y == 0) {
        d = {static_cast<Coord>(rng_.below(2001)) - 1000, static_cast<Coord>(rng_.below(2001)) - 1000};
      }
      return {OpKind::Extreme, d};
    }
    if ((roll % 2 == 1 && !live.empty()) || fresh_.empty()) {
      return {OpKind::Query, live.empty() ? Point{0, 0} : live.sample(rng_)};
    }
    return {OpKind::Query, fresh_[cursor_++ % fresh_.size()]};
  }

 private:
  std::span<const Point> fresh_;
  SplitMix64& rng_;
  std::size_t cursor_ = 0;
};

}  // namespace detail

/// Two rounds: insert n, query n, delete half of the live points; insert n more,
/// query n, delete a quarter of the live points. `pool` holds the 2n insertions.
inline std::vector<Op> make_rounds(std::span<const Point> pool, std::span<const Point> fresh, std::uint64_t seed) {
  SplitMix64 rng(seed);
  detail::LiveSet live;
  detail::QueryMaker queries(fresh, rng);
  std::vector<Op> ops;
  const std::size_t n = pool.size() / 2;
  ops.reserve(5 * pool.size());
  std::size_t next = 0;
  for (int round = 0; round < 2; ++round) {
    const std::size_t count = round == 0 ? n : pool.size() - n;
    for (std::size_t k = 0; k < count; ++k) {
      ops.push_back({OpKind::Insert, pool[next]});
      live.add(pool[next++]);
    }
    for (std::size_t k = 0; k < n; ++k) ops.push_back(queries.next(live));
    const std::size_t deletions = round == 0 ? live.size() / 2 : live.size() / 4;
    for (std::size_t k = 0; k < deletions; ++k) ops.push_back({OpKind::Delete, live.take(rng)});
    ops.push_back({OpKind::Checkpoint, {0, 0}});
  }
  return ops;
}

/// Ratio 1:1:x. The first half of the pool is inserted up front; then every remaining
/// point is inserted together with one deletion of a random live point and x queries,
/// the three kinds shuffled within each step.
inline std::vector<Op> make_mixed(std::span<const Point> pool, std::span<const Point> fresh, unsigned x, std::uint64_t seed) {
  SplitMix64 rng(seed);
  detail::LiveSet live;
  detail::QueryMaker queries(fresh, rng);
  std::vector<Op> ops;
  const std::size_t prefill = pool.size() / 2;
  ops.reserve(pool.size() + (pool.size() - prefill) * (1 + x) + 2);
  for (std::size_t k = 0; k < prefill; ++k) {
    ops.push_back({OpKind::Insert, pool[k]});
    live.add(pool[k]);
  }
  ops.push_back({OpKind::Checkpoint, {0, 0}});
  std::vector<char> step;
  for (std::size_t k = prefill; k < pool.size(); ++k) {
    step.assign(x, 'q');
    step.push_back('i');
    step.push_back('d');
    for (std::size_t a = step.size() - 1; a > 0; --a) std::swap(step[a], step[rng.below(a + 1)]);
    for (char c : step) {
      if (c == 'i') {
        ops.push_back({OpKind::Insert, pool[k]});
        live.add(pool[k]);
      } else if (c == 'd') {
        if (!live.empty()) ops.push_back({OpKind::Delete, live.take(rng)});
      } else {
        ops.push_back(queries.next(live));
      }
    }
  }
  ops.push_back({OpKind::Checkpoint, {0, 0}});
  return ops;
}

/// Insert n, query n, delete the given percentage of the points.
inline std::vector<Op> make_scaling(std::span<const Point> pool, std::span<const Point> fresh, unsigned delete_percent,
                                    std::uint64_t seed) {
  SplitMix64 rng(seed);
  detail::LiveSet live;
  detail::QueryMaker queries(fresh, rng);
  std::vector<Op> ops;
  for (const Point& p : pool) {
    ops.push_back({OpKind::Insert, p});
    live.add(p);
  }
  for (std::size_t k = 0; k < pool.size(); ++k) ops.push_back(queries.next(live));
  ops.push_back({OpKind::Checkpoint, {0, 0}});
  const std::size_t deletions = pool.size() * delete_percent / 100;
  for (std::size_t k = 0; k < deletions; ++k) ops.push_back({OpKind::Delete, live.take(rng)});
  ops.push_back({OpKind::Checkpoint, {0, 0}});
  return ops;
}

inline std::vector<Op> make_ops(const Schema& schema, std::span<const Point> pool, std::span<const Point> fresh,
                                std::uint64_t seed) {
  switch (schema.kind) {
    case Schema::Kind::Rounds: return make_rounds(pool, fresh, seed);
    case Schema::Kind::Mixed: return make_mixed(pool, fresh, schema.queries_per_update, seed);
    case Schema::Kind::Scaling: return make_scaling(pool, fresh, schema.delete_percent, seed);
  }
  return {};
}

/// The workload for (generator, n, seed, schema). Insertions come from the generator
/// stream `seed`; fresh query points from stream `seed + 1`; choices from `seed + 2`.
inline Workload synthesize(Generator g, std::size_t n, std::uint64_t seed, const Schema& schema,
                           Coord quantizer = kDefaultQuantizer) {
  const auto pool = generate(g, schema.pool_size(n), seed, quantizer);
  const auto fresh = generate(g, n, seed + 1, quantizer);
  Workload w;
  std::ostringstream meta;
  meta << "generator=" << generator_name(g) << " n=" << n << " seed=" << seed << " schema=" << schema.to_string()
       << " quantizer=" << quantizer;
  w.meta = meta.str();
  w.ops = make_ops(schema, pool, fresh, seed + 2);
  return w;
}

/// Workload over ingested points: the shuffled points form the pool, and fresh query
/// points are uniform in their bounding box.
inline Workload synthesize_from_points(std::vector<Point> pts, std::uint64_t seed, const Schema& schema,
                                       const std::string& source) {
  SplitMix64 rng(seed);
  for (std::size_t a = pts.size(); a > 1; --a) std::swap(pts[a - 1], pts[rng.below(a)]);
  std::vector<Point> fresh;
  if (!pts.empty()) {
    Coord x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
    for (const Point& p : pts) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
    fresh.resize(pts.size());
    for (Point& p : fresh) {
      p.x = x0 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(x1 - x0) + 1));
      p.y = y0 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(y1 - y0) + 1));
    }
  }
  Workload w;
  w.meta = "source=" + source + " n=" + std::to_string(pts.size()) + " seed=" + std::to_string(seed) +
           " schema=" + schema.to_string();
  w.ops = make_ops(schema, pts, fresh, seed + 2);
  return w;
}

inline void write_workload(std::ostream& out, const Workload& w) {
  out << "!fdh-workload v1 " << w.meta << '\n';
  for (const Op& op : w.ops) {
    if (op.kind == OpKind::Checkpoint) {
      out << "# checkpoint\n";
    } else {
      out << static_cast<char>(op.kind) << ' ' << op.p.x << ' ' << op.p.y << '\n';
    }
  }
}

inline Workload read_workload(std::istream& in) {
  const auto bad = [](std::size_t lineno, const std::string& why) {
    return Error(Errc::MalformedWorkload, "line " + std::to_string(lineno) + ": " + why);
  };
  Workload w;
  std::string line;
  std::size_t lineno = 0;
  constexpr std::string_view kHeader = "!fdh-workload v1";
  if (!std::getline(in, line) || !std::string_view(line).starts_with(kHeader)) throw bad(1, "missing header");
  ++lineno;
  w.meta = line.size() > kHeader.size() + 1 ? line.substr(kHeader.size() + 1) : "";
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "# checkpoint") w.ops.push_back({OpKind::Checkpoint, {0, 0}});
      continue;
    }
    const char k = line[0];
    if (k != 'i' && k != 'd' && k != 'q' && k != 'e') throw bad(lineno, "unknown op '" + line.substr(0, 1) + "'");
    std::string_view rest = std::string_view(line).substr(1);
    Coord v[2];
    for (Coord& c : v) {
      if (rest.empty() || rest.front() != ' ') throw bad(lineno, "expected two integers");
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      const auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), c);
      if (ec != std::errc()) throw bad(lineno, "expected two integers");
      rest.remove_prefix(static_cast<std::size_t>(end - rest.data()));
    }
    if (!rest.empty()) throw bad(lineno, "trailing characters");
    const Point p{v[0], v[1]};
    if (!in_bounds(p)) throw Error(Errc::CoordinateOutOfRange, "line " + std::to_string(lineno));
    if (k == 'e' && p.x == 0 && p.y == 0) throw bad(lineno, "zero direction");
    w.ops.push_back({static_cast<OpKind>(k), p});
  }
  return w;
}

inline Workload read_workload_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_workload(in);
}

inline void write_workload_file(const std::string& path, const Workload& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_workload(out, w);
}

}  // namespace fdh
