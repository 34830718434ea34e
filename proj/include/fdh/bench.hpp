#pragma once

// Replay of workloads against the hull implementations, with per-operation timing,
// answer recording and cross-implementation verification.
//
// Timing: consecutive operations of the same kind are grouped into batches of at most
// 64; the clock is read once per batch and every operation in it is charged the batch
// mean. Answers: a containment query records 0 or 1, an extreme query the best score
// (or "none" on an empty set), a checkpoint the hull vertex count.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fdh/dynamic_hull.hpp"
#include "fdh/oracle.hpp"
#include "fdh/semi_static.hpp"
#include "fdh/workload.hpp"

namespace fdh {

struct Answer {
  bool present = false;  // false for updates and for extreme queries on an empty set
  Wide value = 0;
  friend bool operator==(const Answer&, const Answer&) = default;
};

inline std::string to_string(const Answer& a) {
  if (!a.present) return "none";
  Wide v = a.value;
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    const int digit = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

/// Uniform face of the implementations under test.
class HullImpl {
 public:
  virtual ~HullImpl() = default;
  virtual std::string name() const = 0;
  virtual void insert(const Point& p) = 0;
  virtual void erase(const Point& p) = 0;
  virtual bool contains(const Point& q) = 0;
  virtual std::optional<Wide> extreme_score(const Point& direction) = 0;
  virtual std::size_t hull_size() = 0;
  virtual std::optional<HullCounters> counters() const { return std::nullopt; }
};

class FdhImpl final : public HullImpl {
 public:
  explicit FdhImpl(std::size_t base) : base_(base), hull_(base) {}
  std::string name() const override { return "fdh:" + std::to_string(base_); }
  void insert(const Point& p) override { hull_.insert(p); }
  void erase(const Point& p) override { hull_.erase(p); }
  bool contains(const Point& q) override { return hull_.contains(q); }
  std::optional<Wide> extreme_score(const Point& d) override {
    const auto p = hull_.extreme_point(d);
    if (!p) return std::nullopt;
    return score(*p, d);
  }
  std::size_t hull_size() override { return hull_.hull_size(); }
  std::optional<HullCounters> counters() const override { return hull_.counters(); }
  const FullyDynamicHull& hull() const { return hull_; }

 private:
  std::size_t base_;
  FullyDynamicHull hull_;
};

class SemiStaticImpl final : public HullImpl {
 public:
  std::string name() const override { return "semistatic"; }
  void insert(const Point& p) override { s_.insert(p); }
  void erase(const Point& p) override { s_.erase(p); }
  bool contains(const Point& q) override { return s_.contains(q); }
  std::optional<Wide> extreme_score(const Point& d) override {
    const auto p = s_.extreme_point(d);
    if (!p) return std::nullopt;
    return score(*p, d);
  }
  std::size_t hull_size() override { return s_.hull_size(); }

 private:
  SemiStatic s_;
};

class OracleImpl final : public HullImpl {
 public:
  std::string name() const override { return "oracle"; }
  void insert(const Point& p) override { o_.insert(p); }
  void erase(const Point& p) override { o_.erase(p); }
  bool contains(const Point& q) override { return o_.contains(q); }
  std::optional<Wide> extreme_score(const Point& d) override { return o_.extreme_score(d); }
  std::size_t hull_size() override { return o_.hull_size(); }

 private:
  OracleSet o_;
};

/// Parses "fdh:<base>", "semistatic" or "oracle"; nullptr for anything else.
inline std::unique_ptr<HullImpl> make_impl(std::string_view spec) {
  if (spec == "semistatic") return std::make_unique<SemiStaticImpl>();
  if (spec == "oracle") return std::make_unique<OracleImpl>();
  if (spec.starts_with("fdh:")) {
    std::size_t base = 0;
    const auto digits = spec.substr(4);
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), base);
    if (ec != std::errc() || end != digits.data() + digits.size() || base == 0 || (base & (base - 1)) != 0) return nullptr;
    return std::make_unique<FdhImpl>(base);
  }
  return nullptr;
}

struct KindStats {
  std::size_t count = 0;
  double mean_ns = 0;
  double median_ns = 0;
};

struct RunReport {
  std::string impl;
  std::vector<float> ns;        // per operation
  std::vector<Answer> answers;  // per operation
  std::size_t completed = 0;    // operations replayed
  bool timed_out = false;
  std::size_t yes = 0, no = 0;
  std::vector<std::size_t> checkpoint_hull_sizes;
  std::optional<HullCounters> counters;
  std::size_t peak_rss_kb = 0;
  double total_seconds = 0;

  KindStats stats(const std::vector<Op>& ops, const std::vector<OpKind>& kinds) const {
    std::vector<float> v;
    for (std::size_t i = 0; i < completed; ++i) {
      if (std::find(kinds.begin(), kinds.end(), ops[i].kind) != kinds.end()) v.push_back(ns[i]);
    }
    KindStats s;
    s.count = v.size();
    if (v.empty()) return s;
    s.mean_ns = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    s.median_ns = v[v.size() / 2];
    return s;
  }
};

/// Resident-set high-water mark of this process in KiB (0 where unavailable).
inline std::size_t peak_rss_kb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.starts_with("VmHWM:")) return std::strtoull(line.c_str() + 6, nullptr, 10);
  }
  return 0;
}

/// Seconds from FDH_TIME_LIMIT_SECS, if set to a positive number.
inline std::optional<double> time_limit_from_env() {
  const char* v = std::getenv("FDH_TIME_LIMIT_SECS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const double s = std::strtod(v, &end);
  if (*end != '\0' || !(s > 0)) return std::nullopt;
  return s;
}

inline RunReport replay(HullImpl& impl, const Workload& w, std::optional<double> time_limit = std::nullopt) {
  using Clock = std::chrono::steady_clock;
  constexpr std::size_t kBatch = 64;
  RunReport r;
  r.impl = impl.name();
  const std::size_t n = w.ops.size();
  r.ns.assign(n, 0.0f);
  r.answers.assign(n, Answer{});
  const auto start = Clock::now();
  std::size_t i = 0;
  while (i < n) {
    const OpKind kind = w.ops[i].kind;
    std::size_t end = i + 1;
    while (end < n && end - i < kBatch && w.ops[end].kind == kind) ++end;
    const auto t0 = Clock::now();
    switch (kind) {
      case OpKind::Insert:
        for (std::size_t k = i; k < end; ++k) impl.insert(w.ops[k].p);
        break;
      case OpKind::Delete:
        for (std::size_t k = i; k < end; ++k) impl.erase(w.ops[k].p);
        break;
      case OpKind::Query:
        for (std::size_t k = i; k < end; ++k) r.answers[k] = {true, impl.contains(w.ops[k].p) ? 1 : 0};
        break;
      case OpKind::Extreme:
        for (std::size_t k = i; k < end; ++k) {
          const auto s = impl.extreme_score(w.ops[k].p);
          r.answers[k] = {s.has_value(), s.value_or(0)};
        }
        break;
      case OpKind::Checkpoint:
        for (std::size_t k = i; k < end; ++k) {
          const std::size_t h = impl.hull_size();
          r.answers[k] = {true, static_cast<Wide>(h)};
          r.checkpoint_hull_sizes.push_back(h);
        }
        break;
    }
    const auto t1 = Clock::now();
    const float per_op = static_cast<float>(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(end - i));
    std::fill(r.ns.begin() + static_cast<long>(i), r.ns.begin() + static_cast<long>(end), per_op);
    if (kind == OpKind::Query) {
      for (std::size_t k = i; k < end; ++k) (r.answers[k].value != 0 ? r.yes : r.no) += 1;
    }
    i = end;
    r.completed = i;
    if (time_limit && std::chrono::duration<double>(Clock::now() - start).count() > *time_limit) {
      r.timed_out = i < n;
      break;
    }
  }
  r.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.counters = impl.counters();
  r.peak_rss_kb = peak_rss_kb();
  return r;
}

inline void write_run_csv(std::ostream& out, const Workload& w, const RunReport& r) {
  out << "op_index,kind,ns,answer\n";
  for (std::size_t i = 0; i < r.completed; ++i) {
    const Op& op = w.ops[i];
    out << i << ',' << static_cast<char>(op.kind) << ',' << r.ns[i] << ',';
    if (op.kind == OpKind::Query || op.kind == OpKind::Extreme || op.kind == OpKind::Checkpoint) out << to_string(r.answers[i]);
    out << '\n';
  }
  out << "# impl=" << r.impl << " ops=" << r.completed << " timed_out=" << (r.timed_out ? 1 : 0)
      << " seconds=" << r.total_seconds << '\n';
  const std::pair<const char*, std::vector<OpKind>> groups[] = {
      {"insert", {OpKind::Insert}},
      {"delete", {OpKind::Delete}},
      {"update", {OpKind::Insert, OpKind::Delete}},
      {"query", {OpKind::Query, OpKind::Extreme}},
      {"all", {OpKind::Insert, OpKind::Delete, OpKind::Query, OpKind::Extreme}}};
  for (const auto& [label, kinds] : groups) {
    const KindStats s = r.stats(w.ops, kinds);
    out << "# " << label << " count=" << s.count << " mean_ns=" << s.mean_ns << " median_ns=" << s.median_ns << '\n';
  }
  out << "# answers yes=" << r.yes << " no=" << r.no << '\n';
  out << "# hull_sizes";
  for (std::size_t h : r.checkpoint_hull_sizes) out << ' ' << h;
  out << '\n';
  if (r.counters) {
    out << "# counters merges=" << r.counters->merges << " moves=" << r.counters->moves
        << " repair_steps=" << r.counters->repair_steps << " build_touches=" << r.counters->build_touches << '\n';
  }
  out << "# peak_rss_kb=" << r.peak_rss_kb << '\n';
}

struct VerifyResult {
  bool pass = true;
  std::optional<std::size_t> first_divergence;  // op index
  std::string detail;
};

/// Compares answers of every run against the first one.
inline VerifyResult verify(const Workload& w, const std::vector<RunReport>& runs) {
  VerifyResult v;
  if (runs.size() < 2) return v;
  const RunReport& ref = runs.front();
  for (std::size_t i = 0; i < w.ops.size(); ++i) {
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (i >= runs[r].completed || i >= ref.completed) {
        v.pass = false;
        v.first_divergence = i;
        v.detail = "run stopped before op " + std::to_string(i);
        return v;
      }
      if (runs[r].answers[i] != ref.answers[i]) {
        v.pass = false;
        v.first_divergence = i;
        std::ostringstream s;
        s << "op " << i << " (" << static_cast<char>(w.ops[i].kind) << ' ' << w.ops[i].p.x << ' ' << w.ops[i].p.y
          << "): " << ref.impl << '=' << to_string(ref.answers[i]) << ' ' << runs[r].impl << '='
          << to_string(runs[r].answers[i]);
        v.detail = s.str();
        return v;
      }
    }
  }
  return v;
}

struct CounterRow {
  std::size_t ops = 0;
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  HullCounters upper;
  HullCounters lower;
};

/// Counter snapshots after every power-of-two prefix of the update stream and at the end.
inline std::vector<CounterRow> counter_profile(const Workload& w, std::size_t base) {
  FullyDynamicHull h(base);
  std::vector<CounterRow> rows;
  CounterRow row;
  std::size_t next_mark = 1;
  const auto snap = [&] {
    row.upper = h.upper_half().counters();
    row.lower = h.lower_half().counters();
    rows.push_back(row);
  };
  for (std::size_t i = 0; i < w.ops.size(); ++i) {
    const Op& op = w.ops[i];
    if (op.kind == OpKind::Insert) {
      h.insert(op.p);
      ++row.inserts;
    } else if (op.kind == OpKind::Delete) {
      h.erase(op.p);
      ++row.deletes;
    }
    row.ops = i + 1;
    if (row.ops == next_mark) {
      snap();
      next_mark *= 2;
    }
  }
  if (rows.empty() || rows.back().ops != w.ops.size()) snap();
  return rows;
}

inline void write_counter_csv(std::ostream& out, const std::vector<CounterRow>& rows) {
  out << "prefix_ops,inserts,deletes,merges,moves,repair_steps,build_touches,"
         "upper_moves,upper_repair_steps,lower_moves,lower_repair_steps\n";
  for (const CounterRow& r : rows) {
    HullCounters t = r.upper;
    t += r.lower;
    out << r.ops << ',' << r.inserts << ',' << r.deletes << ',' << t.merges << ',' << t.moves << ',' << t.repair_steps << ','
        << t.build_touches << ',' << r.upper.moves << ',' << r.upper.repair_steps << ',' << r.lower.moves << ','
        << r.lower.repair_steps << '\n';
  }
}

}  // namespace fdh
