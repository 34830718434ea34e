#pragma once

// Tournament of losers over k sorted input runs. The winner (global minimum) sits at
// slot 0; each internal slot stores the run that lost the match played there.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdh {

template <class T, class Less = std::less<T>>
class LoserTree {
 public:
  LoserTree() = default;
  explicit LoserTree(std::vector<std::span<const T>> runs, Less less = Less()) : less_(less) { reset(std::move(runs)); }

  /// Restarts the tournament over new runs, reusing the allocated storage.
  void reset(std::vector<std::span<const T>> runs) {
    runs_ = std::move(runs);
    pos_.assign(runs_.size(), 0);
    k_ = 1;
    while (k_ < runs_.size()) k_ *= 2;
    tree_.assign(k_, kExhausted);
    total_ = 0;
    for (const auto& run : runs_) total_ += run.size();
    init();
  }

  /// The run vector handed to the last reset, for reuse by the caller.
  std::vector<std::span<const T>> release_runs() {
    runs_.clear();
    return std::move(runs_);
  }

  bool empty() const { return tree_[0] == kExhausted; }
  std::size_t size() const { return total_; }

  const T& top() const { return runs_[tree_[0]][pos_[tree_[0]]]; }

  T pop() {
    const std::size_t r = tree_[0];
    T value = runs_[r][pos_[r]];
    ++pos_[r];
    --total_;
    replay(r);
    return value;
  }

  /// Drains the tree in order into `out`.
  void drain(std::vector<T>& out) {
    out.reserve(out.size() + total_);
    while (!empty()) out.push_back(pop());
  }

 private:
  static constexpr std::size_t kExhausted = static_cast<std::size_t>(-1);

  bool run_done(std::size_t r) const { return r == kExhausted || pos_[r] >= runs_[r].size(); }

  // True when run a should win against run b.
  bool beats(std::size_t a, std::size_t b) const {
    if (run_done(a)) return false;
    if (run_done(b)) return true;
    return less_(runs_[a][pos_[a]], runs_[b][pos_[b]]);
  }

  void init() {
    if (runs_.empty()) return;
    // Winners of each subtree, computed bottom-up over an implicit tree of 2k slots.
    std::vector<std::size_t>& winner = winner_;
    winner.assign(2 * k_, kExhausted);
    for (std::size_t r = 0; r < runs_.size(); ++r) winner[k_ + r] = r;
    for (std::size_t x = k_ - 1; x >= 1; --x) {
      const std::size_t a = winner[2 * x], b = winner[2 * x + 1];
      if (beats(b, a)) {
        winner[x] = b;
        tree_[x] = a;
      } else {
        winner[x] = a;
        tree_[x] = b;
      }
    }
    tree_[0] = run_done(winner[1]) ? kExhausted : winner[1];
  }

  void replay(std::size_t r) {
    std::size_t w = r;
    for (std::size_t x = (k_ + r) / 2; x >= 1; x /= 2) {
      if (beats(tree_[x], w)) std::swap(tree_[x], w);
    }
    tree_[0] = run_done(w) ? kExhausted : w;
  }

  std::vector<std::span<const T>> runs_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> tree_{kExhausted};
  std::vector<std::size_t> winner_;
  std::size_t k_ = 1;
  std::size_t total_ = 0;
  Less less_;
};

}  // namespace fdh
