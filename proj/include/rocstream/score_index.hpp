#pragma once

#include <cstddef>
#include <functional>

#include "rocstream/types.hpp"

namespace rocstream {

namespace detail {
struct ScoreNode;
}

// Height-balanced search tree over unique scores. Each node carries the
// label counts of the points at exactly that score plus the cumulative
// counts of its subtree, which makes threshold count queries logarithmic.
class ScoreIndex {
 public:
  ScoreIndex() = default;
  ~ScoreIndex();
  ScoreIndex(const ScoreIndex&) = delete;
  ScoreIndex& operator=(const ScoreIndex&) = delete;
  ScoreIndex(ScoreIndex&& o) noexcept : root_(o.root_) { o.root_ = nullptr; }
  ScoreIndex& operator=(ScoreIndex&& o) noexcept;

  // Adds w to the node at `score`, creating it if absent.
  void insert(double score, CountPair w);
  // Subtracts w from the node at `score`; the node disappears when its
  // weight reaches zero. Throws ScoreNotFoundError / InsufficientWeightError.
  void remove(double score, CountPair w);

  // Sum of weights over nodes with key strictly below `score`.
  CountPair left_count(double score) const;
  // Weight stored at `score`, or (0,0) when absent.
  CountPair weight_at(double score) const;

  CountPair totals() const;
  std::size_t unique_scores() const;
  bool empty() const { return root_ == nullptr; }
  int height() const;

  // In-order visit of (score, weight), ascending.
  void for_each(const std::function<void(double, CountPair)>& fn) const;

  // Full-tree audit of the search, balance and cumulative-count invariants.
  bool audit() const;

 private:
  detail::ScoreNode* root_ = nullptr;
};

}  // namespace rocstream
