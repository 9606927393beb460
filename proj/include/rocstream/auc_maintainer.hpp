#pragma once

#include <cstdint>
#include <optional>

#include "rocstream/score_index.hpp"
#include "rocstream/types.hpp"

namespace rocstream {

// Maintains twice the Mann-Whitney U statistic under additions and deletions
// of same-score point batches. 2U stays an exact word-size integer (ties
// contribute halves); division happens only when the AUC value is read.
class AucMaintainer {
 public:
  void add(double score, CountPair w);
  void remove(double score, CountPair w);

  // U / (n1 * n2); empty when either class is absent.
  std::optional<double> auc() const;

  std::int64_t doubled_u() const { return doubled_u_; }
  CountPair totals() const { return index_.totals(); }
  const ScoreIndex& index() const { return index_; }

 private:
  ScoreIndex index_;
  std::int64_t doubled_u_ = 0;
};

}  // namespace rocstream
