#include "rocstream/auc_maintainer.hpp"

namespace rocstream {

// Change in 2U when a batch w lands at a score with strictly-below counts u,
// at-score counts v and pre-update totals n:
//   2U' = 2U + w2*(2*u1 + v1) + w1*(2*n2 - 2*u2 - v2) + w1*w2
// Deletion flips the sign of the first two terms but not of w1*w2.
namespace {

std::int64_t batch_delta(const CountPair& w, const CountPair& u, const CountPair& v,
                         const CountPair& n, int sign) {
  // 128-bit intermediates: large same-score batches can overflow 64 bits
  // in the products even though the resulting 2U always fits.
  const __int128 d = static_cast<__int128>(w.c2) * (2 * u.c1 + v.c1) +
                     static_cast<__int128>(w.c1) * (2 * n.c2 - 2 * u.c2 - v.c2);
  return static_cast<std::int64_t>(sign * d + static_cast<__int128>(w.c1) * w.c2);
}

}  // namespace

void AucMaintainer::add(double score, CountPair w) {
  const double key = normalize_score(score);
  if (w.is_zero()) return;
  const CountPair u = index_.left_count(key);
  const CountPair v = index_.weight_at(key);
  const CountPair n = index_.totals();
  doubled_u_ += batch_delta(w, u, v, n, +1);
  index_.insert(key, w);
}

void AucMaintainer::remove(double score, CountPair w) {
  const double key = normalize_score(score);
  const CountPair v = index_.weight_at(key);
  if (v.is_zero()) throw ScoreNotFoundError(key);
  if (!v.covers(w)) throw InsufficientWeightError(key);
  if (w.is_zero()) return;
  const CountPair u = index_.left_count(key);
  const CountPair n = index_.totals();
  doubled_u_ += batch_delta(w, u, v, n, -1);
  index_.remove(key, w);
}

std::optional<double> AucMaintainer::auc() const {
  const CountPair n = index_.totals();
  if (n.c1 == 0 || n.c2 == 0) return std::nullopt;
  return static_cast<double>(doubled_u_) / (2.0 * static_cast<double>(n.c1) * static_cast<double>(n.c2));
}

}  // namespace rocstream
