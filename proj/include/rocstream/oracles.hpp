#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rocstream/hmeasure.hpp"
#include "rocstream/types.hpp"

namespace rocstream::oracles {

// Reference implementations over flat point lists. They share no tree code
// with the dynamic structures, so agreement with them is evidence rather
// than tautology. Quadratic where that is the simplest honest answer.

// 2 * sum over cross-class pairs of f(s, t), f in {0, 1/2, 1}, by the O(n^2)
// double loop.
std::int64_t naive_doubled_u(const std::vector<DataPoint>& points);

// Single sweep over sorted unique scores; exact integer 2U internally.
// Empty when either class is absent.
std::optional<double> offline_auc(const std::vector<DataPoint>& points);

// Same sweep, exposing the exact doubled statistic.
std::int64_t offline_doubled_u(const std::vector<DataPoint>& points);

// (0,0) followed by the cumulative label counts at each unique score,
// ascending.
std::vector<RocPoint> offline_roc(const std::vector<DataPoint>& points);

// Minimal upper hull of a ROC polyline (monotone chain, integer cross
// products, collinear interior vertices dropped).
std::vector<RocPoint> upper_hull(const std::vector<RocPoint>& roc);

// Offline H-measure: roc -> hull -> closed-form hull walk. Priors are
// empirical (n1/n, n2/n) when absent. Empty when either class is absent.
std::optional<double> offline_h(const std::vector<DataPoint>& points,
                                const std::optional<Priors>& priors, const BetaParams& params);

}  // namespace rocstream::oracles
