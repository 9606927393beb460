#pragma once

#include <optional>
#include <vector>

#include "rocstream/types.hpp"

namespace rocstream {

class RocHullIndex;

// Parameters of the beta cost-ratio weight. Both must be positive and finite.
struct BetaParams {
  double alpha = 2.0;
  double beta = 2.0;
};

// Class priors; both in (0,1) and summing to 1 within 1e-12.
struct Priors {
  double pi1 = 0.5;
  double pi2 = 0.5;
};

// A convex ROC polyline in non-normalized coordinates plus the totals used
// to normalize it: starts at (0,0), coordinates non-decreasing, slopes
// non-increasing.
struct HullPolyline {
  std::vector<RocPoint> vertices;
  CountPair totals;
};

// Non-regularized incomplete beta B(x; a, b) = integral_0^x t^(a-1)(1-t)^(b-1) dt.
// Continued fraction with the symmetry switch at x > (a+1)/(a+b+2).
double incomplete_beta(double x, double a, double b);

// Complete beta B(a, b) via log-gamma.
double complete_beta(double a, double b);

void validate(const BetaParams& p);
void validate(const Priors& p);

// Per-vertex term of the empirical-priors decomposition: for a coordinate
// difference d with c = d2/(d1+d2),
//   hm = d1*B(c; a+1, b) + d2*(B(1; a, b+1) - B(c; a, b+1)).
double node_h(const CountPair& d, const BetaParams& params);

// Largest possible loss L, attained by the diagonal hull {(0,0),(1,1)}:
//   [pi1*B(pi2; a+1, b) + pi2*(B(1; a, b+1) - B(pi2; a, b+1))] / B(1; a, b).
double l_max(const Priors& priors, const BetaParams& params);

// H = 1 - L / l_max for an explicit convex polyline and arbitrary priors,
// by the closed-form segment walk. Throws NonConvexInputError when slopes
// increase anywhere.
double h_from_polyline(const HullPolyline& q, const Priors& priors, const BetaParams& params);

// Registers the hm accumulator for `params` on the hull index (no-op when the
// same parameters are already registered).
void register_h_accumulator(RocHullIndex& hull, const BetaParams& params);

// Exact H-measure with empirical priors from the hull root accumulator;
// registers the accumulator when needed. Empty when either class is absent.
std::optional<double> exact_h(RocHullIndex& hull, const BetaParams& params);

// Truncated hull per the epsilon-approximation traversal: endpoints plus the
// vertices whose surrounding coordinate gaps exceed the (1+eps) factor in
// either coordinate.
HullPolyline subset(const RocHullIndex& hull, double eps);

// H' = h_from_polyline(subset(hull, eps), priors, params). Satisfies
// |H - H'| <= eps*(1 - H) and H' <= H against the exact value for the same
// priors. Empty when either class is absent.
std::optional<double> approx_h(const RocHullIndex& hull, const Priors& priors,
                               const BetaParams& params, double eps);

}  // namespace rocstream
