#include "rocstream/oracles.hpp"

#include <algorithm>

namespace rocstream::oracles {

std::int64_t naive_doubled_u(const std::vector<DataPoint>& points) {
  std::int64_t doubled = 0;
  for (const auto& s : points) {
    if (s.label != Label::Class1) continue;
    for (const auto& t : points) {
      if (t.label != Label::Class2) continue;
      if (s.score < t.score)
        doubled += 2;
      else if (s.score == t.score)
        doubled += 1;
    }
  }
  return doubled;
}

namespace {

// Unique scores with grouped weights, ascending.
std::vector<std::pair<double, CountPair>> grouped(const std::vector<DataPoint>& points) {
  std::vector<std::pair<double, CountPair>> rows;
  rows.reserve(points.size());
  for (const auto& z : points) rows.emplace_back(normalize_score(z.score), point_weight(z));
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (out > 0 && rows[out - 1].first == rows[i].first)
      rows[out - 1].second += rows[i].second;
    else
      rows[out++] = rows[i];
  }
  rows.resize(out);
  return rows;
}

}  // namespace

std::int64_t offline_doubled_u(const std::vector<DataPoint>& points) {
  // Sweep of the sorted unique scores: each group (w1, w2) contributes
  // w2*(h + w1/2) to U, where h counts class-1 points strictly below.
  __int128 doubled = 0;
  std::int64_t h = 0;
  for (const auto& [score, w] : grouped(points)) {
    (void)score;
    doubled += static_cast<__int128>(w.c2) * (2 * h + w.c1);
    h += w.c1;
  }
  return static_cast<std::int64_t>(doubled);
}

std::optional<double> offline_auc(const std::vector<DataPoint>& points) {
  CountPair n;
  for (const auto& z : points) n += point_weight(z);
  if (n.c1 == 0 || n.c2 == 0) return std::nullopt;
  return static_cast<double>(offline_doubled_u(points)) /
         (2.0 * static_cast<double>(n.c1) * static_cast<double>(n.c2));
}

std::vector<RocPoint> offline_roc(const std::vector<DataPoint>& points) {
  std::vector<RocPoint> roc;
  roc.push_back({0, 0});
  CountPair running;
  for (const auto& [score, w] : grouped(points)) {
    (void)score;
    running += w;
    roc.push_back(running);
  }
  return roc;
}

std::vector<RocPoint> upper_hull(const std::vector<RocPoint>& roc) {
  std::vector<RocPoint> hull;
  for (const auto& p : roc) {
    // Pop while the incoming edge does not turn strictly downward in slope;
    // equality drops collinear interior vertices.
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 1] - hull[hull.size() - 2], p - hull.back()) <= 0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

std::optional<double> offline_h(const std::vector<DataPoint>& points,
                                const std::optional<Priors>& priors, const BetaParams& params) {
  const auto roc = offline_roc(points);
  const CountPair n = roc.back();
  if (n.c1 == 0 || n.c2 == 0) return std::nullopt;
  HullPolyline q{upper_hull(roc), n};
  const Priors pi = priors ? *priors
                           : Priors{static_cast<double>(n.c1) / static_cast<double>(n.total()),
                                    static_cast<double>(n.c2) / static_cast<double>(n.total())};
  return h_from_polyline(q, pi, params);
}

}  // namespace rocstream::oracles
