#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rocstream/types.hpp"

namespace rocstream {

// Scalar attached to every hull vertex as a function of its coordinate
// difference; subtree sums of it are maintained alongside the coordinate
// sums. An empty function means "accumulate zeros".
using NodeScalar = std::function<double(const CountPair&)>;

// One vertex of a partial upper hull, stored as the coordinate difference to
// its predecessor. Absolute positions are prefix sums, so a fragment is
// translation-free and can be re-rooted under any origin.
struct HullNode {
  CountPair diff;        // edge vector entering this vertex
  CountPair csum;        // subtree sum of diff
  CountPair first_diff;  // diff of the leftmost vertex in the subtree
  double acc = 0.0;      // scalar of diff
  double cacc = 0.0;     // subtree sum of acc
  std::int64_t size = 1;
  int height = 1;
  HullNode* left = nullptr;
  HullNode* right = nullptr;
};

namespace hulltree {

HullNode* make_node(CountPair diff, const NodeScalar& f);
void destroy(HullNode* t);

inline std::int64_t size_of(const HullNode* t) { return t ? t->size : 0; }
inline int height_of(const HullNode* t) { return t ? t->height : 0; }
inline CountPair csum_of(const HullNode* t) { return t ? t->csum : CountPair{}; }
inline double cacc_of(const HullNode* t) { return t ? t->cacc : 0.0; }

// Balanced build from an in-order diff sequence.
HullNode* build(const std::vector<CountPair>& diffs, const NodeScalar& f);

// Positional concatenation: every vertex of `a` precedes every vertex of `b`.
HullNode* concat(HullNode* a, HullNode* b);

// Splits off the first k vertices.
std::pair<HullNode*, HullNode*> split_at(HullNode* t, std::int64_t k);

// Replaces the diff of the leftmost vertex (refreshing its scalar).
void set_first_diff(HullNode* t, CountPair d, const NodeScalar& f);

// Recomputes acc/cacc bottom-up after the node scalar changed.
void recompute_acc(HullNode* t, const NodeScalar& f);

// In-order absolute vertices, appended after advancing `pos` by each diff.
void append_vertices(const HullNode* t, CountPair& pos, std::vector<RocPoint>& out);
void append_diffs(const HullNode* t, std::vector<CountPair>& out);

// Structural audit: aggregate recurrences, AVL balance, positive diffs and
// strictly decreasing slopes in traversal order.
bool audit(const HullNode* t, const NodeScalar* f = nullptr);

// Where the combined hull of two side-by-side hulls switches from the left
// chain to the right one. left_keep == 0 means the bridge starts at the left
// hull's origin (every left vertex is dominated).
struct BridgeCut {
  std::int64_t left_keep = 0;   // vertices kept from the left hull
  std::int64_t right_drop = 0;  // leading right-hull vertices cut away
  RocPoint left_point;          // absolute coordinate of the bridge's left end
  RocPoint right_point;         // absolute coordinate of the bridge's right end
};

// Simultaneous binary descent of both hull trees. `offset` is the absolute
// position of g's origin; h's origin is (0,0). Tangency ties resolve to the
// leftmost vertex in h and the rightmost in g, so the combined chain never
// carries collinear interior vertices. Throws DegenerateHullError on empty
// input.
BridgeCut find_bridge(const HullNode* h, const HullNode* g, CountPair offset);

// Everything needed to reverse a join: the cut-away fragments plus the
// original entering edge of the first surviving right-hull vertex.
struct JoinRemnant {
  std::int64_t left_keep = 0;
  HullNode* h_cut = nullptr;
  HullNode* g_cut = nullptr;
  CountPair g_orig_diff;
};

// Consumes h and g and returns the combined hull; the remnant receives the
// pieces required by unjoin_hulls.
HullNode* join_hulls(HullNode* h, HullNode* g, CountPair offset, const NodeScalar& f,
                     JoinRemnant& rem);

// Exact inverse of join_hulls; the remnant's fragments are consumed.
void unjoin_hulls(HullNode* combined, JoinRemnant& rem, const NodeScalar& f, HullNode** h_out,
                  HullNode** g_out);

}  // namespace hulltree
}  // namespace rocstream
