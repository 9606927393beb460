#include "rocstream/hull_tree.hpp"
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <algorithm>
#include <stdexcept>

namespace rocstream::hulltree {

namespace {

void pull(HullNode* n) {
  n->height = 1 + std::max(height_of(n->left), height_of(n->right));
  n->size = 1 + size_of(n->left) + size_of(n->right);
  n->csum = csum_of(n->left) + csum_of(n->right) + n->diff;
  n->cacc = cacc_of(n->left) + cacc_of(n->right) + n->acc;
  n->first_diff = n->left ? n->left->first_diff : n->diff;
}

HullNode* rotate_left(HullNode* n) {
  HullNode* r = n->right;
  n->right = r->left;
  r->left = n;
  pull(n);
  pull(r);
  return r;
}

HullNode* rotate_right(HullNode* n) {
  HullNode* l = n->left;
  n->left = l->right;
  l->right = n;
  pull(n);
  pull(l);
  return l;
}

HullNode* rebalance(HullNode* n) {
  pull(n);
  const int bf = height_of(n->left) - height_of(n->right);
  if (bf > 1) {
    if (height_of(n->left->left) < height_of(n->left->right)) n->left = rotate_left(n->left);
    return rotate_right(n);
  }
  if (bf < -1) {
    if (height_of(n->right->right) < height_of(n->right->left)) n->right = rotate_right(n->right);
    return rotate_left(n);
  }
  return n;
}

// Joins l, m, r where m is a detached single node; heights may differ
// arbitrarily.
HullNode* join3(HullNode* l, HullNode* m, HullNode* r) {
  if (height_of(l) > height_of(r) + 1) {
    l->right = join3(l->right, m, r);
    return rebalance(l);
  }
  if (height_of(r) > height_of(l) + 1) {
    r->left = join3(l, m, r->left);
    return rebalance(r);
  }
  m->left = l;
  m->right = r;
  pull(m);
  return m;
}

HullNode* detach_min(HullNode* t, HullNode** out) {
  if (!t->left) {
    *out = t;
    HullNode* rest = t->right;
    t->right = nullptr;
    return rest;
  }
  t->left = detach_min(t->left, out);
  return rebalance(t);
}

HullNode* build_range(const std::vector<CountPair>& diffs, std::size_t lo, std::size_t hi,
                      const NodeScalar& f) {
  if (lo >= hi) return nullptr;
  const std::size_t mid = lo + (hi - lo) / 2;
  HullNode* n = make_node(diffs[mid], f);
  n->left = build_range(diffs, lo, mid, f);
  n->right = build_range(diffs, mid + 1, hi, f);
  pull(n);
  return n;
}

}  // namespace

HullNode* make_node(CountPair diff, const NodeScalar& f) {
  HullNode* n = new HullNode;
  n->diff = diff;
  n->csum = diff;
  n->first_diff = diff;
  n->acc = f ? f(diff) : 0.0;
  n->cacc = n->acc;
  return n;
}

void destroy(HullNode* t) {
  if (!t) return;
  destroy(t->left);
  destroy(t->right);
  delete t;
}

HullNode* build(const std::vector<CountPair>& diffs, const NodeScalar& f) {
  return build_range(diffs, 0, diffs.size(), f);
}

HullNode* concat(HullNode* a, HullNode* b) {
  if (!a) return b;
  if (!b) return a;
  HullNode* mid = nullptr;
  b = detach_min(b, &mid);
  return join3(a, mid, b);
}

std::pair<HullNode*, HullNode*> split_at(HullNode* t, std::int64_t k) {
  if (!t) return {nullptr, nullptr};
  if (k <= 0) return {nullptr, t};
  if (k >= t->size) return {t, nullptr};
  HullNode* left = t->left;
  HullNode* right = t->right;
  const std::int64_t ls = size_of(left);
  t->left = t->right = nullptr;
  if (k <= ls) {
    auto [a, b] = split_at(left, k);
    return {a, join3(b, t, right)};
  }
  if (k == ls + 1) {
    return {join3(left, t, nullptr), right};
  }
  auto [a, b] = split_at(right, k - ls - 1);
  return {join3(left, t, a), b};
}

void set_first_diff(HullNode* t, CountPair d, const NodeScalar& f) {
  if (!t) throw std::logic_error("set_first_diff on empty fragment");
  if (t->left) {
    set_first_diff(t->left, d, f);
  } else {
    t->diff = d;
    t->acc = f ? f(d) : 0.0;
  }
  pull(t);
}

void recompute_acc(HullNode* t, const NodeScalar& f) {
  if (!t) return;
  recompute_acc(t->left, f);
  recompute_acc(t->right, f);
  t->acc = f ? f(t->diff) : 0.0;
  t->cacc = cacc_of(t->left) + cacc_of(t->right) + t->acc;
}

void append_vertices(const HullNode* t, CountPair& pos, std::vector<RocPoint>& out) {
  if (!t) return;
  append_vertices(t->left, pos, out);
  pos += t->diff;
  out.push_back(pos);
  append_vertices(t->right, pos, out);
}

void append_diffs(const HullNode* t, std::vector<CountPair>& out) {
  if (!t) return;
  append_diffs(t->left, out);
  out.push_back(t->diff);
  append_diffs(t->right, out);
}

namespace {

bool audit_rec(const HullNode* t, const NodeScalar* f) {
  if (!t) return true;
  if (t->diff.c1 < 0 || t->diff.c2 < 0 || t->diff.is_zero()) return false;
  if (t->size != 1 + size_of(t->left) + size_of(t->right)) return false;
  if (t->height != 1 + std::max(height_of(t->left), height_of(t->right))) return false;
  if (std::abs(height_of(t->left) - height_of(t->right)) > 1) return false;
  if (t->csum != csum_of(t->left) + csum_of(t->right) + t->diff) return false;
  if (t->first_diff != (t->left ? t->left->first_diff : t->diff)) return false;
  if (f) {
    const double expect = *f ? (*f)(t->diff) : 0.0;
    if (t->acc != expect) return false;
  }
  const double csum_acc = cacc_of(t->left) + cacc_of(t->right) + t->acc;
  if (t->cacc != csum_acc) return false;
  return audit_rec(t->left, f) && audit_rec(t->right, f);
}

}  // namespace

bool audit(const HullNode* t, const NodeScalar* f) {
  if (!audit_rec(t, f)) return false;
  std::vector<CountPair> diffs;
  append_diffs(t, diffs);
  for (std::size_t i = 1; i < diffs.size(); ++i)
    if (cross(diffs[i - 1], diffs[i]) <= 0) return false;
  return true;
}

namespace {

// Sign of (x_intersection - sigma) for the lines through `a` along `da` and
// through `b` along `db`. Exact rational comparison; slopes must differ.
int intersection_side(const CountPair& a, const CountPair& da, const CountPair& b,
                      const CountPair& db, std::int64_t sigma) {
  // Plot coordinates are (x, y) = (c2, c1); plot-cross(p, q) = -cross(p, q).
  const __int128 denom = -cross(da, db);
  const __int128 numer = -cross(b - a, db);
  // x_int = a.c2 + da.c2 * numer / denom
  const __int128 lhs = static_cast<__int128>(a.c2) * denom + static_cast<__int128>(da.c2) * numer;
  const __int128 rhs = static_cast<__int128>(sigma) * denom;
  if (lhs == rhs) return 0;
  const bool less = denom > 0 ? lhs < rhs : lhs > rhs;
  return less ? -1 : 1;
}

struct TangentHit {
  bool at_origin = false;  // contact precedes the first stored vertex
  CountPair abs;
  std::int64_t index = 0;  // 1-based position within the whole right hull
};

// Canonical tangent vertex of slope `dir` on the subtree rooted at `x`:
// entering-edge slope >= slope(dir) > leaving-edge slope (ties resolve to
// the rightmost contact). Boundary edges of the subtree come from the
// carried descent state. Walking off the left edge means the contact is the
// chain's origin.
TangentHit tangent_of_slope(const HullNode* x, CountPair org, bool have_next, CountPair next,
                            std::int64_t base, const CountPair& dir) {
  for (;;) {
    const CountPair abs = org + csum_of(x->left) + x->diff;
    const bool enter_ok = slope_cmp(x->diff, dir) >= 0;
    bool leave_exists = true;
    CountPair leave;
    if (x->right) {
      leave = x->right->first_diff;
    } else {
      leave_exists = have_next;
      leave = next;
    }
    if (!enter_ok) {
      if (!x->left) return {true, {}, 0};
      have_next = true;
      next = x->diff;
      x = x->left;
    } else if (leave_exists && slope_cmp(leave, dir) >= 0) {
      if (!x->right) throw std::logic_error("bridge: tangent descent invariant broken");
      org = abs;
      base += size_of(x->left) + 1;
      x = x->right;
    } else {
      return {false, abs, base + size_of(x->left) + 1};
    }
  }
}

}  // namespace

namespace {

[[maybe_unused]] void dump_fragment(const char* tag, const HullNode* t) {
  std::vector<CountPair> d;
  append_diffs(t, d);
  std::fprintf(stderr, "%s diffs:", tag);
  for (const auto& x : d)
    std::fprintf(stderr, " (%lld,%lld)", static_cast<long long>(x.c1),
                 static_cast<long long>(x.c2));
  std::fprintf(stderr, "\n");
}

}  // namespace

namespace {
BridgeCut find_bridge_impl(const HullNode* h, const HullNode* g, CountPair offset);
}

BridgeCut find_bridge(const HullNode* h, const HullNode* g, CountPair offset) {
  try {
    return find_bridge_impl(h, g, offset);
  } catch (const std::logic_error&) {
    dump_fragment("H", h);
    dump_fragment("G", g);
    std::fprintf(stderr, "offset (%lld,%lld)\n", static_cast<long long>(offset.c1),
                 static_cast<long long>(offset.c2));
    throw;
  }
}

namespace {

BridgeCut find_bridge_impl(const HullNode* h, const HullNode* g, CountPair offset) {
  if (!h || !g) throw DegenerateHullError{};

  // Left-hull cursor. The implicit origin y0 is a legal left endpoint; it
  // gets pinned when the descent walks off the left edge of the chain.
  const HullNode* hu = h;
  CountPair h_org{0, 0};  // origin of hu's subtree segment
  bool h_have_next = false;
  CountPair h_next{};  // carried chain edge leaving hu's subtree
  bool h_moved_right = false;
  bool h_pinned = false;
  std::int64_t h_base = 0;  // vertices strictly left of hu's subtree

  const HullNode* gu = g;
  CountPair g_org = offset;
  bool g_have_next = false;
  CountPair g_next{};
  std::int64_t g_base = 0;

  const std::int64_t sigma = offset.c2;  // horizontal midline between the hulls

  const bool trace = std::getenv("ROCSTREAM_BRIDGE_TRACE") != nullptr;
  const int cap = 4 * (h->height + g->height) + 16;
  for (int iter = 0;; ++iter) {
    if (iter > cap) throw std::logic_error("bridge search failed to converge");

    const CountPair u_abs = h_pinned ? CountPair{0, 0} : h_org + csum_of(hu->left) + hu->diff;
    const CountPair v_abs = g_org + csum_of(gu->left) + gu->diff;
    const CountPair s = v_abs - u_abs;

    // Chain edges around the cursors: entering edges are the stored diffs,
    // leaving edges come from the right subtree or the carried ancestor
    // edge. The pinned origin has no entering edge and leaves through the
    // first edge of the whole left chain.
    const bool u_has_in = !h_pinned;
    const CountPair u_in = h_pinned ? CountPair{} : hu->diff;
    bool u_has_out = true;
    CountPair u_out;
    if (h_pinned) {
      u_out = h->first_diff;
    } else if (hu->right) {
      u_out = hu->right->first_diff;
    } else {
      u_has_out = h_have_next;
      u_out = h_next;
    }
    const CountPair v_in = gu->diff;
    bool v_has_out = true;
    CountPair v_out;
    if (gu->right) {
      v_out = gu->right->first_diff;
    } else {
      v_has_out = g_have_next;
      v_out = g_next;
    }

    // Non-strict outward tests and strict inward tests give the canonical
    // bridge: leftmost tangent vertex on the left chain, rightmost on the
    // right chain.
    const bool u_wants_left = u_has_in && slope_cmp(u_in, s) <= 0;
    const bool u_wants_right = u_has_out && slope_cmp(u_out, s) > 0;
    const bool v_wants_left = slope_cmp(v_in, s) < 0;
    const bool v_wants_right = v_has_out && slope_cmp(v_out, s) >= 0;

    if (trace) {
      std::fprintf(stderr,
                   "it%d u=(%lld,%lld)%s v=(%lld,%lld) s=(%lld,%lld) uL%d uR%d vL%d vR%d\n",
                   iter, static_cast<long long>(u_abs.c1), static_cast<long long>(u_abs.c2),
                   h_pinned ? "*" : "", static_cast<long long>(v_abs.c1),
                   static_cast<long long>(v_abs.c2), static_cast<long long>(s.c1),
                   static_cast<long long>(s.c2), u_wants_left, u_wants_right, v_wants_left,
                   v_wants_right);
    }

    if (u_wants_left) {
      if (hu->left) {
        h_have_next = true;
        h_next = hu->diff;
        hu = hu->left;
        continue;
      }
      if (h_moved_right) throw std::logic_error("bridge: left descent invariant broken");
      h_pinned = true;
      continue;
    }
    if (v_wants_right) {
      if (!gu->right) throw std::logic_error("bridge: right descent invariant broken");
      g_org = v_abs;
      g_base += size_of(gu->left) + 1;
      gu = gu->right;
      continue;
    }
    if (u_wants_right || v_wants_left) {
      // Inward moves. Once the origin is pinned the left endpoint is final
      // and the search is a tangent-from-a-point over the right hull, where
      // the right cursor's own predicates are safe on their own.
      if (h_pinned) {
        if (!v_wants_left || !gu->left)
          throw std::logic_error("bridge: pinned-origin state broken");
        g_have_next = true;
        g_next = gu->diff;
        gu = gu->left;
        continue;
      }
      // When both fire, the intersection of the two local tangent lines
      // against the midline decides which side is safe. An intersection
      // exactly on the midline is the degenerate common-tangent case: the
      // tangent of slope u_out on the right hull either lies on the left
      // tangent line (bridge found, left endpoint is the current cursor) or
      // strictly below it (the true tangent is flatter, so the left endpoint
      // lies further right).
      bool move_u;
      if (!v_wants_left) {
        move_u = true;
      } else if (!u_wants_right) {
        move_u = false;
      } else {
        const int side = intersection_side(u_abs, u_out, v_abs, v_in, sigma);
        if (side == 0) {
          const TangentHit t =
              tangent_of_slope(gu, g_org, g_have_next, g_next, g_base, u_out);
          if (!t.at_origin) {
            const __int128 rel = cross(t.abs - u_abs, u_out);
            if (rel == 0) {
              // The left tangent line is the common tangent: the bridge is
              // the current left cursor paired with the contact vertex.
              BridgeCut cut;
              cut.left_keep = h_base + size_of(hu->left) + 1;
              cut.right_drop = t.index - 1;
              cut.left_point = u_abs;
              cut.right_point = t.abs;
              return cut;
            }
            if (rel > 0) throw std::logic_error("bridge: midline tie inconsistency");
          }
          // Contact below the line or at the seam vertex: the true tangent
          // is flatter, so the left endpoint lies further right.
          move_u = true;
        } else {
          move_u = side < 0;
        }
      }
      if (move_u) {
        if (!hu->right)
          throw std::logic_error("bridge: inward move invariant broken (left hull)");
        h_org = u_abs;
        h_base += size_of(hu->left) + 1;
        h_moved_right = true;
        hu = hu->right;
        continue;
      }
      if (!gu->left) throw std::logic_error("bridge: inward move invariant broken (right hull)");
      g_have_next = true;
      g_next = gu->diff;
      gu = gu->left;
      continue;
    }

    BridgeCut cut;
    cut.left_keep = h_pinned ? 0 : h_base + size_of(hu->left) + 1;
    cut.right_drop = g_base + size_of(gu->left);
    cut.left_point = u_abs;
    cut.right_point = v_abs;
    return cut;
  }
}

}  // namespace

HullNode* join_hulls(HullNode* h, HullNode* g, CountPair offset, const NodeScalar& f,
                     JoinRemnant& rem) {
  const BridgeCut cut = find_bridge(h, g, offset);
  auto [keep_h, cut_h] = split_at(h, cut.left_keep);
  auto [cut_g, keep_g] = split_at(g, cut.right_drop);
  // The right bridge endpoint always survives, so keep_g is non-empty.
  rem.left_keep = cut.left_keep;
  rem.h_cut = cut_h;
  rem.g_cut = cut_g;
  rem.g_orig_diff = keep_g->first_diff;
  set_first_diff(keep_g, cut.right_point - cut.left_point, f);
  return concat(keep_h, keep_g);
}

void unjoin_hulls(HullNode* combined, JoinRemnant& rem, const NodeScalar& f, HullNode** h_out,
                  HullNode** g_out) {
  auto [hl, gr] = split_at(combined, rem.left_keep);
  set_first_diff(gr, rem.g_orig_diff, f);
  *h_out = concat(hl, rem.h_cut);
  *g_out = concat(rem.g_cut, gr);
  rem = JoinRemnant{};
}

}  // namespace rocstream::hulltree
