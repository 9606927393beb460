#include "rocstream/roc_hull_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace rocstream {

using namespace hulltree;

// Leaf: one unique score with its accumulated weight. Internal: owns the
// joined hull of its subtree while `joined` is set, plus the remnant that
// reverses the join. At rest only the root carries a materialized hull.
struct detail::OuterNode {
  OuterNode* left = nullptr;
  OuterNode* right = nullptr;  // leaf iff both children are null
  double score = 0.0;          // leaf key
  double max_score = 0.0;      // subtree maximum, used for routing
  CountPair weight;            // leaf: counts at this score
  CountPair total;             // subtree weight sum
  int height = 1;
  HullNode* hull = nullptr;
  JoinRemnant rem;
  bool joined = false;
};

namespace {

using Node = detail::OuterNode;

bool is_leaf(const Node* n) { return n->left == nullptr; }
int height_of(const Node* n) { return n ? n->height : 0; }

Node* make_leaf(double score, CountPair w) {
  Node* n = new Node;
  n->score = score;
  n->max_score = score;
  n->weight = w;
  n->total = w;
  return n;
}

void pull_outer(Node* n) {
  n->height = 1 + std::max(height_of(n->left), height_of(n->right));
  n->total = n->left->total + n->right->total;
  n->max_score = n->right->max_score;
}

// Hands over the child's hull for a join. Leaf hulls are single vertices
// rebuilt on demand.
HullNode* take_hull(Node* c, const NodeScalar& f) {
  if (is_leaf(c)) return make_node(c->weight, f);
  HullNode* h = c->hull;
  c->hull = nullptr;
  return h;
}

// Receives a hull reconstructed by an unjoin. Leaves discard it (their hull
// is trivially rebuilt); internal nodes become materialized again and their
// stored remnant is valid for this exact hull.
void give_hull(Node* c, HullNode* h) {
  if (is_leaf(c)) {
    destroy(h);
    return;
  }
  c->hull = h;
}

void join_node(Node* t, const NodeScalar& f) {
  pull_outer(t);
  HullNode* h = take_hull(t->left, f);
  HullNode* g = take_hull(t->right, f);
  t->hull = join_hulls(h, g, t->left->total, f, t->rem);
  t->joined = true;
}

void unjoin_node(Node* t, const NodeScalar& f) {
  HullNode* h = nullptr;
  HullNode* g = nullptr;
  unjoin_hulls(t->hull, t->rem, f, &h, &g);
  t->hull = nullptr;
  t->joined = false;
  give_hull(t->left, h);
  give_hull(t->right, g);
}

// AVL rebalance of an open node whose children are closed. Rotations must
// re-form hulls, so the promoted child is unjoined first and every
// restructured node is re-joined bottom-up.
Node* rebalance_join(Node* t, const NodeScalar& f) {
  const int bf = height_of(t->left) - height_of(t->right);
  if (bf > 1) {
    Node* l = t->left;
    unjoin_node(l, f);
    if (height_of(l->left) >= height_of(l->right)) {
      t->left = l->right;
      join_node(t, f);
      l->right = t;
      join_node(l, f);
      return l;
    }
    Node* c = l->right;
    unjoin_node(c, f);
    l->right = c->left;
    join_node(l, f);
    t->left = c->right;
    join_node(t, f);
    c->left = l;
    c->right = t;
    join_node(c, f);
    return c;
  }
  if (bf < -1) {
    Node* r = t->right;
    unjoin_node(r, f);
    if (height_of(r->right) >= height_of(r->left)) {
      t->right = r->left;
      join_node(t, f);
      r->left = t;
      join_node(r, f);
      return r;
    }
    Node* c = r->left;
    unjoin_node(c, f);
    r->left = c->right;
    join_node(r, f);
    t->right = c->left;
    join_node(t, f);
    c->right = r;
    c->left = t;
    join_node(c, f);
    return c;
  }
  join_node(t, f);
  return t;
}

// delta is added for inserts and subtracted for removals (preconditions
// checked by the caller). Returns the new subtree root, or null when the
// subtree vanished.
Node* update_rec(Node* t, double key, CountPair delta, bool inserting, const NodeScalar& f) {
  if (is_leaf(t)) {
    if (key == t->score) {
      if (inserting)
        t->weight += delta;
      else
        t->weight -= delta;
      if (t->weight.is_zero()) {
        delete t;
        return nullptr;
      }
      t->total = t->weight;
      return t;
    }
    Node* fresh = make_leaf(key, delta);
    Node* parent = new Node;
    if (key < t->score) {
      parent->left = fresh;
      parent->right = t;
    } else {
      parent->left = t;
      parent->right = fresh;
    }
    join_node(parent, f);
    return parent;
  }
  unjoin_node(t, f);
  if (key <= t->left->max_score)
    t->left = update_rec(t->left, key, delta, inserting, f);
  else
    t->right = update_rec(t->right, key, delta, inserting, f);
  if (!t->left || !t->right) {
    Node* rest = t->left ? t->left : t->right;
    delete t;
    return rest;
  }
  return rebalance_join(t, f);
}

void destroy_outer(Node* t) {
  if (!t) return;
  destroy_outer(t->left);
  destroy_outer(t->right);
  destroy(t->hull);
  if (!is_leaf(t) && t->joined) {
    destroy(t->rem.h_cut);
    destroy(t->rem.g_cut);
  }
  delete t;
}

const Node* find_leaf(const Node* t, double key) {
  if (!t) return nullptr;
  while (!is_leaf(t)) t = key <= t->left->max_score ? t->left : t->right;
  return t->score == key ? t : nullptr;
}

}  // namespace

RocHullIndex::~RocHullIndex() { destroy_outer(root_); }

RocHullIndex::RocHullIndex(RocHullIndex&& o) noexcept
    : root_(o.root_), scalar_(std::move(o.scalar_)), scalar_tag_(o.scalar_tag_) {
  o.root_ = nullptr;
  o.scalar_tag_ = 0;
}

RocHullIndex& RocHullIndex::operator=(RocHullIndex&& o) noexcept {
  if (this != &o) {
    destroy_outer(root_);
    root_ = o.root_;
    scalar_ = std::move(o.scalar_);
    scalar_tag_ = o.scalar_tag_;
    o.root_ = nullptr;
    o.scalar_tag_ = 0;
  }
  return *this;
}

void RocHullIndex::insert(double score, CountPair w) {
  const double key = normalize_score(score);
  if (w.c1 < 0 || w.c2 < 0) throw DomainError("insert: weight components must be non-negative");
  if (w.is_zero()) return;
  if (!root_) {
    root_ = make_leaf(key, w);
    return;
  }
  root_ = update_rec(root_, key, w, true, scalar_);
}

void RocHullIndex::remove(double score, CountPair w) {
  const double key = normalize_score(score);
  if (w.c1 < 0 || w.c2 < 0) throw DomainError("remove: weight components must be non-negative");
  const CountPair have = weight_at(key);
  if (have.is_zero()) throw ScoreNotFoundError(key);
  if (!have.covers(w)) throw InsufficientWeightError(key);
  if (w.is_zero()) return;
  root_ = update_rec(root_, key, w, false, scalar_);
}

CountPair RocHullIndex::totals() const { return root_ ? root_->total : CountPair{}; }

CountPair RocHullIndex::weight_at(double score) const {
  const Node* leaf = find_leaf(root_, normalize_score(score));
  return leaf ? leaf->weight : CountPair{};
}

std::size_t RocHullIndex::unique_scores() const {
  std::size_t count = 0;
  // Outer leaves each hold one unique score.
  std::function<void(const Node*)> walk = [&](const Node* t) {
    if (!t) return;
    if (is_leaf(t)) {
      ++count;
      return;
    }
    walk(t->left);
    walk(t->right);
  };
  walk(root_);
  return count;
}

namespace {

// Runs fn against the root hull; a leaf root materializes a single-vertex
// hull on the stack.
template <typename Fn>
void with_root_hull(const Node* root, const NodeScalar& f, Fn&& fn) {
  if (!root) {
    fn(static_cast<const HullNode*>(nullptr));
    return;
  }
  if (is_leaf(root)) {
    HullNode tmp;
    tmp.diff = root->weight;
    tmp.csum = root->weight;
    tmp.first_diff = root->weight;
    tmp.acc = f ? f(root->weight) : 0.0;
    tmp.cacc = tmp.acc;
    fn(static_cast<const HullNode*>(&tmp));
    return;
  }
  fn(static_cast<const HullNode*>(root->hull));
}

}  // namespace

std::vector<RocPoint> RocHullIndex::hull_vertices() const {
  std::vector<RocPoint> out;
  out.push_back({0, 0});
  with_root_hull(root_, scalar_, [&](const HullNode* h) {
    CountPair pos{0, 0};
    append_vertices(h, pos, out);
  });
  return out;
}

void RocHullIndex::set_node_scalar(NodeScalar f, std::uint64_t tag) {
  scalar_ = std::move(f);
  scalar_tag_ = scalar_ ? tag : 0;
  std::function<void(Node*)> walk = [&](Node* t) {
    if (!t) return;
    recompute_acc(t->hull, scalar_);
    if (!is_leaf(t)) {
      if (t->joined) {
        recompute_acc(t->rem.h_cut, scalar_);
        recompute_acc(t->rem.g_cut, scalar_);
      }
      walk(t->left);
      walk(t->right);
    }
  };
  walk(root_);
}

double RocHullIndex::root_accumulator() const {
  if (!scalar_) throw NoAccumulatorError{};
  double value = 0.0;
  with_root_hull(root_, scalar_, [&](const HullNode* h) { value = cacc_of(h); });
  return value;
}

std::vector<RocPoint> RocHullIndex::approx_vertices(double eps) const {
  if (!(eps > 0.0)) throw DomainError("approx_vertices: eps must be positive");
  std::vector<RocPoint> out;
  out.push_back({0, 0});
  if (!root_) return out;
  const CountPair n = root_->total;
  const double factor = 1.0 + eps;
  // Reports the subtree-root vertex whenever either coordinate span of the
  // subtree exceeds the (1+eps) factor, then recurses on both halves.
  std::function<void(const HullNode*, CountPair, CountPair)> walk =
      [&](const HullNode* u, CountPair p, CountPair q) {
        if (!u) return;
        const bool wide2 = static_cast<double>(q.c2) > factor * static_cast<double>(p.c2);
        const bool wide1 =
            static_cast<double>(n.c1 - p.c1) > factor * static_cast<double>(n.c1 - q.c1);
        if (!wide2 && !wide1) return;
        const CountPair z = p + csum_of(u->left) + u->diff;
        walk(u->left, p, z);
        out.push_back(z);
        walk(u->right, z, q);
      };
  with_root_hull(root_, scalar_, [&](const HullNode* h) { walk(h, {0, 0}, n); });
  out.push_back(n);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool audit_outer(const Node* t, bool is_root, const NodeScalar& f) {
  if (!t) return true;
  if (is_leaf(t)) {
    if (t->weight.is_zero() || t->weight.c1 < 0 || t->weight.c2 < 0) return false;
    if (t->total != t->weight || t->max_score != t->score || t->hull) return false;
    return true;
  }
  if (t->total != t->left->total + t->right->total) return false;
  if (t->height != 1 + std::max(height_of(t->left), height_of(t->right))) return false;
  if (std::abs(height_of(t->left) - height_of(t->right)) > 1) return false;
  if (t->max_score != t->right->max_score) return false;
  if (!t->joined) return false;
  if (is_root) {
    if (!t->hull) return false;
    if (!audit(t->hull, &f)) return false;
    if (csum_of(t->hull) != t->total) return false;
  } else if (t->hull) {
    return false;
  }
  return audit_outer(t->left, false, f) && audit_outer(t->right, false, f);
}

// Minimal monotone-chain hull over the subtree's own ROC points, used only
// to cross-check reconstructed child hulls during the deep audit.
void collect_weights(const Node* t, std::vector<CountPair>& out) {
  if (is_leaf(t)) {
    out.push_back(t->weight);
    return;
  }
  collect_weights(t->left, out);
  collect_weights(t->right, out);
}

std::vector<RocPoint> chain_hull_of_subtree(const Node* t) {
  std::vector<CountPair> ws;
  collect_weights(t, ws);
  std::vector<RocPoint> pts;
  pts.push_back({0, 0});
  CountPair run;
  for (const auto& w : ws) {
    run += w;
    pts.push_back(run);
  }
  std::vector<RocPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 1] - hull[hull.size() - 2], p - hull.back()) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

bool child_hull_matches(const Node* c, const HullNode* hull) {
  std::vector<RocPoint> got;
  got.push_back({0, 0});
  CountPair pos{0, 0};
  if (is_leaf(c)) {
    got.push_back(c->weight);
  } else {
    append_vertices(hull, pos, got);
  }
  return got == chain_hull_of_subtree(c);
}

bool deep_audit_rec(Node* t, const NodeScalar& f) {
  if (is_leaf(t)) return true;
  unjoin_node(t, f);
  bool ok = true;
  if (!is_leaf(t->left)) ok = ok && child_hull_matches(t->left, t->left->hull);
  if (!is_leaf(t->right)) ok = ok && child_hull_matches(t->right, t->right->hull);
  ok = ok && deep_audit_rec(t->left, f) && deep_audit_rec(t->right, f);
  join_node(t, f);
  return ok;
}

}  // namespace

bool RocHullIndex::audit() const {
  if (!root_ || is_leaf(root_)) return true;
  return audit_outer(root_, true, scalar_);
}

bool RocHullIndex::deep_audit() {
  if (!root_ || is_leaf(root_)) return true;
  if (!child_hull_matches(root_, root_->hull)) return false;
  return deep_audit_rec(root_, scalar_);
}

}  // namespace rocstream
