#include "rocstream/score_index.hpp"

#include <algorithm>
#include <cmath>

namespace rocstream {

struct detail::ScoreNode {
  double key;
  CountPair weight;   // counts of points at exactly this score
  CountPair cweight;  // subtree sum of weight, including this node
  int height = 1;
  ScoreNode* left = nullptr;
  ScoreNode* right = nullptr;

  explicit ScoreNode(double k, CountPair w) : key(k), weight(w), cweight(w) {}
};

namespace {

using Node = detail::ScoreNode;

int height_of(const Node* n) { return n ? n->height : 0; }
CountPair cweight_of(const Node* n) { return n ? n->cweight : CountPair{}; }

void pull(Node* n) {
  n->height = 1 + std::max(height_of(n->left), height_of(n->right));
  n->cweight = cweight_of(n->left) + cweight_of(n->right) + n->weight;
}

Node* rotate_left(Node* n) {
  Node* r = n->right;
  n->right = r->left;
  r->left = n;
  pull(n);
  pull(r);
  return r;
}

Node* rotate_right(Node* n) {
  Node* l = n->left;
  n->left = l->right;
  l->right = n;
  pull(n);
  pull(l);
  return l;
}

Node* rebalance(Node* n) {
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

Node* insert_rec(Node* n, double key, CountPair w) {
  if (!n) return new Node(key, w);
  if (key < n->key) {
    n->left = insert_rec(n->left, key, w);
  } else if (key > n->key) {
    n->right = insert_rec(n->right, key, w);
  } else {
    n->weight += w;
    pull(n);
    return n;
  }
  return rebalance(n);
}

// Detaches the minimum node of the subtree; *out receives it with children cleared.
Node* detach_min(Node* n, Node** out) {
  if (!n->left) {
    *out = n;
    Node* r = n->right;
    n->right = nullptr;
    return r;
  }
  n->left = detach_min(n->left, out);
  return rebalance(n);
}

Node* erase_rec(Node* n, double key) {
  if (key < n->key) {
    n->left = erase_rec(n->left, key);
  } else if (key > n->key) {
    n->right = erase_rec(n->right, key);
  } else {
    if (!n->left || !n->right) {
      Node* child = n->left ? n->left : n->right;
      delete n;
      return child;
    }
    Node* succ = nullptr;
    n->right = detach_min(n->right, &succ);
    succ->left = n->left;
    succ->right = n->right;
    delete n;
    n = succ;
  }
  return rebalance(n);
}

void destroy(Node* n) {
  if (!n) return;
  destroy(n->left);
  destroy(n->right);
  delete n;
}

void for_each_rec(const Node* n, const std::function<void(double, CountPair)>& fn) {
  if (!n) return;
  for_each_rec(n->left, fn);
  fn(n->key, n->weight);
  for_each_rec(n->right, fn);
}

bool audit_rec(const Node* n, const double* lo, const double* hi) {
  if (!n) return true;
  if (lo && !(n->key > *lo)) return false;
  if (hi && !(n->key < *hi)) return false;
  if (n->weight.is_zero() || n->weight.c1 < 0 || n->weight.c2 < 0) return false;
  if (n->cweight != cweight_of(n->left) + cweight_of(n->right) + n->weight) return false;
  if (n->height != 1 + std::max(height_of(n->left), height_of(n->right))) return false;
  if (std::abs(height_of(n->left) - height_of(n->right)) > 1) return false;
  return audit_rec(n->left, lo, &n->key) && audit_rec(n->right, &n->key, hi);
}

}  // namespace

ScoreIndex::~ScoreIndex() { destroy(root_); }

ScoreIndex& ScoreIndex::operator=(ScoreIndex&& o) noexcept {
  if (this != &o) {
    destroy(root_);
    root_ = o.root_;
    o.root_ = nullptr;
  }
  return *this;
}

void ScoreIndex::insert(double score, CountPair w) {
  const double key = normalize_score(score);
  if (w.is_zero()) return;
  root_ = insert_rec(root_, key, w);
}

void ScoreIndex::remove(double score, CountPair w) {
  const double key = normalize_score(score);
  const CountPair have = weight_at(key);
  if (have.is_zero()) throw ScoreNotFoundError(key);
  if (!have.covers(w)) throw InsufficientWeightError(key);
  if (w.is_zero()) return;
  if (have == w) {
    root_ = erase_rec(root_, key);
    return;
  }
  // Weight shrinks in place; only ancestor cumulative counts change.
  for (Node* n = root_; n;) {
    n->cweight -= w;
    if (key < n->key) {
      n = n->left;
    } else if (key > n->key) {
      n = n->right;
    } else {
      n->weight -= w;
      break;
    }
  }
}

CountPair ScoreIndex::left_count(double score) const {
  const double key = normalize_score(score);
  CountPair acc;
  const Node* n = root_;
  while (n) {
    if (key > n->key) {
      acc += cweight_of(n->left) + n->weight;
      n = n->right;
    } else if (key < n->key) {
      n = n->left;
    } else {
      return acc + cweight_of(n->left);
    }
  }
  return acc;
}

CountPair ScoreIndex::weight_at(double score) const {
  const double key = normalize_score(score);
  const Node* n = root_;
  while (n) {
    if (key < n->key)
      n = n->left;
    else if (key > n->key)
      n = n->right;
    else
      return n->weight;
  }
  return {};
}

CountPair ScoreIndex::totals() const { return cweight_of(root_); }

std::size_t ScoreIndex::unique_scores() const {
  std::size_t count = 0;
  for_each([&](double, CountPair) { ++count; });
  return count;
}

int ScoreIndex::height() const { return height_of(root_); }

void ScoreIndex::for_each(const std::function<void(double, CountPair)>& fn) const {
  for_each_rec(root_, fn);
}

bool ScoreIndex::audit() const { return audit_rec(root_, nullptr, nullptr); }

}  // namespace rocstream
