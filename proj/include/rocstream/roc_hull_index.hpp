#pragma once

#include <cstdint>
#include <vector>

#include "rocstream/hull_tree.hpp"
#include "rocstream/types.hpp"

namespace rocstream {

namespace detail {
struct OuterNode;
}

// Dynamic upper convex hull of the non-normalized ROC curve. A balanced
// outer tree keys unique scores at its leaves; every internal node owns the
// partial hull of its score range together with the remnants needed to
// reverse the join. An update re-opens the root-to-leaf path and re-joins it
// bottom-up, so only the touched ancestors are rebuilt.
class RocHullIndex {
 public:
  RocHullIndex() = default;
  ~RocHullIndex();
  RocHullIndex(const RocHullIndex&) = delete;
  RocHullIndex& operator=(const RocHullIndex&) = delete;
  RocHullIndex(RocHullIndex&& o) noexcept;
  RocHullIndex& operator=(RocHullIndex&& o) noexcept;

  void insert(double score, CountPair w);
  void remove(double score, CountPair w);

  CountPair totals() const;
  CountPair weight_at(double score) const;
  std::size_t unique_scores() const;
  bool empty() const { return root_ == nullptr; }

  // Hull vertices in absolute coordinates, starting at (0,0).
  std::vector<RocPoint> hull_vertices() const;

  // Registers the per-vertex scalar; acc/cacc of every live fragment are
  // recomputed. The tag identifies the function so callers can skip
  // redundant re-registration (0 = nothing registered).
  void set_node_scalar(NodeScalar f, std::uint64_t tag = 1);
  std::uint64_t node_scalar_tag() const { return scalar_tag_; }
  bool has_node_scalar() const { return static_cast<bool>(scalar_); }

  // Sum of the registered scalar over all hull vertices (root cacc).
  double root_accumulator() const;

  // Truncated hull of the epsilon-approximation traversal: endpoints plus
  // every vertex whose subtree coordinate span exceeds the (1+eps) factor in
  // either coordinate. Sorted, duplicate-free, a subset of hull_vertices().
  std::vector<RocPoint> approx_vertices(double eps) const;

  // Structural audit of the outer tree and the root hull.
  bool audit() const;
  // Unjoins every internal node, checks both reconstructed child hulls
  // against an independently computed hull of the child's score range, and
  // re-joins. Expensive; test use only.
  bool deep_audit();

 private:
  detail::OuterNode* root_ = nullptr;
  NodeScalar scalar_;
  std::uint64_t scalar_tag_ = 0;
};

}  // namespace rocstream
