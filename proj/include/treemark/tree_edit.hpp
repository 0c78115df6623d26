#pragma once

#include "treemark/hierarchy.hpp"
#include "treemark/visual_words.hpp"

namespace treemark {

/// Edit costs for labeled ordered trees. Rename is the Euclidean distance
/// between the two words' centroids; insert/delete is alpha * mu where mu is
/// the mean pairwise centroid distance and
///   alpha = min(1/log2(max(L,2)), 1/log2(max(D,2)))
/// with D the node's depth (root = 1) and L the number of nodes sharing its
/// level in its own tree. The clamps keep alpha in (0, 1].
class EditCostModel {
 public:
  EditCostModel(const VisualWordCodebook& codebook, double mean_pairwise);

  /// Convenience: pulls mu from the codebook's cached value.
  explicit EditCostModel(const VisualWordCodebook& codebook);

  double rename_cost(int word_a, int word_b) const;
  double insert_delete_cost(int depth, int level_width) const;
  double mean_pairwise() const { return mu_; }
  const VisualWordCodebook& codebook() const { return *codebook_; }

 private:
  const VisualWordCodebook* codebook_;
  double mu_;
};

/// Exact minimal-cost ordered tree edit distance (Zhang–Shasha dynamic
/// program) under the model above. Symmetric, non-negative, and zero exactly
/// for label-identical trees.
double tree_edit_distance(const VisualHierarchy& a, const VisualHierarchy& b,
                          const EditCostModel& model);

}  // namespace treemark
