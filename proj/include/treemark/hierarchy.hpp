#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace treemark {

/// Rooted tree of visual-word ids. Node depths count from 1 at the root.
struct VisualHierarchy {
  struct Node {
    int word = -1;
    std::vector<int> children;
  };

  std::vector<Node> nodes;
  int root = 0;
  std::int64_t image_id = -1;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Deterministic sibling order: children sort by (word id, subtree size,
/// preorder word sequence), recursively. Idempotent, and invariant under any
/// permutation of sibling lists.
VisualHierarchy canonicalize(const VisualHierarchy& h);

/// Bracket notation, e.g. {5{2}{7{1}}}.
std::string to_bracket(const VisualHierarchy& h);
VisualHierarchy from_bracket(std::string_view text, std::int64_t image_id = -1);

/// Structural equality of the rooted trees (node indices are irrelevant).
bool same_tree(const VisualHierarchy& a, const VisualHierarchy& b);

/// Depth per node, root = 1.
std::vector<int> node_depths(const VisualHierarchy& h);

/// Number of nodes at each depth of the tree, indexed by depth (entry 0 unused).
std::vector<int> level_widths(const VisualHierarchy& h);

/// Nodes in postorder (children before parents, sibling order preserved).
std::vector<int> postorder(const VisualHierarchy& h);

}  // namespace treemark
