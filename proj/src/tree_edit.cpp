#include "treemark/tree_edit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace treemark {

EditCostModel::EditCostModel(const VisualWordCodebook& codebook, double mean_pairwise)
    : codebook_(&codebook), mu_(mean_pairwise) {
  if (!(mu_ > 0.0)) throw std::invalid_argument("EditCostModel: mean pairwise distance must be > 0");
}

EditCostModel::EditCostModel(const VisualWordCodebook& codebook)
    : EditCostModel(codebook, codebook.mean_pairwise_distance) {}

double EditCostModel::rename_cost(int word_a, int word_b) const {
  const int k = static_cast<int>(codebook_->centroids.size());
  if (word_a < 0 || word_b < 0 || word_a >= k || word_b >= k)
    throw std::invalid_argument("rename_cost: unknown word id");
  if (word_a == word_b) return 0.0;
  return euclidean_distance(codebook_->centroids[static_cast<std::size_t>(word_a)],
                            codebook_->centroids[static_cast<std::size_t>(word_b)]);
}

double EditCostModel::insert_delete_cost(int depth, int level_width) const {
  if (depth < 1 || level_width < 1)
    throw std::invalid_argument("insert_delete_cost: depth and level width must be >= 1");
  const double dl = std::log2(static_cast<double>(std::max(level_width, 2)));
  const double dd = std::log2(static_cast<double>(std::max(depth, 2)));
  const double alpha = std::min(1.0 / dl, 1.0 / dd);
  return alpha * mu_;
}

namespace {

// Per-tree tables for the Zhang–Shasha dynamic program, indexed by postorder
// position (1-based).
struct TreeTables {
  int n = 0;
  std::vector<int> word;       // label per postorder position
  std::vector<int> lml;        // leftmost leaf per postorder position
  std::vector<double> change;  // insert/delete cost per postorder position
  std::vector<int> keyroots;
};

TreeTables prepare(const VisualHierarchy& h, const EditCostModel& model) {
  TreeTables t;
  t.n = h.size();
  t.word.assign(static_cast<std::size_t>(t.n) + 1, -1);
  t.lml.assign(static_cast<std::size_t>(t.n) + 1, 0);
  t.change.assign(static_cast<std::size_t>(t.n) + 1, 0.0);

  const std::vector<int> order = postorder(h);
  std::vector<int> pos(h.nodes.size(), 0);  // node index -> postorder position
  for (int i = 0; i < t.n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i + 1;

  const std::vector<int> depth = node_depths(h);
  const std::vector<int> widths = level_widths(h);

  std::vector<int> lml_node(h.nodes.size(), 0);
  auto fill_lml = [&](auto&& self, int node) -> int {
    const auto& children = h.nodes[static_cast<std::size_t>(node)].children;
    int leaf = pos[static_cast<std::size_t>(node)];
    for (std::size_t i = 0; i < children.size(); ++i) {
      const int child_leaf = self(self, children[i]);
      if (i == 0) leaf = child_leaf;
    }
    lml_node[static_cast<std::size_t>(node)] = leaf;
    return leaf;
  };
  fill_lml(fill_lml, h.root);

  for (int i = 1; i <= t.n; ++i) {
    const int node = order[static_cast<std::size_t>(i - 1)];
    t.word[static_cast<std::size_t>(i)] = h.nodes[static_cast<std::size_t>(node)].word;
    t.lml[static_cast<std::size_t>(i)] = lml_node[static_cast<std::size_t>(node)];
    t.change[static_cast<std::size_t>(i)] =
        model.insert_delete_cost(depth[static_cast<std::size_t>(node)],
                                 widths[static_cast<std::size_t>(depth[static_cast<std::size_t>(node)])]);
  }

  // Keyroots: positions with no parent sharing their leftmost leaf.
  std::vector<char> seen(static_cast<std::size_t>(t.n) + 1, 0);
  for (int i = t.n; i >= 1; --i) {
    const int l = t.lml[static_cast<std::size_t>(i)];
    if (!seen[static_cast<std::size_t>(l)]) {
      t.keyroots.push_back(i);
      seen[static_cast<std::size_t>(l)] = 1;
    }
  }
  std::sort(t.keyroots.begin(), t.keyroots.end());
  return t;
}

}  // namespace

double tree_edit_distance(const VisualHierarchy& a, const VisualHierarchy& b,
                          const EditCostModel& model) {
  if (a.nodes.empty() || b.nodes.empty())
    throw std::invalid_argument("tree_edit_distance: empty hierarchy");

  const TreeTables t1 = prepare(a, model);
  const TreeTables t2 = prepare(b, model);
  const int n1 = t1.n, n2 = t2.n;

  std::vector<std::vector<double>> treedist(static_cast<std::size_t>(n1) + 1,
                                            std::vector<double>(static_cast<std::size_t>(n2) + 1, 0.0));
  // Forest distance scratch, indexed [0..n1][0..n2].
  std::vector<std::vector<double>> fd(static_cast<std::size_t>(n1) + 1,
                                      std::vector<double>(static_cast<std::size_t>(n2) + 1, 0.0));

  for (int ki : t1.keyroots) {
    for (int kj : t2.keyroots) {
      const int li = t1.lml[static_cast<std::size_t>(ki)];
      const int lj = t2.lml[static_cast<std::size_t>(kj)];

      fd[static_cast<std::size_t>(li - 1)][static_cast<std::size_t>(lj - 1)] = 0.0;
      for (int i = li; i <= ki; ++i)
        fd[static_cast<std::size_t>(i)][static_cast<std::size_t>(lj - 1)] =
            fd[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(lj - 1)] +
            t1.change[static_cast<std::size_t>(i)];
      for (int j = lj; j <= kj; ++j)
        fd[static_cast<std::size_t>(li - 1)][static_cast<std::size_t>(j)] =
            fd[static_cast<std::size_t>(li - 1)][static_cast<std::size_t>(j - 1)] +
            t2.change[static_cast<std::size_t>(j)];

      for (int i = li; i <= ki; ++i) {
        for (int j = lj; j <= kj; ++j) {
          const double del = fd[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] +
                             t1.change[static_cast<std::size_t>(i)];
          const double ins = fd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] +
                             t2.change[static_cast<std::size_t>(j)];
          double best;
          if (t1.lml[static_cast<std::size_t>(i)] == li && t2.lml[static_cast<std::size_t>(j)] == lj) {
            const double ren =
                fd[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                model.rename_cost(t1.word[static_cast<std::size_t>(i)], t2.word[static_cast<std::size_t>(j)]);
            best = std::min(std::min(del, ins), ren);
            treedist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = best;
          } else {
            const double sub =
                fd[static_cast<std::size_t>(t1.lml[static_cast<std::size_t>(i)] - 1)]
                  [static_cast<std::size_t>(t2.lml[static_cast<std::size_t>(j)] - 1)] +
                treedist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            best = std::min(std::min(del, ins), sub);
          }
          fd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = best;
        }
      }
    }
  }
  return treedist[static_cast<std::size_t>(n1)][static_cast<std::size_t>(n2)];
}

}  // namespace treemark
