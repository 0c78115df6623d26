#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "treemark/descriptors.hpp"
#include "treemark/kdtree.hpp"

namespace treemark {

/// Per-dimension z-scoring fitted on the training pool. A zero-deviation
/// dimension standardizes with deviation 1 so constant features pass through.
struct Standardizer {
  std::array<double, kDescriptorDim> mean{};
  std::array<double, kDescriptorDim> deviation{};

  Standardizer() {
    mean.fill(0.0);
    deviation.fill(1.0);
  }

  static Standardizer fit(const std::vector<FeatureVector>& features);
  static Standardizer identity() { return Standardizer(); }

  FeatureVector apply(const FeatureVector& f) const {
    FeatureVector out;
    for (int d = 0; d < kDescriptorDim; ++d) out[d] = (f[d] - mean[d]) / deviation[d];
    return out;
  }
};

struct VisualWordCodebook {
  int k = 0;
  std::vector<FeatureVector> centroids;  // standardized space
  Standardizer standardizer;
  double mean_pairwise_distance = 0.0;  // cached Eq.-9 inner term
  std::uint64_t rng_seed = 0;

  FeatureVector standardize(const FeatureVector& f) const { return standardizer.apply(f); }

  /// Builds the nearest-centroid accelerator; call after filling centroids.
  void finalize();

  const KdTree<kDescriptorDim>* tree() const { return tree_.get(); }

 private:
  std::shared_ptr<const KdTree<kDescriptorDim>> tree_;
};

struct KMeansTrace {
  std::vector<double> inertia;  // per assignment pass
  int iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm with k-means++ seeding. Converges when no assignment
/// changes or after 300 iterations; empty clusters are re-seeded from the
/// farthest point. Reproducible from (features, k, seed).
VisualWordCodebook train_visual_words(const std::vector<FeatureVector>& features, int k,
                                      std::uint64_t seed, bool standardize = true,
                                      KMeansTrace* trace = nullptr);

/// Exact nearest centroid for an already-standardized vector; ties break to
/// the lowest word id.
int assign_word(const FeatureVector& standardized, const VisualWordCodebook& codebook);

/// Linear-scan reference with the same tie-break.
int assign_word_linear(const FeatureVector& standardized, const VisualWordCodebook& codebook);

/// Batch assignment of standardized vectors.
std::vector<int> assign_words(const std::vector<FeatureVector>& standardized,
                              const VisualWordCodebook& codebook);
std::vector<int> assign_words_serial(const std::vector<FeatureVector>& standardized,
                                     const VisualWordCodebook& codebook);

/// 2/(m(m-1)) * sum of pairwise centroid distances; requires k >= 2.
double mean_pairwise_word_distance(const VisualWordCodebook& codebook);

double euclidean_distance(const FeatureVector& a, const FeatureVector& b);

}  // namespace treemark
