#include "treemark/visual_words.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "treemark/rng.hpp"

namespace treemark {

namespace {

double dist2(const FeatureVector& a, const FeatureVector& b) {
  double acc = 0.0;
  for (int d = 0; d < kDescriptorDim; ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

int nearest_linear(const FeatureVector& f, const std::vector<FeatureVector>& centroids) {
  int best = 0;
  double best_d2 = dist2(f, centroids[0]);
  for (int j = 1; j < static_cast<int>(centroids.size()); ++j) {
    const double d2 = dist2(f, centroids[static_cast<std::size_t>(j)]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

}  // namespace

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
  return std::sqrt(dist2(a, b));
}

Standardizer Standardizer::fit(const std::vector<FeatureVector>& features) {
  if (features.empty()) throw std::invalid_argument("Standardizer::fit: no features");
  Standardizer s;
  const double n = static_cast<double>(features.size());
  for (int d = 0; d < kDescriptorDim; ++d) {
    double mean = 0.0;
    for (const auto& f : features) mean += f[d];
    mean /= n;
    double var = 0.0;
    for (const auto& f : features) {
      const double diff = f[d] - mean;
      var += diff * diff;
    }
    var /= n;
    s.mean[d] = mean;
    s.deviation[d] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

void VisualWordCodebook::finalize() {
  std::vector<KdTree<kDescriptorDim>::Point> pts(centroids.begin(), centroids.end());
  tree_ = std::make_shared<const KdTree<kDescriptorDim>>(pts);
}

VisualWordCodebook train_visual_words(const std::vector<FeatureVector>& features, int k,
                                      std::uint64_t seed, bool standardize, KMeansTrace* trace) {
  const int n = static_cast<int>(features.size());
  if (k < 1) throw std::invalid_argument("train_visual_words: k must be >= 1");
  if (n < k) throw std::invalid_argument("train_visual_words: fewer features than words");

  VisualWordCodebook codebook;
  codebook.k = k;
  codebook.rng_seed = seed;
  codebook.standardizer = standardize ? Standardizer::fit(features) : Standardizer::identity();

  std::vector<FeatureVector> data(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    data[i] = codebook.standardizer.apply(features[i]);

  // k-means++ seeding.
  RngStream rng(seed);
  std::vector<FeatureVector>& centroids = codebook.centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(data[rng.bounded(static_cast<std::uint64_t>(n))]);
  std::vector<double> min_d2(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) min_d2[static_cast<std::size_t>(i)] = dist2(data[static_cast<std::size_t>(i)], centroids[0]);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (double v : min_d2) total += v;
    if (!(total > 0.0))
      throw std::invalid_argument("train_visual_words: fewer distinct features than words");
    const double target = rng.next_unit() * total;
    double acc = 0.0;
    int chosen = -1;
    for (int i = 0; i < n; ++i) {
      acc += min_d2[static_cast<std::size_t>(i)];
      if (acc >= target && min_d2[static_cast<std::size_t>(i)] > 0.0) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) {  // rounding pushed target past the last positive weight
      for (int i = n - 1; i >= 0; --i)
        if (min_d2[static_cast<std::size_t>(i)] > 0.0) {
          chosen = i;
          break;
        }
    }
    centroids.push_back(data[static_cast<std::size_t>(chosen)]);
    const FeatureVector& c = centroids.back();
    for (int i = 0; i < n; ++i) {
      const double d2 = dist2(data[static_cast<std::size_t>(i)], c);
      if (d2 < min_d2[static_cast<std::size_t>(i)]) min_d2[static_cast<std::size_t>(i)] = d2;
    }
  }

  // Lloyd iterations.
  constexpr int kMaxIterations = 300;
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<double> point_d2(static_cast<std::size_t>(n), 0.0);
  KMeansTrace local_trace;
  bool converged = false;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = false;
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (int i = 0; i < n; ++i) {
      const int best = nearest_linear(data[static_cast<std::size_t>(i)], centroids);
      point_d2[static_cast<std::size_t>(i)] = dist2(data[static_cast<std::size_t>(i)], centroids[static_cast<std::size_t>(best)]);
      if (best != assignment[static_cast<std::size_t>(i)]) {
        assignment[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += point_d2[static_cast<std::size_t>(i)];
    local_trace.inertia.push_back(inertia);
    local_trace.iterations = iter + 1;
    if (!changed) {
      converged = true;
      break;
    }

    // Update step: accumulate in point order for determinism.
    std::vector<FeatureVector> sums(static_cast<std::size_t>(k));
    for (auto& s : sums) s.fill(0.0);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int a = assignment[static_cast<std::size_t>(i)];
      ++counts[static_cast<std::size_t>(a)];
      for (int d = 0; d < kDescriptorDim; ++d)
        sums[static_cast<std::size_t>(a)][d] += data[static_cast<std::size_t>(i)][d];
    }
    std::vector<bool> reseeded(static_cast<std::size_t>(n), false);
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        for (int d = 0; d < kDescriptorDim; ++d)
          centroids[static_cast<std::size_t>(j)][d] =
              sums[static_cast<std::size_t>(j)][d] / static_cast<double>(counts[static_cast<std::size_t>(j)]);
      } else {
        // Re-seed an empty cluster from the farthest unused point.
        int farthest = -1;
        double far_d2 = -1.0;
        for (int i = 0; i < n; ++i) {
          if (reseeded[static_cast<std::size_t>(i)]) continue;
          if (point_d2[static_cast<std::size_t>(i)] > far_d2) {
            far_d2 = point_d2[static_cast<std::size_t>(i)];
            farthest = i;
          }
        }
        centroids[static_cast<std::size_t>(j)] = data[static_cast<std::size_t>(farthest)];
        reseeded[static_cast<std::size_t>(farthest)] = true;
      }
    }
  }
  local_trace.converged = converged;
  if (trace) *trace = local_trace;

  codebook.finalize();
  if (k >= 2) codebook.mean_pairwise_distance = mean_pairwise_word_distance(codebook);
  return codebook;
}

int assign_word(const FeatureVector& standardized, const VisualWordCodebook& codebook) {
  if (codebook.tree() && !codebook.tree()->empty()) return codebook.tree()->nearest(standardized);
  return assign_word_linear(standardized, codebook);
}

int assign_word_linear(const FeatureVector& standardized, const VisualWordCodebook& codebook) {
  if (codebook.centroids.empty())
    throw std::invalid_argument("assign_word: codebook has no centroids");
  return nearest_linear(standardized, codebook.centroids);
}

std::vector<int> assign_words(const std::vector<FeatureVector>& standardized,
                              const VisualWordCodebook& codebook) {
  std::vector<int> out(standardized.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(standardized.size()); ++i)
    out[static_cast<std::size_t>(i)] = assign_word(standardized[static_cast<std::size_t>(i)], codebook);
  return out;
}

std::vector<int> assign_words_serial(const std::vector<FeatureVector>& standardized,
                                     const VisualWordCodebook& codebook) {
  std::vector<int> out(standardized.size());
  for (std::size_t i = 0; i < standardized.size(); ++i)
    out[i] = assign_word_linear(standardized[i], codebook);
  return out;
}

double mean_pairwise_word_distance(const VisualWordCodebook& codebook) {
  const int m = static_cast<int>(codebook.centroids.size());
  if (m < 2)
    throw std::invalid_argument("mean_pairwise_word_distance: undefined for fewer than two words");
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      acc += euclidean_distance(codebook.centroids[static_cast<std::size_t>(i)],
                                codebook.centroids[static_cast<std::size_t>(j)]);
  return 2.0 * acc / (static_cast<double>(m) * (m - 1));
}

}  // namespace treemark
