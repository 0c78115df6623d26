#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "treemark/image.hpp"

namespace treemark {

struct PreprocessConfig {
  int median_window = 5;
  bool bilateral_enabled = false;
  double bilateral_sigma_spatial = 3.0;
  double bilateral_sigma_range = 30.0;
  bool invert = false;  // flip foreground/background for light-on-dark inputs
};

/// Rec.601 luminance, rounded to the nearest integer.
GrayImage to_grayscale(const RgbImage& image);

/// Median of the window x window neighborhood; coordinates clamp at borders.
/// The window must be an odd integer >= 1.
GrayImage median_filter(const GrayImage& img, int window);
GrayImage median_filter_serial(const GrayImage& img, int window);

/// Unrounded bilateral response (spatial Gaussian x range Gaussian, weights
/// normalized per pixel). Kernel radius = ceil(3 * sigma_spatial).
std::vector<double> bilateral_filter_values(const GrayImage& img, double sigma_spatial,
                                            double sigma_range);
std::vector<double> bilateral_filter_values_serial(const GrayImage& img, double sigma_spatial,
                                                   double sigma_range);
GrayImage bilateral_filter(const GrayImage& img, double sigma_spatial, double sigma_range);
GrayImage bilateral_filter_serial(const GrayImage& img, double sigma_spatial, double sigma_range);

using Histogram = std::array<std::int64_t, 256>;

Histogram intensity_histogram(const GrayImage& img);

struct OtsuThreshold {
  int threshold = 0;    // pixels > threshold are foreground
  bool degenerate = false;  // zero between-class variance at every threshold
};

/// Maximizes between-class variance over the 256-bin histogram; ties are
/// broken toward the lower threshold.
OtsuThreshold otsu_threshold(const Histogram& histogram);

struct OtsuResult {
  BinaryImage image;
  int threshold = 0;
  bool degenerate = false;
};

OtsuResult otsu_binarize(const GrayImage& img);

struct BinarizeResult {
  BinaryImage image;
  int threshold = 0;
  bool degenerate = false;
};

/// grayscale -> median -> (optional) bilateral -> Otsu, in that order.
BinarizeResult binarize_pipeline(const RgbImage& image, const PreprocessConfig& config);
BinarizeResult binarize_pipeline(const GrayImage& image, const PreprocessConfig& config);

}  // namespace treemark
