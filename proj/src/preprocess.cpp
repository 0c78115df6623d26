#include "treemark/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treemark {

namespace {

inline int clamp_coord(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void median_rows(const GrayImage& img, GrayImage& out, int window, int y) {
  const int r = window / 2;
  const int w = img.width;
  const int h = img.height;
  std::array<int, 256> hist{};
  // Per-row sliding histogram: O(window) updates per pixel.
  for (int x = 0; x < w; ++x) {
    if (x == 0) {
      hist.fill(0);
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          ++hist[img.at(clamp_coord(dx, 0, w - 1), clamp_coord(y + dy, 0, h - 1))];
    } else {
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = clamp_coord(y + dy, 0, h - 1);
        --hist[img.at(clamp_coord(x - 1 - r, 0, w - 1), yy)];
        ++hist[img.at(clamp_coord(x + r, 0, w - 1), yy)];
      }
    }
    const int need = (window * window + 1) / 2;
    int acc = 0;
    int median = 0;
    for (int v = 0; v < 256; ++v) {
      acc += hist[v];
      if (acc >= need) {
        median = v;
        break;
      }
    }
    out.at(x, y) = static_cast<std::uint8_t>(median);
  }
}

void check_median_window(int window) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("median_filter: window must be an odd integer >= 1");
}

void check_bilateral_sigmas(double sigma_spatial, double sigma_range) {
  if (!(sigma_spatial > 0.0) || !(sigma_range > 0.0))
    throw std::invalid_argument("bilateral_filter: sigmas must be positive");
}

double bilateral_pixel(const GrayImage& img, int x, int y, int radius, double inv_two_ss2,
                       double inv_two_sr2) {
  const int w = img.width;
  const int h = img.height;
  const double center = img.at(x, y);
  double acc = 0.0;
  double wsum = 0.0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const double v = img.at(clamp_coord(x + dx, 0, w - 1), clamp_coord(y + dy, 0, h - 1));
      const double dv = v - center;
      const double wgt = std::exp(-(dx * dx + dy * dy) * inv_two_ss2) *
                         std::exp(-(dv * dv) * inv_two_sr2);
      acc += wgt * v;
      wsum += wgt;
    }
  }
  return acc / wsum;
}

GrayImage round_to_gray(const std::vector<double>& values, int w, int h) {
  GrayImage out(w, h);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::lround(values[i]);
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

}  // namespace

GrayImage to_grayscale(const RgbImage& image) {
  if (image.width < 1 || image.height < 1 || image.data.empty())
    throw std::invalid_argument("to_grayscale: empty image");
  GrayImage out(image.width, image.height);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const double y = 0.299 * image.data[3 * i] + 0.587 * image.data[3 * i + 1] +
                     0.114 * image.data[3 * i + 2];
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(y));
  }
  return out;
}

GrayImage median_filter(const GrayImage& img, int window) {
  check_median_window(window);
  GrayImage out(img.width, img.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) median_rows(img, out, window, y);
  return out;
}

GrayImage median_filter_serial(const GrayImage& img, int window) {
  check_median_window(window);
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) median_rows(img, out, window, y);
  return out;
}

std::vector<double> bilateral_filter_values(const GrayImage& img, double sigma_spatial,
                                            double sigma_range) {
  check_bilateral_sigmas(sigma_spatial, sigma_range);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_spatial));
  const double inv_two_ss2 = 1.0 / (2.0 * sigma_spatial * sigma_spatial);
  const double inv_two_sr2 = 1.0 / (2.0 * sigma_range * sigma_range);
  std::vector<double> out(img.size());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out[static_cast<std::size_t>(y) * img.width + x] =
          bilateral_pixel(img, x, y, radius, inv_two_ss2, inv_two_sr2);
  return out;
}

std::vector<double> bilateral_filter_values_serial(const GrayImage& img, double sigma_spatial,
                                                   double sigma_range) {
  check_bilateral_sigmas(sigma_spatial, sigma_range);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_spatial));
  const double inv_two_ss2 = 1.0 / (2.0 * sigma_spatial * sigma_spatial);
  const double inv_two_sr2 = 1.0 / (2.0 * sigma_range * sigma_range);
  std::vector<double> out(img.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out[static_cast<std::size_t>(y) * img.width + x] =
          bilateral_pixel(img, x, y, radius, inv_two_ss2, inv_two_sr2);
  return out;
}

GrayImage bilateral_filter(const GrayImage& img, double sigma_spatial, double sigma_range) {
  return round_to_gray(bilateral_filter_values(img, sigma_spatial, sigma_range), img.width,
                       img.height);
}

GrayImage bilateral_filter_serial(const GrayImage& img, double sigma_spatial, double sigma_range) {
  return round_to_gray(bilateral_filter_values_serial(img, sigma_spatial, sigma_range), img.width,
                       img.height);
}

Histogram intensity_histogram(const GrayImage& img) {
  Histogram hist{};
  for (std::uint8_t p : img.pixels) ++hist[p];
  return hist;
}

OtsuThreshold otsu_threshold(const Histogram& histogram) {
  std::int64_t total = 0;
  double weighted_total = 0.0;
  for (int v = 0; v < 256; ++v) {
    total += histogram[v];
    weighted_total += static_cast<double>(v) * histogram[v];
  }
  if (total == 0) throw std::invalid_argument("otsu_threshold: empty histogram");

  OtsuThreshold result;
  double best = 0.0;
  bool any_positive = false;
  std::int64_t count_low = 0;
  double sum_low = 0.0;
  for (int t = 0; t < 256; ++t) {
    count_low += histogram[t];
    sum_low += static_cast<double>(t) * histogram[t];
    const std::int64_t count_high = total - count_low;
    if (count_low == 0 || count_high == 0) continue;
    const double mean_low = sum_low / count_low;
    const double mean_high = (weighted_total - sum_low) / count_high;
    const double dm = mean_low - mean_high;
    const double variance = static_cast<double>(count_low) * static_cast<double>(count_high) * dm * dm;
    if (variance > best) {
      best = variance;
      result.threshold = t;
      any_positive = true;
    }
  }
  if (!any_positive) {
    result.threshold = 255;  // everything <= t: all background
    result.degenerate = true;
  }
  return result;
}

OtsuResult otsu_binarize(const GrayImage& img) {
  if (img.size() == 0) throw std::invalid_argument("otsu_binarize: empty image");
  const OtsuThreshold t = otsu_threshold(intensity_histogram(img));
  OtsuResult result;
  result.threshold = t.threshold;
  result.degenerate = t.degenerate;
  result.image = BinaryImage(img.width, img.height);
  if (!t.degenerate) {
    for (std::size_t i = 0; i < img.size(); ++i)
      result.image.bits[i] = img.pixels[i] > t.threshold ? 1 : 0;
  }
  return result;
}

BinarizeResult binarize_pipeline(const GrayImage& image, const PreprocessConfig& config) {
  GrayImage gray = median_filter(image, config.median_window);
  if (config.bilateral_enabled)
    gray = bilateral_filter(gray, config.bilateral_sigma_spatial, config.bilateral_sigma_range);
  OtsuResult otsu = otsu_binarize(gray);
  BinarizeResult result;
  result.threshold = otsu.threshold;
  result.degenerate = otsu.degenerate;
  result.image = std::move(otsu.image);
  if (config.invert)
    for (auto& b : result.image.bits) b = b ? 0 : 1;
  return result;
}

BinarizeResult binarize_pipeline(const RgbImage& image, const PreprocessConfig& config) {
  return binarize_pipeline(to_grayscale(image), config);
}

}  // namespace treemark
