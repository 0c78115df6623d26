#include "treemark/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "treemark/exact_sum.hpp"

namespace treemark {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct RadialTable {
  // coeff[m][s] multiplies rho^(p - 2s) for moment m.
  std::array<std::array<double, 5>, kZernikeCount> coeff{};
  std::array<int, kZernikeCount> term_count{};
};

const std::array<std::pair<int, int>, kZernikeCount>& orders() {
  static const std::array<std::pair<int, int>, kZernikeCount> table = [] {
    std::array<std::pair<int, int>, kZernikeCount> t{};
    int i = 0;
    for (int p = 0; p <= 8; ++p)
      for (int q = p % 2; q <= p; q += 2) t[i++] = {p, q};
    return t;
  }();
  return table;
}

const RadialTable& radial_table() {
  static const RadialTable table = [] {
    RadialTable t;
    for (int m = 0; m < kZernikeCount; ++m) {
      const auto [p, q] = orders()[m];
      const int smax = (p - q) / 2;
      t.term_count[m] = smax + 1;
      for (int s = 0; s <= smax; ++s) {
        const double sign = (s % 2 == 0) ? 1.0 : -1.0;
        t.coeff[m][s] = sign * factorial(p - s) /
                        (factorial(s) * factorial((p + q) / 2 - s) * factorial((p - q) / 2 - s));
      }
    }
    return t;
  }();
  return table;
}

double i128_to_double(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  const double hi = static_cast<double>(static_cast<std::uint64_t>(u >> 64)) * 18446744073709551616.0;
  const double r = hi + static_cast<double>(static_cast<std::uint64_t>(u));
  return neg ? -r : r;
}

ZernikeVector zernike_over_pixels(const std::vector<PixelPoint>& pixels) {
  const std::int64_t n = static_cast<std::int64_t>(pixels.size());
  if (n < 1) throw std::invalid_argument("zernike_moments: zero-area shape");

  std::int64_t sum_x = 0, sum_y = 0;
  for (const auto& p : pixels) {
    sum_x += p.x;
    sum_y += p.y;
  }

  // Integer centroid-scaled offsets: u = n*x - sum_x transforms exactly under
  // lattice rotations and translations, which keeps the magnitudes bit-stable.
  __int128 s2 = 0;
  for (const auto& p : pixels) {
    const std::int64_t ux = n * p.x - sum_x;
    const std::int64_t vy = n * p.y - sum_y;
    s2 += static_cast<__int128>(ux) * ux + static_cast<__int128>(vy) * vy;
  }

  ZernikeVector out{};
  if (s2 == 0) {
    out[0] = 1.0;  // tiny-disk limit: |Z_00| = 1, higher moments vanish
    return out;
  }

  const double nd = static_cast<double>(n);
  const double s2d = i128_to_double(s2);
  const RadialTable& table = radial_table();

  std::array<ExactSum, kZernikeCount> acc_re{}, acc_im{};
  double rho_pow[9];
  double ck[9], sk[9];

  for (const auto& p : pixels) {
    const std::int64_t ux = n * p.x - sum_x;
    const std::int64_t vy = n * p.y - sum_y;
    const __int128 r2i = static_cast<__int128>(ux) * ux + static_cast<__int128>(vy) * vy;
    const double rho2 = i128_to_double(r2i) * nd / (2.0 * s2d);
    if (rho2 > 1.0) continue;  // outside the unit disk after normalization

    const double u = static_cast<double>(ux);
    const double v = static_cast<double>(vy);
    const double d = std::sqrt(u * u + v * v);
    const double c = d > 0.0 ? u / d : 1.0;
    const double s = d > 0.0 ? v / d : 0.0;

    const double rho = std::sqrt(rho2);
    rho_pow[0] = 1.0;
    for (int k = 1; k <= 8; ++k) rho_pow[k] = rho_pow[k - 1] * rho;

    ck[0] = 1.0;
    sk[0] = 0.0;
    ck[1] = c;
    sk[1] = s;
    for (int k = 2; k <= 8; ++k) {
      const double t1 = c * ck[k - 1];
      const double t2 = s * sk[k - 1];
      ck[k] = t1 - t2;
      const double t3 = s * ck[k - 1];
      const double t4 = c * sk[k - 1];
      sk[k] = t3 + t4;
    }

    for (int m = 0; m < kZernikeCount; ++m) {
      const auto [p_ord, q_rep] = orders()[m];
      double radial = 0.0;
      for (int t = 0; t < table.term_count[m]; ++t)
        radial += table.coeff[m][t] * rho_pow[p_ord - 2 * t];
      const double re = radial * ck[q_rep];
      const double im = -(radial * sk[q_rep]);
      acc_re[m].add(re);
      acc_im[m].add(im);
    }
  }

  // Normalized pixel area: each pixel covers 1/R^2 with R^2 = 2*S2/n^3.
  const double r2norm = (2.0 * s2d) / (nd * nd * nd);
  for (int m = 0; m < kZernikeCount; ++m) {
    const auto [p_ord, q_rep] = orders()[m];
    const double zre = acc_re[m].value();
    const double zim = acc_im[m].value();
    const double mag2 = zre * zre + zim * zim;
    const double scale = (static_cast<double>(p_ord + 1) / kPi) / r2norm;
    out[m] = scale * std::sqrt(mag2);
  }
  return out;
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

std::vector<PixelPoint> distinct_points(const Contour& contour) {
  std::vector<PixelPoint> pts(contour.begin(), contour.end());
  std::sort(pts.begin(), pts.end(),
            [](const PixelPoint& a, const PixelPoint& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double cross(const PixelPoint& o, const PixelPoint& a, const PixelPoint& b) {
  return static_cast<double>(a.x - o.x) * (b.y - o.y) - static_cast<double>(a.y - o.y) * (b.x - o.x);
}

// Monotone chain over distinct points sorted by (x, y).
std::vector<PixelPoint> convex_hull(std::vector<PixelPoint> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const PixelPoint& a, const PixelPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<PixelPoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

const std::array<std::pair<int, int>, kZernikeCount>& zernike_orders() { return orders(); }

double radial_polynomial(int p, int q, double rho) {
  if (p < 0 || q < 0 || q > p || (p - q) % 2 != 0)
    throw std::invalid_argument("radial_polynomial: require 0 <= q <= p with p - q even");
  double acc = 0.0;
  const int smax = (p - q) / 2;
  for (int s = 0; s <= smax; ++s) {
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    const double c = sign * factorial(p - s) /
                     (factorial(s) * factorial((p + q) / 2 - s) * factorial((p - q) / 2 - s));
    acc += c * std::pow(rho, p - 2 * s);
  }
  return acc;
}

ZernikeVector zernike_moments(const ComponentShape& shape) {
  if (shape.area < 1) throw std::invalid_argument("zernike_moments: zero-area shape");
  std::vector<PixelPoint> pixels;
  pixels.reserve(static_cast<std::size_t>(shape.area));
  for (int y = 0; y < shape.h; ++y)
    for (int x = 0; x < shape.w; ++x)
      if (shape.mask[static_cast<std::size_t>(y) * shape.w + x])
        pixels.push_back({shape.x0 + x, shape.y0 + y});
  return zernike_over_pixels(pixels);
}

ZernikeVector zernike_moments_of_pixels(const std::vector<PixelPoint>& pixels) {
  return zernike_over_pixels(pixels);
}

double circularity(const ComponentShape& shape) {
  if (shape.area < 1) throw std::invalid_argument("circularity: zero-area shape");
  const double p = contour_perimeter(shape.contour);
  return p * p / (4.0 * kPi * static_cast<double>(shape.area));
}

double bending_energy(const Contour& contour) {
  const std::size_t m = contour.size();
  if (m < 8) throw std::invalid_argument("bending_energy: contour too short");

  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const PixelPoint& a = contour[i];
    const PixelPoint& b = contour[(i + 1) % m];
    const double dx = b.x - a.x, dy = b.y - a.y;
    cum[i + 1] = cum[i] + std::sqrt(dx * dx + dy * dy);
  }
  const double perimeter = cum[m];
  if (!(perimeter > 0.0)) throw std::invalid_argument("bending_energy: degenerate contour");

  // Anchor resampling at the point farthest from the contour centroid so the
  // sample phase is rotation-covariant (exact under lattice rotations).
  std::int64_t cx = 0, cy = 0;
  for (const auto& p : contour) {
    cx += p.x;
    cy += p.y;
  }
  const std::int64_t mm = static_cast<std::int64_t>(m);
  __int128 best = -1;
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t ux = mm * contour[i].x - cx;
    const std::int64_t vy = mm * contour[i].y - cy;
    const __int128 d2 = static_cast<__int128>(ux) * ux + static_cast<__int128>(vy) * vy;
    if (d2 > best) {
      best = d2;
      anchor = i;
    }
  }

  constexpr int kSamples = 128;
  std::vector<double> qx(kSamples), qy(kSamples);
  const double anchor_s = cum[anchor];
  std::size_t seg = 0;
  for (int j = 0; j < kSamples; ++j) {
    double s = anchor_s + perimeter * static_cast<double>(j) / kSamples;
    if (s >= perimeter) s -= perimeter;
    if (s < cum[seg]) seg = 0;
    while (seg + 1 <= m && cum[seg + 1] < s) ++seg;
    const PixelPoint& a = contour[seg % m];
    const PixelPoint& b = contour[(seg + 1) % m];
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    // Unit-perimeter scaling for scale invariance.
    qx[j] = (a.x + t * (b.x - a.x)) / perimeter;
    qy[j] = (a.y + t * (b.y - a.y)) / perimeter;
  }

  std::array<double, kSamples> phi{};
  for (int j = 0; j < kSamples; ++j) {
    const int prev = (j + kSamples - 1) % kSamples;
    const int next = (j + 1) % kSamples;
    phi[j] = std::atan2(qy[next] - qy[prev], qx[next] - qx[prev]);
  }

  const double ds = 1.0 / kSamples;
  double acc = 0.0;
  for (int j = 0; j < kSamples; ++j) {
    const int prev = (j + kSamples - 1) % kSamples;
    const int next = (j + 1) % kSamples;
    const double k = wrap_angle(phi[next] - phi[prev]) / (2.0 * ds);
    acc += k * k;
  }
  return acc / kSamples;
}

double eccentricity(const Contour& contour) {
  const std::vector<PixelPoint> pts = distinct_points(contour);
  const std::size_t n = pts.size();
  if (n == 0) throw std::invalid_argument("eccentricity: empty contour");
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= static_cast<double>(n);
  syy /= static_cast<double>(n);
  sxy /= static_cast<double>(n);
  const double t = 0.5 * (sxx + syy);
  const double d = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double l1 = t + d;
  const double l2 = std::max(t - d, 0.0);
  if (!(l1 > 0.0)) return 0.0;
  return l2 / l1;
}

double convexity(const Contour& contour) {
  const double perimeter = contour_perimeter(contour);
  if (!(perimeter > 0.0)) throw std::invalid_argument("convexity: degenerate contour");
  const std::vector<PixelPoint> hull = convex_hull(distinct_points(contour));
  double hull_perimeter = 0.0;
  const std::size_t n = hull.size();
  if (n == 2) {
    const double dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
    hull_perimeter = 2.0 * std::sqrt(dx * dx + dy * dy);
  } else if (n > 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const PixelPoint& a = hull[i];
      const PixelPoint& b = hull[(i + 1) % n];
      const double dx = b.x - a.x, dy = b.y - a.y;
      hull_perimeter += std::sqrt(dx * dx + dy * dy);
    }
  }
  return hull_perimeter / perimeter;
}

FeatureVector describe_shape(const ComponentShape& shape) {
  FeatureVector f{};
  const ZernikeVector z = zernike_moments(shape);
  std::copy(z.begin(), z.end(), f.begin());
  f[25] = circularity(shape);
  f[26] = bending_energy(shape.contour);
  f[27] = eccentricity(shape.contour);
  f[28] = convexity(shape.contour);
  return f;
}

std::vector<FeatureVector> describe_shapes(const std::vector<ComponentShape>& shapes,
                                           const std::vector<int>& ids) {
  std::vector<FeatureVector> out(ids.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(ids.size()); ++i)
    out[static_cast<std::size_t>(i)] = describe_shape(shapes[ids[static_cast<std::size_t>(i)]]);
  return out;
}

std::vector<FeatureVector> describe_shapes_serial(const std::vector<ComponentShape>& shapes,
                                                  const std::vector<int>& ids) {
  std::vector<FeatureVector> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = describe_shape(shapes[ids[i]]);
  return out;
}

}  // namespace treemark
