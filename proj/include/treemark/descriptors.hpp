#pragma once

#include <array>
#include <utility>
#include <vector>

#include "treemark/decompose.hpp"

namespace treemark {

inline constexpr int kZernikeCount = 25;
inline constexpr int kDescriptorDim = 29;

using ZernikeVector = std::array<double, kZernikeCount>;

/// 29 reals: 25 Zernike magnitudes |Z_{p,q}| for p = 0..8 (p-q even, q <= p),
/// then circularity, bending energy, eccentricity, convexity.
using FeatureVector = std::array<double, kDescriptorDim>;

/// The fixed (p, q) sequence of the 25 moments:
/// (0,0),(1,1),(2,0),(2,2),(3,1),(3,3),(4,0),(4,2),(4,4),(5,1),(5,3),(5,5),
/// (6,0),(6,2),(6,4),(6,6),(7,1),(7,3),(7,5),(7,7),(8,0),(8,2),(8,4),(8,6),(8,8)
const std::array<std::pair<int, int>, kZernikeCount>& zernike_orders();

/// Standard Zernike radial polynomial R_{p,q}(rho).
double radial_polynomial(int p, int q, double rho);

/// Magnitudes |Z_{p,q}| after translating the region centroid to the origin
/// and scaling by sqrt(2) times the radius of gyration, which maps the shape
/// inside the unit disk (pixels landing outside are discarded). All interior
/// arithmetic is either exact integer work or order-independent summation, so
/// the magnitudes are bit-identical under lattice rotations, mirroring and
/// translation of the region.
ZernikeVector zernike_moments(const ComponentShape& shape);

/// Raw moment computation over an explicit pixel set (used for whole-image
/// baseline features).
ZernikeVector zernike_moments_of_pixels(const std::vector<PixelPoint>& pixels);

/// perimeter^2 / (4 pi area), perimeter measured along the chain code with
/// diagonal steps counted sqrt(2).
double circularity(const ComponentShape& shape);

/// Mean squared curvature of the contour resampled by arc length to 128
/// points and scaled to unit perimeter. Curvature comes from central finite
/// differences of the tangent angle.
double bending_energy(const Contour& contour);

/// lambda2 / lambda1 of the covariance of the distinct contour points.
double eccentricity(const Contour& contour);

/// Convex hull perimeter / contour perimeter (monotone-chain hull).
double convexity(const Contour& contour);

/// [zernike(25), circularity, bending, eccentricity, convexity].
FeatureVector describe_shape(const ComponentShape& shape);

/// Batch descriptor computation for the shapes selected by `ids`.
std::vector<FeatureVector> describe_shapes(const std::vector<ComponentShape>& shapes,
                                           const std::vector<int>& ids);
std::vector<FeatureVector> describe_shapes_serial(const std::vector<ComponentShape>& shapes,
                                                  const std::vector<int>& ids);

}  // namespace treemark
