#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treemark/image.hpp"

namespace treemark {

struct PixelPoint {
  int x = 0;
  int y = 0;
  bool operator==(const PixelPoint&) const = default;
};

/// Closed pixel chain: consecutive points are 8-neighbors and the first point
/// follows the last.
using Contour = std::vector<PixelPoint>;

enum class ShapeKind : std::uint8_t { Object, Hole };

/// One component shape: a connected foreground region (Object, 8-connected)
/// or a connected background region (Hole, 4-connected). Coordinates are in
/// the padded grid: decomposition adds a one-pixel background frame so the
/// outermost hole always exists.
struct ComponentShape {
  int id = -1;
  ShapeKind kind = ShapeKind::Hole;
  int parent = -1;  // id of the surrounding shape; -1 for the root hole
  int x0 = 0, y0 = 0;  // bounding box origin (padded coordinates)
  int w = 0, h = 0;
  std::vector<std::uint8_t> mask;  // w*h region mask over the bounding box
  std::int64_t area = 0;
  Contour contour;

  bool in_region(int x, int y) const {
    if (x < x0 || y < y0 || x >= x0 + w || y >= y0 + h) return false;
    return mask[static_cast<std::size_t>(y - y0) * w + (x - x0)] != 0;
  }
};

struct HierarchySkeleton {
  std::vector<int> nodes;                  // surviving shape ids, ascending
  std::vector<int> parent;                 // parent[id]; -1 for root, -2 for pruned
  std::vector<std::vector<int>> children;  // children[id], ascending
  int root = -1;

  bool contains(int id) const {
    return id >= 0 && id < static_cast<int>(parent.size()) && parent[id] != -2;
  }
};

/// Alternately extracts connected background (hole) and foreground (object)
/// regions until every pixel of the padded grid belongs to exactly one shape.
/// Shape ids follow raster discovery order; id 0 is always the root hole.
std::vector<ComponentShape> extract_component_shapes(const BinaryImage& img);

/// Assembles the inclusion tree from the shapes' parent links.
HierarchySkeleton build_hierarchy_skeleton(const std::vector<ComponentShape>& shapes);

/// Removes non-root shapes with area < min_area; their children re-attach to
/// the removed node's parent. Pruning the root is forbidden.
HierarchySkeleton filter_small_shapes(const HierarchySkeleton& skeleton,
                                      const std::vector<ComponentShape>& shapes,
                                      std::int64_t min_area);

/// S-expression-like rendering, e.g. (hole#0 (object#1 (hole#2)) (object#3)).
std::string skeleton_to_text(const HierarchySkeleton& skeleton,
                             const std::vector<ComponentShape>& shapes);

/// Color-coded label image (padded size) for visual inspection.
RgbImage label_image(const std::vector<ComponentShape>& shapes, int padded_width,
                     int padded_height);

/// Chain-code length of the closed contour: straight steps count 1 and
/// diagonal steps count sqrt(2).
double contour_perimeter(const Contour& contour);

}  // namespace treemark
