#include "treemark/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treemark {

namespace {

// 8-neighborhood in clockwise order starting west (image coordinates, y down).
constexpr int kDx8[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy8[8] = {0, -1, -1, -1, 0, 1, 1, 1};

struct LabelGrid {
  int w = 0, h = 0;
  std::vector<std::int32_t> label;
  std::int32_t at(int x, int y) const { return label[static_cast<std::size_t>(y) * w + x]; }
  std::int32_t& at(int x, int y) { return label[static_cast<std::size_t>(y) * w + x]; }
};

// Flood fill from (sx, sy) over pixels with value `target`, 4- or 8-connected.
void flood_label(const std::vector<std::uint8_t>& grid, LabelGrid& labels, int sx, int sy,
                 std::uint8_t target, std::int32_t id, bool eight_connected,
                 std::vector<PixelPoint>& scratch) {
  const int w = labels.w, h = labels.h;
  scratch.clear();
  scratch.push_back({sx, sy});
  labels.at(sx, sy) = id;
  while (!scratch.empty()) {
    const PixelPoint p = scratch.back();
    scratch.pop_back();
    const int n = eight_connected ? 8 : 4;
    for (int k = 0; k < n; ++k) {
      int dx, dy;
      if (eight_connected) {
        dx = kDx8[k];
        dy = kDy8[k];
      } else {
        constexpr int kDx4[4] = {-1, 1, 0, 0};
        constexpr int kDy4[4] = {0, 0, -1, 1};
        dx = kDx4[k];
        dy = kDy4[k];
      }
      const int x = p.x + dx, y = p.y + dy;
      if (x < 0 || y < 0 || x >= w || y >= h) continue;
      if (labels.at(x, y) >= 0) continue;
      if (grid[static_cast<std::size_t>(y) * w + x] != target) continue;
      labels.at(x, y) = id;
      scratch.push_back({x, y});
    }
  }
}

// Moore-neighbor boundary tracing over the component's own mask. Returns the
// closed 8-connected boundary walk; thin parts are traversed on both sides.
// The walk state (pixel, backtrack direction) evolves deterministically, so
// the first repeated state delimits the complete boundary cycle.
Contour trace_contour(const ComponentShape& shape) {
  const int w = shape.w, h = shape.h;
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h &&
           shape.mask[static_cast<std::size_t>(y) * w + x] != 0;
  };

  // First mask pixel in raster order; its west neighbor is outside the mask.
  int sx = -1, sy = -1;
  for (int y = 0; y < h && sx < 0; ++y)
    for (int x = 0; x < w; ++x)
      if (inside(x, y)) {
        sx = x;
        sy = y;
        break;
      }
  if (sx < 0) throw std::logic_error("trace_contour: empty mask");

  bool has_neighbor = false;
  for (int k = 0; k < 8 && !has_neighbor; ++k) has_neighbor = inside(sx + kDx8[k], sy + kDy8[k]);
  if (!has_neighbor) return {{sx + shape.x0, sy + shape.y0}};  // isolated pixel

  std::vector<std::int32_t> seen_at(static_cast<std::size_t>(w) * h * 8, -1);
  std::vector<PixelPoint> walk;
  int cx = sx, cy = sy;
  int backtrack = 0;  // direction index of the neighbor the scan starts after

  while (true) {
    const std::size_t state = (static_cast<std::size_t>(cy) * w + cx) * 8 + backtrack;
    if (seen_at[state] >= 0) {
      Contour contour(walk.begin() + seen_at[state], walk.end());
      return contour;
    }
    seen_at[state] = static_cast<std::int32_t>(walk.size());
    walk.push_back({cx + shape.x0, cy + shape.y0});

    int dir = 0;
    for (int k = 1; k <= 8; ++k) {
      const int cand = (backtrack + k) % 8;
      if (inside(cx + kDx8[cand], cy + kDy8[cand])) {
        dir = cand;
        break;
      }
    }
    cx += kDx8[dir];
    cy += kDy8[dir];
    backtrack = (dir + 4) % 8;
  }
}

double contour_signed_area(const Contour& c) {
  double acc = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PixelPoint& a = c[i];
    const PixelPoint& b = c[(i + 1) % n];
    acc += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return acc / 2.0;
}

}  // namespace

std::vector<ComponentShape> extract_component_shapes(const BinaryImage& img) {
  // Pad with a one-pixel background frame so the outermost hole exists even
  // when foreground touches the border.
  const int w = img.width + 2;
  const int h = img.height + 2;
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      grid[static_cast<std::size_t>(y + 1) * w + (x + 1)] = img.at(x, y);

  LabelGrid labels;
  labels.w = w;
  labels.h = h;
  labels.label.assign(static_cast<std::size_t>(w) * h, -1);

  std::vector<ComponentShape> shapes;
  std::vector<PixelPoint> scratch;
  std::vector<PixelPoint> first_pixel;

  // Raster scan: label each unvisited component. Foreground components are
  // 8-connected objects, background components 4-connected holes.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels.at(x, y) >= 0) continue;
      const std::uint8_t v = grid[static_cast<std::size_t>(y) * w + x];
      const std::int32_t id = static_cast<std::int32_t>(shapes.size());
      flood_label(grid, labels, x, y, v, id, v != 0, scratch);
      ComponentShape shape;
      shape.id = id;
      shape.kind = v ? ShapeKind::Object : ShapeKind::Hole;
      shapes.push_back(std::move(shape));
      first_pixel.push_back({x, y});
    }
  }

  // Bounding boxes and areas.
  std::vector<int> min_x(shapes.size(), w), min_y(shapes.size(), h);
  std::vector<int> max_x(shapes.size(), -1), max_y(shapes.size(), -1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::int32_t id = labels.at(x, y);
      min_x[id] = std::min(min_x[id], x);
      min_y[id] = std::min(min_y[id], y);
      max_x[id] = std::max(max_x[id], x);
      max_y[id] = std::max(max_y[id], y);
      ++shapes[id].area;
    }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    shapes[i].x0 = min_x[i];
    shapes[i].y0 = min_y[i];
    shapes[i].w = max_x[i] - min_x[i] + 1;
    shapes[i].h = max_y[i] - min_y[i] + 1;
    shapes[i].mask.assign(static_cast<std::size_t>(shapes[i].w) * shapes[i].h, 0);
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      ComponentShape& s = shapes[labels.at(x, y)];
      s.mask[static_cast<std::size_t>(y - s.y0) * s.w + (x - s.x0)] = 1;
    }

  // Parent rule: the left neighbor of a component's first raster pixel lies
  // on its outer border and belongs to the surrounding opposite-kind shape.
  for (std::size_t i = 1; i < shapes.size(); ++i) {
    const PixelPoint p = first_pixel[i];
    shapes[i].parent = labels.at(p.x - 1, p.y);
  }
  shapes[0].parent = -1;

  // Contours, oriented so the signed area is non-negative.
  for (auto& shape : shapes) {
    shape.contour = trace_contour(shape);
    if (contour_signed_area(shape.contour) < 0.0)
      std::reverse(shape.contour.begin() + 1, shape.contour.end());
  }
  return shapes;
}

HierarchySkeleton build_hierarchy_skeleton(const std::vector<ComponentShape>& shapes) {
  HierarchySkeleton skeleton;
  skeleton.parent.assign(shapes.size(), -2);
  skeleton.children.assign(shapes.size(), {});
  int roots = 0;
  for (const auto& shape : shapes) {
    skeleton.nodes.push_back(shape.id);
    skeleton.parent[shape.id] = shape.parent;
    if (shape.parent < 0) {
      skeleton.root = shape.id;
      ++roots;
      if (shape.kind != ShapeKind::Hole)
        throw std::runtime_error("build_hierarchy_skeleton: root must be a hole");
    } else {
      if (shape.parent >= static_cast<int>(shapes.size()))
        throw std::runtime_error("build_hierarchy_skeleton: dangling parent link");
      if (shapes[shape.parent].kind == shape.kind)
        throw std::runtime_error("build_hierarchy_skeleton: parent/child kinds must alternate");
      skeleton.children[shape.parent].push_back(shape.id);
    }
  }
  if (roots != 1)
    throw std::runtime_error(
        "build_hierarchy_skeleton: expected exactly one root hole (missing background frame?)");
  // Reject cycles: walk each node to the root.
  for (const auto& shape : shapes) {
    int steps = 0;
    for (int cur = shape.id; cur >= 0; cur = skeleton.parent[cur])
      if (++steps > static_cast<int>(shapes.size()))
        throw std::runtime_error("build_hierarchy_skeleton: parent links contain a cycle");
  }
  return skeleton;
}

HierarchySkeleton filter_small_shapes(const HierarchySkeleton& skeleton,
                                      const std::vector<ComponentShape>& shapes,
                                      std::int64_t min_area) {
  if (min_area < 0) throw std::invalid_argument("filter_small_shapes: min_area must be >= 0");
  if (shapes[skeleton.root].area < min_area)
    throw std::invalid_argument("filter_small_shapes: pruning the root is forbidden");

  std::vector<bool> keep(skeleton.parent.size(), false);
  for (int id : skeleton.nodes) keep[id] = shapes[id].area >= min_area || id == skeleton.root;

  HierarchySkeleton out;
  out.root = skeleton.root;
  out.parent.assign(skeleton.parent.size(), -2);
  out.children.assign(skeleton.parent.size(), {});
  for (int id : skeleton.nodes) {
    if (!keep[id]) continue;
    out.nodes.push_back(id);
    int p = skeleton.parent[id];
    while (p >= 0 && !keep[p]) p = skeleton.parent[p];
    out.parent[id] = p;
    if (p >= 0) out.children[p].push_back(id);
  }
  return out;
}

std::string skeleton_to_text(const HierarchySkeleton& skeleton,
                             const std::vector<ComponentShape>& shapes) {
  std::string out;
  auto emit = [&](auto&& self, int id, int depth) -> void {
    if (depth > 0) out.push_back('\n');
    out.append(static_cast<std::size_t>(2) * depth, ' ');
    out.push_back('(');
    out += shapes[id].kind == ShapeKind::Object ? "object#" : "hole#";
    out += std::to_string(id);
    out += " area=" + std::to_string(shapes[id].area);
    for (int c : skeleton.children[id]) self(self, c, depth + 1);
    out.push_back(')');
  };
  emit(emit, skeleton.root, 0);
  out.push_back('\n');
  return out;
}

RgbImage label_image(const std::vector<ComponentShape>& shapes, int padded_width,
                     int padded_height) {
  RgbImage out(padded_width, padded_height);
  for (const auto& shape : shapes) {
    // Golden-angle hue stepping keeps neighboring ids visually distinct.
    const double hue = std::fmod(0.61803398875 * shape.id, 1.0) * 6.0;
    const int sector = static_cast<int>(hue);
    const double f = hue - sector;
    const double v = shape.kind == ShapeKind::Object ? 1.0 : 0.55;
    const double p = 0.15 * v, q = v * (1.0 - 0.85 * f), t = v * (1.0 - 0.85 * (1.0 - f));
    double r, g, b;
    switch (sector % 6) {
      case 0: r = v; g = t; b = p; break;
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      default: r = v; g = p; b = q; break;
    }
    for (int y = 0; y < shape.h; ++y)
      for (int x = 0; x < shape.w; ++x)
        if (shape.mask[static_cast<std::size_t>(y) * shape.w + x]) {
          std::uint8_t* px = out.at(shape.x0 + x, shape.y0 + y);
          px[0] = static_cast<std::uint8_t>(255.0 * r);
          px[1] = static_cast<std::uint8_t>(255.0 * g);
          px[2] = static_cast<std::uint8_t>(255.0 * b);
        }
  }
  return out;
}

double contour_perimeter(const Contour& contour) {
  const std::size_t n = contour.size();
  if (n < 2) return 0.0;
  std::int64_t straight = 0, diagonal = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const PixelPoint& a = contour[i];
    const PixelPoint& b = contour[(i + 1) % n];
    const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    if (dx + dy == 0) continue;
    if (dx == 1 && dy == 1)
      ++diagonal;
    else
      ++straight;
  }
  return static_cast<double>(straight) + std::sqrt(2.0) * static_cast<double>(diagonal);
}

}  // namespace treemark
