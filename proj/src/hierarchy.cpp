#include "treemark/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace treemark {

namespace {

struct CanonicalInfo {
  int size = 0;
  std::vector<int> signature;  // preorder word sequence of the canonical subtree
};

CanonicalInfo canonicalize_node(const VisualHierarchy& h, int node, VisualHierarchy& out,
                                int out_node) {
  CanonicalInfo info;
  info.size = 1;
  info.signature.push_back(h.nodes[static_cast<std::size_t>(node)].word);

  struct Child {
    int original = -1;
    CanonicalInfo info;
  };
  std::vector<Child> children;
  for (int c : h.nodes[static_cast<std::size_t>(node)].children) {
    Child child;
    child.original = c;
    children.push_back(std::move(child));
  }
  // Canonicalize child subtrees into scratch trees first so their signatures
  // reflect canonical order.
  std::vector<VisualHierarchy> scratch(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    scratch[i].nodes.push_back({h.nodes[static_cast<std::size_t>(children[i].original)].word, {}});
    children[i].info = canonicalize_node(h, children[i].original, scratch[i], 0);
  }
  std::vector<std::size_t> order(children.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int wa = scratch[a].nodes[0].word;
    const int wb = scratch[b].nodes[0].word;
    if (wa != wb) return wa < wb;
    if (children[a].info.size != children[b].info.size)
      return children[a].info.size < children[b].info.size;
    return children[a].info.signature < children[b].info.signature;
  });

  for (std::size_t oi : order) {
    // Splice the canonical child subtree into `out`.
    const VisualHierarchy& sub = scratch[oi];
    const int base = out.size();
    for (const auto& n : sub.nodes) {
      VisualHierarchy::Node copy;
      copy.word = n.word;
      for (int c : n.children) copy.children.push_back(c + base);
      out.nodes.push_back(std::move(copy));
    }
    out.nodes[static_cast<std::size_t>(out_node)].children.push_back(base);
    info.size += children[oi].info.size;
    info.signature.insert(info.signature.end(), children[oi].info.signature.begin(),
                          children[oi].info.signature.end());
  }
  return info;
}

void bracket_node(const VisualHierarchy& h, int node, std::string& out) {
  out.push_back('{');
  out += std::to_string(h.nodes[static_cast<std::size_t>(node)].word);
  for (int c : h.nodes[static_cast<std::size_t>(node)].children) bracket_node(h, c, out);
  out.push_back('}');
}

}  // namespace

VisualHierarchy canonicalize(const VisualHierarchy& h) {
  if (h.nodes.empty()) throw std::invalid_argument("canonicalize: empty hierarchy");
  VisualHierarchy out;
  out.image_id = h.image_id;
  out.root = 0;
  out.nodes.push_back({h.nodes[static_cast<std::size_t>(h.root)].word, {}});
  canonicalize_node(h, h.root, out, 0);
  return out;
}

std::string to_bracket(const VisualHierarchy& h) {
  if (h.nodes.empty()) return "{}";
  std::string out;
  bracket_node(h, h.root, out);
  return out;
}

VisualHierarchy from_bracket(std::string_view text, std::int64_t image_id) {
  VisualHierarchy h;
  h.image_id = image_id;
  std::size_t pos = 0;
  auto fail = [&]() -> void {
    throw std::invalid_argument("from_bracket: malformed tree text");
  };

  auto parse = [&](auto&& self) -> int {
    if (pos >= text.size() || text[pos] != '{') fail();
    ++pos;
    bool negative = false;
    if (pos < text.size() && text[pos] == '-') {
      negative = true;
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
    long word = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      word = word * 10 + (text[pos] - '0');
      ++pos;
    }
    const int node = h.size();
    h.nodes.push_back({static_cast<int>(negative ? -word : word), {}});
    while (pos < text.size() && text[pos] == '{') {
      const int child = self(self);
      h.nodes[static_cast<std::size_t>(node)].children.push_back(child);
    }
    if (pos >= text.size() || text[pos] != '}') fail();
    ++pos;
    return node;
  };

  h.root = parse(parse);
  if (pos != text.size()) fail();
  return h;
}

bool same_tree(const VisualHierarchy& a, const VisualHierarchy& b) {
  return to_bracket(a) == to_bracket(b);
}

std::vector<int> node_depths(const VisualHierarchy& h) {
  std::vector<int> depth(h.nodes.size(), 0);
  auto walk = [&](auto&& self, int node, int d) -> void {
    depth[static_cast<std::size_t>(node)] = d;
    for (int c : h.nodes[static_cast<std::size_t>(node)].children) self(self, c, d + 1);
  };
  if (!h.nodes.empty()) walk(walk, h.root, 1);
  return depth;
}

std::vector<int> level_widths(const VisualHierarchy& h) {
  const std::vector<int> depth = node_depths(h);
  int max_depth = 0;
  for (int d : depth) max_depth = std::max(max_depth, d);
  std::vector<int> width(static_cast<std::size_t>(max_depth) + 1, 0);
  for (int d : depth) ++width[static_cast<std::size_t>(d)];
  return width;
}

std::vector<int> postorder(const VisualHierarchy& h) {
  std::vector<int> order;
  order.reserve(h.nodes.size());
  auto walk = [&](auto&& self, int node) -> void {
    for (int c : h.nodes[static_cast<std::size_t>(node)].children) self(self, c);
    order.push_back(node);
  };
  if (!h.nodes.empty()) walk(walk, h.root);
  return order;
}

}  // namespace treemark
