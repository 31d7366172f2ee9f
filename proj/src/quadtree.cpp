#include "ibtree/quadtree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ibtree {

namespace {

std::uint64_t spread_bits(std::uint32_t v) {
  std::uint64_t x = v;
  x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
  x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
  x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x << 2)) & 0x3333333333333333ull;
  x = (x | (x << 1)) & 0x5555555555555555ull;
  return x;
}

std::uint32_t compact_bits(std::uint64_t x) {
  x &= 0x5555555555555555ull;
  x = (x | (x >> 1)) & 0x3333333333333333ull;
  x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x >> 4)) & 0x00FF00FF00FF00FFull;
  x = (x | (x >> 8)) & 0x0000FFFF0000FFFFull;
  x = (x | (x >> 16)) & 0x00000000FFFFFFFFull;
  return static_cast<std::uint32_t>(x);
}

void check_depth(int depth_l) {
  if (depth_l < 0 || depth_l > kMaxDepth) {
    throw std::invalid_argument("map depth " + std::to_string(depth_l) + " outside [0, " +
                                std::to_string(kMaxDepth) + "]");
  }
}

int depth_of_index(std::size_t index) {
  int d = 0;
  while (nodes_above(d + 1) <= index) ++d;
  return d;
}

}  // namespace

std::uint64_t morton_encode(std::uint32_t row, std::uint32_t col) {
  return (spread_bits(row) << 1) | spread_bits(col);
}

std::pair<std::uint32_t, std::uint32_t> morton_decode(std::uint64_t code) {
  return {compact_bits(code >> 1), compact_bits(code)};
}

std::size_t nodes_above(int depth) {
  return ((std::size_t{1} << (2 * depth)) - 1) / 3;
}

std::size_t canonical_index(NodeId node) {
  return nodes_above(node.depth) + static_cast<std::size_t>(node.morton);
}

NodeId node_at(std::size_t index) {
  const int d = depth_of_index(index);
  return {d, static_cast<std::uint64_t>(index - nodes_above(d))};
}

std::size_t parent_index(std::size_t index) {
  // nodes_above(d) = 4 * nodes_above(d - 1) + 1, hence the closed form.
  return (index - 1) / 4;
}

std::size_t first_child_index(std::size_t index) { return 4 * index + 1; }

std::vector<NodeId> interior_candidates(int depth_l) {
  check_depth(depth_l);
  std::vector<NodeId> out;
  out.reserve(candidate_count(depth_l));
  for (int d = 0; d < depth_l; ++d) {
    const std::uint64_t n = std::uint64_t{1} << (2 * d);
    for (std::uint64_t m = 0; m < n; ++m) out.push_back({d, m});
  }
  return out;
}

std::vector<NodeId> expandable_parents(int depth_l) {
  check_depth(depth_l);
  if (depth_l <= 1) return {};
  return interior_candidates(depth_l - 1);
}

CellRegion region_of(NodeId node, int depth_l) {
  const auto [r, c] = morton_decode(node.morton);
  const int shift = depth_l - node.depth;
  return {r << shift, c << shift, std::uint32_t{1} << shift};
}

TreeSelection::TreeSelection(int depth_l) : depth_l_(depth_l) {
  check_depth(depth_l);
  bits_.assign(candidate_count(depth_l), 0);
}

TreeSelection::TreeSelection(int depth_l, std::vector<std::uint8_t> bits)
    : depth_l_(depth_l), bits_(std::move(bits)) {
  check_depth(depth_l);
  if (bits_.size() != candidate_count(depth_l)) {
    throw std::invalid_argument("selection has " + std::to_string(bits_.size()) +
                                " entries, depth " + std::to_string(depth_l) + " needs " +
                                std::to_string(candidate_count(depth_l)));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

TreeSelection TreeSelection::full(int depth_l) {
  TreeSelection z(depth_l);
  std::fill(z.bits_.begin(), z.bits_.end(), std::uint8_t{1});
  return z;
}

std::size_t TreeSelection::selected_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool is_valid_selection(std::span<const std::uint8_t> z, int depth_l) {
  check_depth(depth_l);
  if (z.size() != candidate_count(depth_l)) {
    throw std::invalid_argument("selection length " + std::to_string(z.size()) +
                                " does not match depth " + std::to_string(depth_l));
  }
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i] && !z[parent_index(i)]) return false;
  }
  return true;
}

bool is_valid_selection(const TreeSelection& z) { return is_valid_selection(z.bits(), z.depth_l()); }

std::optional<std::pair<NodeId, NodeId>> first_violation(const TreeSelection& z) {
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i] && !z[parent_index(i)]) return std::pair{node_at(i), node_at(parent_index(i))};
  }
  return std::nullopt;
}

std::vector<NodeId> leaves_of(const TreeSelection& z) {
  if (!is_valid_selection(z)) throw std::invalid_argument("leaves_of: selection violates precedence");
  const int l = z.depth_l();
  std::vector<NodeId> leaves;
  leaves.reserve(leaf_count(z));
  // A node is a leaf when its parent is selected (or it is the root) and it
  // is not itself selected.
  const std::size_t total = nodes_above(l + 1);
  for (std::size_t i = 0; i < total; ++i) {
    const bool parent_open = i == 0 || z[parent_index(i)];
    if (!parent_open) continue;
    const bool expanded = i < z.size() && z[i];
    if (!expanded) leaves.push_back(node_at(i));
  }
  return leaves;
}

std::vector<NodeId> encoder_of(const TreeSelection& z) {
  const int l = z.depth_l();
  const std::uint32_t side = std::uint32_t{1} << l;
  std::vector<NodeId> enc(std::size_t{side} * side);
  for (const NodeId leaf : leaves_of(z)) {
    const CellRegion reg = region_of(leaf, l);
    for (std::uint32_t r = reg.row; r < reg.row + reg.size; ++r) {
      for (std::uint32_t c = reg.col; c < reg.col + reg.size; ++c) {
        enc[std::size_t{r} * side + c] = leaf;
      }
    }
  }
  return enc;
}

std::size_t leaf_count(const TreeSelection& z) { return 1 + 3 * z.selected_count(); }

}  // namespace ibtree
