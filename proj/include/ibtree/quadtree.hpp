#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ibtree {

/// Largest supported map depth: 2^15 x 2^15 cells keeps every canonical
/// index inside 32 bits.
inline constexpr int kMaxDepth = 15;

/// Address of a node of the full quadtree: its depth and the Z-order index of
/// its cell among the 4^depth cells at that depth.
///
/// Child k of (d, m) is (d + 1, 4m + k); k packs the row bit in position 1 and
/// the column bit in position 0, so children are ordered top-left, top-right,
/// bottom-left, bottom-right.
struct NodeId {
  int depth = 0;
  std::uint64_t morton = 0;

  NodeId parent() const { return {depth - 1, morton >> 2}; }
  NodeId child(int k) const { return {depth + 1, (morton << 2) | static_cast<std::uint64_t>(k)}; }

  auto operator<=>(const NodeId&) const = default;
};

std::uint64_t morton_encode(std::uint32_t row, std::uint32_t col);
std::pair<std::uint32_t, std::uint32_t> morton_decode(std::uint64_t code);

/// Number of nodes at depths [0, depth): (4^depth - 1) / 3.
std::size_t nodes_above(int depth);

/// Number of interior-node candidates of a depth-l map, (4^l - 1) / 3.
inline std::size_t candidate_count(int depth_l) { return nodes_above(depth_l); }

/// Position of a node in depth-major, Morton-minor order. Covers every node of
/// the full tree, so indices below candidate_count(l) are the candidates.
std::size_t canonical_index(NodeId node);
NodeId node_at(std::size_t index);

/// Canonical index of the parent of a non-root node.
std::size_t parent_index(std::size_t index);
/// Canonical index of the first of the four children.
std::size_t first_child_index(std::size_t index);

/// All nodes of depth < l in canonical order.
std::vector<NodeId> interior_candidates(int depth_l);

/// Candidates whose children are candidates too (depth <= l - 2).
std::vector<NodeId> expandable_parents(int depth_l);

/// Square block of finest cells covered by a node.
struct CellRegion {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  std::uint32_t size = 1;
};
CellRegion region_of(NodeId node, int depth_l);

/// Binary indicator over the interior-node candidates of a depth-l map.
/// Validity (children selected only under selected parents) is checked by
/// is_valid_selection, not enforced here.
class TreeSelection {
 public:
  TreeSelection() = default;
  /// All-zeros selection: the root tree.
  explicit TreeSelection(int depth_l);
  /// Throws std::invalid_argument when bits.size() != candidate_count(depth_l).
  TreeSelection(int depth_l, std::vector<std::uint8_t> bits);

  /// Every candidate selected: the finest tree.
  static TreeSelection full(int depth_l);

  int depth_l() const { return depth_l_; }
  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t selected_count() const;

  auto operator<=>(const TreeSelection&) const = default;

 private:
  int depth_l_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Throws std::invalid_argument on a length mismatch.
bool is_valid_selection(std::span<const std::uint8_t> z, int depth_l);
bool is_valid_selection(const TreeSelection& z);

/// First (child, parent) pair in canonical order with the child selected and
/// the parent not.
std::optional<std::pair<NodeId, NodeId>> first_violation(const TreeSelection& z);

/// Leaves of the tree described by z, in canonical order. Throws
/// std::invalid_argument for an invalid selection.
std::vector<NodeId> leaves_of(const TreeSelection& z);

/// Deterministic encoder: the leaf containing each finest cell, indexed by
/// row-major cell index.
std::vector<NodeId> encoder_of(const TreeSelection& z);

/// 1 + 3 * selected_count(), the leaf count of any valid selection.
std::size_t leaf_count(const TreeSelection& z);

}  // namespace ibtree
