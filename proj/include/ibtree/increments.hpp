#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ibtree/infotheory.hpp"
#include "ibtree/quadtree.hpp"

namespace ibtree {

class WorldMap;

/// Mass p(t) and relevance p(y|t) of one quadtree node. For zero-mass nodes
/// the relevance is a placeholder (the unweighted mean of the children) and
/// carries no probabilistic meaning.
struct NodeStats {
  double mass = 0.0;
  std::vector<double> relevance;
};

/// Stats for every node of the full tree (depths 0..l), canonical order.
std::vector<NodeStats> compute_node_stats(const WorldMap& world);

/// p(t) H(Pi) with Pi_i = p(t'_i) / p(t); 0 when p(t) = 0. Throws
/// std::invalid_argument when the children's masses do not add up to p(t)
/// within 1e-9.
double node_delta_x(const NodeStats& node, std::span<const NodeStats> children);

/// p(t) JS_Pi(p(y|t'_1), ..., p(y|t'_4)), zero-mass children excluded.
double node_delta_y(const NodeStats& node, std::span<const NodeStats> children);

/// Per-candidate rate and relevance increments, canonical order, in nats.
/// Immutable once computed; shared read-only by every solver.
struct IncrementVectors {
  int depth_l = 0;
  std::vector<double> delta_x;
  std::vector<double> delta_y;
  /// p(t) of each candidate; zero marks an information-neutral ("free") node.
  std::vector<double> mass;

  std::size_t size() const { return delta_x.size(); }
  double total_x() const;
  double total_y() const;
};

/// Single bottom-up pass over the tree.
IncrementVectors compute_increments(const WorldMap& world);

/// (z . delta_x, z . delta_y). Throws std::invalid_argument on a length
/// mismatch.
TreeInformation tree_information(const TreeSelection& z, const IncrementVectors& inc);
TreeInformation tree_information(std::span<const std::uint8_t> z, const IncrementVectors& inc);

/// CSV with columns depth,morton,mass,delta_x_nats,delta_y_nats,free.
void write_increments_csv(std::ostream& os, const IncrementVectors& inc);

}  // namespace ibtree
