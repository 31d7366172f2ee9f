#pragma once

#include <string>
#include <string_view>

#include "ibtree/increments.hpp"
#include "ibtree/quadtree.hpp"
#include "ibtree/world.hpp"

namespace ibtree {

/// A tree as stored on disk, with the information values it claims.
struct StoredTree {
  TreeSelection selection;
  double i_x = 0.0;
  double i_y = 0.0;
};

/// {"depth_l", "selected": [[depth, morton], ...], "leaf_count", "i_x_nats",
/// "i_y_nats"}, selected nodes in canonical order.
std::string tree_to_json(const TreeSelection& z, const TreeInformation& info);

/// Parses tree_to_json output. Throws FormatError on malformed JSON or nodes
/// outside the candidate set. Precedence is not checked here.
StoredTree tree_from_json(std::string_view text);

/// Gray rendering of the abstraction: every leaf region is filled with
/// round(maxval * (1 - p(y=1|t))), i.e. dark where relevance is high, matching
/// the default intensity mapping. Binary-relevance worlds only.
GrayImage render_abstraction(const WorldMap& world, const TreeSelection& z, std::uint32_t maxval = 255);

}  // namespace ibtree
