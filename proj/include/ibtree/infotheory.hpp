#pragma once

#include <span>
#include <vector>

#include "ibtree/quadtree.hpp"

namespace ibtree {

class WorldMap;

/// Tolerance on the normalization of input distributions.
inline constexpr double kInputTolerance = 1e-12;
/// Tolerance on derived information identities and solver constraints.
inline constexpr double kIdentityTolerance = 1e-9;

/// Shannon entropy in nats with 0 log 0 = 0. Throws std::invalid_argument for
/// negative or unnormalized input.
double entropy(std::span<const double> p);

/// D_KL(p || q) in nats. Throws std::invalid_argument on a length mismatch and
/// SupportError when q_i = 0 < p_i.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Weighted Jensen-Shannon divergence, H(sum w_i d_i) - sum w_i H(d_i).
/// Throws std::invalid_argument on shape mismatches or invalid distributions.
double js_divergence(std::span<const double> weights, const std::vector<std::vector<double>>& dists);

namespace detail {
/// -sum p log p without validation; 0 log 0 = 0.
double entropy_unchecked(std::span<const double> p);
}  // namespace detail

/// Rate and relevance of a tree, in nats.
struct TreeInformation {
  double i_x = 0.0;
  double i_y = 0.0;
};

/// I(T;X) and I(T;Y) evaluated from the joint distributions induced by the
/// tree's deterministic encoder, without the increment decomposition.
TreeInformation direct_tree_information(const WorldMap& world, const TreeSelection& z);

}  // namespace ibtree
