#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ibtree::detail {

/// Exact tree knapsack over integer rate units.
///
/// When every rate increment is an integer multiple of a common unit q, the
/// rate of any tree is q times an integer. For every candidate the table keeps
/// the best relevance reachable inside its subtree at each exact rate, built
/// bottom-up by max-plus convolution of the four children. The root row then
/// answers all three problems for every bound.
class LatticeTable {
 public:
  /// nullopt when the increments do not share a unit (relative 1e-12) or the
  /// convolution work would exceed max_work multiply-adds.
  static std::optional<LatticeTable> build(std::span<const double> dx, std::span<const double> dy,
                                           double max_work = 1.5e9);

  double unit() const { return q_; }
  /// Best relevance of a tree with rate exactly k units; -inf if unattainable.
  std::span<const double> root() const { return g_[0]; }

  /// A selection attaining root()[k] (k must be attainable).
  std::vector<std::uint8_t> reconstruct(std::size_t k) const;

 private:
  void rebuild_node(std::size_t t, std::size_t k, std::vector<std::uint8_t>& z) const;

  std::size_t n_ = 0;
  double q_ = 0.0;
  std::vector<std::size_t> units_;
  std::vector<double> w_;
  std::vector<std::vector<double>> g_;
  // prefix_[t][j]: convolution of the first j + 1 children's rows (j = 0..3).
  std::vector<std::vector<std::vector<double>>> prefix_;
};

/// Single-entry cache keyed by the increment contents, so repeated solves on
/// one map build the table once. Thread-safe.
std::shared_ptr<const LatticeTable> cached_lattice_table(std::span<const double> dx, std::span<const double> dy);

}  // namespace ibtree::detail
