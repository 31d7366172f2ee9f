#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ibtree::detail {

enum class FixState : std::uint8_t { Free, One, Zero };

/// A connected group of free candidates that the LP takes or leaves as a unit.
struct HullBlock {
  std::uint32_t head = 0;  // shallowest member; its parent is fixed or in an earlier block
  double cost = 0.0;
  double weight = 0.0;
  std::uint32_t begin = 0;  // range into TreeHull::members()
  std::uint32_t end = 0;
};

/// Outcome of a greedy fill over the blocks: every block before `full` is
/// taken whole, block `partial` (if has_partial) at fraction theta.
struct HullFill {
  bool feasible = true;
  double cost = 0.0;
  double weight = 0.0;
  std::size_t full = 0;
  bool has_partial = false;
  std::size_t partial = 0;
  double theta = 0.0;
};

/// Ratio-ordered decomposition of the free candidates under precedence.
///
/// Candidates fixed to One act as an already-taken root; Zero candidates (and
/// their subtrees, which the caller must also mark Zero) are dropped. Groups
/// are merged into their parent group, highest weight/cost ratio first, until
/// the parent is taken; the resulting blocks come out in non-increasing ratio
/// order and every prefix is closed under the precedence relation. Greedy
/// filling along that order solves the LP relaxation over the free part.
class TreeHull {
 public:
  void build(std::span<const double> cost, std::span<const double> weight,
             std::span<const FixState> state);

  std::span<const HullBlock> blocks() const { return blocks_; }
  std::span<const std::uint32_t> members(const HullBlock& b) const {
    return std::span<const std::uint32_t>(members_).subspan(b.begin, b.end - b.begin);
  }
  double total_cost() const { return total_cost_; }
  double total_weight() const { return total_weight_; }

  /// Least-cost fractional completion gaining at least `need` weight.
  /// Infeasible when the free part cannot supply it.
  HullFill fill_to_weight(double need) const;

  /// Largest-weight fractional completion with cost at most `budget`.
  HullFill fill_to_budget(double budget) const;

 private:
  struct HeapEntry {
    double ratio;
    std::uint32_t head;
    std::uint32_t group;
    std::uint32_t version;
  };

  std::uint32_t find(std::uint32_t g);

  std::vector<HullBlock> blocks_;
  std::vector<std::uint32_t> members_;
  double total_cost_ = 0.0;
  double total_weight_ = 0.0;

  // Scratch buffers reused across builds.
  std::vector<std::uint32_t> uf_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> first_;
  std::vector<std::uint32_t> last_;
  std::vector<std::uint32_t> version_;
  std::vector<std::uint8_t> emitted_;
  std::vector<double> gcost_;
  std::vector<double> gweight_;
  std::vector<HeapEntry> heap_;
};

}  // namespace ibtree::detail
