#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "ibtree/increments.hpp"
#include "ibtree/quadtree.hpp"

namespace ibtree {

enum class SolveStatus { Optimal, Infeasible };

enum class ProblemKind {
  MinRate,               // min z.dx  s.t. z.dy >= bound
  MaxRelevance,          // max z.dy  s.t. z.dx <= bound
  EqualityMaxRelevance,  // max z.dy  s.t. |z.dx - bound| <= band
};

enum class SolveMethod {
  /// Exact lattice dynamic program when every rate increment is an integer
  /// multiple of a common unit (the uniform-prior case) and the table is small
  /// enough; branch-and-bound otherwise.
  Auto,
  BranchAndBound,
};

struct SolveOptions {
  /// Feasibility tolerance on information constraints, nats.
  double tol = 1e-9;
  /// Branch-and-bound nodes before giving up with ResourceLimitError.
  std::uint64_t node_limit = 50'000'000;
  SolveMethod method = SolveMethod::Auto;
};

struct SolveResult {
  TreeSelection selection;
  double i_x = 0.0;
  double i_y = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  std::uint64_t nodes_explored = 0;
  double wall_ms = 0.0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Fewest nats of rate keeping at least d_hat nats of relevance. Infeasible
/// iff d_hat exceeds the total relevance by more than tol. Throws
/// std::invalid_argument for negative d_hat, ResourceLimitError when the node
/// limit is hit.
SolveResult solve_min_rate(const IncrementVectors& inc, double d_hat, const SolveOptions& opts = {});

/// Most relevance within a rate budget; always feasible.
SolveResult solve_max_relevance(const IncrementVectors& inc, double budget, const SolveOptions& opts = {});

/// Most relevance among trees whose rate is d_star within a tolerance band.
/// The band starts at tol and shrinks tenfold (down to 1e-12) while distinct
/// rates are found inside it. `hint`, when given and inside the band, seeds
/// the search. Throws std::invalid_argument when no tree attains d_star.
SolveResult solve_equality_max_relevance(const IncrementVectors& inc, double d_star,
                                         const SolveOptions& opts = {},
                                         const TreeSelection* hint = nullptr);

/// Largest depth accepted by the exhaustive enumeration.
inline constexpr int kMaxEnumerationDepth = 3;

/// Calls visit once per valid selection, in increasing lexicographic order of
/// the indicator vector. Throws std::invalid_argument for depth_l > 3.
void for_each_valid_selection(int depth_l, const std::function<void(std::span<const std::uint8_t>)>& visit);

/// All valid selections, lexicographic order (2, 17 and 83522 for l = 1..3).
std::vector<TreeSelection> enumerate_valid_selections(int depth_l);

/// Exhaustive oracle for the three problems. Ties go to smaller i_x, then
/// larger i_y, then the lexicographically smallest z.
SolveResult brute_force_solve(const IncrementVectors& inc, ProblemKind kind, double bound,
                              const SolveOptions& opts = {});

}  // namespace ibtree
