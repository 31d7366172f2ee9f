#pragma once

#include <vector>

#include "ibtree/increments.hpp"
#include "ibtree/solver.hpp"

namespace ibtree {

/// Relaxed indicator: one value in [0, 1] per candidate, canonical order, with
/// children never above their parent (1e-9 slack).
struct FractionalSelection {
  int depth_l = 0;
  std::vector<double> z;
};

/// Throws std::invalid_argument when sizes, bounds or precedence are off by
/// more than 1e-9.
void check_fractional(const FractionalSelection& zfrac);

enum class LpMethod {
  /// Ratio-merge over the tree; any depth.
  Hull,
  /// Two-phase dense simplex (Bland's rule) over the explicit constraint
  /// matrix; depth <= 5.
  Simplex,
};

struct LpSolution {
  FractionalSelection z;
  double objective = 0.0;  // z . delta_x
  double relevance = 0.0;  // z . delta_y
};

/// Optimal vertex of  min z.dx  s.t. z.dy >= d_hat, z_child <= z_parent,
/// 0 <= z <= 1. Throws InfeasibleError when d_hat exceeds the total relevance
/// by more than tol and std::invalid_argument when d_hat is negative.
LpSolution solve_lp_relaxation(const IncrementVectors& inc, double d_hat, LpMethod method = LpMethod::Hull,
                               double tol = 1e-9);

/// Threshold rounding: z_t = 1 iff min(z_t, z_parent(t), ...) >= delta. The
/// result is always a valid tree. Throws std::invalid_argument for delta
/// outside (0, 1].
TreeSelection round_selection(const FractionalSelection& zfrac, double delta = 0.5);

struct RelaxResult {
  SolveResult result;
  LpSolution lp;
  /// Whether the rounded tree still keeps d_hat nats of relevance (within tol).
  bool met_constraint = false;
};

RelaxResult relax_and_round(const IncrementVectors& inc, double d_hat, double delta = 0.5, double tol = 1e-9);

}  // namespace ibtree
