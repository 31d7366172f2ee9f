#pragma once

#include <iosfwd>
#include <vector>

#include "ibtree/increments.hpp"
#include "ibtree/solver.hpp"

namespace ibtree {

/// A Pareto optimal (rate, relevance) pair with one witness tree.
struct ParetoPoint {
  double d_hat_query = 0.0;  // relevance floor that produced the point
  double d_star = 0.0;       // rate, nats
  double d_hat_star = 0.0;   // relevance, nats
  TreeSelection selection;
  double stage1_ms = 0.0;
  double stage2_ms = 0.0;
};

/// Two-stage solve: least rate D* keeping d_hat, then most relevance at rate
/// D*. Throws InfeasibleError when d_hat exceeds the total relevance by more
/// than tol, std::invalid_argument when it is negative.
ParetoPoint pareto_point(const IncrementVectors& inc, double d_hat, const SolveOptions& opts = {});

/// Every Pareto optimal value pair, ascending in both coordinates, from (0, 0)
/// to full relevance. After a point with relevance v the next floor is
/// v + eps_step.
std::vector<ParetoPoint> trace_pareto(const IncrementVectors& inc, double eps_step = 1e-6,
                                      const SolveOptions& opts = {});

struct InfoPoint {
  double i_x = 0.0;
  double i_y = 0.0;
};

/// True iff b is at least as compressed and at least as relevant as a, and
/// strictly better in one coordinate by more than tol.
bool is_dominated(InfoPoint a, InfoPoint b, double tol = 1e-9);

/// Columns d_hat_query,i_x_nats,i_y_nats,leaf_count,stage1_ms,stage2_ms.
/// Timing columns are left empty unless with_timing is set, so repeated runs
/// produce identical files.
void write_pareto_csv(std::ostream& os, const std::vector<ParetoPoint>& points, bool with_timing = false);

}  // namespace ibtree
