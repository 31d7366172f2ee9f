#include "ibtree/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csv_format.hpp"
#include "ibtree/errors.hpp"

namespace ibtree {

ParetoPoint pareto_point(const IncrementVectors& inc, double d_hat, const SolveOptions& opts) {
  const SolveResult stage1 = solve_min_rate(inc, d_hat, opts);
  if (!stage1.optimal()) {
    throw InfeasibleError("D̂ exceeds I(X;Y): " + std::to_string(d_hat) + " > " + std::to_string(inc.total_y()));
  }
  const SolveResult stage2 = solve_equality_max_relevance(inc, stage1.i_x, opts, &stage1.selection);
  ParetoPoint p;
  p.d_hat_query = d_hat;
  p.d_star = stage2.i_x;
  p.d_hat_star = stage2.i_y;
  p.selection = stage2.selection;
  p.stage1_ms = stage1.wall_ms;
  p.stage2_ms = stage2.wall_ms;
  return p;
}

std::vector<ParetoPoint> trace_pareto(const IncrementVectors& inc, double eps_step, const SolveOptions& opts) {
  if (!(eps_step > 0.0)) throw std::invalid_argument("eps_step must be positive");
  const double total = inc.total_y();
  std::vector<ParetoPoint> points;
  double d = 0.0;
  for (;;) {
    ParetoPoint p = pareto_point(inc, d, opts);
    const double reached = p.d_hat_star;
    points.push_back(std::move(p));
    if (reached >= total - opts.tol) break;
    d = std::min(reached + eps_step, total);
  }
  return points;
}

bool is_dominated(InfoPoint a, InfoPoint b, double tol) {
  if (b.i_x > a.i_x + tol || b.i_y < a.i_y - tol) return false;
  return b.i_x < a.i_x - tol || b.i_y > a.i_y + tol;
}

void write_pareto_csv(std::ostream& os, const std::vector<ParetoPoint>& points, bool with_timing) {
  os << "d_hat_query,i_x_nats,i_y_nats,leaf_count,stage1_ms,stage2_ms\n";
  for (const auto& p : points) {
    os << csv::num(p.d_hat_query) << ',' << csv::num(p.d_star) << ',' << csv::num(p.d_hat_star) << ','
       << leaf_count(p.selection) << ',';
    if (with_timing) os << csv::num(p.stage1_ms) << ',' << csv::num(p.stage2_ms);
    else os << ',';
    os << '\n';
  }
}

}  // namespace ibtree
