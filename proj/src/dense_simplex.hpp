#pragma once

#include <cstddef>
#include <vector>

namespace ibtree::detail {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// minimize c.x  subject to  a_i . x (sense_i) b_i,  x >= 0.
struct DenseLp {
  std::size_t n = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<RowSense> sense;
};

struct DenseLpResult {
  bool feasible = false;
  bool bounded = true;
  std::vector<double> x;
  double objective = 0.0;
};

/// Two-phase tableau simplex with Bland's smallest-index rule. Returns a basic
/// optimal solution.
DenseLpResult solve_dense_lp(const DenseLp& lp);

}  // namespace ibtree::detail
