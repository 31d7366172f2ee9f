#include "ibtree/relaxation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dense_simplex.hpp"
#include "ibtree/errors.hpp"
#include "tree_hull.hpp"

namespace ibtree {

namespace {

constexpr int kMaxSimplexDepth = 5;

std::vector<double> hull_solution(const IncrementVectors& inc, double need) {
  detail::TreeHull hull;
  const std::vector<detail::FixState> state(inc.size(), detail::FixState::Free);
  hull.build(inc.delta_x, inc.delta_y, state);
  detail::HullFill f = hull.fill_to_weight(need);
  if (!f.feasible) {
    // need sits within rounding of the total: take every block that carries
    // relevance.
    f = {};
    for (const auto& b : hull.blocks()) {
      if (b.weight > 0.0) ++f.full;
    }
  }
  std::vector<double> z(inc.size(), 0.0);
  const auto blocks = hull.blocks();
  for (std::size_t k = 0; k < f.full; ++k) {
    for (const std::uint32_t m : hull.members(blocks[k])) z[m] = 1.0;
  }
  if (f.has_partial) {
    for (const std::uint32_t m : hull.members(blocks[f.partial])) z[m] = f.theta;
  }
  return z;
}

std::vector<double> simplex_solution(const IncrementVectors& inc, double need) {
  if (inc.depth_l > kMaxSimplexDepth) {
    throw std::invalid_argument("dense simplex is limited to depth " + std::to_string(kMaxSimplexDepth));
  }
  using detail::RowSense;
  const std::size_t n = inc.size();
  detail::DenseLp lp;
  lp.n = n;
  lp.c = inc.delta_x;
  lp.a.push_back(inc.delta_y);
  lp.b.push_back(need);
  lp.sense.push_back(RowSense::GreaterEqual);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    row[parent_index(i)] = -1.0;
    lp.a.push_back(std::move(row));
    lp.b.push_back(0.0);
    lp.sense.push_back(RowSense::LessEqual);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    lp.a.push_back(std::move(row));
    lp.b.push_back(1.0);
    lp.sense.push_back(RowSense::LessEqual);
  }
  detail::DenseLpResult r = detail::solve_dense_lp(lp);
  if (!r.feasible) throw InfeasibleError("LP relaxation is infeasible");
  for (double& v : r.x) v = std::clamp(v, 0.0, 1.0);
  return r.x;
}

}  // namespace

void check_fractional(const FractionalSelection& zfrac) {
  if (zfrac.depth_l < 0 || zfrac.depth_l > kMaxDepth || zfrac.z.size() != candidate_count(zfrac.depth_l)) {
    throw std::invalid_argument("fractional selection has the wrong length for its depth");
  }
  for (std::size_t i = 0; i < zfrac.z.size(); ++i) {
    const double v = zfrac.z[i];
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw std::invalid_argument("fractional value " + std::to_string(v) + " outside [0, 1] at candidate " +
                                  std::to_string(i));
    }
    if (i > 0 && v > zfrac.z[parent_index(i)] + 1e-9) {
      throw std::invalid_argument("fractional child " + std::to_string(i) + " exceeds its parent");
    }
  }
}

LpSolution solve_lp_relaxation(const IncrementVectors& inc, double d_hat, LpMethod method, double tol) {
  if (!(d_hat >= 0.0) || !std::isfinite(d_hat)) throw std::invalid_argument("d_hat must be a non-negative number");
  const double total = inc.total_y();
  if (d_hat > total + tol) {
    throw InfeasibleError("D̂ exceeds I(X;Y): " + std::to_string(d_hat) + " > " + std::to_string(total));
  }
  const double need = std::min(d_hat, total);
  LpSolution sol;
  sol.z.depth_l = inc.depth_l;
  sol.z.z = method == LpMethod::Hull ? hull_solution(inc, need) : simplex_solution(inc, need);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    sol.objective += sol.z.z[i] * inc.delta_x[i];
    sol.relevance += sol.z.z[i] * inc.delta_y[i];
  }
  return sol;
}

TreeSelection round_selection(const FractionalSelection& zfrac, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("rounding threshold must lie in (0, 1], got " + std::to_string(delta));
  }
  if (zfrac.depth_l < 0 || zfrac.depth_l > kMaxDepth || zfrac.z.size() != candidate_count(zfrac.depth_l)) {
    throw std::invalid_argument("fractional selection has the wrong length for its depth");
  }
  // Thresholding the running minimum along the root path keeps the result a
  // tree even when the input violates precedence by rounding noise.
  std::vector<double> eff(zfrac.z.size());
  std::vector<std::uint8_t> bits(zfrac.z.size(), 0);
  for (std::size_t i = 0; i < zfrac.z.size(); ++i) {
    eff[i] = std::clamp(zfrac.z[i], 0.0, 1.0);
    if (i > 0) eff[i] = std::min(eff[i], eff[parent_index(i)]);
    bits[i] = eff[i] >= delta ? 1 : 0;
  }
  return TreeSelection(zfrac.depth_l, std::move(bits));
}

RelaxResult relax_and_round(const IncrementVectors& inc, double d_hat, double delta, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  RelaxResult out;
  out.lp = solve_lp_relaxation(inc, d_hat, LpMethod::Hull, tol);
  SolveResult& r = out.result;
  r.selection = round_selection(out.lp.z, delta);
  const TreeInformation info = tree_information(r.selection, inc);
  r.i_x = info.i_x;
  r.i_y = info.i_y;
  r.objective = info.i_x;
  r.status = SolveStatus::Optimal;
  r.nodes_explored = 1;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.met_constraint = info.i_y >= d_hat - tol;
  return out;
}

}  // namespace ibtree
