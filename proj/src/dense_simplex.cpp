#include "dense_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibtree::detail {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), cols_(cols), t_(rows * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
    }
    basis_[r] = c;
  }

  /// Minimizes cost over columns with allowed[j]; false when unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    std::vector<bool> in_basis(cols_);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (const std::size_t bcol : basis_) in_basis[bcol] = true;
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        double rc = cost[j];
        for (std::size_t i = 0; i < m_; ++i) rc -= cost[basis_[i]] * at(i, j);
        if (rc < -kCostEps) enter = j;
      }
      if (enter == cols_) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (leave == m_ || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

DenseLpResult solve_dense_lp(const DenseLp& lp) {
  const std::size_t m = lp.a.size();
  const std::size_t n = lp.n;
  if (lp.b.size() != m || lp.sense.size() != m || lp.c.size() != n) {
    throw std::invalid_argument("dense LP dimensions disagree");
  }

  // Normalize to b >= 0, then one slack per inequality and one artificial per
  // row that has no natural starting basic column.
  std::vector<RowSense> sense = lp.sense;
  std::vector<double> sign(m, 1.0);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.b[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == RowSense::LessEqual) {
        sense[i] = RowSense::GreaterEqual;
      } else if (sense[i] == RowSense::GreaterEqual) {
        sense[i] = RowSense::LessEqual;
      }
    }
    if (sense[i] != RowSense::Equal) ++slacks;
    if (sense[i] != RowSense::LessEqual) ++artificials;
  }
  const std::size_t cols = n + slacks + artificials;
  Tableau tab(m, cols);
  std::vector<bool> is_artificial(cols, false);
  std::size_t next_slack = n;
  std::size_t next_art = n + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.a[i].size() != n) throw std::invalid_argument("dense LP row has the wrong length");
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign[i] * lp.a[i][j];
    tab.rhs(i) = sign[i] * lp.b[i];
    if (sense[i] == RowSense::LessEqual) {
      tab.at(i, next_slack) = 1.0;
      tab.basis()[i] = next_slack++;
      continue;
    }
    if (sense[i] == RowSense::GreaterEqual) tab.at(i, next_slack++) = -1.0;
    tab.at(i, next_art) = 1.0;
    is_artificial[next_art] = true;
    tab.basis()[i] = next_art++;
  }

  DenseLpResult out;
  std::vector<bool> allowed(cols, true);
  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) phase1[j] = is_artificial[j] ? 1.0 : 0.0;
    tab.optimize(phase1, allowed);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_artificial[tab.basis()[i]]) infeasibility += tab.rhs(i);
    }
    if (infeasibility > 1e-9) return out;
    // Drive zero-level artificials out of the basis where a real column allows.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial[tab.basis()[i]]) continue;
      for (std::size_t j = 0; j < n + slacks; ++j) {
        if (std::abs(tab.at(i, j)) > kPivotEps) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < cols; ++j) allowed[j] = !is_artificial[j];
  }
  out.feasible = true;

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  if (!tab.optimize(cost, allowed)) {
    out.bounded = false;
    return out;
  }
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) out.x[tab.basis()[i]] = tab.rhs(i);
  }
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.c[j] * out.x[j];
  return out;
}

}  // namespace ibtree::detail
