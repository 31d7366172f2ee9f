#include "ibtree/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "ibtree/errors.hpp"
#include "lattice_dp.hpp"
#include "tree_hull.hpp"

namespace ibtree {

namespace {

using detail::FixState;
using detail::HullFill;
using detail::TreeHull;

constexpr double kBandFloor = 1e-12;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

void check_bound(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be a finite non-negative number of nats");
  }
}

/// Common grid spacing of the rate increments, or 0 when there is none. With a
/// uniform prior every rate increment is a power-of-four multiple of the
/// finest one, so tree rates take values on a lattice and LP bounds can be
/// rounded to it.
double rate_lattice(std::span<const double> dx) {
  double q = 0.0;
  for (const double v : dx) {
    if (v > 0.0 && (q == 0.0 || v < q)) q = v;
  }
  if (q == 0.0) return 0.0;
  for (const double v : dx) {
    if (v <= 0.0) continue;
    const double r = v / q;
    if (std::abs(r - std::round(r)) > 1e-9 * r) return 0.0;
  }
  return q;
}

/// Counts values more than the band floor apart.
std::size_t distinct_count(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] > kBandFloor) ++n;
  }
  return n;
}

/// Ordering shared by the search and the oracle. Min-rate prefers lower rate,
/// then higher relevance; the relevance problems prefer higher relevance, then
/// lower rate.
bool improves(ProblemKind kind, double tol, double c, double w, double best_c, double best_w) {
  if (kind == ProblemKind::MinRate) {
    if (c < best_c - tol) return true;
    return std::abs(c - best_c) <= tol && w > best_w + tol;
  }
  if (w > best_w + tol) return true;
  return std::abs(w - best_w) <= tol && c < best_c - tol;
}

class BranchAndBound {
 public:
  BranchAndBound(const IncrementVectors& inc, ProblemKind kind, double bound, double band,
                 const SolveOptions& opts)
      : inc_(inc),
        kind_(kind),
        bound_(bound),
        band_(band),
        opts_(opts),
        state_(inc.size(), FixState::Free),
        scratch_(inc.size(), 0),
        lattice_(rate_lattice(inc.delta_x)) {
    budget_lp_ = bound_ + opts_.tol;
    if (kind_ == ProblemKind::MaxRelevance && lattice_ > 0.0) {
      const double k = std::floor((bound_ + opts_.tol) / lattice_ + 1e-6);
      budget_lp_ = std::min(budget_lp_, k * lattice_ * (1.0 + 1e-10));
    }
  }

  void offer(std::span<const std::uint8_t> z) {
    const TreeInformation info = tree_information(z, inc_);
    const double c = info.i_x;
    const double w = info.i_y;
    switch (kind_) {
      case ProblemKind::MinRate:
        if (w < bound_ - opts_.tol) return;
        break;
      case ProblemKind::MaxRelevance:
        if (c > bound_ + opts_.tol) return;
        break;
      case ProblemKind::EqualityMaxRelevance:
        if (std::abs(c - bound_) > band_) return;
        band_rates_.push_back(c);
        break;
    }
    if (found_ && !improves(kind_, opts_.tol, c, w, best_c_, best_w_)) return;
    found_ = true;
    best_.assign(z.begin(), z.end());
    best_c_ = c;
    best_w_ = w;
  }

  void run() { visit(); }

  bool found() const { return found_; }
  const std::vector<std::uint8_t>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<double>& band_rates() const { return band_rates_; }

 private:
  void visit() {
    if (++nodes_ > opts_.node_limit) {
      throw ResourceLimitError("branch-and-bound exceeded " + std::to_string(opts_.node_limit) + " nodes");
    }
    c1_ = 0.0;
    w1_ = 0.0;
    for (std::size_t i = 0; i < state_.size(); ++i) {
      if (state_[i] != FixState::One) continue;
      c1_ += inc_.delta_x[i];
      w1_ += inc_.delta_y[i];
    }
    hull_.build(inc_.delta_x, inc_.delta_y, state_);
    switch (kind_) {
      case ProblemKind::MinRate:
        visit_min_rate();
        break;
      case ProblemKind::MaxRelevance:
        visit_max_relevance();
        break;
      case ProblemKind::EqualityMaxRelevance:
        visit_equality();
        break;
    }
  }

  void visit_min_rate() {
    const double need = bound_ - opts_.tol - w1_;
    if (need <= 0.0) {
      offer_blocks(0, false);
      return;
    }
    const HullFill f = hull_.fill_to_weight(need);
    if (!f.feasible) return;
    double lb = c1_ + f.cost;
    if (lattice_ > 0.0) lb = lattice_ * std::ceil(lb / lattice_ - 1e-6);
    if (found_ && lb >= best_c_ - opts_.tol) return;
    // Rounding the fractional block up always meets the floor.
    offer_blocks(f.full, f.has_partial);
    if (!f.has_partial || (found_ && lb >= best_c_ - opts_.tol)) return;
    branch(hull_.blocks()[f.partial].head, f.theta >= 0.5);
  }

  void visit_max_relevance() {
    if (c1_ > bound_ + opts_.tol) return;
    const HullFill f = hull_.fill_to_budget(std::max(0.0, budget_lp_ - c1_));
    const double ub = w1_ + f.weight;
    if (found_ && ub <= best_w_ + opts_.tol) return;
    // Dropping the fractional block always respects the budget.
    offer_blocks(f.full, false);
    if (!f.has_partial || (found_ && ub <= best_w_ + opts_.tol)) return;
    branch(hull_.blocks()[f.partial].head, f.theta >= 0.5);
  }

  void visit_equality() {
    if (c1_ > bound_ + band_) return;
    if (c1_ + hull_.total_cost() < bound_ - band_) return;
    const HullFill f = hull_.fill_to_budget(bound_ + band_ - c1_);
    const double ub = w1_ + f.weight;
    if (found_ && ub <= best_w_ + opts_.tol) return;
    offer_blocks(f.full, false);
    if (found_ && ub <= best_w_ + opts_.tol) return;
    if (f.has_partial) {
      branch(hull_.blocks()[f.partial].head, f.theta >= 0.5);
    } else if (f.full < hull_.blocks().size()) {
      // The LP stopped on a block boundary short of the band; more rate is
      // still needed, so split on the next block.
      branch(hull_.blocks()[f.full].head, true);
    }
  }

  /// Offers the selection made of the fixed ones plus the first `full` blocks
  /// (and the next one when `plus_next`).
  void offer_blocks(std::size_t full, bool plus_next) {
    for (std::size_t i = 0; i < state_.size(); ++i) scratch_[i] = state_[i] == FixState::One ? 1 : 0;
    const auto blocks = hull_.blocks();
    const std::size_t upto = std::min(blocks.size(), full + (plus_next ? 1 : 0));
    for (std::size_t k = 0; k < upto; ++k) {
      for (const std::uint32_t m : hull_.members(blocks[k])) scratch_[m] = 1;
    }
    offer(scratch_);
  }

  void branch(std::uint32_t head, bool one_first) {
    for (int pass = 0; pass < 2; ++pass) {
      const bool take = (pass == 0) == one_first;
      const std::size_t mark = trail_.size();
      if (take) {
        fix_one(head);
      } else {
        fix_zero(head);
      }
      visit();
      undo(mark);
    }
  }

  void fix_one(std::size_t i) {
    while (state_[i] == FixState::Free) {
      state_[i] = FixState::One;
      trail_.push_back(static_cast<std::uint32_t>(i));
      if (i == 0) break;
      i = parent_index(i);
    }
  }

  // Zeroes i and every candidate below it, one contiguous index range per depth.
  void fix_zero(std::size_t i) {
    const NodeId id = node_at(i);
    std::uint64_t lo = id.morton;
    std::uint64_t hi = id.morton + 1;
    for (int d = id.depth; d < inc_.depth_l; ++d) {
      const std::size_t base = nodes_above(d);
      for (std::uint64_t m = lo; m < hi; ++m) {
        const std::size_t k = base + m;
        if (state_[k] != FixState::Free) continue;
        state_[k] = FixState::Zero;
        trail_.push_back(static_cast<std::uint32_t>(k));
      }
      lo <<= 2;
      hi <<= 2;
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      state_[trail_.back()] = FixState::Free;
      trail_.pop_back();
    }
  }

  const IncrementVectors& inc_;
  ProblemKind kind_;
  double bound_;
  double band_;
  SolveOptions opts_;

  std::vector<FixState> state_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::uint8_t> scratch_;
  TreeHull hull_;
  double lattice_;
  double budget_lp_ = 0.0;
  double c1_ = 0.0;
  double w1_ = 0.0;

  bool found_ = false;
  std::vector<std::uint8_t> best_;
  double best_c_ = 0.0;
  double best_w_ = 0.0;
  std::uint64_t nodes_ = 0;
  std::vector<double> band_rates_;
};

SolveResult finish(const IncrementVectors& inc, ProblemKind kind, std::vector<std::uint8_t> bits,
                   std::uint64_t nodes, std::chrono::steady_clock::time_point t0) {
  SolveResult r;
  r.selection = TreeSelection(inc.depth_l, std::move(bits));
  const TreeInformation info = tree_information(r.selection, inc);
  r.i_x = info.i_x;
  r.i_y = info.i_y;
  r.objective = kind == ProblemKind::MinRate ? info.i_x : info.i_y;
  r.status = SolveStatus::Optimal;
  r.nodes_explored = nodes;
  r.wall_ms = elapsed_ms(t0);
  return r;
}

SolveResult infeasible(const IncrementVectors& inc, std::chrono::steady_clock::time_point t0) {
  SolveResult r;
  r.selection = TreeSelection(inc.depth_l);
  r.status = SolveStatus::Infeasible;
  r.wall_ms = elapsed_ms(t0);
  return r;
}

std::shared_ptr<const detail::LatticeTable> lattice_for(const IncrementVectors& inc, const SolveOptions& opts) {
  if (opts.method != SolveMethod::Auto || inc.size() == 0) return nullptr;
  return detail::cached_lattice_table(inc.delta_x, inc.delta_y);
}

/// Picks the answer from the root row of the lattice table. Rates of distinct
/// units are a whole unit apart, far wider than any tolerance band.
std::optional<std::size_t> lattice_pick(const detail::LatticeTable& t, ProblemKind kind, double bound, double band,
                                        double tol) {
  const auto row = t.root();
  const double q = t.unit();
  switch (kind) {
    case ProblemKind::MinRate:
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] >= bound - tol) return k;
      }
      return std::nullopt;
    case ProblemKind::MaxRelevance: {
      std::optional<std::size_t> best;
      for (std::size_t k = 0; k < row.size() && static_cast<double>(k) * q <= bound + tol; ++k) {
        if (std::isinf(row[k])) continue;
        if (!best || row[k] > row[*best] + tol) best = k;
      }
      return best;
    }
    case ProblemKind::EqualityMaxRelevance: {
      const double k = std::round(bound / q);
      if (k < 0.0 || k >= static_cast<double>(row.size())) return std::nullopt;
      const auto ki = static_cast<std::size_t>(k);
      if (std::abs(k * q - bound) > band || std::isinf(row[ki])) return std::nullopt;
      return ki;
    }
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve_min_rate(const IncrementVectors& inc, double d_hat, const SolveOptions& opts) {
  check_bound(d_hat, "d_hat");
  const auto t0 = std::chrono::steady_clock::now();
  if (d_hat > inc.total_y() + opts.tol) return infeasible(inc, t0);
  if (const auto table = lattice_for(inc, opts)) {
    if (const auto k = lattice_pick(*table, ProblemKind::MinRate, d_hat, opts.tol, opts.tol)) {
      return finish(inc, ProblemKind::MinRate, table->reconstruct(*k), 1, t0);
    }
  }
  BranchAndBound bb(inc, ProblemKind::MinRate, d_hat, opts.tol, opts);
  bb.offer(TreeSelection::full(inc.depth_l).bits());
  bb.run();
  return finish(inc, ProblemKind::MinRate, bb.best(), bb.nodes(), t0);
}

SolveResult solve_max_relevance(const IncrementVectors& inc, double budget, const SolveOptions& opts) {
  check_bound(budget, "budget");
  const auto t0 = std::chrono::steady_clock::now();
  if (const auto table = lattice_for(inc, opts)) {
    if (const auto k = lattice_pick(*table, ProblemKind::MaxRelevance, budget, opts.tol, opts.tol)) {
      return finish(inc, ProblemKind::MaxRelevance, table->reconstruct(*k), 1, t0);
    }
  }
  BranchAndBound bb(inc, ProblemKind::MaxRelevance, budget, opts.tol, opts);
  bb.offer(TreeSelection(inc.depth_l).bits());
  bb.run();
  return finish(inc, ProblemKind::MaxRelevance, bb.best(), bb.nodes(), t0);
}

SolveResult solve_equality_max_relevance(const IncrementVectors& inc, double d_star, const SolveOptions& opts,
                                         const TreeSelection* hint) {
  check_bound(d_star, "d_star");
  if (hint != nullptr && hint->size() != inc.size()) {
    throw std::invalid_argument("hint selection does not match the increments");
  }
  const auto t0 = std::chrono::steady_clock::now();
  if (const auto table = lattice_for(inc, opts)) {
    if (const auto k = lattice_pick(*table, ProblemKind::EqualityMaxRelevance, d_star, opts.tol, opts.tol)) {
      return finish(inc, ProblemKind::EqualityMaxRelevance, table->reconstruct(*k), 1, t0);
    }
  }
  std::vector<std::uint8_t> best;
  std::uint64_t nodes = 0;
  for (double band = opts.tol;; band = std::max(band / 10.0, kBandFloor)) {
    BranchAndBound bb(inc, ProblemKind::EqualityMaxRelevance, d_star, band, opts);
    if (hint != nullptr && is_valid_selection(*hint)) bb.offer(hint->bits());
    bb.run();
    nodes += bb.nodes();
    if (!bb.found()) break;
    best = bb.best();
    if (band <= kBandFloor || distinct_count(bb.band_rates()) <= 1) break;
  }
  if (best.empty()) {
    throw std::invalid_argument("no tree attains a rate of " + std::to_string(d_star) + " nats");
  }
  return finish(inc, ProblemKind::EqualityMaxRelevance, std::move(best), nodes, t0);
}

void for_each_valid_selection(int depth_l, const std::function<void(std::span<const std::uint8_t>)>& visit) {
  if (depth_l < 0) throw std::invalid_argument("depth must be non-negative");
  if (depth_l > kMaxEnumerationDepth) {
    throw std::invalid_argument("enumeration is capped at depth " + std::to_string(kMaxEnumerationDepth) +
                                ": the number of trees grows doubly exponentially");
  }
  const std::size_t n = candidate_count(depth_l);
  std::vector<std::uint8_t> z(n, 0);
  // Candidates are decided in canonical order, so a parent is always settled
  // before its children and 0 before 1 yields lexicographic order.
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      visit(z);
      return;
    }
    if (i > 0 && !z[parent_index(i)]) {
      self(self, i + 1);
      return;
    }
    self(self, i + 1);
    z[i] = 1;
    self(self, i + 1);
    z[i] = 0;
  };
  rec(rec, 0);
}

std::vector<TreeSelection> enumerate_valid_selections(int depth_l) {
  std::vector<TreeSelection> out;
  for_each_valid_selection(depth_l, [&](std::span<const std::uint8_t> z) {
    out.emplace_back(depth_l, std::vector<std::uint8_t>(z.begin(), z.end()));
  });
  return out;
}

SolveResult brute_force_solve(const IncrementVectors& inc, ProblemKind kind, double bound, const SolveOptions& opts) {
  check_bound(bound, "bound");
  const auto t0 = std::chrono::steady_clock::now();
  const double tol = opts.tol;

  double band = tol;
  if (kind == ProblemKind::EqualityMaxRelevance) {
    std::vector<double> rates;
    for_each_valid_selection(inc.depth_l, [&](std::span<const std::uint8_t> z) {
      const double c = tree_information(z, inc).i_x;
      if (std::abs(c - bound) <= tol) rates.push_back(c);
    });
    if (rates.empty()) {
      throw std::invalid_argument("no tree attains a rate of " + std::to_string(bound) + " nats");
    }
    while (band > kBandFloor) {
      std::vector<double> inside;
      for (const double c : rates) {
        if (std::abs(c - bound) <= band) inside.push_back(c);
      }
      if (distinct_count(inside) <= 1) break;
      const double next = std::max(band / 10.0, kBandFloor);
      bool any = false;
      for (const double c : inside) any = any || std::abs(c - bound) <= next;
      if (!any) break;
      band = next;
    }
  }

  bool found = false;
  std::vector<std::uint8_t> best;
  double best_c = 0.0;
  double best_w = 0.0;
  std::uint64_t count = 0;
  for_each_valid_selection(inc.depth_l, [&](std::span<const std::uint8_t> z) {
    ++count;
    const TreeInformation info = tree_information(z, inc);
    const bool ok = kind == ProblemKind::MinRate        ? info.i_y >= bound - tol
                    : kind == ProblemKind::MaxRelevance ? info.i_x <= bound + tol
                                                        : std::abs(info.i_x - bound) <= band;
    if (!ok) return;
    // Enumeration runs in lexicographic order, so keeping the first of equals
    // gives the lexicographically smallest z.
    if (found && !improves(kind, tol, info.i_x, info.i_y, best_c, best_w)) return;
    found = true;
    best.assign(z.begin(), z.end());
    best_c = info.i_x;
    best_w = info.i_y;
  });
  if (!found) {
    SolveResult r = infeasible(inc, t0);
    r.nodes_explored = count;
    return r;
  }
  return finish(inc, kind, std::move(best), count, t0);
}

}  // namespace ibtree
