#include "tree_hull.hpp"

#include <algorithm>

#include "ibtree/quadtree.hpp"

namespace ibtree::detail {

namespace {

constexpr std::uint32_t kNone = 0xFFFFFFFFu;

double ratio_of(double cost, double weight) { return cost > 0.0 ? weight / cost : 0.0; }

// Max-heap order: larger ratio first, then the shallower (smaller) head.
struct HeapLess {
  template <class E>
  bool operator()(const E& a, const E& b) const {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.head > b.head;
  }
};

}  // namespace

std::uint32_t TreeHull::find(std::uint32_t g) {
  std::uint32_t root = g;
  while (uf_[root] != root) root = uf_[root];
  while (uf_[g] != root) {
    const std::uint32_t up = uf_[g];
    uf_[g] = root;
    g = up;
  }
  return root;
}

void TreeHull::build(std::span<const double> cost, std::span<const double> weight,
                     std::span<const FixState> state) {
  const std::size_t n = cost.size();
  blocks_.clear();
  members_.clear();
  total_cost_ = 0.0;
  total_weight_ = 0.0;
  uf_.resize(n);
  next_.assign(n, kNone);
  first_.resize(n);
  last_.resize(n);
  version_.assign(n, 0);
  emitted_.assign(n, 0);
  gcost_.resize(n);
  gweight_.resize(n);
  heap_.clear();

  for (std::uint32_t i = 0; i < n; ++i) {
    uf_[i] = i;
    if (state[i] != FixState::Free) continue;
    first_[i] = last_[i] = i;
    gcost_[i] = cost[i];
    gweight_[i] = weight[i];
    total_cost_ += cost[i];
    total_weight_ += weight[i];
    heap_.push_back({ratio_of(cost[i], weight[i]), i, i, 0});
  }
  std::make_heap(heap_.begin(), heap_.end(), HeapLess{});

  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), HeapLess{});
    const HeapEntry top = heap_.back();
    heap_.pop_back();
    const std::uint32_t g = top.group;
    if (uf_[g] != g || emitted_[g] || version_[g] != top.version) continue;

    bool attach_to_root = g == 0;
    std::uint32_t pg = kNone;
    if (!attach_to_root) {
      const auto p = static_cast<std::uint32_t>(parent_index(g));
      if (state[p] == FixState::One) {
        attach_to_root = true;
      } else {
        pg = find(p);
        attach_to_root = emitted_[pg] != 0;
      }
    }

    if (attach_to_root) {
      emitted_[g] = 1;
      HullBlock b;
      b.head = g;
      b.cost = gcost_[g];
      b.weight = gweight_[g];
      b.begin = static_cast<std::uint32_t>(members_.size());
      for (std::uint32_t m = first_[g]; m != kNone; m = next_[m]) members_.push_back(m);
      b.end = static_cast<std::uint32_t>(members_.size());
      blocks_.push_back(b);
      continue;
    }

    // Merge g behind its parent group; the merged group keeps the parent's head.
    uf_[g] = pg;
    next_[last_[pg]] = first_[g];
    last_[pg] = last_[g];
    gcost_[pg] += gcost_[g];
    gweight_[pg] += gweight_[g];
    ++version_[pg];
    heap_.push_back({ratio_of(gcost_[pg], gweight_[pg]), pg, pg, version_[pg]});
    std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
  }
}

HullFill TreeHull::fill_to_weight(double need) const {
  HullFill f;
  if (need <= 0.0) return f;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const HullBlock& b = blocks_[k];
    // Blocks are ratio-ordered, so once weight runs out nothing later helps.
    if (b.weight <= 0.0) break;
    if (f.weight + b.weight < need) {
      f.cost += b.cost;
      f.weight += b.weight;
      f.full = k + 1;
      continue;
    }
    const double theta = (need - f.weight) / b.weight;
    if (theta >= 1.0 - 1e-12) {
      f.cost += b.cost;
      f.weight += b.weight;
      f.full = k + 1;
    } else {
      f.has_partial = true;
      f.partial = k;
      f.theta = theta;
      f.cost += theta * b.cost;
      f.weight = need;
    }
    return f;
  }
  f.feasible = false;
  return f;
}

HullFill TreeHull::fill_to_budget(double budget) const {
  HullFill f;
  if (budget < 0.0) {
    f.feasible = false;
    return f;
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const HullBlock& b = blocks_[k];
    if (f.cost + b.cost <= budget) {
      f.cost += b.cost;
      f.weight += b.weight;
      f.full = k + 1;
      continue;
    }
    const double theta = (budget - f.cost) / b.cost;
    if (theta > 1e-12) {
      f.has_partial = true;
      f.partial = k;
      f.theta = theta;
      f.cost = budget;
      f.weight += theta * b.weight;
    }
    break;
  }
  return f;
}

}  // namespace ibtree::detail
