#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ibtree/increments.hpp"
#include "ibtree/pareto.hpp"
#include "ibtree/quadtree.hpp"
#include "ibtree/relaxation.hpp"
#include "ibtree/solver.hpp"
#include "ibtree/world.hpp"

namespace testsupport {

using namespace ibtree;

inline double ln(double v) { return std::log(v); }

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// 4x4 world, uniform prior, p(y=1|x) = 1 on the top-left and bottom-left
/// cells of quadrant 0 and 0 elsewhere.
inline WorldMap quadrant_world() {
  std::vector<double> p(16, 0.0);
  p[0] = 1.0;  // (0, 0)
  p[4] = 1.0;  // (1, 0)
  return WorldMap::binary(2, p);
}

/// p(y=1|x) = {1, 0, 1, 0} in row-major order on a 2x2 world.
inline WorldMap stripe_world() {
  const std::vector<double> p{1.0, 0.0, 1.0, 0.0};
  return WorldMap::binary(1, p);
}

struct WorldGen {
  bool random_prior = true;
  double zero_prior_chance = 0.1;
  double binary_cell_chance = 0.3;  // cells with p(y=1|x) in {0, 1}
};

inline WorldMap random_world(std::mt19937_64& rng, int l, const WorldGen& g = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t cells = std::size_t{1} << (2 * l);
  std::vector<double> p(cells);
  for (auto& v : p) v = u(rng) < g.binary_cell_chance ? std::round(u(rng)) : u(rng);
  WorldMap w = WorldMap::binary(l, p);
  if (!g.random_prior) return w;
  std::vector<double> weights(cells);
  for (auto& v : weights) v = u(rng) < g.zero_prior_chance ? 0.0 : u(rng);
  if (std::all_of(weights.begin(), weights.end(), [](double v) { return v == 0.0; })) weights[0] = 1.0;
  return apply_prior_weights(w, weights);
}

/// Random valid selection grown top-down, expanding each reachable candidate
/// with probability `expand`.
inline TreeSelection random_selection(std::mt19937_64& rng, int l, double expand) {
  std::bernoulli_distribution b(expand);
  TreeSelection z(l);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i > 0 && !z[parent_index(i)]) continue;
    z.set(i, b(rng));
  }
  return z;
}

/// Random precedence-feasible fractional vector: children are their parent's
/// value times a random factor, with frequent exact ties and integral values.
inline FractionalSelection random_fractional(std::mt19937_64& rng, int l) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FractionalSelection f;
  f.depth_l = l;
  f.z.resize(candidate_count(l));
  for (std::size_t i = 0; i < f.z.size(); ++i) {
    const double cap = i == 0 ? 1.0 : f.z[parent_index(i)];
    const double r = u(rng);
    if (r < 0.2) {
      f.z[i] = cap;
    } else if (r < 0.3) {
      f.z[i] = 0.0;
    } else {
      f.z[i] = cap * u(rng);
    }
  }
  return f;
}

/// Every (i_x, i_y) pair not dominated by another tree, deduplicated at tol,
/// ascending in i_x.
inline std::vector<InfoPoint> brute_force_pareto(const IncrementVectors& inc, double tol = 1e-9) {
  std::vector<InfoPoint> all;
  for_each_valid_selection(inc.depth_l, [&](std::span<const std::uint8_t> z) {
    const TreeInformation t = tree_information(z, inc);
    all.push_back({t.i_x, t.i_y});
  });
  std::vector<InfoPoint> front;
  for (const auto& a : all) {
    bool dominated = false;
    for (const auto& b : all) {
      if (is_dominated(a, b, tol)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    const bool dup = std::any_of(front.begin(), front.end(), [&](const InfoPoint& f) {
      return std::abs(f.i_x - a.i_x) <= tol && std::abs(f.i_y - a.i_y) <= tol;
    });
    if (!dup) front.push_back(a);
  }
  std::sort(front.begin(), front.end(), [](const InfoPoint& a, const InfoPoint& b) { return a.i_x < b.i_x; });
  return front;
}

/// Bounds spread over [0, total] with the end points included.
inline std::vector<double> sweep_bounds(std::mt19937_64& rng, double total, int count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{0.0, total};
  while (static_cast<int>(b.size()) < count) b.push_back(total * u(rng));
  return b;
}

}  // namespace testsupport
