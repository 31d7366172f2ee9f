#include "ibtree/increments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csv_format.hpp"
#include "ibtree/world.hpp"

namespace ibtree {

namespace {

constexpr double kMassTolerance = 1e-9;

void check_children(const NodeStats& node, std::span<const NodeStats> children) {
  if (children.size() != 4) throw std::invalid_argument("a quadtree node has exactly four children");
  double sum = 0.0;
  for (const auto& c : children) sum += c.mass;
  if (std::abs(sum - node.mass) > kMassTolerance) {
    throw std::invalid_argument("children masses sum to " + std::to_string(sum) + ", parent has " +
                                std::to_string(node.mass));
  }
}

}  // namespace

std::vector<NodeStats> compute_node_stats(const WorldMap& world) {
  const int l = world.depth_l();
  const auto ny = static_cast<std::size_t>(world.y_alphabet_size());
  std::vector<NodeStats> stats(nodes_above(l + 1));

  const std::size_t finest = nodes_above(l);
  const std::uint32_t side = world.side();
  for (std::size_t m = 0; m < world.cell_count(); ++m) {
    const auto [r, c] = morton_decode(m);
    const std::size_t cell = std::size_t{r} * side + c;
    auto& s = stats[finest + m];
    s.mass = world.prior(cell);
    const auto rel = world.relevance(cell);
    s.relevance.assign(rel.begin(), rel.end());
  }

  for (std::size_t i = finest; i-- > 0;) {
    auto& s = stats[i];
    const std::size_t first = first_child_index(i);
    s.relevance.assign(ny, 0.0);
    for (std::size_t k = 0; k < 4; ++k) s.mass += stats[first + k].mass;
    if (s.mass > 0.0) {
      for (std::size_t k = 0; k < 4; ++k) {
        const auto& c = stats[first + k];
        if (c.mass <= 0.0) continue;
        const double w = c.mass / s.mass;
        for (std::size_t y = 0; y < ny; ++y) s.relevance[y] += w * c.relevance[y];
      }
    } else {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t y = 0; y < ny; ++y) s.relevance[y] += 0.25 * stats[first + k].relevance[y];
      }
    }
  }
  return stats;
}

double node_delta_x(const NodeStats& node, std::span<const NodeStats> children) {
  check_children(node, children);
  if (node.mass <= 0.0) return 0.0;
  double h = 0.0;
  for (const auto& c : children) {
    if (c.mass <= 0.0) continue;
    const double pi = c.mass / node.mass;
    h -= pi * std::log(pi);
  }
  return std::max(0.0, node.mass * h);
}

double node_delta_y(const NodeStats& node, std::span<const NodeStats> children) {
  check_children(node, children);
  if (node.mass <= 0.0) return 0.0;
  const std::size_t ny = node.relevance.size();
  // JS via the mixture identity: H(sum Pi_i p_i) - sum Pi_i H(p_i).
  std::vector<double> mix(ny, 0.0);
  double mean_entropy = 0.0;
  for (const auto& c : children) {
    if (c.mass <= 0.0) continue;
    const double pi = c.mass / node.mass;
    for (std::size_t y = 0; y < ny; ++y) mix[y] += pi * c.relevance[y];
    mean_entropy += pi * detail::entropy_unchecked(c.relevance);
  }
  const double js = detail::entropy_unchecked(mix) - mean_entropy;
  return std::max(0.0, node.mass * js);
}

double IncrementVectors::total_x() const {
  double s = 0.0;
  for (const double v : delta_x) s += v;
  return s;
}

double IncrementVectors::total_y() const {
  double s = 0.0;
  for (const double v : delta_y) s += v;
  return s;
}

IncrementVectors compute_increments(const WorldMap& world) {
  const std::vector<NodeStats> stats = compute_node_stats(world);
  IncrementVectors inc;
  inc.depth_l = world.depth_l();
  const std::size_t n = candidate_count(inc.depth_l);
  inc.delta_x.resize(n);
  inc.delta_y.resize(n);
  inc.mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const NodeStats> children(stats.data() + first_child_index(i), 4);
    inc.mass[i] = stats[i].mass;
    inc.delta_x[i] = node_delta_x(stats[i], children);
    // JS is bounded by H(Pi); clamp rounding so delta_y <= delta_x holds exactly.
    inc.delta_y[i] = std::min(node_delta_y(stats[i], children), inc.delta_x[i]);
  }
  return inc;
}

TreeInformation tree_information(std::span<const std::uint8_t> z, const IncrementVectors& inc) {
  if (z.size() != inc.size()) {
    throw std::invalid_argument("selection length " + std::to_string(z.size()) + " does not match " +
                                std::to_string(inc.size()) + " increments");
  }
  TreeInformation info;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i]) continue;
    info.i_x += inc.delta_x[i];
    info.i_y += inc.delta_y[i];
  }
  return info;
}

TreeInformation tree_information(const TreeSelection& z, const IncrementVectors& inc) {
  return tree_information(z.bits(), inc);
}

void write_increments_csv(std::ostream& os, const IncrementVectors& inc) {
  os << "depth,morton,mass,delta_x_nats,delta_y_nats,free\n";
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const NodeId id = node_at(i);
    os << id.depth << ',' << id.morton << ',' << csv::num(inc.mass[i]) << ',' << csv::num(inc.delta_x[i])
       << ',' << csv::num(inc.delta_y[i]) << ',' << (inc.mass[i] > 0.0 ? 0 : 1) << '\n';
  }
}

}  // namespace ibtree
