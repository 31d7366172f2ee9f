#include "ibtree/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "ibtree/errors.hpp"
#include "ibtree/world.hpp"

namespace ibtree {

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty distribution");
  double sum = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kInputTolerance) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum));
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

namespace detail {

double entropy_unchecked(std::span<const double> p) {
  double h = 0.0;
  for (const double v : p) h -= xlogx(v);
  return h;
}

}  // namespace detail

double entropy(std::span<const double> p) {
  check_distribution(p, "entropy");
  return std::max(0.0, detail::entropy_unchecked(p));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: lengths " + std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " differ");
  }
  check_distribution(p, "kl_divergence");
  check_distribution(q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw SupportError("kl_divergence: q[" + std::to_string(i) + "] = 0 where p has mass");
    }
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(0.0, d);
}

double js_divergence(std::span<const double> weights, const std::vector<std::vector<double>>& dists) {
  if (weights.size() != dists.size()) {
    throw std::invalid_argument("js_divergence: " + std::to_string(weights.size()) + " weights for " +
                                std::to_string(dists.size()) + " distributions");
  }
  check_distribution(weights, "js_divergence weights");
  const std::size_t ny = dists.front().size();
  std::vector<double> mix(ny, 0.0);
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (dists[i].size() != ny) throw std::invalid_argument("js_divergence: distributions differ in length");
    check_distribution(dists[i], "js_divergence");
    if (weights[i] == 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) mix[y] += weights[i] * dists[i][y];
    mean_entropy += weights[i] * detail::entropy_unchecked(dists[i]);
  }
  return std::max(0.0, detail::entropy_unchecked(mix) - mean_entropy);
}

TreeInformation direct_tree_information(const WorldMap& world, const TreeSelection& z) {
  if (z.depth_l() != world.depth_l()) {
    throw std::invalid_argument("selection depth does not match the world");
  }
  const std::vector<NodeId> enc = encoder_of(z);  // validates z
  // A single-leaf tree makes T constant; both sums are identically zero.
  if (z.selected_count() == 0) return {};
  const auto ny = static_cast<std::size_t>(world.y_alphabet_size());

  // Joint tables keyed by leaf. Leaves are few enough that a map is fine for
  // a reference computation.
  std::map<NodeId, double> p_t;
  std::map<NodeId, std::vector<double>> p_ty;
  std::vector<double> p_y(ny, 0.0);
  for (std::size_t x = 0; x < world.cell_count(); ++x) {
    const double px = world.prior(x);
    p_t[enc[x]] += px;
    auto& row = p_ty.try_emplace(enc[x], ny, 0.0).first->second;
    const auto rel = world.relevance(x);
    for (std::size_t y = 0; y < ny; ++y) {
      row[y] += px * rel[y];
      p_y[y] += px * rel[y];
    }
  }

  // I(T;X) = sum_{t,x} p(t,x) log[p(t,x) / (p(t) p(x))] with p(t,x) = p(x)
  // on the cells the encoder assigns to t.
  TreeInformation info;
  for (std::size_t x = 0; x < world.cell_count(); ++x) {
    const double px = world.prior(x);
    if (px <= 0.0) continue;
    info.i_x += px * std::log(px / (p_t[enc[x]] * px));
  }
  for (const auto& [t, row] : p_ty) {
    const double pt = p_t[t];
    if (pt <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      if (row[y] <= 0.0) continue;
      info.i_y += row[y] * std::log(row[y] / (pt * p_y[y]));
    }
  }
  info.i_x = std::max(0.0, info.i_x);
  info.i_y = std::max(0.0, info.i_y);
  return info;
}

}  // namespace ibtree
