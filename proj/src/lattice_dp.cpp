#include "lattice_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "ibtree/quadtree.hpp"

namespace ibtree::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> max_plus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, kNegInf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == kNegInf) continue;
    double* o = out.data() + i;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double v = a[i] + b[j];
      if (v > o[j]) o[j] = v;
    }
  }
  return out;
}

}  // namespace

std::optional<LatticeTable> LatticeTable::build(std::span<const double> dx, std::span<const double> dy,
                                                double max_work) {
  const std::size_t n = dx.size();
  if (n == 0 || dy.size() != n) return std::nullopt;
  double q = 0.0;
  for (const double v : dx) {
    if (v > 0.0 && (q == 0.0 || v < q)) q = v;
  }
  if (q == 0.0) return std::nullopt;

  LatticeTable t;
  t.n_ = n;
  t.q_ = q;
  t.units_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = dx[i] / q;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-12 * std::max(1.0, r)) return std::nullopt;
    t.units_[i] = static_cast<std::size_t>(k);
  }

  // Row lengths and convolution work, before allocating anything.
  std::vector<std::size_t> span_units(n, 0);
  double work = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    std::size_t s = t.units_[i];
    const std::size_t c0 = first_child_index(i);
    if (c0 < n) {
      std::size_t acc = span_units[c0];
      for (std::size_t c = 1; c < 4; ++c) {
        work += static_cast<double>(acc + 1) * static_cast<double>(span_units[c0 + c] + 1);
        acc += span_units[c0 + c];
      }
      s += acc;
    }
    span_units[i] = s;
    if (work > max_work) return std::nullopt;
  }

  t.w_.assign(dy.begin(), dy.end());
  t.g_.resize(n);
  t.prefix_.resize(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t c0 = first_child_index(i);
    std::vector<double> below{0.0};
    if (c0 < n) {
      auto& pre = t.prefix_[i];
      pre.push_back(t.g_[c0]);
      for (std::size_t c = 1; c < 4; ++c) pre.push_back(max_plus(pre.back(), t.g_[c0 + c]));
      below = pre.back();
    }
    const std::size_t k = t.units_[i];
    std::vector<double> g(k + below.size(), kNegInf);
    g[0] = 0.0;  // not expanded
    for (std::size_t j = 0; j < below.size(); ++j) {
      if (below[j] == kNegInf) continue;
      const double v = t.w_[i] + below[j];
      if (v > g[k + j]) g[k + j] = v;
    }
    t.g_[i] = std::move(g);
  }
  // Children rows are only needed through the prefixes for reconstruction.
  return t;
}

std::vector<std::uint8_t> LatticeTable::reconstruct(std::size_t k) const {
  if (k >= g_[0].size() || g_[0][k] == kNegInf) throw std::logic_error("rate not attainable");
  std::vector<std::uint8_t> z(n_, 0);
  rebuild_node(0, k, z);
  return z;
}

void LatticeTable::rebuild_node(std::size_t t, std::size_t k, std::vector<std::uint8_t>& z) const {
  const std::vector<double>& g = g_[t];
  // Prefer leaving the node unexpanded when that already attains the value.
  if (k == 0 && g[0] == 0.0) return;
  z[t] = 1;
  std::size_t rest = k - units_[t];
  const std::size_t c0 = first_child_index(t);
  if (c0 >= n_) return;
  const auto& pre = prefix_[t];
  // Peel children off from the last one, finding the split that reproduces
  // each prefix value bit for bit.
  for (std::size_t c = 3; c > 0; --c) {
    const std::vector<double>& left = pre[c - 1];
    const std::vector<double>& child = g_[c0 + c];
    const double target = pre[c][rest];
    bool done = false;
    for (std::size_t j = 0; j < child.size() && j <= rest; ++j) {
      const std::size_t i = rest - j;
      if (i >= left.size() || child[j] == kNegInf || left[i] == kNegInf) continue;
      if (left[i] + child[j] == target) {
        rebuild_node(c0 + c, j, z);
        rest = i;
        done = true;
        break;
      }
    }
    if (!done) throw std::logic_error("lattice reconstruction failed");
  }
  rebuild_node(c0, rest, z);
}

std::shared_ptr<const LatticeTable> cached_lattice_table(std::span<const double> dx, std::span<const double> dy) {
  struct Entry {
    std::vector<double> dx;
    std::vector<double> dy;
    std::shared_ptr<const LatticeTable> table;
  };
  static std::mutex mu;
  static Entry last;
  {
    std::lock_guard lock(mu);
    if (std::equal(dx.begin(), dx.end(), last.dx.begin(), last.dx.end()) &&
        std::equal(dy.begin(), dy.end(), last.dy.begin(), last.dy.end()) && !last.dx.empty()) {
      return last.table;
    }
  }
  std::shared_ptr<const LatticeTable> table;
  if (auto built = LatticeTable::build(dx, dy)) table = std::make_shared<const LatticeTable>(std::move(*built));
  std::lock_guard lock(mu);
  last = {std::vector<double>(dx.begin(), dx.end()), std::vector<double>(dy.begin(), dy.end()), table};
  return table;
}

}  // namespace ibtree::detail
