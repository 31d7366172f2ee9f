#include <doctest.h>

#include <cmath>
#include <random>

#include "ibtree/errors.hpp"
#include "ibtree/infotheory.hpp"
#include "ibtree/world.hpp"
#include "support.hpp"

using namespace ibtree;
using doctest::Approx;

namespace {

std::vector<double> random_dist(std::mt19937_64& rng, std::size_t n, double zero_chance = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) s += v = u(rng) < zero_chance ? 0.0 : u(rng);
  if (s == 0.0) {
    p[0] = 1.0;
    s = 1.0;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(std::vector<double>{1, 0, 0, 0}) == 0.0);
  CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(entropy(std::vector<double>{0.5, 0.5}) == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(entropy(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("kl divergence examples") {
  const std::vector<double> p{0.3, 0.7};
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}) ==
        Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(kl_divergence(std::vector<double>{0.75, 0.25}, std::vector<double>{0.5, 0.5}) ==
        Approx(0.130812).epsilon(1e-6));
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}), SupportError);
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.25, 0.5}),
                  std::invalid_argument);
  // Support violations are not reported as shape errors.
  bool support_is_shape = false;
  try {
    kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0});
  } catch (const SupportError&) {
  } catch (const std::invalid_argument&) {
    support_is_shape = true;
  }
  CHECK_FALSE(support_is_shape);
}

TEST_CASE("js divergence examples") {
  const std::vector<double> half{0.5, 0.5};
  const std::vector<std::vector<double>> same{{0.2, 0.8}, {0.2, 0.8}};
  CHECK(std::abs(js_divergence(half, same)) <= 1e-15);
  CHECK(js_divergence(half, {{1, 0}, {0, 1}}) == Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<double> quarter(4, 0.25);
  CHECK(js_divergence(quarter, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}) == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(js_divergence(half, {{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(js_divergence(half, {{1, 0}, {0.5, 0.25, 0.25}}), std::invalid_argument);
}

TEST_CASE("divergences are non-negative and js is bounded by the weight entropy") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t ny = 2 + rng() % 4;
    const std::size_t k = 1 + rng() % 5;
    const auto w = random_dist(rng, k, 0.3);
    std::vector<std::vector<double>> d;
    for (std::size_t i = 0; i < k; ++i) d.push_back(random_dist(rng, ny));
    const double js = js_divergence(w, d);
    CHECK(js >= 0.0);
    CHECK(js <= entropy(w) + 1e-12);
    const auto p = random_dist(rng, ny);
    const auto q = random_dist(rng, ny, 0.0);
    CHECK(kl_divergence(p, q) >= 0.0);
    CHECK(entropy(p) >= 0.0);
    CHECK(entropy(p) <= std::log(static_cast<double>(ny)) + 1e-12);
  }
}

TEST_CASE("direct tree information examples") {
  const WorldMap w = testsupport::quadrant_world();
  const TreeInformation root = direct_tree_information(w, TreeSelection(2));
  CHECK(root.i_x == 0.0);
  CHECK(root.i_y == 0.0);

  const TreeInformation full = direct_tree_information(w, TreeSelection::full(2));
  CHECK(full.i_x == Approx(std::log(16.0)).epsilon(1e-12));
  CHECK(full.i_y == Approx(mutual_info_xy(w)).epsilon(1e-12));

  const TreeInformation q0 = direct_tree_information(w, TreeSelection(2, {1, 1, 0, 0, 0}));
  CHECK(q0.i_x == Approx(0.25 * std::log(16.0) + 0.75 * std::log(4.0)).epsilon(1e-12));
  CHECK(q0.i_x == Approx(1.732868).epsilon(1e-6));
  CHECK(q0.i_y == Approx(0.376770).epsilon(1e-6));

  CHECK_THROWS_AS(direct_tree_information(w, TreeSelection(1)), std::invalid_argument);
  CHECK_THROWS_AS(direct_tree_information(w, TreeSelection(2, {0, 1, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("direct tree information properties") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 4);
    const WorldMap w = testsupport::random_world(rng, l);
    const TreeSelection z = testsupport::random_selection(rng, l, 0.6);
    const TreeInformation t = direct_tree_information(w, z);
    CHECK(t.i_x >= 0.0);
    CHECK(t.i_y >= 0.0);
    CHECK(t.i_y <= mutual_info_xy(w) + 1e-9);
    CHECK(t.i_y <= t.i_x + 1e-9);

    // Deterministic encoder: I(T;X) = H(T).
    std::vector<double> pt;
    const std::uint32_t side = w.side();
    for (const NodeId& leaf : leaves_of(z)) {
      const CellRegion r = region_of(leaf, l);
      double m = 0.0;
      for (std::uint32_t row = r.row; row < r.row + r.size; ++row) {
        for (std::uint32_t col = r.col; col < r.col + r.size; ++col) m += w.prior(std::size_t{row} * side + col);
      }
      pt.push_back(m);
    }
    CHECK(testsupport::near(t.i_x, detail::entropy_unchecked(pt), 1e-9));
  }
}
