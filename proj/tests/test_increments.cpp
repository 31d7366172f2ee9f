#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ibtree/increments.hpp"
#include "ibtree/world.hpp"
#include "support.hpp"

using namespace ibtree;
using doctest::Approx;

namespace {

NodeStats stats(double mass, double p1) { return {mass, {1.0 - p1, p1}}; }

}  // namespace

TEST_CASE("node stats aggregate bottom-up") {
  const std::vector<double> flat(4, 0.4);
  const auto s1 = compute_node_stats(WorldMap::binary(1, flat));
  CHECK(s1[0].mass == Approx(1.0).epsilon(1e-15));
  for (int k = 1; k <= 4; ++k) CHECK(s1[k].mass == 0.25);

  const auto stripe = compute_node_stats(testsupport::stripe_world());
  CHECK(stripe[0].relevance[0] == Approx(0.5).epsilon(1e-15));
  CHECK(stripe[0].relevance[1] == Approx(0.5).epsilon(1e-15));

  const auto q = compute_node_stats(testsupport::quadrant_world());
  CHECK(q[0].mass == Approx(1.0).epsilon(1e-15));
  CHECK(q[0].relevance[1] == Approx(0.125).epsilon(1e-15));
  CHECK(q[1].mass == Approx(0.25).epsilon(1e-15));
  CHECK(q[1].relevance[1] == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("node stats invariants") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 4);
    const auto s = compute_node_stats(testsupport::random_world(rng, l));
    CHECK(s[0].mass == Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < nodes_above(l); ++i) {
      const std::size_t f = first_child_index(i);
      double m = 0.0;
      std::vector<double> mix(2, 0.0);
      for (int k = 0; k < 4; ++k) {
        m += s[f + k].mass;
        for (int y = 0; y < 2; ++y) mix[y] += s[f + k].mass * s[f + k].relevance[y];
      }
      CHECK(testsupport::near(s[i].mass, m, 1e-12));
      if (s[i].mass > 0.0) {
        for (int y = 0; y < 2; ++y) CHECK(testsupport::near(s[i].relevance[y], mix[y] / m, 1e-12));
      }
    }
  }
}

TEST_CASE("node delta examples") {
  const std::vector<NodeStats> quarters(4, stats(0.25, 0.3));
  CHECK(node_delta_x(stats(1.0, 0.3), quarters) == Approx(std::log(4.0)).epsilon(1e-12));
  const std::vector<NodeStats> empty(4, stats(0.0, 0.5));
  CHECK(node_delta_x(stats(0.0, 0.5), empty) == 0.0);
  CHECK(node_delta_y(stats(0.0, 0.5), empty) == 0.0);
  const std::vector<NodeStats> sixteenths(4, stats(0.0625, 0.3));
  CHECK(node_delta_x(stats(0.25, 0.3), sixteenths) == Approx(0.346574).epsilon(1e-6));

  CHECK(node_delta_y(stats(1.0, 0.3), quarters) == 0.0);
  const std::vector<NodeStats> split{stats(0.25, 0), stats(0.25, 0), stats(0.25, 1), stats(0.25, 1)};
  CHECK(node_delta_y(stats(1.0, 0.5), split) == Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<NodeStats> alt{stats(0.0625, 1), stats(0.0625, 0), stats(0.0625, 1), stats(0.0625, 0)};
  CHECK(node_delta_y(stats(0.25, 0.5), alt) == Approx(0.173287).epsilon(1e-6));

  CHECK_THROWS_AS(node_delta_x(stats(0.5, 0.3), quarters), std::invalid_argument);
  CHECK_THROWS_AS(node_delta_y(stats(0.5, 0.3), quarters), std::invalid_argument);
  const std::vector<NodeStats> three(3, stats(1.0 / 3, 0.3));
  CHECK_THROWS_AS(node_delta_x(stats(1.0, 0.3), three), std::invalid_argument);
}

TEST_CASE("increment vectors of small worlds") {
  const IncrementVectors s = compute_increments(testsupport::stripe_world());
  REQUIRE(s.size() == 1);
  CHECK(s.delta_x[0] == Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(s.delta_y[0] == Approx(std::log(2.0)).epsilon(1e-12));

  const std::vector<double> flat(4, 0.7);
  CHECK(compute_increments(WorldMap::binary(1, flat)).delta_y[0] == 0.0);

  const IncrementVectors q = compute_increments(testsupport::quadrant_world());
  REQUIRE(q.size() == 5);
  CHECK(q.delta_y[0] > 0.0);
  CHECK(q.delta_y[1] > 0.0);
  for (int k = 2; k <= 4; ++k) CHECK(q.delta_y[k] == 0.0);
}

TEST_CASE("tree information examples") {
  const WorldMap w = testsupport::quadrant_world();
  const IncrementVectors inc = compute_increments(w);
  const TreeInformation root = tree_information(TreeSelection(2), inc);
  CHECK(root.i_x == 0.0);
  CHECK(root.i_y == 0.0);
  CHECK(tree_information(TreeSelection::full(2), inc).i_x == Approx(std::log(16.0)).epsilon(1e-12));
  const TreeInformation q0 = tree_information(TreeSelection(2, {1, 1, 0, 0, 0}), inc);
  CHECK(q0.i_x == Approx(1.732868).epsilon(1e-6));
  CHECK(q0.i_y == Approx(0.376770).epsilon(1e-6));
  CHECK_THROWS_AS(tree_information(TreeSelection(1), inc), std::invalid_argument);
}

TEST_CASE("sum of increments equals encoder-level information") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 4);
    const WorldMap w = testsupport::random_world(rng, l);
    const IncrementVectors inc = compute_increments(w);
    for (int k = 0; k < 5; ++k) {
      const TreeSelection z = testsupport::random_selection(rng, l, 0.3 + 0.15 * k);
      const TreeInformation a = tree_information(z, inc);
      const TreeInformation b = direct_tree_information(w, z);
      CHECK(std::abs(a.i_x - b.i_x) <= 1e-9);
      CHECK(std::abs(a.i_y - b.i_y) <= 1e-9);
    }
  }
}

TEST_CASE("increment totals and bounds") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 5);
    const WorldMap w = testsupport::random_world(rng, l);
    const IncrementVectors inc = compute_increments(w);
    CHECK(std::abs(inc.total_x() - detail::entropy_unchecked(w.prior())) <= 1e-9);
    CHECK(std::abs(inc.total_y() - mutual_info_xy(w)) <= 1e-9);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      CHECK(inc.delta_y[i] >= 0.0);
      CHECK(inc.delta_y[i] <= inc.delta_x[i]);
      if (inc.mass[i] == 0.0) CHECK(inc.delta_x[i] == 0.0);
    }
  }
}

TEST_CASE("increments ignore the scale of prior weights") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 3);
    const WorldMap base = testsupport::random_world(rng, l, {false});
    std::vector<double> weights(base.cell_count());
    for (auto& v : weights) v = std::round(u(rng) * 8.0);
    weights[0] += 1.0;
    std::vector<double> scaled(weights);
    for (auto& v : scaled) v *= 4.0;
    const IncrementVectors a = compute_increments(apply_prior_weights(base, weights));
    const IncrementVectors b = compute_increments(apply_prior_weights(base, scaled));
    CHECK(a.delta_x == b.delta_x);
    CHECK(a.delta_y == b.delta_y);
  }
}

TEST_CASE("increments csv") {
  std::ostringstream os;
  write_increments_csv(os, compute_increments(testsupport::quadrant_world()));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "depth,morton,mass,delta_x_nats,delta_y_nats,free");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
  CHECK(os.str().find("\n1,3,0.25,0.34657359028,0,") != std::string::npos);
}
