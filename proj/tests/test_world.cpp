#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ibtree/errors.hpp"
#include "ibtree/world.hpp"
#include "support.hpp"

using namespace ibtree;
using doctest::Approx;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "ibtree_test_world";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("black 2x2 map is fully relevant") {
  const WorldMap w = world_from_image(parse_pgm("P2\n2 2\n255\n0 0 0 0\n"));
  CHECK(w.depth_l() == 1);
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(w.relevance(x)[1] == 1.0);
    CHECK(w.prior(x) == 0.25);
  }
}

TEST_CASE("intensity maps to relevance, inverted by default") {
  const GrayImage img = parse_pgm("P2\n2 2\n255\n0 255\n0 255\n");
  const WorldMap w = world_from_image(img);
  const double want[] = {1.0, 0.0, 1.0, 0.0};
  for (std::size_t x = 0; x < 4; ++x) CHECK(w.relevance(x)[1] == want[x]);
  const WorldMap plain = world_from_image(img, false);
  for (std::size_t x = 0; x < 4; ++x) CHECK(plain.relevance(x)[1] == 1.0 - want[x]);
}

TEST_CASE("map shape errors name the violated requirement") {
  auto message = [](const std::string& pgm) {
    try {
      world_from_image(parse_pgm(pgm));
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("P2\n3 3\n255\n0 0 0 0 0 0 0 0 0\n").find("side not a power of two") != std::string::npos);
  CHECK(message("P2\n4 2\n255\n0 0 0 0 0 0 0 0\n").find("not square") != std::string::npos);
  CHECK_THROWS_WITH_AS(parse_pgm("P7\n2 2\n255\n"), doctest::Contains("malformed PGM header"), FormatError);
  CHECK_THROWS_WITH_AS(parse_pgm("P2\n2 2\n255\n0 0 0\n"), doctest::Contains("malformed PGM header"), FormatError);
  CHECK_THROWS_WITH_AS(parse_pgm("P5\n2 2\n255\n\x01\x02"), doctest::Contains("truncated"), FormatError);
  CHECK_THROWS_WITH_AS(parse_pgm("P2\n1 1\n10\n11\n"), doctest::Contains("exceeds maxval"), FormatError);
}

TEST_CASE("P5 rasters, 16-bit samples and comments") {
  const std::string p5 = std::string("P5\n# comment\n2 2\n255\n") + '\x00' + '\xff' + '\x80' + '\x01';
  const GrayImage a = parse_pgm(p5);
  CHECK(a.pixels == std::vector<std::uint16_t>{0, 255, 128, 1});
  const std::string wide = std::string("P5 1 1 65535\n") + '\x12' + '\x34';
  CHECK(parse_pgm(wide).pixels[0] == 0x1234);
}

TEST_CASE("P2 round trip is bit exact") {
  std::mt19937_64 rng(3);
  GrayImage img;
  img.width = img.height = 8;
  img.maxval = 1000;
  for (int i = 0; i < 64; ++i) img.pixels.push_back(static_cast<std::uint16_t>(rng() % 1001));
  std::ostringstream os;
  write_pgm_ascii(os, img);
  CHECK(parse_pgm(os.str()) == img);
  const auto path = temp_file("round.pgm", os.str());
  CHECK(read_pgm(path) == img);
}

TEST_CASE("prior weights normalize") {
  const WorldMap base = testsupport::stripe_world();
  const std::vector<double> fives{5, 5, 5, 5};
  for (std::size_t x = 0; x < 4; ++x) CHECK(apply_prior_weights(base, fives).prior(x) == 0.25);
  const std::vector<double> point{1, 0, 0, 0};
  const WorldMap pm = apply_prior_weights(base, point);
  CHECK(pm.prior(0) == 1.0);
  CHECK(pm.prior(3) == 0.0);
  const std::vector<double> skew{3, 1, 0, 0};
  const WorldMap sk = apply_prior_weights(base, skew);
  CHECK(sk.prior(0) == 0.75);
  CHECK(sk.prior(1) == 0.25);
  CHECK(sk.prior(2) == 0.0);

  const std::vector<double> three{1, 1, 1};
  CHECK_THROWS_WITH_AS(apply_prior_weights(base, three), doctest::Contains("weight count mismatch"),
                       std::invalid_argument);
  const std::vector<double> zeros{0, 0, 0, 0};
  CHECK_THROWS_WITH_AS(apply_prior_weights(base, zeros), doctest::Contains("all-zero"), std::invalid_argument);
  const std::vector<double> neg{1, -1, 1, 1};
  CHECK_THROWS_WITH_AS(apply_prior_weights(base, neg), doctest::Contains("negative"), std::invalid_argument);

  const auto path = temp_file("prior.txt", "# weights\n3\n1\n\n0\n0  # tail\n");
  const WorldMap loaded = load_prior(path, base);
  CHECK(loaded.prior(0) == 0.75);
  CHECK_THROWS_AS(parse_prior_weights("1\nabc\n"), FormatError);
}

TEST_CASE("world constructor validates distributions") {
  CHECK_THROWS_AS(WorldMap(1, 2, std::vector<double>(8, 0.5), {0.5, 0.5, 0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(WorldMap(1, 2, std::vector<double>(6, 0.5), {0.25, 0.25, 0.25, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(WorldMap(1, 2, {0.6, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}),
                  std::invalid_argument);
  CHECK_NOTHROW(WorldMap(0, 3, {0.2, 0.3, 0.5}, {1.0}));
}

TEST_CASE("mutual information of small worlds") {
  const std::vector<double> flat(4, 0.3);
  CHECK(std::abs(mutual_info_xy(WorldMap::binary(1, flat))) <= 1e-12);
  CHECK(mutual_info_xy(testsupport::stripe_world()) == Approx(std::log(2.0)).epsilon(1e-12));
  // p(y=1) = 2/16, every cell deterministic.
  const double h = -(0.125 * std::log(0.125) + 0.875 * std::log(0.875));
  CHECK(mutual_info_xy(testsupport::quadrant_world()) == Approx(h).epsilon(1e-12));
  CHECK(h == Approx(0.376770).epsilon(1e-6));
}

TEST_CASE("mutual information bounds and permutation invariance") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int l = 1 + static_cast<int>(rng() % 3);
    const int ny = 2 + static_cast<int>(rng() % 3);
    const std::size_t cells = std::size_t{1} << (2 * l);
    std::vector<double> rel(cells * ny);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t x = 0; x < cells; ++x) {
      double s = 0.0;
      for (int y = 0; y < ny; ++y) s += rel[x * ny + y] = u(rng);
      for (int y = 0; y < ny; ++y) rel[x * ny + y] /= s;
    }
    const WorldMap w(l, ny, rel, std::vector<double>(cells, 1.0 / cells));
    const double mi = mutual_info_xy(w);
    CHECK(mi >= 0.0);
    CHECK(mi <= std::log(static_cast<double>(ny)) + 1e-12);

    std::vector<std::size_t> perm(cells);
    for (std::size_t i = 0; i < cells; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled(rel.size());
    for (std::size_t x = 0; x < cells; ++x) {
      for (int y = 0; y < ny; ++y) shuffled[perm[x] * ny + y] = rel[x * ny + y];
    }
    const WorldMap ws(l, ny, shuffled, std::vector<double>(cells, 1.0 / cells));
    CHECK(mutual_info_xy(ws) == Approx(mi).epsilon(1e-12));
  }
}
