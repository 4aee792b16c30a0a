#include <catch_amalgamated.hpp>

#include <sstream>

#include "gdl/pointset.hpp"
#include "oracles.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PointSet integer_lattice(int dim, double lo, double hi) {
  return lattice(Eigen::MatrixXd::Identity(dim, dim), Box::cube(dim, lo, hi));
}

PointSet line(std::initializer_list<double> xs) {
  return PointSet(1, std::vector<double>(xs));
}

}  // namespace

TEST_CASE("point sets reject duplicates and foreign boxes", "[pointset]") {
  CHECK_THROWS_AS(line({0.0, 1.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(PointSet(2, {0.0, 1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(PointSet(1, {5.0}, Box::cube(1, 0.0, 1.0)), PreconditionError);
  const auto s = line({3.0, -1.0, 2.0});
  CHECK(s.bbox().lo[0] == -1.0);
  CHECK(s.bbox().hi[0] == 3.0);
}

TEST_CASE("separation", "[pointset]") {
  CHECK(separation(line({0.0, 1.0, 3.0})) == 1.0);
  Eigen::MatrixXd gen(2, 2);
  gen << 0.5, 0.0, 0.0, 0.7;
  CHECK_THAT(separation(lattice(gen, Box::cube(2, -3.0, 3.0))), WithinAbs(0.5, 1e-15));
  CHECK(separation(line({4.0})) == kInf);
  CHECK(separation(PointSet(2, {})) == kInf);
}

TEST_CASE("relative separation with closed unit balls", "[pointset]") {
  CHECK(rel_separation(line({4.0})) == 1);
  CHECK(rel_separation(PointSet(2, {})) == 0);

  // A closed unit ball centred on a lattice site holds the site and its
  // four neighbours.
  const auto z2 = integer_lattice(2, -3.0, 3.0);
  CHECK(rel_separation(z2) == 5);
  CHECK(oracle::rel_separation_grid(z2, Box::cube(2, -1.0, 1.0), 0.01) == 5);

  const auto half = lattice(Eigen::MatrixXd::Constant(1, 1, 0.5), Box::cube(1, -5.0, 5.0));
  CHECK(half.size() == 21);
  CHECK(rel_separation(half) == 5);
  CHECK(oracle::rel_separation_grid(half, Box::cube(1, -5.0, 5.0), 0.001) == 5);

  CHECK_THROWS_AS(rel_separation(PointSet(3, {0, 0, 0, 1, 1, 1})), PreconditionError);
}

TEST_CASE("hole on simple configurations", "[pointset]") {
  const auto z2 = integer_lattice(2, 0.0, 3.0);
  CHECK_THAT(hole(z2, Box::cube(2, 0.0, 3.0)), WithinAbs(std::sqrt(2.0) / 2.0, 1e-12));

  std::vector<double> c;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j)
      if (i != 1 || j != 1) c.insert(c.end(), {double(i), double(j)});
  CHECK_THAT(hole(PointSet(2, c), Box::cube(2, 0.0, 2.0)), WithinAbs(1.0, 1e-12));

  CHECK_THAT(hole(line({0.0, 1.0, 3.0}), Box::cube(1, 0.0, 4.0)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(hole(line({2.0}), Box::cube(1, 0.0, 3.0)), WithinAbs(2.0, 1e-15));
  CHECK_THROWS_AS(hole(PointSet(2, {}), Box::cube(2, 0.0, 1.0)), PreconditionError);
  CHECK_THROWS_AS(hole(z2, Box::cube(1, 0.0, 1.0)), DimensionError);

  // Grid fallback in three dimensions: unit cube corners, centre at sqrt(3)/2.
  const auto z3 = integer_lattice(3, 0.0, 1.0);
  CHECK_THAT(hole(z3, Box::cube(3, 0.0, 1.0), 49), WithinAbs(std::sqrt(3.0) / 2.0, 1e-12));
}

TEST_CASE("geometry matches brute-force oracles", "[pointset]") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(2, 60);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = trial % 4 == 0 ? 1 : 2;
    const auto s = oracle::random_set(rng, dim, size(rng), 0.0, dim == 1 ? 20.0 : 6.0);
    const Box dom = trial % 3 == 0 ? Box::cube(dim, 1.0, 5.0) : Box::cube(dim, -1.0, 7.0);
    CHECK(separation(s) == oracle::separation(s));
    CHECK(rel_separation(s) == oracle::rel_separation(s));
    CHECK_THAT(hole(s, dom), WithinAbs(oracle::hole(s, dom), 1e-12));
  }
  for (int trial = 0; trial < 2; ++trial) {
    const auto s = oracle::random_set(rng, 2, 200, 0.0, 10.0);
    const Box dom = Box::cube(2, 0.0, 10.0);
    CHECK(separation(s) == oracle::separation(s));
    CHECK(rel_separation(s) == oracle::rel_separation(s));
    CHECK_THAT(hole(s, dom), WithinAbs(oracle::hole(s, dom), 1e-12));
  }
  // Degenerate cocircular input.
  const auto z2 = integer_lattice(2, -4.0, 4.0);
  CHECK(rel_separation(z2) == oracle::rel_separation(z2));
  CHECK_THAT(hole(z2, Box::cube(2, -3.5, 3.7)), WithinAbs(oracle::hole(z2, Box::cube(2, -3.5, 3.7)), 1e-12));
}

TEST_CASE("hole is monotone under adding points", "[pointset]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  const Box dom = Box::cube(2, 0.0, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = oracle::random_set(rng, 2, 30, 0.0, 8.0);
    const double before = hole(s, dom);
    auto c = s.coords();
    c.push_back(u(rng));
    c.push_back(u(rng));
    CHECK(hole(PointSet(2, c), dom) <= before + 1e-12);
  }
}

TEST_CASE("relative separation is bounded by the packing constant", "[pointset]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(0.2, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = ud(rng);
    const auto s = oracle::random_separated_set(rng, 2, 150, delta, 0.0, 5.0);
    CHECK(separation(s) >= delta);
    const int rel = rel_separation(s);
    CHECK(rel >= 1);
    CHECK(rel <= std::pow(2.0 / delta + 1.0, 2));
  }
}

TEST_CASE("Beurling density estimates", "[pointset]") {
  const auto z2 = integer_lattice(2, -30.0, 30.0);
  const auto rep = beurling_density(z2, {5.0, 10.0, 20.0});
  CHECK_THAT(rep.D_minus_est, WithinRel(1.0, 0.1));
  CHECK_THAT(rep.D_plus_est, WithinRel(1.0, 0.1));
  for (std::size_t i = 0; i < rep.radii.size(); ++i) CHECK(rep.lower_counts[i] <= rep.upper_counts[i]);

  auto c = z2.coords();
  for (std::size_t i = 0; i < z2.size(); ++i) {
    c.push_back(z2.point(i)[0] + 0.5);
    c.push_back(z2.point(i)[1] + 0.5);
  }
  const auto doubled = beurling_density(PointSet(2, c), {20.0});
  CHECK_THAT(doubled.D_minus_est, WithinRel(2.0, 0.1));
  CHECK_THAT(doubled.D_plus_est, WithinRel(2.0, 0.1));

  const auto none = beurling_density(PointSet(2, {}), {1.0, 2.0});
  CHECK(none.D_minus_est == 0.0);
  CHECK(none.D_plus_est == 0.0);

  CHECK_THROWS_AS(beurling_density(z2, {40.0}), PreconditionError);
  CHECK_THROWS_AS(beurling_density(z2, {10.0, 5.0}), PreconditionError);

  Eigen::MatrixXd gen(2, 2);
  gen << 0.5, 0.1, 0.0, 0.7;
  const auto tilted = beurling_density(lattice(gen, Box::cube(2, -25.0, 25.0)), {8.0, 16.0});
  const double exact = 1.0 / std::abs(gen.determinant());
  CHECK(std::abs(tilted.D_minus_est / exact - 1.0) <= tilted.boundary_band);
  CHECK(std::abs(tilted.D_plus_est / exact - 1.0) <= tilted.boundary_band);
}

TEST_CASE("weak distance", "[pointset]") {
  const double z[1] = {0.5};
  const auto a = line({1.1});
  const auto b = line({1.0});
  CHECK(weak_distance(a, b, z, 0.5) == 0.0);
  CHECK(weak_distance(b, b, z, 0.5) == 0.0);
  CHECK_THROWS_AS(weak_distance(a, b, z, 0.0), PreconditionError);

  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_set(rng, 2, 40, -3.0, 3.0);
    const double t[2] = {u(rng), u(rng)};
    auto c = s.coords();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += t[i % 2];
    const double zc[2] = {0.3, -0.2};
    CHECK(weak_distance(s, PointSet(2, c), zc, 2.0) <= std::hypot(t[0], t[1]) + 1e-12);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const auto x = oracle::random_set(rng, 2, 15, -2.0, 2.0);
    const auto y = oracle::random_set(rng, 2, 15, -2.0, 2.0);
    const auto w = oracle::random_set(rng, 2, 15, -2.0, 2.0);
    const double zc[2] = {0.0, 0.0};
    const double dxy = weak_distance(x, y, zc, 1.5), dyx = weak_distance(y, x, zc, 1.5);
    CHECK(dxy == dyx);
    CHECK(weak_distance(x, w, zc, 1.5) <= dxy + weak_distance(y, w, zc, 1.5) + 1e-12);
  }
}

TEST_CASE("lattices", "[pointset]") {
  CHECK(integer_lattice(2, -2.0, 2.0).size() == 25);
  CHECK(lattice(Eigen::MatrixXd::Identity(2, 2) * 0.5, Box::cube(2, 0.0, 1.0)).size() == 9);
  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(lattice(singular, Box::cube(2, 0.0, 1.0)), PreconditionError);
}

TEST_CASE("restriction", "[pointset]") {
  const auto z2 = integer_lattice(2, -2.0, 2.0);
  CHECK(restrict(z2, z2.bbox()).coords() == z2.coords());
  CHECK(restrict(z2, Box{{1.0, 1.0}, {0.0, 0.0}}).empty());
  const auto z1 = integer_lattice(1, -4.0, 4.0);
  const auto r = restrict(z1, Box::cube(1, 0.5, 2.5));
  REQUIRE(r.size() == 2);
  CHECK(r.point(0)[0] == 1.0);
  CHECK(r.point(1)[0] == 2.0);
  CHECK(restrict(z2, Ball{{0.0, 0.0}, 1.0}).size() == 5);
}

TEST_CASE("periodic images", "[pointset]") {
  const auto s = PointSet(2, {0.1, 0.1, 3.9, 2.0});
  const auto p = periodize(s, 4.0, 0.0, 0.5);
  // (0.1,0.1) gains images at x+4, y+4 and both; (3.9,2) gains one at x-4.
  CHECK(p.size() == 6);
}

TEST_CASE("text round trip", "[pointset]") {
  std::mt19937_64 rng(15);
  const auto s = oracle::random_set(rng, 2, 20, -1.0, 1.0);
  std::stringstream ss;
  write_pointset(ss, s);
  const auto back = read_pointset(ss);
  CHECK(back.dim() == 2);
  CHECK(back.coords() == s.coords());

  std::stringstream bad("1 2\n");
  CHECK_THROWS_AS(read_pointset(bad), PreconditionError);
  std::stringstream ragged("# dim=2\n1 2\n3\n");
  CHECK_THROWS_AS(read_pointset(ragged), PreconditionError);
}
