#include <catch_amalgamated.hpp>

#include "gdl/deform.hpp"
#include "oracles.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;

namespace {

PointSet z2_box(double r) { return lattice(Eigen::MatrixXd::Identity(2, 2), Box::cube(2, -r, r)); }

DeformationMap affine_as_differentiable(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const int m = static_cast<int>(A.rows());
  return differentiable_deformation(
      m,
      [A, b](std::span<const double> x) {
        Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::VectorXd w = A * v + b;
        return Point(w.data(), w.data() + w.size());
      },
      [A](std::span<const double>) { return A; });
}

double brute_L1(const DeformationMap& T, const PointSet& S, double R) {
  double best = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) {
      if (distance(S.point(i), S.point(j)) > R * (1 + 1e-12)) continue;
      const auto a = map_point(T, S.point(i)), b = map_point(T, S.point(j));
      double s = 0.0;
      for (int k = 0; k < S.dim(); ++k) {
        const double d = (a[k] - b[k]) - (S.point(i)[k] - S.point(j)[k]);
        s += d * d;
      }
      best = std::max(best, std::sqrt(s));
    }
  return best;
}

}  // namespace

TEST_CASE("applying simple deformations", "[deform]") {
  const auto S = z2_box(3.0);
  CHECK(apply_deformation(linear_deformation(Eigen::MatrixXd::Identity(2, 2)), S).coords() == S.coords());

  const auto D = apply_deformation(dilation(10), S);
  for (std::size_t i = 0; i < S.coords().size(); ++i) CHECK(D.coords()[i] == S.coords()[i] * 1.1);

  const auto J = apply_deformation(jitter_deformation(S, std::vector<double>(S.coords().size(), 0.0)), S);
  CHECK(J.coords() == S.coords());
}

TEST_CASE("deformation errors", "[deform]") {
  const auto S = PointSet(2, {0.0, 0.0, 1.0, 0.0});
  CHECK_THROWS_AS(apply_deformation(jitter_deformation(S, {1.0, 0.0, 0.0, 0.0}), S), CollisionError);
  const auto other = PointSet(2, {5.0, 5.0});
  CHECK_THROWS_AS(apply_deformation(jitter_deformation(other, {0.0, 0.0}), S), PreconditionError);
  CHECK_THROWS_AS(jitter_deformation(S, {0.0}), DimensionError);
  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(linear_deformation(singular), PreconditionError);
  CHECK_THROWS_AS(annuli_deformation(0), PreconditionError);
}

TEST_CASE("random jitter is bounded and reproducible", "[deform]") {
  const auto S = z2_box(4.0);
  const auto a = std::get<JitterMap>(random_jitter(S, 0.05, 42).kind);
  const auto b = std::get<JitterMap>(random_jitter(S, 0.05, 42).kind);
  CHECK(a.offsets == b.offsets);
  for (std::size_t i = 0; i < S.size(); ++i)
    CHECK(std::hypot(a.offsets[2 * i], a.offsets[2 * i + 1]) <= 0.05);
}

TEST_CASE("L1 values", "[deform]") {
  const auto S = z2_box(5.0);
  CHECK(check_L1(linear_deformation(Eigen::MatrixXd::Identity(2, 2)), S, 2.0) == 0.0);
  CHECK_THAT(check_L1(dilation(10), S, 1.0), WithinAbs(0.1, 1e-12));
  CHECK_THAT(check_L1(dilation(10), S, 1.5), WithinAbs(std::sqrt(2.0) / 10.0, 1e-12));

  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd(0.0, 0.2);
  const auto R = oracle::random_set(rng, 2, 80, -4.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    for (int k = 0; k < 4; ++k) A(k / 2, k % 2) += nd(rng);
    const auto T = linear_deformation(A);
    CHECK_THAT(check_L1(T, R, 1.7), WithinAbs(brute_L1(T, R, 1.7), 1e-12));
  }

  const auto jit = random_jitter(S, 0.03, 7);
  CHECK(check_L1(jit, S, 3.0) <= 0.06);
  CHECK_THROWS_AS(check_L1(jit, S, 0.0), PreconditionError);
}

TEST_CASE("L1 is translation invariant", "[deform]") {
  std::mt19937_64 rng(22);
  const auto S = oracle::random_set(rng, 2, 60, -3.0, 3.0);
  Eigen::Vector2d v(1.7, -0.4);
  auto shifted = S.coords();
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += v[i % 2];
  const PointSet Sv(2, shifted);

  const auto jit = std::get<JitterMap>(random_jitter(S, 0.1, 3).kind);
  CHECK_THAT(check_L1(jitter_deformation(S, jit.offsets), S, 1.5),
             WithinAbs(check_L1(jitter_deformation(Sv, jit.offsets), Sv, 1.5), 1e-12));

  Eigen::Matrix2d A;
  A << 1.1, 0.2, -0.1, 0.95;
  const auto T = affine_as_differentiable(A, Eigen::Vector2d::Zero());
  const auto Tv = affine_as_differentiable(A, v - A * v);
  CHECK_THAT(check_L1(T, S, 1.5), WithinAbs(check_L1(Tv, Sv, 1.5), 1e-12));
}

TEST_CASE("dilation family L1 decays monotonically", "[deform]") {
  const auto S = z2_box(6.0);
  double prev = kInf;
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    const double v = check_L1(dilation(n), S, 2.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("annuli family violates L1", "[deform]") {
  double prev = 0.0;
  for (double rho : {10.0, 20.0, 40.0}) {
    const double v = check_L1(annuli_deformation(4), z2_box(rho), 1.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("L2 radii", "[deform]") {
  const auto S = z2_box(6.0);
  std::vector<DeformationMap> identity_family;
  for (int n = 1; n <= 4; ++n) identity_family.push_back(linear_deformation(Eigen::MatrixXd::Identity(2, 2), n));
  CHECK(check_L2(identity_family, S, 2.0, 1).Rprime == 2.0);
  CHECK_FALSE(check_L2(identity_family, S, 2.0, 1).certifying);

  std::vector<DeformationMap> dil;
  for (int n = 1; n <= 32; n *= 2) dil.push_back(dilation(n));
  for (double R : {0.5, 1.0, 2.5}) {
    const auto res = check_L2(dil, S, R, 2);
    CHECK(res.finite);
    CHECK(res.Rprime <= std::max(1.0, 2.0 * R));
  }

  std::vector<DeformationMap> jit;
  for (int n = 2; n <= 16; n *= 2) jit.push_back(random_jitter(S, 0.2 / n, 100 + n, n));
  CHECK(check_L2(jit, S, 1.5, 2).Rprime <= 1.5 + 2.0 * 0.1);

  CHECK_THROWS_AS(check_L2({}, S, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(check_L2(dil, S, 1.0, 100), PreconditionError);

  const auto rep = lipschitz_report(dil, S, 1.0, 4);
  CHECK(rep.L1_by_n.size() == 4);
  CHECK_THAT(rep.L1_sup, WithinAbs(0.25, 1e-12));
  REQUIRE(rep.L2_Rprime.has_value());
  CHECK(*rep.L2_Rprime >= rep.R);
}

TEST_CASE("dilated sets keep separation and relative separation", "[deform]") {
  const auto S = z2_box(8.0);
  const double sep = separation(S);
  const int rel = rel_separation(S);
  // Smallest n0 after which every member stays within a factor 2.
  int n0 = -1;
  for (int n = 2; n <= 64; ++n) {
    const auto D = apply_deformation(dilation(n), S);
    const bool ok = separation(D) >= sep / 2.0 && separation(D) <= 2.0 * sep && rel_separation(D) <= 2 * rel &&
                    2 * rel_separation(D) >= rel;
    if (!ok) n0 = -1;
    else if (n0 < 0) n0 = n;
  }
  REQUIRE(n0 > 0);
  CHECK(n0 <= 16);
}

TEST_CASE("annuli map", "[deform]") {
  const int n = 4;
  const double q = 1.25;
  const double origin[2] = {0.0, 0.0};
  CHECK(map_point(annuli_deformation(n), origin) == Point{0.0, 0.0});
  const double on_b1[2] = {q, 0.0};
  CHECK_THAT(map_point(annuli_deformation(n), on_b1)[0], WithinAbs(q * q, 1e-15));
  CHECK(annulus_index(0.5, n) == 0);
  CHECK(annulus_index(q, n) == 1);
  CHECK(annulus_index(q * q * 1.0000001, n) == 2);

  // A generic offset keeps the lattice clear of the rational collisions
  // q * lambda = lambda'.
  auto c = z2_box(30.0).coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += i % 2 ? std::sqrt(3.0) / 20 : std::sqrt(2.0) / 20;
  const PointSet S(2, c);
  const auto D = apply_deformation(annuli_deformation(n), S);
  CHECK_THROWS_AS(apply_deformation(annuli_deformation(8), z2_box(20.0)), CollisionError);
  for (std::size_t i = 0; i < D.size(); ++i) {
    const double r = std::hypot(D.point(i)[0], D.point(i)[1]);
    const int l = annulus_index(r, n);
    if (l % 2 == 1) CHECK(std::abs(r - std::pow(q, l)) < 1e-9 * r);  // only the closed inner edge
  }
}

TEST_CASE("torus dilation", "[deform]") {
  const auto T = torus_dilation(8, 12.0);
  const double near[2] = {1e-4, -2e-4};
  const auto img = map_point(T, near);
  CHECK_THAT(img[0], WithinAbs(1.125e-4, 1e-12));
  const auto rep = morrey_report(T, kInf, Box::cube(2, -6.0, 6.0), 15);
  CHECK_THAT(rep.lp_norm_DT_minus_I, WithinAbs(1.0 / 8.0, 1e-3));
  CHECK(rep.bound_holds);
  CHECK_THROWS_AS(torus_dilation(1, 12.0), PreconditionError);
}

TEST_CASE("Morrey bounds", "[deform]") {
  const Box dom = Box::cube(2, -5.0, 5.0);
  const auto id = affine_as_differentiable(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  const auto r0 = morrey_report(id, 4.0, dom);
  CHECK(r0.epsilon_n == 0.0);
  CHECK(r0.empirical_max_ratio == 0.0);
  CHECK(r0.alpha == 0.5);

  const double delta = 0.03;
  const auto lin = affine_as_differentiable(Eigen::Matrix2d::Identity() * (1 + delta), Eigen::Vector2d::Zero());
  const auto r1 = morrey_report(lin, kInf, dom);
  CHECK(r1.alpha == 1.0);
  CHECK_THAT(r1.empirical_max_ratio, WithinAbs(delta, 1e-12));
  CHECK_THAT(r1.epsilon_n, WithinAbs(delta, 1e-12));

  const auto wave = differentiable_deformation(
      2,
      [](std::span<const double> z) { return Point{z[0] + 0.01 * std::sin(kTwoPi * z[1]), z[1]}; },
      [](std::span<const double> z) {
        Eigen::Matrix2d J = Eigen::Matrix2d::Identity();
        J(0, 1) = 0.01 * kTwoPi * std::cos(kTwoPi * z[1]);
        return Eigen::MatrixXd(J);
      });
  const auto r2 = morrey_report(wave, kInf, dom, 41);
  CHECK(r2.empirical_max_ratio <= 0.01 * kTwoPi);
  CHECK(r2.bound_holds);

  CHECK_THROWS_AS(morrey_report(wave, 2.0, dom), PreconditionError);
  CHECK_THROWS_AS(morrey_report(dilation(3), kInf, dom), PreconditionError);
}
