#include <doctest.h>

#include "idla/lattice.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace idla;

namespace {

RealPoint real_point(std::initializer_list<double> xs) {
  RealPoint z(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) z[i++] = x;
  return z;
}

// brute-force count over the bounding cube
std::size_t brute_ball_count(double r, int d) {
  const auto R = static_cast<std::int64_t>(std::floor(r));
  std::size_t count = 0;
  LatticePoint p = LatticePoint::Constant(d, -R);
  while (true) {
    if (static_cast<double>(p.squaredNorm()) <= r * r) ++count;
    int axis = d - 1;
    while (axis >= 0 && p[axis] == R) p[axis--] = -R;
    if (axis < 0) break;
    ++p[axis];
  }
  return count;
}

}  // namespace

TEST_CASE("neighbors are ordered axis by axis, minus before plus") {
  const auto nb = neighbors(make_point({0, 0}));
  REQUIRE(nb.size() == 4);
  CHECK(nb[0] == make_point({-1, 0}));
  CHECK(nb[1] == make_point({1, 0}));
  CHECK(nb[2] == make_point({0, -1}));
  CHECK(nb[3] == make_point({0, 1}));

  const auto p = make_point({1, 2, 3});
  const auto nb3 = neighbors(p);
  REQUIRE(nb3.size() == 6);
  for (const auto& q : nb3) CHECK(squared_norm(q - p) == 1);
}

TEST_CASE("squared norm is exact and guards against overflow") {
  CHECK(squared_norm(make_point({3, -4})) == 25);
  CHECK(squared_norm(make_point({1 << 20, 1 << 20, 1 << 20})) == 3LL << 40);
  CHECK_THROWS_AS(squared_norm(make_point({INT64_MAX / 2, INT64_MAX / 2})), std::overflow_error);
}

TEST_CASE("dimension checks") {
  CHECK_THROWS(origin(1));
  CHECK_THROWS(origin(kMaxDim + 1));
  CHECK(origin(3).size() == 3);
}

TEST_CASE("ball site counts") {
  CHECK(ball_sites(1, 2).size() == 5);
  CHECK(ball_sites(2, 2).size() == 13);
  CHECK(ball_sites(1, 3).size() == 7);
  CHECK(ball_sites(0, 3).size() == 1);
  for (double r : {0.5, 1.5, 2.2, 3.0, 4.7, 7.0}) {
    for (int d : {2, 3, 4}) {
      CAPTURE(r);
      CAPTURE(d);
      CHECK(ball_sites(r, d).size() == brute_ball_count(r, d));
    }
  }
}

TEST_CASE("ball sites are distinct, lexicographic and inside") {
  const auto sites = ball_sites(4.5, 3);
  const Ball ball(4.5, 3);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    CHECK(ball.contains(sites[i]));
    if (i) CHECK(lexicographic_less(sites[i - 1], sites[i]));
  }
}

TEST_CASE("ball volume constant and lattice count") {
  CHECK(unit_ball_volume<double>(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(unit_ball_volume<double>(3) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));
  CHECK(unit_ball_volume<double>(4) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-15));
  const double ratio = static_cast<double>(ball_sites(50, 2).size()) / (50.0 * 50.0);
  CHECK(std::abs(ratio / std::numbers::pi - 1) < 0.02);
}

TEST_CASE("scale_point floors componentwise") {
  CHECK(scale_point(real_point({0.5, 0}), 10) == make_point({5, 0}));
  CHECK(scale_point(real_point({0.5, 0.5}), 3) == make_point({1, 1}));
  CHECK(scale_point(real_point({-0.3, 0.7}), 10) == make_point({-3, 7}));
  CHECK(scale_point(real_point({-0.35, 0}), 10) == make_point({-4, 0}));
}

TEST_CASE("property: scaled norm stays within sqrt(d) of n times the norm") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 3;
    RealPoint z(d);
    for (int i = 0; i < d; ++i) z[i] = u(gen);
    const std::int64_t n = 1 + trial % 300;
    const double gap = norm(scale_point(z, n)) - static_cast<double>(n) * z.norm();
    CHECK(std::abs(gap) <= std::sqrt(static_cast<double>(d)) + 1e-9);
  }
}

TEST_CASE("discrete Laplacian on polynomials") {
  SiteField<double> constant, linear, quadratic;
  for (const auto& p : ball_sites(4, 2)) {
    constant.set(p, 7.5);
    linear.set(p, static_cast<double>(3 * p[0] - 2 * p[1] + 1));
    quadratic.set(p, static_cast<double>(squared_norm(p)));
  }
  for (const auto& p : ball_sites(3, 2)) {
    CHECK(discrete_laplacian(constant, p) == 0.0);
    CHECK(discrete_laplacian(linear, p) == 0.0);
    CHECK(discrete_laplacian(quadratic, p) == 1.0);
  }
}

TEST_CASE("discrete Laplacian signals a missing site") {
  SiteField<double> f;
  f.set(origin(2), 1.0);
  CHECK_THROWS_AS(discrete_laplacian(f, origin(2)), FieldExtentError);
}
