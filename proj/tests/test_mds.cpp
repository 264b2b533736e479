#include <doctest.h>

#include <random>
#include <sstream>

#include "chronolex/error.hpp"
#include "chronolex/mds.hpp"
#include "oracles.hpp"

using namespace chronolex;

namespace {

std::vector<LabeledPoint> points_from(const Eigen::MatrixXd& x) {
  std::vector<LabeledPoint> pts;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    LabeledPoint p;
    p.key = {static_cast<int>(i), 0};
    for (Eigen::Index j = 0; j < x.cols(); ++j) p.vector.push_back(x(i, j));
    pts.push_back(std::move(p));
  }
  return pts;
}

Eigen::MatrixXd random_points(std::mt19937_64& rng, int m, int dim) {
  std::uniform_real_distribution<double> u(-5, 5);
  Eigen::MatrixXd x(m, dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("distance_matrix examples") {
  std::vector<LabeledPoint> p{{{0, 0}, {0, 0}}, {{0, 1}, {3, 4}}};
  auto a = distance_matrix(p);
  CHECK(a.values(0, 1) == 5.0);
  CHECK(a.values(1, 0) == 5.0);
  CHECK(a.values(0, 0) == 0.0);

  std::vector<LabeledPoint> same{{{0, 0}, {1.5, -2}}, {{1, 0}, {1.5, -2}}};
  CHECK(distance_matrix(same).values(0, 1) == 0.0);

  std::vector<LabeledPoint> line{{{0, 0}, {0}}, {{0, 1}, {1}}, {{0, 2}, {3}}};
  auto l = distance_matrix(line);
  CHECK(l.values(0, 2) == 3.0);
  CHECK(l.values(0, 1) == 1.0);
  CHECK(l.values(1, 2) == 2.0);
  CHECK(l.keys[2] == PointKey{0, 2});
}

TEST_CASE("distance_matrix errors") {
  CHECK_THROWS_AS(distance_matrix({}), Error);
  std::vector<LabeledPoint> bad{{{0, 0}, {0, 0}}, {{0, 1}, {1}}};
  try {
    distance_matrix(bad);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("property: distance matrix is symmetric, zero-diagonal, rigid-invariant") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 5;
    const auto x = random_points(rng, 5 + trial, dim);
    const auto a = distance_matrix(points_from(x));
    CHECK(a.values == a.values.transpose());
    CHECK(a.values.diagonal().isZero(0.0));
    CHECK((a.values.array() >= 0).all());

    // Random orthogonal transform + translation.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_points(rng, dim, dim));
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::RowVectorXd shift = random_points(rng, 1, dim);
    const Eigen::MatrixXd y = (x * q).rowwise() + shift;
    const auto b = distance_matrix(points_from(y));
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.values.maxCoeff()));
  }
}

TEST_CASE("collinear points at distances 1, 2, 3") {
  std::vector<LabeledPoint> line{{{0, 0}, {0}}, {{0, 1}, {1}}, {{0, 2}, {3}}};
  const auto a = distance_matrix(line);
  const auto proj = classical_mds(a);

  // Frozen: centered positions -4/3, -1/3, 5/3 give lambda_1 = 42/9 = 14/3;
  // cross-checked against explicit double centering + power iteration.
  const double lambda1 = 14.0 / 3.0;
  CHECK(oracle::power_iteration_top(oracle::double_center(a.values)) ==
        doctest::Approx(lambda1).epsilon(1e-12));
  REQUIRE(proj.eigenvalues.size() == 2);
  CHECK(proj.eigenvalues[0] == doctest::Approx(lambda1).epsilon(1e-12));
  CHECK(std::abs(proj.eigenvalues[1]) <= 1e-8 * lambda1);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs((proj.coords.row(i) - proj.coords.row(j)).norm() - a.values(i, j)) <= 1e-8);
  // collinear: the second axis is flat
  CHECK(proj.coords.col(1).cwiseAbs().maxCoeff() <= 1e-8);
  // axis oriented so the first point's loading is positive
  CHECK(proj.coords(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs") {
  SUBCASE("one point") {
    std::vector<LabeledPoint> one{{{0, 0}, {4, 2}}};
    auto p = classical_mds(distance_matrix(one));
    CHECK(p.coords.rows() == 1);
    CHECK(p.coords.isZero(0.0));
    CHECK(p.stress == 0.0);
  }
  SUBCASE("three coincident points") {
    std::vector<LabeledPoint> pts{{{0, 0}, {1, 1}}, {{0, 1}, {1, 1}}, {{1, 0}, {1, 1}}};
    auto p = classical_mds(distance_matrix(pts));
    CHECK(p.coords.isZero(0.0));
    CHECK(p.stress == 0.0);
  }
  SUBCASE("empty matrix") { CHECK_THROWS_AS(classical_mds(DistanceMatrix{}), Error); }
}

TEST_CASE("property: exact recovery, centering and PSD spectrum") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 60);
    const auto x = random_points(rng, m, 2);
    const auto a = distance_matrix(points_from(x));
    const auto proj = classical_mds(a);
    const double diam = oracle::diameter(x);
    CHECK(oracle::procrustes_rmse(proj.coords, x) <= 1e-8 * diam);
    CHECK(proj.coords.colwise().mean().norm() <= 1e-9 * diam);
    CHECK(proj.min_eigenvalue >= -1e-8 * proj.max_eigenvalue);
    CHECK(proj.stress <= 1e-12 * a.values.squaredNorm());
  }
}

TEST_CASE("higher-dimensional sources keep the leading eigenpairs") {
  std::mt19937_64 rng(77);
  const auto x = random_points(rng, 40, 6);
  const auto a = distance_matrix(points_from(x));
  const auto proj = classical_mds(a, 2);
  REQUIRE(proj.eigenvalues.size() == 2);
  CHECK(proj.eigenvalues[0] >= proj.eigenvalues[1]);
  CHECK(proj.eigenvalues[0] == doctest::Approx(oracle::power_iteration_top(oracle::double_center(a.values))).epsilon(1e-9));
  CHECK(proj.stress > 0.0);

  const auto full = classical_mds(a, 6);
  CHECK(oracle::procrustes_rmse(full.coords, x) <= 1e-8 * oracle::diameter(x));
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(3);
  const auto a = distance_matrix(points_from(random_points(rng, 80, 10)));
  const auto p1 = classical_mds(a);
  const auto p2 = classical_mds(a);
  CHECK(p1.coords == p2.coords);
  CHECK(p1.eigenvalues == p2.eigenvalues);
}

TEST_CASE("evaluate_stress") {
  DistanceMatrix a;
  a.keys = {{0, 0}, {0, 1}};
  a.values = Eigen::MatrixXd{{0, 5}, {5, 0}};
  Eigen::MatrixXd coords{{0, 0}, {3, 0}};
  CHECK(evaluate_stress(a.keys, coords, a) == 8.0);
  CHECK(evaluate_stress_unordered(a.keys, coords, a) == 4.0);

  DistanceMatrix unit;
  unit.keys = a.keys;
  unit.values = Eigen::MatrixXd{{0, 1}, {1, 0}};
  CHECK(evaluate_stress(unit.keys, Eigen::MatrixXd::Zero(2, 2), unit) == 2.0);

  SUBCASE("keys may be permuted") {
    std::vector<PointKey> swapped{{0, 1}, {0, 0}};
    CHECK(evaluate_stress(swapped, coords, a) == 8.0);
  }
  SUBCASE("key mismatch") {
    std::vector<PointKey> other{{0, 0}, {1, 1}};
    try {
      evaluate_stress(other, coords, a);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::KeyMismatch);
    }
  }
}

TEST_CASE("planar_coords and coord lookup") {
  std::vector<LabeledPoint> p{{{0, 0}, {0, 0}}, {{1, 3}, {3, 4}}};
  const auto proj = classical_mds(distance_matrix(p));
  const auto planar = proj.planar_coords();
  CHECK(planar.size() == 2);
  CHECK(proj.coord({1, 3}).has_value());
  CHECK_FALSE(proj.coord({2, 0}).has_value());
}

TEST_CASE("distance TSV export") {
  std::vector<LabeledPoint> p{{{0, 0}, {0, 0}}, {{1, 2}, {3, 4}}};
  std::ostringstream out;
  const std::vector<std::string> words{"cat", "dog"};
  write_distance_tsv(out, distance_matrix(p), words);
  CHECK(out.str() == "key\tcat@0\tdog@2\ncat@0\t0\t5\ndog@2\t5\t0\n");
}
