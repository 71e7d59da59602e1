#include "mads/mesh.hpp"

#include <doctest.h>

#include <random>

using namespace mads;

TEST_CASE("mesh size law") {
  CHECK(update_mesh_size(1.0) == 1.0);
  CHECK(update_mesh_size(0.5) == 0.25);
  CHECK(update_mesh_size(4.0) == 4.0);
  CHECK(update_mesh_size(0.125f) == 0.015625f);
  CHECK_THROWS_AS(update_mesh_size(0.0), Error);
  CHECK_THROWS_AS(update_mesh_size(-1.0), Error);
}

TEST_CASE("enlarge and refine with tau = 1/2") {
  auto m = make_mesh(Point::Zero(2), 1.0, 0.5);
  auto r = refine(m);
  CHECK(r.frame == 0.5);
  CHECK(r.delta == 0.25);
  auto e = enlarge(r);
  CHECK(e.frame == 1.0);
  CHECK(e.delta == 1.0);
  CHECK(enlarge(e).delta == 2.0);
}

TEST_CASE("projection rounds half away from zero") {
  auto m = make_mesh(Point::Zero(3), 0.5, 0.5);  // delta 0.25
  Point x{{0.125, -0.125, 0.3}};
  Point p = project_to_mesh(x, m);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == -0.25);
  CHECK(p[2] == 0.25);
  CHECK(is_on_mesh(p, m));
  CHECK_FALSE(is_on_mesh(x, m));
  CHECK(is_on_mesh(m.center, m));
}

TEST_CASE("householder matrix is orthogonal and symmetric") {
  std::mt19937_64 rng(3);
  Point v = random_unit_vector<double>(5, rng);
  auto h = householder(v);
  CHECK((h * h.transpose() - MatrixX<double>::Identity(5, 5)).norm() < 1e-12);
  CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("ortho 2n directions are integer, inside the frame and full rank") {
  std::mt19937_64 rng(11);
  for (double frame : {1.0, 0.5, 0.125, 0.0078125}) {
    auto m = make_mesh(Point::Zero(4), frame, 0.5);
    auto d = ortho_2n_directions(4, rng, m);
    REQUIRE(d.rows() == 4);
    REQUIRE(d.cols() == 8);
    CHECK((d.array() == d.array().round()).all());
    CHECK(((d * m.delta).cwiseAbs().maxCoeff() <= m.frame));
    CHECK((d.leftCols(4) + d.rightCols(4)).isZero(0.0));
    Eigen::FullPivLU<MatrixX<double>> lu(d.leftCols(4));
    CHECK(lu.rank() == 4);
  }
}

TEST_CASE("coarse frame uses one step per direction") {
  std::mt19937_64 rng(1);
  auto m = make_mesh(Point::Zero(1), 2.0, 0.5);
  auto d = ortho_2n_directions(1, rng, m);
  CHECK(std::abs(d(0, 0)) == 1.0);
  CHECK(d(0, 1) == -d(0, 0));
}

TEST_CASE("singular rounded basis falls back to the coordinate basis") {
  // v along a diagonal with one step per column rounds to a singular basis.
  auto m = make_mesh(Point::Zero(2), 1.0, 0.5);
  Point v = Point::Constant(2, 1.0 / std::sqrt(2.0));
  auto d = ortho_2n_from_direction(v, m);
  Eigen::FullPivLU<MatrixX<double>> lu(d.leftCols(2));
  CHECK(lu.rank() == 2);
}
