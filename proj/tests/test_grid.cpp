#include <doctest.h>

#include <cmath>
#include <vector>

#include "gridsmooth/grid.hpp"
#include "oracles.hpp"

using namespace gridsmooth;

namespace {

Signal make(std::vector<std::size_t> sides, std::vector<double> values) {
  return Signal(GridShape(std::move(sides)), std::move(values));
}

}  // namespace

TEST_CASE("grid shape bookkeeping") {
  const GridShape g({3, 4, 5});
  CHECK(g.dims() == 3);
  CHECK(g.size() == 60);
  CHECK(g.max_degree() == 6);
  CHECK(g.edge_count() == 2 * 20 + 3 * 15 + 4 * 12);
  CHECK(g.stride(2) == 1);
  CHECK(g.stride(0) == 20);
  CHECK_FALSE(g.is_cubic());
  CHECK(GridShape::cubic(4, 3).is_cubic());
  CHECK_THROWS(GridShape({}));
  CHECK_THROWS(GridShape({3, 0}));
}

TEST_CASE("signals validate length and finiteness") {
  CHECK_THROWS_AS(make({3}, {1.0, 2.0}), ShapeMismatch);
  CHECK_THROWS(make({2}, {1.0, NAN}));
  CHECK_THROWS(make({2}, {1.0, INFINITY}));
  CHECK_THROWS_AS(EdgeVector(GridShape({3}), {1.0}), ShapeMismatch);
}

TEST_CASE("incidence examples") {
  const EdgeVector d1 = incidence_apply(make({3}, {0, 1, 3}));
  CHECK(d1[0] == 1.0);
  CHECK(d1[1] == 2.0);

  const EdgeVector zero = incidence_apply(make({3, 3}, std::vector<double>(9, 2.5)));
  for (double v : zero.values()) CHECK(v == 0.0);

  const Signal t = make({2, 2}, {0, 1, 2, 3});
  const Eigen::VectorXd dense = oracle::incidence(t.shape()) * oracle::to_eigen(t.values());
  const EdgeVector fast = incidence_apply(t);
  REQUIRE(fast.size() == 4);
  for (std::size_t e = 0; e < 4; ++e) CHECK(fast[e] == dense(static_cast<Eigen::Index>(e)));
}

TEST_CASE("adjoint examples") {
  const Signal a = incidence_adjoint(EdgeVector(GridShape({2}), {1.0}));
  CHECK(a[0] == -1.0);
  CHECK(a[1] == 1.0);

  const Signal z = incidence_adjoint(EdgeVector(GridShape({3, 3})));
  for (double v : z.values()) CHECK(v == 0.0);

  const GridShape g({3, 3});
  const Signal u_signal = oracle::random_signal(GridShape({g.edge_count()}), 5);
  const EdgeVector u(g, u_signal.vector());
  const Eigen::VectorXd dense = oracle::incidence(g).transpose() * oracle::to_eigen(u.values());
  const Signal fast = incidence_adjoint(u);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(fast[i] == doctest::Approx(dense(static_cast<Eigen::Index>(i))));
}

TEST_CASE("adjointness on random shapes") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const CounterRng rng(1000 + t);
    const std::size_t d = 1 + rng.bits(0) % 3;
    std::vector<std::size_t> sides(d);
    std::size_t n = 1;
    for (std::size_t a = 0; a < d; ++a) {
      sides[a] = 1 + rng.bits(a + 1) % (d == 1 ? 4096 : d == 2 ? 64 : 16);
      n *= sides[a];
    }
    const GridShape g(sides);
    REQUIRE(n <= 4096);
    const Signal x = oracle::random_signal(g, 2 * t);
    const CounterRng edge_rng(2 * t + 1);
    std::vector<double> u_values(g.edge_count());
    for (std::size_t e = 0; e < u_values.size(); ++e) u_values[e] = edge_rng.normal(e);
    const EdgeVector u(g, std::move(u_values));
    const double lhs = dot(incidence_apply(x).values(), u.values());
    const double rhs = dot(x.values(), incidence_adjoint(u).values());
    const double scale = std::sqrt(dot(x.values(), x.values()) * dot(u.values(), u.values()));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(scale, 1.0));
  }
}

TEST_CASE("laplacian examples and null space") {
  const Signal l1 = laplacian_apply(make({3}, {1, 0, 0}));
  CHECK(l1[0] == 1.0);
  CHECK(l1[1] == -1.0);
  CHECK(l1[2] == 0.0);

  const Signal l2 = laplacian_apply(make({2, 2}, {1, 0, 0, 0}));
  CHECK(l2[0] == 2.0);
  CHECK(l2[1] == -1.0);
  CHECK(l2[2] == -1.0);
  CHECK(l2[3] == 0.0);

  for (const GridShape& g : {GridShape({7}), GridShape({4, 5}), GridShape({3, 4, 2})}) {
    const Signal c(g, std::vector<double>(g.size(), -3.25));
    const Signal lc = laplacian_apply(c);
    for (double v : lc.values()) CHECK(std::abs(v) <= 1e-12);
    const Signal x = oracle::random_signal(g, 77);
    const Signal via_d = incidence_adjoint(incidence_apply(x));
    const Signal direct = laplacian_apply(x);
    const Eigen::VectorXd dense = oracle::laplacian(g) * oracle::to_eigen(x.values());
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(direct[i] == doctest::Approx(via_d[i]).epsilon(1e-12));
      CHECK(direct[i] == doctest::Approx(dense(static_cast<Eigen::Index>(i))).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense incidence") {
  Eigen::MatrixXd two(1, 2);
  two << -1, 1;
  CHECK(dense_incidence(GridShape({2})) == two);
  Eigen::MatrixXd three(2, 3);
  three << -1, 1, 0, 0, -1, 1;
  CHECK(dense_incidence(GridShape({3})) == three);

  const GridShape sq({2, 2});
  const Eigen::MatrixXd D = dense_incidence(sq);
  CHECK(D.rows() == 4);
  CHECK(D.cols() == 4);
  CHECK(D.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  CHECK(D == oracle::incidence(sq));

  for (const GridShape& g : {GridShape::cubic(5, 2), GridShape::cubic(4, 3), GridShape({3, 6})}) {
    const Eigen::MatrixXd Dg = dense_incidence(g);
    CHECK(Dg == oracle::incidence(g));
    CHECK(Dg.cwiseAbs().colwise().sum().maxCoeff() <= static_cast<double>(g.max_degree()));
  }
  CHECK_THROWS_AS(dense_incidence(GridShape({101, 100})), std::length_error);
}

TEST_CASE("seminorms") {
  CHECK(tv_seminorm(make({4}, {2, 2, 2, 2})) == 0.0);
  CHECK(tv_seminorm(make({3}, {0, 1, 0})) == 2.0);
  CHECK(tv_seminorm(make({2, 2}, {0, 1, 2, 3})) == 6.0);
  CHECK(sobolev_seminorm(make({4}, {2, 2, 2, 2})) == 0.0);
  CHECK(sobolev_seminorm(make({3}, {0, 1, 0})) == doctest::Approx(std::sqrt(2.0)));

  const GridShape g({3, 3});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Signal x = oracle::random_signal(g, 300 + s);
    const Eigen::VectorXd v = oracle::to_eigen(x.values());
    const double quad = v.dot(oracle::laplacian(g) * v);
    const double sob = sobolev_seminorm(x);
    CHECK(sob * sob == doctest::Approx(quad).epsilon(1e-10));
    CHECK(tv_seminorm(x) <= std::sqrt(static_cast<double>(g.edge_count())) * sob * (1 + 1e-12));
  }
}

TEST_CASE("multi-index round trip") {
  const GridShape g({3, 3});
  CHECK(flat_to_multi(0, g) == std::vector<std::size_t>{1, 1});
  CHECK(flat_to_multi(8, g) == std::vector<std::size_t>{3, 3});
  CHECK(flat_to_multi(1, g) == std::vector<std::size_t>{1, 2});
  CHECK_THROWS_AS(flat_to_multi(9, g), std::out_of_range);
  const std::vector<std::size_t> bad{0, 1};
  CHECK_THROWS_AS(multi_to_flat(bad, g), std::out_of_range);

  const GridShape h({4, 5, 6});
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(multi_to_flat(flat_to_multi(i, h), h) == i);
}

TEST_CASE("pencil helpers cover every edge once") {
  const GridShape g({3, 4, 5});
  std::vector<int> hits(g.edge_count(), 0);
  const Eigen::MatrixXd D = oracle::incidence(g);
  for (std::size_t a = 0; a < g.dims(); ++a) {
    for_each_pencil(g, a, [&](std::size_t start) {
      const std::size_t e0 = pencil_edge_start(g, a, start);
      for (std::size_t k = 0; k + 1 < g.side(a); ++k) {
        const std::size_t e = e0 + k * g.stride(a);
        ++hits[e];
        // edge e joins nodes start + k*stride and start + (k+1)*stride
        CHECK(D(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(start + k * g.stride(a))) == -1.0);
      }
    });
  }
  for (int h : hits) CHECK(h == 1);
}
