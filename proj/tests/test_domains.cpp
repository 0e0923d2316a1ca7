#include <catch_amalgamated.hpp>

#include <xibergman/domains.hpp>

#include <numbers>
#include <sstream>

using namespace xibergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const detail::GaussRule g = detail::gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 14);
  CHECK_THAT(s, WithinAbs(2.0 / 15.0, 1e-15));
  const detail::GaussRule h = detail::gauss_legendre(5, 0.0, 2.0);
  double t = 0.0;
  for (std::size_t i = 0; i < h.x.size(); ++i) t += h.w[i] * h.x[i] * h.x[i];
  CHECK_THAT(t, WithinAbs(8.0 / 3.0, 1e-14));
}

TEST_CASE("quadrature volumes") {
  CHECK_THAT(build_quadrature(Domain::disk(), 32, 64).volume(), WithinAbs(pi, 1e-10));
  CHECK_THAT(build_quadrature(Domain::annulus(0.5, 1.0), 32, 64).volume(), WithinAbs(0.75 * pi, 1e-10));
  CHECK_THAT(build_quadrature(Domain::polydisc({1.0, 1.0}), 12, 24).volume(), WithinAbs(pi * pi, 1e-9));
  CHECK_THAT(build_quadrature(Domain::ball(2), QuadOrders::defaults(2)).volume(), WithinRel(pi * pi / 2.0, 1e-3));
  CHECK_THAT(build_quadrature(Domain::ball(3), QuadOrders::defaults(3)).volume(), WithinRel(pi * pi * pi / 6.0, 1e-3));
  CHECK_THAT(build_quadrature(Domain::disk(0.5, cplx(0.2, -0.1)), 16, 32).volume(), WithinAbs(0.25 * pi, 1e-12));
}

TEST_CASE("unit bidisc at orders 32x64 per axis") {
  const Quadrature q = build_quadrature(Domain::polydisc({1.0, 1.0}), 32, 64);
  CHECK(q.size() == 4194304);
  CHECK_THAT(q.volume(), WithinAbs(pi * pi, 1e-9));
}

TEST_CASE("quadrature nodes lie strictly inside") {
  for (const auto& d : {Domain::disk(0.5, cplx(0.2, 0.1)), Domain::annulus(0.5, 1.0), Domain::ball(2),
                        Domain::polydisc({1.0, 2.0}), Domain::ball(3)}) {
    const Quadrature q = build_quadrature(d, QuadOrders::defaults(d.dimension()));
    for (std::size_t i = 0; i < q.size(); ++i) REQUIRE(contains(d, q.node(i)));
    for (double w : q.weights()) REQUIRE(w > 0.0);
  }
}

TEST_CASE("disk moments") {
  const Quadrature q = build_quadrature(Domain::disk(), 32, 64);
  for (int k = 0; k <= 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights()[i] * std::pow(std::abs(q.node(i)[0]), 2 * k);
    REQUIRE_THAT(s, WithinAbs(pi / (k + 1.0), 1e-10));
  }
  cplx off = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) off += q.weights()[i] * std::pow(q.node(i)[0], 3) * std::conj(q.node(i)[0]);
  CHECK(std::abs(off) < 1e-13);
}

TEST_CASE("node cap is enforced") {
  CHECK_THROWS_AS(build_quadrature(Domain::polydisc({1.0, 1.0, 1.0}), 16, 32), DomainError);
  CHECK_THROWS_AS(build_quadrature(Domain::disk(), 0, 8), DomainError);
}

TEST_CASE("boundary distance examples") {
  CHECK(boundary_distance(Domain::disk(), Point{0.0}) == 1.0);
  CHECK_THAT(boundary_distance(Domain::disk(), Point{0.3}), WithinAbs(0.7, 1e-15));
  CHECK_THAT(boundary_distance(Domain::polydisc({1.0, 1.0}), Point{0.5, 0.2}), WithinAbs(0.5, 1e-15));
  CHECK_THAT(boundary_distance(Domain::ball(2), Point{0.3, cplx(0.0, 0.4)}), WithinAbs(0.5, 1e-15));
  CHECK_THAT(boundary_distance(Domain::annulus(0.5, 1.0), Point{cplx(0.0, 0.6)}), WithinAbs(0.1, 1e-15));
  CHECK_THROWS(boundary_distance(Domain::disk(), Point{1.5}));
  const Quadrature q = build_quadrature(Domain::disk(), 4, 8);
  CHECK_THROWS(boundary_distance(Domain::cloud(1, q.flat_nodes(), q.weights()), Point{0.0}));
}

TEST_CASE("membership examples") {
  CHECK(contains(Domain::disk(), Point{0.99}));
  CHECK_FALSE(contains(Domain::disk(), Point{1.01}));
  CHECK_FALSE(contains(Domain::annulus(0.5, 1.0), Point{0.4}));
  CHECK(contains(Domain::polydisc({1.0, 2.0}), Point{0.9, 1.9}));
  CHECK_FALSE(contains(Domain::ball(2), Point{0.8, 0.8}));
}

TEST_CASE("scaling") {
  const Domain d = scale_domain(Domain::disk(), 0.5);
  CHECK(d.as<Disk>().radius == 0.5);
  const Domain p = scale_domain(Domain::polydisc({1.0, 2.0}), std::exp(-1.0));
  CHECK_THAT(p.as<Polydisc>().radii[0], WithinAbs(std::exp(-1.0), 1e-15));
  CHECK_THAT(p.as<Polydisc>().radii[1], WithinAbs(2.0 * std::exp(-1.0), 1e-15));
  CHECK(scale_domain(Domain::ball(2), 1.0) == Domain::ball(2));
  CHECK_THROWS_AS(scale_domain(Domain::disk(1.0, 0.5), 0.5), DomainError);
  CHECK_THROWS_AS(scale_domain(Domain::disk(), -1.0), DomainError);
  for (double t : {0.3, 1.7}) {
    const Domain b = Domain::polydisc({1.0, 2.0});
    const QuadOrders o{8, 16};
    CHECK_THAT(build_quadrature(scale_domain(b, t), o).volume(), WithinRel(std::pow(t, 4) * build_quadrature(b, o).volume(), 1e-9));
  }
}

TEST_CASE("products") {
  const Domain bi = product_domain(Domain::disk(), Domain::disk());
  CHECK(bi == Domain::polydisc({1.0, 1.0}));
  CHECK_THAT(build_quadrature(bi, 12, 24).volume(), WithinAbs(pi * pi, 1e-9));
  CHECK(product_domain(Domain::disk(), Domain::polydisc({1.0, 1.0})).dimension() == 3);
  const Domain r12 = product_domain(Domain::disk(1.0), Domain::disk(2.0));
  CHECK(r12.as<Polydisc>().radii == std::vector<double>{1.0, 2.0});
  CHECK_THAT(build_quadrature(r12, 12, 24).volume(), WithinRel(4.0 * pi * pi, 1e-9));
  const Quadrature q = build_quadrature(Domain::disk(), 4, 8);
  CHECK_THROWS_AS(product_domain(Domain::disk(), Domain::cloud(1, q.flat_nodes(), q.weights())), DomainError);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Domain::disk(-1.0), DomainError);
  CHECK_THROWS_AS(Domain::annulus(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(Domain::polydisc({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Domain::cloud(1, {cplx(0.0)}, {-1.0}), DomainError);
}

TEST_CASE("cloud from csv") {
  std::istringstream in("0.1,0.2,0.5\n-0.3,0.0,0.25\n");
  const Domain c = cloud_from_csv(in);
  CHECK(c.dimension() == 1);
  const Quadrature q = build_quadrature(c, 32, 64);
  CHECK(q.size() == 2);
  CHECK(q.volume() == 0.75);
  std::istringstream bad("0.1,0.2\n");
  CHECK_THROWS(cloud_from_csv(bad));
}
