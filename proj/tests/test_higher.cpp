#include <catch_amalgamated.hpp>

#include <xibergman/higher.hpp>

#include <numbers>

using namespace xibergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
HomogeneousPolynomial zk(int k) { return HomogeneousPolynomial::monomial(mi({k})); }
double closed_higher(double p, int k) { return std::pow(std::tgamma(k + 1.0), p) * (p * k + 2.0) / (2.0 * pi); }

const SpacePtr& unit_disk() {
  static const SpacePtr sp = PolySpace::create(Domain::disk(), 16, Truncation::automatic, QuadOrders{32, 64});
  return sp;
}

}  // namespace

TEST_CASE("homogeneous polynomials") {
  const HomogeneousPolynomial H(2, {{mi({2, 0}), 1.0}, {mi({1, 1}), cplx(0.0, 2.0)}});
  CHECK(H.degree() == 2);
  const Functional top = H.top_functional();
  CHECK(top.coefficient(mi({2, 0})) == cplx(2.0));
  CHECK(top.coefficient(mi({1, 1})) == cplx(0.0, 2.0));
  CHECK(HomogeneousPolynomial::one(3).degree() == 0);
  CHECK_THROWS_AS(HomogeneousPolynomial(1, {{mi({1}), 1.0}, {mi({2}), 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(HomogeneousPolynomial(1, {{mi({1}), 0.0}}), std::invalid_argument);
}

TEST_CASE("apply P_H") {
  // f = 3 z^2 + z^3 at z = 0.5: f'' = 6 + 6 z = 9.
  PolyCoeffs f({0.0}, 3);
  f.set(mi({2}), 3.0);
  f.set(mi({3}), 1.0);
  CHECK_THAT(std::abs(apply_PH(zk(2), f, Point{0.5}) - 9.0), WithinAbs(0.0, 1e-13));
  // Mixed derivative of z1 z2^2 at (1, 2): d1 d2 = 2 z2 = 4.
  PolyCoeffs g({0.0, 0.0}, 3);
  g.set(mi({1, 2}), 1.0);
  CHECK_THAT(std::abs(apply_PH(HomogeneousPolynomial::monomial(mi({1, 1})), g, Point{1.0, 2.0}) - 4.0),
             WithinAbs(0.0, 1e-13));
}

TEST_CASE("functional families") {
  const FunctionalFamily fam = FunctionalFamily::for_H(zk(2));
  CHECK(fam.free_dimension() == 2);
  const Functional xi = fam.member({cplx(1.0), cplx(0.0, -1.0)});
  CHECK(fam.contains(xi));
  CHECK(xi.coefficient(mi({2})) == cplx(2.0));
  Functional bad = xi;
  bad.set(mi({3}), 1.0);
  CHECK_FALSE(fam.contains(bad));
  CHECK_THROWS_AS(fam.member({cplx(1.0)}), std::invalid_argument);
  Functional eta(1);
  eta.set(mi({0}), 1.0);
  CHECK_THROWS_AS(FunctionalFamily(eta, {mi({0})}), std::invalid_argument);
}

TEST_CASE("direct route closed forms on the disk") {
  CHECK_THAT(higher_kernel_direct(*unit_disk(), zk(2), Point{0.0}, 2.0).K, WithinRel(12.0 / pi, 1e-12));
  CHECK_THAT(higher_kernel_direct(*unit_disk(), zk(1), Point{0.0}, 2.0).K, WithinRel(2.0 / pi, 1e-12));
  for (double p : {1.5, 3.0}) {
    for (int k = 0; k <= 2; ++k) {
      INFO("p = " << p << ", k = " << k);
      CHECK_THAT(higher_kernel_direct(*unit_disk(), zk(k), Point{0.0}, p).K, WithinRel(closed_higher(p, k), 1e-7));
    }
  }
}

TEST_CASE("via-inf route") {
  const InfResult r2 = higher_kernel_via_inf(*unit_disk(), zk(2), Point{0.0}, 2.0);
  CHECK_THAT(r2.K, WithinRel(12.0 / pi, 1e-8));
  for (const cplx c : FunctionalFamily::for_H(zk(2)).free_part(r2.xi_star)) CHECK(std::abs(c) < 1e-4);
  const InfResult r15 = higher_kernel_via_inf(*unit_disk(), zk(1), Point{0.0}, 1.5);
  CHECK_THAT(r15.K, WithinRel(closed_higher(1.5, 1), 1e-4));
  CHECK(r15.K >= r15.direct_K * (1.0 - 1e-6));
  CHECK(r15.converged);
  CHECK_FALSE(r15.local_minima.empty());
  CHECK_THROWS_AS(higher_kernel_via_inf(*unit_disk(), zk(1), Point{0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("three routes agree at p = 2 off center") {
  const Point z{cplx(0.3, 0.2)};
  const double direct = higher_kernel_direct(*unit_disk(), zk(1), z, 2.0).K;
  const Functional xi = minimizing_xi_p2(*unit_disk(), zk(1), z);
  CHECK(FunctionalFamily::for_H(zk(1)).contains(xi, 1e-14));
  CHECK_THAT(kernel2_diagonal(*unit_disk(), xi, z).K, WithinRel(direct, 1e-9));
  CHECK_THAT(higher_kernel_via_inf(*unit_disk(), zk(1), z, 2.0).K, WithinRel(direct, 1e-7));
  // Generic least squares agrees with the triangular solve.
  const Functional xi2 = minimizing_xi_p2(*unit_disk(), FunctionalFamily::for_H(zk(1)), z);
  CHECK(std::abs(xi2.coefficient(mi({0})) - xi.coefficient(mi({0}))) < 1e-9);
}

TEST_CASE("higher kernel is a lower envelope of the family") {
  const Point z{cplx(-0.2, 0.1)};
  const FunctionalFamily fam = FunctionalFamily::for_H(zk(2));
  for (double p : {1.5, 2.0}) {
    const double KH = higher_kernel_direct(*unit_disk(), zk(2), z, p).K;
    for (const auto& fp : {std::vector<cplx>{0.0, 0.0}, std::vector<cplx>{0.5, cplx(0.0, 1.0)}}) {
      CHECK(kernelp_diagonal(*unit_disk(), fam.member(fp), z, p).K >= KH * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("bidisc p = 2") {
  const SpacePtr bid = PolySpace::create(Domain::polydisc({1.0, 1.0}), 6, Truncation::automatic, QuadOrders{8, 16});
  // H = z1 z2: minimizer z1 z2, K = 1 / ||z1 z2||^2 = 4 / pi^2.
  const HomogeneousPolynomial H = HomogeneousPolynomial::monomial(mi({1, 1}));
  CHECK_THAT(higher_kernel_direct(*bid, H, Point{0.0, 0.0}, 2.0).K, WithinRel(4.0 / (pi * pi), 1e-10));
}

TEST_CASE("infeasible degree") {
  const SpacePtr small = PolySpace::create(Domain::disk(), 2);
  CHECK_THROWS_AS(higher_kernel_direct(*small, zk(3), Point{0.0}, 2.0), InfeasibleError);
  CHECK_THROWS_AS(minimizing_xi_p2(*small, zk(3), Point{0.0}), InfeasibleError);
}

TEST_CASE("Nelder-Mead on a quadratic") {
  const NelderMeadResult r = nelder_mead(
      [](const std::vector<double>& x) { return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5); },
      {0.0, 0.0});
  CHECK(r.converged);
  CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-5));
  CHECK_THAT(r.x[1], WithinAbs(-0.5, 1e-5));
}
