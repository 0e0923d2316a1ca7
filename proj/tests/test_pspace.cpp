#include <catch_amalgamated.hpp>

#include <xibergman/kernels.hpp>
#include <xibergman/pspace.hpp>

#include <numbers>
#include <random>

using namespace xibergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
PolyCoeffs monomial(int k) {
  PolyCoeffs f({0.0}, k);
  f.set(mi({k}), 1.0);
  return f;
}
}  // namespace

TEST_CASE("space sizes and defaults") {
  CHECK(PolySpace::create(Domain::disk())->size() == 17);
  CHECK(PolySpace::create(Domain::polydisc({1.0, 1.0}), 4)->size() == 15);
  CHECK(PolySpace::create(Domain::polydisc({1.0, 1.0}), 3, Truncation::per_axis, QuadOrders{8, 16})->size() == 16);
  const SpacePtr ann = PolySpace::create(Domain::annulus(0.5, 1.0), 6);
  CHECK(ann->is_laurent());
  CHECK(ann->size() == 13);
  CHECK(default_degree(1) == 16);
  CHECK(default_degree(2) == 10);
  CHECK(default_degree(3) == 6);
}

TEST_CASE("lp norm examples") {
  const SpacePtr sp = PolySpace::create(Domain::disk(), 16);
  CHECK_THAT(lp_norm(monomial(0), *sp, 2.0), WithinRel(std::sqrt(pi), 1e-12));
  CHECK_THAT(std::pow(lp_norm(monomial(1), *sp, 1.5), 1.5), WithinRel(2.0 * pi / 3.5, 1e-10));
  CHECK_THAT(lp_norm(monomial(1), *sp, 2.0), WithinRel(std::sqrt(pi / 2.0), 1e-12));
  for (int k = 0; k <= 10; ++k) CHECK_THAT(lp_norm(monomial(k), *sp, 2.0), WithinRel(std::sqrt(pi / (k + 1.0)), 1e-12));
  CHECK_THROWS(lp_norm(monomial(17), *sp, 2.0));
}

TEST_CASE("gram matrix examples") {
  const Eigen::MatrixXcd G = gram_matrix(*PolySpace::create(Domain::disk(), 2));
  CHECK_THAT(G(0, 0).real(), WithinAbs(pi, 1e-12));
  CHECK_THAT(G(1, 1).real(), WithinAbs(pi / 2.0, 1e-12));
  CHECK_THAT(G(2, 2).real(), WithinAbs(pi / 3.0, 1e-12));
  CHECK(std::abs(G(0, 1)) < 1e-14);
  const Eigen::MatrixXcd B = gram_matrix(*PolySpace::create(Domain::polydisc({1.0, 1.0}), 1, Truncation::automatic, QuadOrders{8, 16}));
  CHECK(std::abs(B(1, 2)) < 1e-14);
  const Eigen::MatrixXcd A = gram_matrix(*PolySpace::create(Domain::disk(0.7, cplx(0.1, -0.2)), 8));
  CHECK((A - A.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
}

TEST_CASE("orthonormal basis on the disk at the origin") {
  const SpacePtr sp = PolySpace::create(Domain::disk(), 16);
  const OrthonormalBasis onb = orthonormal_basis(*sp, Point{0.0});
  CHECK_THAT(onb.sigma(0).value(Point{0.0}).real(), WithinAbs(0.5641895835, 1e-9));
  for (std::size_t k = 0; k < onb.size(); ++k) {
    const SpaceFunction s = onb.sigma(k);
    CHECK_THAT(std::abs(s.value(Point{0.5}) - std::sqrt((k + 1.0) / pi) * std::pow(0.5, k)), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("orthonormal basis is orthonormal and jet adapted") {
  struct Case {
    Domain d;
    Point z;
    int D;
  };
  const std::vector<Case> cases = {{Domain::disk(), {cplx(0.3, 0.4)}, 16},
                                   {Domain::annulus(0.5, 1.0), {cplx(0.0, 0.75)}, 10},
                                   {Domain::polydisc({1.0, 1.0}), {0.3, cplx(0.0, -0.2)}, 6},
                                   {Domain::ball(2), {0.2, 0.1}, 4}};
  for (const auto& c : cases) {
    const SpacePtr sp = PolySpace::create(c.d, c.D);
    const OrthonormalBasis onb = orthonormal_basis(*sp, c.z);
    const Eigen::MatrixXcd G = onb.gram();
    REQUIRE((G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-9);
    // The jet table agrees with direct Taylor coefficients of sigma.
    for (std::size_t a = 0; a < onb.size(); ++a) {
      const SpaceFunction s = onb.sigma(a);
      for (std::size_t b = 0; b <= a; ++b) {
        const cplx t = s.taylor(c.z, onb.indices[b]);
        if (b < a) REQUIRE(std::abs(t) < 1e-8);
        if (b == a) REQUIRE(t.real() > 0.0);
      }
    }
  }
  CHECK_THROWS(orthonormal_basis(*PolySpace::create(Domain::disk(), 4), Point{1.5}));
}

TEST_CASE("truncation monotone and stable near the center") {
  double prev = 0.0;
  for (int D = 2; D <= 16; D += 2) {
    const double K = kernel2_diagonal(*PolySpace::create(Domain::disk(), D), Functional::delta(mi({0})), Point{cplx(0.5, 0.2)}).K;
    REQUIRE(K >= prev * (1.0 - 1e-12));
    prev = K;
  }
  const SpacePtr a = PolySpace::create(Domain::disk(), 14), b = PolySpace::create(Domain::disk(), 16);
  for (cplx z : {cplx(0.0), cplx(0.3), cplx(0.0, -0.3)}) {
    CHECK_THAT(kernel2_diagonal(*a, Functional::delta(mi({0})), Point{z}).K,
               WithinRel(kernel2_diagonal(*b, Functional::delta(mi({0})), Point{z}).K, 1e-8));
  }
}

TEST_CASE("bergman series on the disk") {
  const SpacePtr sp = PolySpace::create(Domain::disk(), 30);
  const OrthonormalBasis onb = orthonormal_basis(*sp, Point{0.0});
  for (cplx z : {cplx(0.25), cplx(0.3, -0.4)}) {
    double s = 0.0;
    for (std::size_t k = 0; k < onb.size(); ++k) s += std::norm(onb.sigma(k).value(Point{z}));
    CHECK_THAT(s, WithinRel(1.0 / (pi * std::pow(1.0 - std::norm(z), 2)), 1e-6));
  }
}

TEST_CASE("sub-mean-value bound") {
  const SpacePtr sp = PolySpace::create(Domain::disk(), 12);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Functional xi = Functional::delta(mi({1}));
  for (double p : {1.0, 2.0, 3.0}) {
    const double C = submean_constant(xi, p, 0.5);
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXcd c(static_cast<Eigen::Index>(sp->size()));
      for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = cplx(nd(rng), nd(rng));
      SpaceFunction f = sp->make(c);
      f = f * cplx(1.0 / f.lp_norm(p));
      const Point z{std::polar(0.5 * std::sqrt(u(rng)), 6.283 * u(rng))};
      REQUIRE(std::abs(f.apply(xi, z)) <= C);
    }
  }
}

TEST_CASE("space function conversions") {
  const SpacePtr sp = PolySpace::create(Domain::disk(0.5, cplx(0.1, 0.0)), 6);
  PolyCoeffs f({0.0}, 3);
  f.set(mi({3}), cplx(1.0, -1.0));
  f.set(mi({0}), 2.0);
  const SpaceFunction g = sp->from_poly(f);
  CHECK_THAT(std::abs(g.value(Point{0.3}) - f.evaluate(Point{0.3})), WithinAbs(0.0, 1e-13));
  const PolyCoeffs back = taylor_shift(g.to_poly(), Point{0.0});
  CHECK_THAT(std::abs(back.coefficient(mi({3})) - cplx(1.0, -1.0)), WithinAbs(0.0, 1e-12));
  const SpacePtr ann = PolySpace::create(Domain::annulus(0.5, 1.0), 4);
  CHECK_THROWS_AS(ann->make(Eigen::VectorXcd::Ones(9)).to_poly(), std::logic_error);
}

TEST_CASE("cloud spaces carry the density flag") {
  const Quadrature q = build_quadrature(Domain::disk(), 8, 16);
  const SpacePtr sp = PolySpace::create(Domain::cloud(1, q.flat_nodes(), q.weights()), 4);
  CHECK(sp->unverified_density());
  CHECK_FALSE(PolySpace::create(Domain::disk(), 4)->unverified_density());
}

TEST_CASE("leading jets of a Laurent space") {
  const SpacePtr ann = PolySpace::create(Domain::annulus(0.5, 1.0), 12, Truncation::laurent);
  const OrthonormalBasis onb = orthonormal_basis(*ann, Point{cplx(-0.75, 0.0)}, 4);
  CHECK((onb.gram() - Eigen::MatrixXcd::Identity(25, 25)).cwiseAbs().maxCoeff() <= 1e-9);
  for (Eigen::Index a = 0; a < 4; ++a) {
    CHECK(onb.jets(a, a).real() > 0.0);
    for (Eigen::Index b = 0; b < a; ++b) CHECK(onb.jets(b, a) == cplx(0.0));
  }
}
