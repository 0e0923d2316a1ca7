#include <catch_amalgamated.hpp>

#include <xibergman/green.hpp>

#include <atomic>
#include <numbers>

using namespace xibergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
Functional delta(int k) { return Functional::delta(mi({k})); }

SweepOptions small_opts() {
  SweepOptions o;
  o.degree = 12;
  o.orders = QuadOrders{24, 48};
  o.threads = 1;
  return o;
}

}  // namespace

TEST_CASE("sublevel sets") {
  const Domain d = sublevel_domain(GreenModel::balanced(Domain::disk(2.0)), -std::log(2.0));
  CHECK(d == Domain::disk(1.0));
  CHECK(sublevel_domain(GreenModel::balanced(Domain::disk()), 0.0) == Domain::disk());
  // Moebius sublevel set: pole 0.5, a = log 0.5 gives the disk with center 0.4 and radius 0.4.
  const Domain m = sublevel_domain(GreenModel::moebius(0.5), std::log(0.5));
  CHECK(m.is<Disk>());
  CHECK_THAT(m.as<Disk>().radius, WithinRel(0.4, 1e-14));
  CHECK_THAT(std::abs(m.as<Disk>().center - 0.4), WithinAbs(0.0, 1e-14));
  CHECK(sublevel_domain(GreenModel::moebius(0.5), 0.0) == Domain::disk());
  CHECK_THROWS_AS(sublevel_domain(GreenModel::balanced(Domain::disk()), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GreenModel::moebius(1.0), DomainError);
  CHECK_THROWS_AS(GreenModel::balanced(Domain::disk(1.0, 0.5)), DomainError);
  CHECK_THROWS_AS(GreenModel::balanced(Domain::annulus(0.5, 1.0)), DomainError);
}

TEST_CASE("Azukawa indicatrix") {
  const Domain bid = Domain::polydisc({1.0, 2.0});
  CHECK(azukawa_indicatrix(GreenModel::balanced(bid)) == bid);
  CHECK(azukawa_indicatrix(GreenModel::moebius(0.0)) == Domain::disk());
  CHECK_THROWS_AS(azukawa_indicatrix(GreenModel::moebius(0.3)), std::invalid_argument);
}

TEST_CASE("balanced disk sweep is constant") {
  const std::vector<double> grid{-2.0, -1.0, -0.5, 0.0};
  for (double p : {1.5, 2.0, 3.0}) {
    const SweepTable t = sweep(GreenModel::balanced(Domain::disk()), delta(1), p, grid, small_opts());
    REQUIRE(t.rows.size() == grid.size());
    CHECK_FALSE(t.any_flagged());
    for (const auto& r : t.rows) CHECK_THAT(r.scaled, WithinRel((p + 2.0) / (2.0 * pi), 1e-6));
    CHECK(t.target == "xi");
    CHECK(t.k == 1);
  }
}

TEST_CASE("Moebius sweep is monotone and log-convex") {
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(-2.0 + 0.25 * i);
  SweepOptions o = small_opts();
  o.degree = 24;
  const SweepTable t = sweep(GreenModel::moebius(0.5), delta(0), 2.0, grid, o);
  CHECK_FALSE(t.any_flagged());
  const ColumnCheck c = check_columns(t);
  CHECK(c.monotone);
  CHECK(c.log_convex);
  CHECK(c.spread > 0.0);
  // Exact value on the whole disk.
  CHECK_THAT(t.rows.back().K, WithinRel(1.0 / (pi * 0.75 * 0.75), 1e-8));
}

TEST_CASE("higher-order sweep target") {
  const SweepTable t =
      sweep(GreenModel::balanced(Domain::disk()), HomogeneousPolynomial::monomial(mi({2})), 2.0, {-1.0, 0.0}, small_opts());
  CHECK(t.target == "H");
  for (const auto& r : t.rows) CHECK_THAT(r.scaled, WithinRel(12.0 / pi, 1e-8));
}

TEST_CASE("grid validation") {
  const GreenModel g = GreenModel::balanced(Domain::disk());
  CHECK_THROWS_AS(sweep(g, delta(0), 2.0, {-1.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(g, delta(0), 2.0, {-1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(g, delta(0), 2.0, {0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS(sweep(g, Functional::delta(mi({0, 0})), 2.0, {0.0}));
}

TEST_CASE("limit chain examples") {
  const std::vector<double> grid{-3.0, -2.0, -1.0, 0.0};
  const GreenModel disk = GreenModel::balanced(Domain::disk());
  const LimitChain c0 = limit_chain_check(disk, HomogeneousPolynomial::one(1), delta(0), 2.0, grid, small_opts());
  CHECK(c0.pass);
  CHECK_THAT(c0.lhs, WithinRel(1.0 / pi, 1e-10));
  CHECK_THAT(c0.rhs, WithinRel(1.0 / pi, 1e-10));
  const LimitChain c1 =
      limit_chain_check(disk, HomogeneousPolynomial::monomial(mi({1})), delta(1), 1.5, grid, small_opts());
  CHECK(c1.pass);
  CHECK_THAT(c1.limit, WithinRel(3.5 / (2.0 * pi), 1e-6));
  SweepOptions bo;
  bo.degree = 4;
  bo.orders = QuadOrders{8, 16};
  bo.threads = 1;
  const LimitChain cb = limit_chain_check(GreenModel::balanced(Domain::polydisc({1.0, 1.0})), HomogeneousPolynomial::one(2),
                                          Functional::delta(mi({0, 0})), 1.5, {-1.0, 0.0}, bo);
  CHECK(cb.pass);
  CHECK_THAT(cb.rhs, WithinRel(1.0 / (pi * pi), 1e-6));
  CHECK_THROWS_AS(limit_chain_check(GreenModel::moebius(0.2), HomogeneousPolynomial::one(1), delta(0), 2.0, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(limit_chain_check(disk, HomogeneousPolynomial::one(1), delta(0), 3.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(limit_chain_check(disk, HomogeneousPolynomial::monomial(mi({1})), delta(0), 2.0, grid),
                  std::invalid_argument);
}

TEST_CASE("parallel sweeps are deterministic") {
  std::vector<int> out(100, 0);
  std::atomic<int> calls{0};
  parallel_for(out.size(), 4, [&](std::size_t i) {
    out[i] = static_cast<int>(i * i);
    ++calls;
  });
  CHECK(calls == 100);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  SweepOptions o1 = small_opts(), o3 = small_opts();
  o3.threads = 3;
  const std::vector<double> grid{-1.0, -0.5, 0.0};
  const SweepTable a = sweep(GreenModel::moebius(0.3), delta(0), 1.5, grid, o1);
  const SweepTable b = sweep(GreenModel::moebius(0.3), delta(0), 1.5, grid, o3);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.rows[i].K == b.rows[i].K);
  CHECK(resolve_threads(5) == 5u);
}
