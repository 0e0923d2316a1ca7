#include <catch_amalgamated.hpp>

#include <xibergman/io.hpp>

#include <numbers>

using namespace xibergman;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
}  // namespace

TEST_CASE("fmt12") {
  CHECK(fmt12(1.0 / std::numbers::pi) == "0.318309886184");
  CHECK(fmt12(0.5) == "0.5");
  CHECK(fmt12(-0.0) == "0");
  CHECK(fmt12(1e-20) == "1e-20");
  CHECK(fmt12(std::nan("")) == "nan");
  CHECK(fmt12(-INFINITY) == "-inf");
  CHECK(round12(0.1 + 0.2) == 0.3);
  CHECK(num(std::nan("")).is_null());
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
  CHECK(parse_complex("-2i") == cplx(0.0, -2.0));
  CHECK(parse_complex("0.3+0.1i") == cplx(0.3, 0.1));
  CHECK(parse_complex("0.3-1e-2i") == cplx(0.3, -0.01));
  CHECK(parse_complex("1e+2-i") == cplx(100.0, -1.0));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_complex("0.5:-0.25") == cplx(0.5, -0.25));
  CHECK_THROWS_AS(parse_complex(""), ParseError);
  CHECK_THROWS_AS(parse_complex("abc"), ParseError);
  CHECK_THROWS_AS(parse_complex("1+xi"), ParseError);
}

TEST_CASE("points") {
  CHECK(parse_point("0.1,0.2i", 2) == Point{cplx(0.1), cplx(0.0, 0.2)});
  CHECK(parse_point("0", 3) == Point(3, 0.0));
  CHECK_THROWS_AS(parse_point("0.1,0.2", 1), ParseError);
}

TEST_CASE("functionals") {
  const Functional xi = parse_functional("0:1; 1:0.5i");
  CHECK(xi.dimension() == 1);
  CHECK(xi.coefficient(mi({0})) == cplx(1.0));
  CHECK(xi.coefficient(mi({1})) == cplx(0.0, 0.5));
  const Functional two = parse_functional("1,0:2;0,1:-1");
  CHECK(two.dimension() == 2);
  CHECK(parse_functional(functional_to_json(two).dump()).coefficient(mi({0, 1})) == cplx(-1.0));
  CHECK(parse_functional(R"({"2": [0, 1]})").coefficient(mi({2})) == cplx(0.0, 1.0));
  CHECK_THROWS_AS(parse_functional(""), ParseError);
  CHECK_THROWS_AS(parse_functional("0:0"), ParseError);
  CHECK_THROWS_AS(parse_functional("0:1;1,0:1"), ParseError);
  CHECK_THROWS_AS(parse_functional("-1:1"), ParseError);
  CHECK_THROWS_AS(parse_functional("1"), ParseError);
  CHECK_THROWS_AS(parse_functional("{bad"), ParseError);
}

TEST_CASE("homogeneous polynomials from text") {
  const HomogeneousPolynomial H = parse_H("z1^2: 1.0, z1 z2: 0.5");
  CHECK(H.dimension() == 2);
  CHECK(H.degree() == 2);
  CHECK(H.terms().at(mi({1, 1})) == cplx(0.5));
  CHECK(parse_H("z1*z2: (1,2)").terms().at(mi({1, 1})) == cplx(1.0, 2.0));
  CHECK(parse_H("1", 2).degree() == 0);
  CHECK(parse_H("z2", 3).dimension() == 3);
  const HomogeneousPolynomial back = parse_H(H_to_json(H).dump());
  CHECK(back.terms() == H.terms());
  CHECK_THROWS_AS(parse_H("z1^2, z1"), ParseError);
  CHECK_THROWS_AS(parse_H("z3", 2), ParseError);
  CHECK_THROWS_AS(parse_H("w1"), ParseError);
  CHECK_THROWS_AS(parse_H(""), ParseError);
}

TEST_CASE("domains from text and JSON") {
  CHECK(parse_domain("disk") == Domain::disk());
  CHECK(parse_domain("disk:0.5") == Domain::disk(0.5));
  CHECK(parse_domain("bidisc") == Domain::polydisc({1.0, 1.0}));
  CHECK(parse_domain("polydisc:1,2") == Domain::polydisc({1.0, 2.0}));
  CHECK(parse_domain("ball:3") == Domain::ball(3));
  CHECK(parse_domain("annulus:0.25,1") == Domain::annulus(0.25, 1.0));
  const Domain off = Domain::disk(2.0, cplx(0.5, -1.0));
  CHECK(parse_domain(domain_to_json(off).dump()) == off);
  const Domain prod = product_domain(Domain::disk(), Domain::ball(2, 0.5));
  CHECK(parse_domain(domain_to_json(prod).dump()) == prod);
  const Domain pd = Domain::polydisc({1.0, 3.0}, Point{cplx(0.1), cplx(0.0, 0.2)});
  CHECK(parse_domain(domain_to_json(pd).dump()) == pd);
  CHECK_THROWS_AS(parse_domain("square"), ParseError);
  CHECK_THROWS_AS(parse_domain("polydisc"), ParseError);
  CHECK_THROWS(parse_domain("disk:-1"));
  CHECK_THROWS(parse_domain("annulus:1,0.5"));
  CHECK_THROWS_AS(parse_domain(R"({"radius": 1})"), ParseError);
  CHECK_THROWS_AS(parse_domain("cloud:/nonexistent.csv"), ParseError);
}

TEST_CASE("grids") {
  const auto g = parse_grid("-2:0:0.25");
  REQUIRE(g.size() == 9);
  CHECK(g.front() == -2.0);
  CHECK(g.back() == 0.0);
  CHECK(parse_grid("-1,-0.5,0") == std::vector<double>{-1.0, -0.5, 0.0});
  CHECK_THROWS_WITH(parse_grid("-1,0.1"), ContainsSubstring("<= 0"));
  CHECK_THROWS_AS(parse_grid("0,-1"), ParseError);
  CHECK_THROWS_AS(parse_grid("-1:0"), ParseError);
  CHECK_THROWS_AS(parse_grid("-1:0:0"), ParseError);
}

TEST_CASE("evaluation output") {
  const SpacePtr sp = PolySpace::create(Domain::disk(), 4);
  const KernelEvaluation ev = kernel2_diagonal(*sp, Functional::delta(mi({0})), Point{0.0});
  const json j = evaluation_json(ev);
  CHECK(j.at("K").get<double>() == round12(1.0 / std::numbers::pi));
  CHECK(j.at("minimizer").at("indices").size() == sp->size());
  CHECK(j.at("diagnostics").at("method") == "exact-2");
  CHECK(csv_header(1) == "z_re,z_im,p,m,K,iterations,flag");
  CHECK(csv_header(2).rfind("z1_re,z1_im,z2_re,z2_im,", 0) == 0);
  CHECK_THAT(csv_row(ev), ContainsSubstring("0.318309886184"));
  CHECK(csv_row(ev).substr(csv_row(ev).size() - 3) == ",ok");
}

TEST_CASE("sweep output") {
  SweepTable t;
  t.model = "balanced/disk";
  t.target = "xi";
  t.rows.push_back({-1.0, 2.0, 1.0, std::log(2.0), false, ""});
  t.rows.push_back({0.0, 1.0, 1.0, 0.0, true, "a,b"});
  const std::string csv = sweep_csv(t);
  CHECK_THAT(csv, ContainsSubstring("a,K,scaled,logK,flag\n-1,2,1,0.69314718056,ok\n"));
  CHECK_THAT(csv, ContainsSubstring("0,1,1,0,a;b"));
  const json j = sweep_json(t);
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows")[1].at("flag") == "a,b");
}
