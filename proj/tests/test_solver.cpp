#include <catch_amalgamated.hpp>

#include <xibergman/solver.hpp>

using namespace xibergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// min sum w_i |x_i|^p s.t. sum x_i = d has x_i proportional to w_i^{-1/(p-1)}
// and optimal value |d|^p (sum w_i^{-1/(p-1)})^{-(p-1)}.
double weighted_oracle(const Eigen::VectorXd& w, double p, double dabs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += std::pow(w(i), -1.0 / (p - 1.0));
  return std::pow(dabs, p) * std::pow(s, -(p - 1.0));
}

}  // namespace

TEST_CASE("affine slice parametrizes the constraint set") {
  Eigen::MatrixXcd C(2, 4);
  C << 1.0, 2.0, 0.0, std::complex<double>(0.0, 1.0), 0.0, 1.0, 1.0, 1.0;
  Eigen::VectorXcd d(2);
  d << 1.0, std::complex<double>(2.0, -1.0);
  const AffineSlice s(C, d);
  CHECK(s.null_basis.cols() == 2);
  CHECK((C * s.particular - d).norm() < 1e-14);
  const Eigen::VectorXcd y = Eigen::VectorXcd::Random(2);
  CHECK((C * s.point(y) - d).norm() < 1e-14);
  CHECK((s.coordinates(s.point(y)) - y).norm() < 1e-14);
  CHECK(std::abs((s.null_basis.adjoint() * s.particular).norm()) < 1e-14);
}

TEST_CASE("affine slice rejects degenerate constraints") {
  Eigen::MatrixXcd C(2, 3);
  C << 1.0, 1.0, 0.0, 2.0, 2.0, 0.0;
  CHECK_THROWS_AS(AffineSlice(C, Eigen::VectorXcd::Ones(2)), InfeasibleError);
  CHECK_THROWS_AS(AffineSlice(Eigen::MatrixXcd::Ones(3, 2), Eigen::VectorXcd::Ones(3)), InfeasibleError);
}

TEST_CASE("weighted lp problem against the closed form") {
  Eigen::VectorXd w(4);
  w << 1.0, 2.0, 4.0, 0.5;
  const Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(4, 4);
  const Eigen::MatrixXcd C = Eigen::MatrixXcd::Ones(1, 4);
  Eigen::VectorXcd d(1);
  d << std::complex<double>(0.0, 2.0);
  for (double p : {1.2, 1.5, 2.0, 3.0, 4.0}) {
    const LpSolution sol = solve_constrained_lp(V, w, C, d, p);
    CHECK(sol.converged);
    CHECK_THAT(sol.objective, WithinRel(weighted_oracle(w, p, 2.0), 1e-9));
    CHECK(std::abs(sol.x.sum() - d(0)) < 1e-12);
  }
}

TEST_CASE("p = 1 reaches the minimum value") {
  Eigen::VectorXd w(3);
  w << 1.0, 2.0, 3.0;
  const LpSolution sol =
      solve_constrained_lp(Eigen::MatrixXcd::Identity(3, 3), w, Eigen::MatrixXcd::Ones(1, 3), Eigen::VectorXcd::Ones(1), 1.0);
  // All mass on the cheapest coordinate.
  CHECK_THAT(sol.objective, WithinRel(1.0, 1e-3));
}

TEST_CASE("p < 1 uses multistart and is flagged") {
  Eigen::VectorXd w(3);
  w << 1.0, 2.0, 3.0;
  SolverOptions o;
  o.seed = 5;
  const LpSolution sol = solve_constrained_lp(Eigen::MatrixXcd::Identity(3, 3), w, Eigen::MatrixXcd::Ones(1, 3),
                                              Eigen::VectorXcd::Ones(1), 0.5, o);
  CHECK(sol.nonconvex);
  CHECK(sol.method == "multistart");
  CHECK(sol.objective <= 1.0 + 1e-4);
  const LpSolution again = solve_constrained_lp(Eigen::MatrixXcd::Identity(3, 3), w, Eigen::MatrixXcd::Ones(1, 3),
                                                Eigen::VectorXcd::Ones(1), 0.5, o);
  CHECK(again.objective == sol.objective);
}

TEST_CASE("start point is honored and results agree") {
  Eigen::VectorXd w(4);
  w << 1.0, 2.0, 4.0, 0.5;
  SolverOptions o;
  o.start = Eigen::VectorXcd::Constant(4, std::complex<double>(0.25, 0.0));
  Eigen::VectorXcd d(1);
  d << 1.0;
  const LpSolution a = solve_constrained_lp(Eigen::MatrixXcd::Identity(4, 4), w, Eigen::MatrixXcd::Ones(1, 4), d, 1.5, o);
  const LpSolution b = solve_constrained_lp(Eigen::MatrixXcd::Identity(4, 4), w, Eigen::MatrixXcd::Ones(1, 4), d, 1.5);
  CHECK((a.x - b.x).norm() < 1e-8);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(solve_constrained_lp(Eigen::MatrixXcd::Identity(2, 2), Eigen::VectorXd::Ones(2), Eigen::MatrixXcd::Ones(1, 2),
                                       Eigen::VectorXcd::Ones(1), 0.0),
                  std::invalid_argument);
}
