#pragma once

// Minimization of a quadrature L^p norm over an affine subspace
//   min sum_q w_q |(V x)_q|^p   subject to   C x = d,
// by null-space elimination, damped iteratively reweighted least squares, and
// a Newton polish on the (eps-smoothed) objective.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace xibergman {

using cplx = std::complex<double>;

struct SolverOptions {
  int max_iterations = 300;
  double tolerance = 1e-11;      // relative objective change that ends the IRLS phase
  double damping = 0.7;          // x <- (1 - lambda) x + lambda x_new
  double eps_scale = 1e-7;       // eps = eps_scale * max_q |f(x_q)|, p < 2
  double eps_scale_p1 = 1e-6;    // same, p = 1
  bool newton_polish = true;
  int newton_max_iterations = 40;
  int restarts = 8;              // p < 1 only
  std::uint64_t seed = 42;
  /// Optional feasible starting point in solver coordinates.
  std::optional<Eigen::VectorXcd> start;
};

class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LpSolution {
  Eigen::VectorXcd x;
  double objective = 0.0;  // sum_q w_q |f_q|^p
  int iterations = 0;
  int newton_iterations = 0;
  double final_rel_step = 0.0;
  double eps = 0.0;
  std::string method = "irls";
  bool converged = false;
  bool nonconvex = false;
};

namespace detail {

inline double lp_objective(const Eigen::VectorXcd& f, const Eigen::VectorXd& w, double p) {
  double s = 0.0;
  for (Eigen::Index q = 0; q < f.size(); ++q) s += w(q) * std::pow(std::abs(f(q)), p);
  return s;
}

inline double smoothed_objective(const Eigen::VectorXcd& f, const Eigen::VectorXd& w, double p, double eps) {
  if (eps == 0.0) return lp_objective(f, w, p);
  double s = 0.0;
  for (Eigen::Index q = 0; q < f.size(); ++q) s += w(q) * std::pow(std::norm(f(q)) + eps * eps, 0.5 * p);
  return s;
}

inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& M) {
  const Eigen::Index m = M.rows();
  Eigen::MatrixXd R(2 * m, 2 * m);
  R.topLeftCorner(m, m) = M.real();
  R.topRightCorner(m, m) = -M.imag();
  R.bottomLeftCorner(m, m) = M.imag();
  R.bottomRightCorner(m, m) = M.real();
  return R;
}

}  // namespace detail

/// Null-space parametrization x = x_p + Z y of {C x = d}.
struct AffineSlice {
  Eigen::VectorXcd particular;
  Eigen::MatrixXcd null_basis;

  AffineSlice(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& d) {
    const Eigen::Index m = C.cols();
    const Eigen::Index r = C.rows();
    if (r > m) throw InfeasibleError("affine constraints: more constraints than unknowns");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(C.adjoint());
    const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    const Eigen::MatrixXcd R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    double rmax = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) rmax = std::max(rmax, std::abs(R(i, i)));
    for (Eigen::Index i = 0; i < r; ++i) {
      if (!(std::abs(R(i, i)) > 1e-12 * rmax) || rmax == 0.0) {
        throw InfeasibleError("affine constraints are rank deficient in the truncated space");
      }
    }
    // C = R^H Q1^H, so x_p = Q1 R^{-H} d.
    const Eigen::VectorXcd u = R.adjoint().triangularView<Eigen::Lower>().solve(d);
    particular = Q.leftCols(r) * u;
    null_basis = Q.rightCols(m - r);
  }

  Eigen::VectorXcd point(const Eigen::VectorXcd& y) const { return particular + null_basis * y; }
  Eigen::VectorXcd coordinates(const Eigen::VectorXcd& x) const { return null_basis.adjoint() * (x - particular); }
};

namespace detail {

struct Workspace {
  const Eigen::VectorXd& w;
  double p;
  Eigen::MatrixXcd B;   // V * Z
  Eigen::VectorXcd fp;  // V * x_p

  Eigen::VectorXcd values(const Eigen::VectorXcd& y) const { return fp + B * y; }
};

inline double eps_for(const Eigen::VectorXcd& f, double p, const SolverOptions& opts) {
  if (p >= 2.0) return 0.0;
  const double scale = f.cwiseAbs().maxCoeff();
  return (p == 1.0 ? opts.eps_scale_p1 : opts.eps_scale) * scale;
}

// One weighted least-squares solve with IRLS weights at the current iterate.
inline Eigen::VectorXcd irls_target(const Workspace& ws, const Eigen::VectorXcd& f, double eps) {
  Eigen::VectorXd omega(f.size());
  for (Eigen::Index q = 0; q < f.size(); ++q) {
    omega(q) = ws.w(q) * std::pow(std::norm(f(q)) + eps * eps, 0.5 * (ws.p - 2.0));
  }
  const Eigen::MatrixXcd SB = omega.cwiseSqrt().asDiagonal() * ws.B;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(ws.B.cols(), ws.B.cols());
  G.selfadjointView<Eigen::Lower>().rankUpdate(SB.adjoint());
  const Eigen::VectorXcd rhs = -(ws.B.adjoint() * omega.asDiagonal() * ws.fp);
  return G.selfadjointView<Eigen::Lower>().ldlt().solve(rhs);
}

struct IrlsResult {
  Eigen::VectorXcd y;
  double objective;
  int iterations;
  double rel_change;
  bool converged;
  double eps;
};

inline IrlsResult run_irls(const Workspace& ws, Eigen::VectorXcd y, const SolverOptions& opts) {
  Eigen::VectorXcd f = ws.values(y);
  double obj = lp_objective(f, ws.w, ws.p);
  double eps = eps_for(f, ws.p, opts);
  IrlsResult r{y, obj, 0, std::numeric_limits<double>::infinity(), false, eps};
  for (int it = 1; it <= opts.max_iterations; ++it) {
    eps = eps_for(f, ws.p, opts);
    const Eigen::VectorXcd target = irls_target(ws, f, eps);
    double lambda = opts.damping;
    Eigen::VectorXcd y_new;
    Eigen::VectorXcd f_new;
    double obj_new = 0.0;
    // A convex combination cannot increase a convex objective; above p = 2 the
    // reweighted step itself may overshoot, so the damping is halved until it does not.
    for (int bt = 0; bt < 30; ++bt) {
      y_new = (1.0 - lambda) * y + lambda * target;
      f_new = ws.values(y_new);
      obj_new = lp_objective(f_new, ws.w, ws.p);
      if (obj_new <= obj * (1.0 + 1e-15) || ws.p < 2.0) break;
      lambda *= 0.5;
    }
    const double change = std::abs(obj - obj_new) / std::max(obj, std::numeric_limits<double>::min());
    y = std::move(y_new);
    f = std::move(f_new);
    obj = obj_new;
    r.iterations = it;
    r.rel_change = change;
    if (change < opts.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.y = y;
  r.objective = obj;
  r.eps = eps_for(f, ws.p, opts);
  return r;
}

// Damped Newton on F(y) = sum w (|f|^2 + eps^2)^{p/2} over the real and
// imaginary parts of y. Returns the number of accepted steps.
inline int newton_polish(const Workspace& ws, Eigen::VectorXcd& y, double eps, int max_iter, double& last_rel_step,
                         bool& stationary) {
  const double p = ws.p;
  const Eigen::Index m = ws.B.cols();
  if (m == 0) return 0;
  int accepted = 0;
  stationary = false;
  Eigen::VectorXcd f = ws.values(y);
  double F = smoothed_objective(f, ws.w, p, eps);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd d1(f.size()), d2(f.size());
    for (Eigen::Index q = 0; q < f.size(); ++q) {
      const double s = std::norm(f(q)) + eps * eps;
      if (s == 0.0) {
        d1(q) = 0.0;
        d2(q) = 0.0;
        continue;
      }
      const double phi1 = 0.5 * p * std::pow(s, 0.5 * p - 1.0);
      const double phi2 = 0.5 * p * (0.5 * p - 1.0) * std::pow(s, 0.5 * p - 2.0);
      d1(q) = ws.w(q) * phi1;
      d2(q) = ws.w(q) * phi2;
    }
    // g_q = conj(f_q) B_q;  ds = 2 [Re g, -Im g] . (dyr, dyi)
    const Eigen::MatrixXcd G = f.conjugate().asDiagonal() * ws.B;
    Eigen::MatrixXd J(f.size(), 2 * m);
    J.leftCols(m) = G.real();
    J.rightCols(m) = -G.imag();
    const Eigen::VectorXd grad = 2.0 * (J.transpose() * d1);
    Eigen::MatrixXd H = 2.0 * realify(ws.B.adjoint() * d1.asDiagonal() * ws.B);
    H.noalias() += 4.0 * (J.transpose() * d2.asDiagonal() * J);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Eigen::VectorXd step = -ldlt.solve(grad);
    double decrement = -grad.dot(step);
    if (!(decrement > 0.0) || !step.allFinite()) {
      // Indefinite model: fall back to a gradient step scaled by the diagonal.
      step = -grad.cwiseQuotient(H.diagonal().cwiseAbs().cwiseMax(1e-300));
      decrement = -grad.dot(step);
      if (!(decrement > 0.0)) break;
    }
    if (0.5 * decrement <= 1e-15 * std::abs(F)) {
      stationary = true;
      break;
    }
    const Eigen::VectorXcd dy = step.head(m).cast<cplx>() + cplx(0.0, 1.0) * step.tail(m).cast<cplx>();
    double t = 1.0;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Eigen::VectorXcd y_try = y + t * dy;
      const Eigen::VectorXcd f_try = ws.values(y_try);
      const double F_try = smoothed_objective(f_try, ws.w, p, eps);
      if (F_try <= F - 1e-4 * t * decrement) {
        last_rel_step = (t * dy).norm() / std::max(y_try.norm(), 1e-300);
        y = y_try;
        f = f_try;
        F = F_try;
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;
    ++accepted;
  }
  return accepted;
}

}  // namespace detail

/// Minimizes sum_q w_q |(V x)_q|^p subject to C x = d.
inline LpSolution solve_constrained_lp(const Eigen::MatrixXcd& V, const Eigen::VectorXd& w, const Eigen::MatrixXcd& C,
                                       const Eigen::VectorXcd& d, double p, const SolverOptions& opts = {}) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("solve_constrained_lp: p must be positive");
  const AffineSlice slice(C, d);
  detail::Workspace ws{w, p, V * slice.null_basis, V * slice.particular};
  const Eigen::Index m = slice.null_basis.cols();
  LpSolution sol;

  auto finish = [&](const Eigen::VectorXcd& y) {
    sol.x = slice.point(y);
    sol.objective = detail::lp_objective(ws.values(y), w, p);
  };

  if (m == 0) {
    finish(Eigen::VectorXcd());
    sol.converged = true;
    sol.method = "constrained-point";
    return sol;
  }

  Eigen::VectorXcd y0 = opts.start ? slice.coordinates(*opts.start) : Eigen::VectorXcd::Zero(m);

  if (p == 2.0) {
    const Eigen::MatrixXcd WB = w.asDiagonal() * ws.B;
    const Eigen::VectorXcd y = (ws.B.adjoint() * WB).ldlt().solve(-(WB.adjoint() * ws.fp));
    finish(y);
    sol.iterations = 1;
    sol.converged = true;
    return sol;
  }

  if (p < 1.0) {
    // Non-convex: best of several random feasible starts plus the given one.
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::max(1.0, y0.norm());
    detail::IrlsResult best = detail::run_irls(ws, y0, opts);
    int total = best.iterations;
    for (int r = 0; r < opts.restarts; ++r) {
      Eigen::VectorXcd y(m);
      for (Eigen::Index i = 0; i < m; ++i) y(i) = scale * cplx(normal(rng), normal(rng)) / std::sqrt(2.0 * m);
      auto res = detail::run_irls(ws, y, opts);
      total += res.iterations;
      if (res.objective < best.objective) best = std::move(res);
    }
    finish(best.y);
    sol.iterations = total;
    sol.final_rel_step = best.rel_change;
    sol.converged = best.converged;
    sol.nonconvex = true;
    sol.eps = best.eps;
    sol.method = "multistart";
    return sol;
  }

  auto res = detail::run_irls(ws, y0, opts);
  sol.iterations = res.iterations;
  sol.final_rel_step = res.rel_change;
  sol.converged = res.converged;
  sol.eps = res.eps;
  Eigen::VectorXcd y = res.y;
  if (opts.newton_polish) {
    double rel = res.rel_change;
    bool stationary = false;
    sol.newton_iterations = detail::newton_polish(ws, y, res.eps, opts.newton_max_iterations, rel, stationary);
    sol.final_rel_step = rel;
    sol.converged = res.converged || stationary;
  }
  finish(y);
  return sol;
}

}  // namespace xibergman
