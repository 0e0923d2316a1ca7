#pragma once

// p-Bergman kernels with respect to a functional xi:
//   m_{xi,p}(z) = min { ||f||_p : (xi . f)(z) = 1 },   K_{xi,p}(z) = m^{-p},
// the minimizer m_{xi,p}(., z), off-diagonal kernels and the checks that
// follow from the reproducing formula.

#include <xibergman/algebra.hpp>
#include <xibergman/domains.hpp>
#include <xibergman/pspace.hpp>
#include <xibergman/solver.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace xibergman {

class KernelZeroError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct KernelDiagnostics {
  int iterations = 0;
  int newton_iterations = 0;
  double final_rel_step = 0.0;
  double constraint_residual = 0.0;
  double eps = 0.0;
  std::string method;  // exact-2, irls, multistart
  bool converged = true;
  std::vector<std::string> flags;  // conditions that make the result suspect
  std::vector<std::string> notes;  // informational

  bool flagged() const { return !converged || !flags.empty(); }
};

struct KernelEvaluation {
  double m = 0.0;
  double K = 0.0;
  double p = 2.0;
  Point z;
  Functional xi;
  int degree = 0;
  SpaceFunction minimizer;  // (xi . minimizer)(z) = 1, ||minimizer||_p = m
  KernelDiagnostics diagnostics;
};

namespace detail {

inline void check_kernel_inputs(const PolySpace& space, const Functional& xi, std::span<const cplx> z, double p) {
  require_same_dimension(space.dimension(), xi.dimension(), "kernel");
  require_same_dimension(space.dimension(), z.size(), "kernel");
  xi.require_nonzero("kernel");
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("kernel: p must be positive and finite");
  if (!contains(space.domain(), z)) throw std::invalid_argument("kernel: point outside domain");
}

inline void add_space_flags(const PolySpace& space, KernelDiagnostics& d) {
  if (space.unverified_density()) d.flags.push_back("unverified-density");
}

/// Solves min ||f||_p subject to rows * coeffs = rhs, rows given against the raw basis.
inline LpSolution solve_raw(const PolySpace& space, const Eigen::MatrixXcd& rows, const Eigen::VectorXcd& rhs, double p,
                            SolverOptions opts, const std::optional<Eigen::VectorXcd>& raw_start) {
  // Work in the discrete-orthonormal coordinates: raw = R^{-1} sigma.
  const Eigen::MatrixXcd& R = space.ortho_r();
  const Eigen::MatrixXcd C = R.transpose().triangularView<Eigen::Lower>().solve(rows.transpose()).transpose();
  if (raw_start && !opts.start) opts.start = R.triangularView<Eigen::Upper>() * (*raw_start);
  LpSolution sol = solve_constrained_lp(space.ortho_values(), space.weights(), C, rhs, p, opts);
  sol.x = R.triangularView<Eigen::Upper>().solve(sol.x);
  return sol;
}

inline KernelEvaluation finish_evaluation(const PolySpace& space, const Functional& xi, std::span<const cplx> z,
                                          double p, const LpSolution& sol) {
  KernelEvaluation ev;
  ev.p = p;
  ev.z.assign(z.begin(), z.end());
  ev.xi = xi;
  ev.degree = space.max_degree();
  ev.minimizer = space.make(sol.x);
  ev.m = std::pow(sol.objective, 1.0 / p);
  ev.K = 1.0 / sol.objective;  // m^{-p}
  ev.diagnostics.iterations = sol.iterations;
  ev.diagnostics.newton_iterations = sol.newton_iterations;
  ev.diagnostics.final_rel_step = sol.final_rel_step;
  ev.diagnostics.eps = sol.eps;
  ev.diagnostics.method = sol.method;
  ev.diagnostics.converged = sol.converged;
  ev.diagnostics.constraint_residual = std::abs(ev.minimizer.apply(xi, z) - cplx(1.0));
  if (sol.nonconvex) ev.diagnostics.flags.push_back("nonconvex-best-found");
  if (!sol.converged) ev.diagnostics.flags.push_back("not-converged");
  add_space_flags(space, ev.diagnostics);
  return ev;
}

}  // namespace detail

/// Exact p = 2 kernel: K = sum_a |c_a|^2 with c_a = (xi . psi_a)(z) over any
/// orthonormal basis; the discrete one avoids the jet triangularization.
inline KernelEvaluation kernel2_diagonal(const PolySpace& space, const Functional& xi, std::span<const cplx> z) {
  detail::check_kernel_inputs(space, xi, z, 2.0);
  const Eigen::RowVectorXcd c = space.to_ortho(space.functional_row(xi, z));
  const double K = c.squaredNorm();
  if (!(K > 0.0)) throw KernelZeroError("kernel zero at this truncation: xi annihilates the truncated space");
  KernelEvaluation ev;
  ev.p = 2.0;
  ev.z.assign(z.begin(), z.end());
  ev.xi = xi;
  ev.degree = space.max_degree();
  ev.K = K;
  ev.m = 1.0 / std::sqrt(K);
  ev.minimizer = space.make(space.from_ortho(c.adjoint() / K));
  ev.diagnostics.method = "exact-2";
  ev.diagnostics.iterations = 0;
  ev.diagnostics.constraint_residual = std::abs(ev.minimizer.apply(xi, z) - cplx(1.0));
  detail::add_space_flags(space, ev.diagnostics);
  return ev;
}

/// The feasible witness (z - z0)^alpha0 / xi_alpha0, if it fits the space.
inline std::optional<Eigen::VectorXcd> witness_start(const PolySpace& space, const Functional& xi,
                                                     std::span<const cplx> z) {
  if (space.is_laurent()) return std::nullopt;
  const MultiIndex& a0 = xi.leading_index();
  PolyCoeffs w(Point(z.begin(), z.end()), a0.degree());
  w.set(a0, 1.0 / xi.coefficient(a0));
  try {
    return space.from_poly(w).coeffs();
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

/// inf ||f||_p over {(xi . f)(z) = 1} in the truncated space.
inline KernelEvaluation kernelp_diagonal(const PolySpace& space, const Functional& xi, std::span<const cplx> z, double p,
                                         const SolverOptions& opts = {}) {
  detail::check_kernel_inputs(space, xi, z, p);
  const Eigen::MatrixXcd rows = space.functional_row(xi, z);
  if (rows.norm() == 0.0) throw KernelZeroError("kernel zero at this truncation: xi annihilates the truncated space");
  const Eigen::VectorXcd rhs = Eigen::VectorXcd::Ones(1);
  const LpSolution sol = detail::solve_raw(space, rows, rhs, p, opts, witness_start(space, xi, z));
  KernelEvaluation ev = detail::finish_evaluation(space, xi, z, p, sol);
  if (p == 1.0) ev.diagnostics.notes.push_back("p1-loose-tolerance");
  return ev;
}

/// A random feasible start, used to probe uniqueness of the minimizer.
inline Eigen::VectorXcd random_feasible_start(const PolySpace& space, const Functional& xi, std::span<const cplx> z,
                                              std::uint64_t seed, double spread = 1.0) {
  const Eigen::MatrixXcd rows = space.functional_row(xi, z);
  const AffineSlice slice(rows, Eigen::VectorXcd::Ones(1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, spread);
  Eigen::VectorXcd y(slice.null_basis.cols());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = cplx(normal(rng), normal(rng));
  return slice.point(y);
}

/// Solver options starting from raw-basis coefficients (projected onto the constraint slice).
inline SolverOptions with_raw_start(const PolySpace& space, SolverOptions opts, const Eigen::VectorXcd& raw) {
  opts.start = space.ortho_r().triangularView<Eigen::Upper>() * raw;
  return opts;
}

struct OffDiagonalKernel {
  KernelEvaluation base;  // at the pole w
  SpaceFunction values;   // K_{xi,p}(., w) = m_{xi,p}(., w) m_{xi,p}(w)^{-p}
};

inline OffDiagonalKernel off_diagonal(const PolySpace& space, const Functional& xi, std::span<const cplx> w, double p,
                                      const SolverOptions& opts = {}) {
  if (!(p >= 1.0)) throw std::invalid_argument("off_diagonal: requires p >= 1");
  OffDiagonalKernel out;
  out.base = kernelp_diagonal(space, xi, w, p, opts);
  out.values = out.base.minimizer * cplx(out.base.K);
  return out;
}

/// Per-node weights |m|^{p-2}, regularized as in the solver where |m| < eps.
inline Eigen::VectorXd reproducing_weights(const KernelEvaluation& ev) {
  const Eigen::VectorXcd mv = ev.minimizer.node_values();
  const double eps = ev.diagnostics.eps;
  Eigen::VectorXd om(mv.size());
  for (Eigen::Index q = 0; q < mv.size(); ++q) {
    const double s = std::norm(mv(q)) + eps * eps;
    om(q) = s > 0.0 ? std::pow(s, 0.5 * (ev.p - 2.0)) : 0.0;
  }
  return om;
}

/// int_Omega |m|^{p-2} conj(m) f by quadrature.
inline cplx reproducing_integral(const KernelEvaluation& ev, const SpaceFunction& f) {
  const auto& space = *ev.minimizer.space();
  const Eigen::VectorXcd mv = ev.minimizer.node_values();
  const Eigen::VectorXcd fv = f.node_values();
  const Eigen::VectorXd om = reproducing_weights(ev);
  cplx s = 0.0;
  for (Eigen::Index q = 0; q < mv.size(); ++q) s += space.weights()(q) * om(q) * std::conj(mv(q)) * fv(q);
  return s;
}

/// |(xi.f)(w) - m^{-p} int |m|^{p-2} conj(m) f| / max(1, |(xi.f)(w)|).
inline double reproducing_residual(const KernelEvaluation& ev, const SpaceFunction& f) {
  if (!(ev.p >= 1.0)) throw std::invalid_argument("reproducing_residual: requires p >= 1");
  const cplx lhs = f.apply(ev.xi, ev.z);
  const cplx rhs = ev.K * reproducing_integral(ev, f);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

inline double reproducing_residual(const PolySpace& space, const Functional& xi, std::span<const cplx> w, double p,
                                   const PolyCoeffs& f, const SolverOptions& opts = {}) {
  const KernelEvaluation ev = kernelp_diagonal(space, xi, w, p, opts);
  return reproducing_residual(ev, space.from_poly(f));
}

/// H_{xi,p}(z, w) and both sides of the integrated two-point inequality
/// (the (p-1)^{-1} form for 1 < p <= 2, the constant-2 form for p > 2).
struct HQuantity {
  double H = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double p = 2.0;
  bool low_branch = true;  // 1 < p <= 2

  bool holds(double slack) const { return lhs <= rhs + slack; }
};

inline HQuantity h_quantity(const KernelEvaluation& ez, const KernelEvaluation& ew) {
  const double p = ez.p;
  if (!(p > 1.0)) throw std::invalid_argument("h_quantity: requires p > 1");
  const cplx xi_mw_at_z = ew.minimizer.apply(ez.xi, ez.z);
  const cplx xi_mz_at_w = ez.minimizer.apply(ew.xi, ew.z);
  HQuantity h;
  h.p = p;
  h.H = ez.K + ew.K - std::real(ew.K * xi_mw_at_z + ez.K * xi_mz_at_w);
  const auto& space = *ez.minimizer.space();
  const Eigen::VectorXcd a = ez.minimizer.node_values();
  const Eigen::VectorXcd b = ew.minimizer.node_values();
  double integral = 0.0;
  h.low_branch = p <= 2.0;
  for (Eigen::Index q = 0; q < a.size(); ++q) {
    const double diff2 = std::norm(a(q) - b(q));
    if (diff2 == 0.0) continue;
    double weight;
    if (h.low_branch) {
      const double s = std::abs(a(q)) + std::abs(b(q));
      weight = std::pow(s, p - 2.0);
    } else {
      weight = std::pow(std::abs(a(q)), p - 2.0) + std::pow(std::abs(b(q)), p - 2.0);
    }
    integral += space.weights()(q) * weight * diff2;
  }
  h.lhs = integral;
  h.rhs = h.low_branch ? h.H / ((p - 1.0) * ez.K * ew.K) : 2.0 * h.H / (ez.K * ew.K);
  return h;
}

inline HQuantity h_quantity(const PolySpace& space, const Functional& xi, double p, std::span<const cplx> z,
                            std::span<const cplx> w, const SolverOptions& opts = {}) {
  if (!(p > 1.0)) throw std::invalid_argument("h_quantity: requires p > 1");
  const KernelEvaluation ez = kernelp_diagonal(space, xi, z, p, opts);
  const KernelEvaluation ew = kernelp_diagonal(space, xi, w, p, opts);
  return h_quantity(ez, ew);
}

/// int_{B(o,R)} |z^alpha|^p dV = pi^n prod Gamma(s_j + 1) / Gamma(n + |s| + 1) R^{2|s| + 2n}, s = p alpha / 2.
inline double ball_monomial_integral(const MultiIndex& alpha, double p, double R) {
  const auto n = static_cast<double>(alpha.dimension());
  double log_num = n * std::log(std::numbers::pi);
  double ssum = 0.0;
  for (std::size_t j = 0; j < alpha.dimension(); ++j) {
    const double s = 0.5 * p * alpha[j];
    log_num += std::lgamma(s + 1.0);
    ssum += s;
  }
  return std::exp(log_num - std::lgamma(n + ssum + 1.0) + (2.0 * ssum + 2.0 * n) * std::log(R));
}

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  double K = 0.0;
  double C1 = 0.0;
  double delta = 0.0;
  bool holds() const { return lower <= K && K <= upper; }
};

/// Witness lower bound over B(o, diam) and the Cauchy-estimate upper bound
/// C1 / delta(z)^{2n + p k0}.
inline Bounds bounds_from_kernel(const Domain& domain, const Functional& xi, double p, std::span<const cplx> z,
                                 double K) {
  Bounds b;
  b.K = K;
  const double R = domain.diameter();
  for (const auto& [alpha, c] : xi.terms()) {
    b.lower = std::max(b.lower, std::pow(std::abs(c), p) / ball_monomial_integral(alpha, p, R));
  }
  const auto n = static_cast<double>(domain.dimension());
  const int k0 = xi.degree();
  b.delta = boundary_distance(domain, z);
  double series = 0.0;
  for (const auto& [alpha, c] : xi.terms()) {
    series += std::abs(c) * std::pow(2.0 * std::sqrt(n), alpha.degree()) *
              std::pow(std::max(1.0, R), static_cast<double>(k0 - alpha.degree()));
  }
  b.C1 = std::tgamma(n + 1.0) * std::pow(4.0 / std::numbers::pi, n) * std::pow(series, p);
  b.upper = b.C1 / std::pow(b.delta, 2.0 * n + p * k0);
  return b;
}

inline Bounds bounds_check(const PolySpace& space, const Functional& xi, double p, std::span<const cplx> z,
                           const SolverOptions& opts = {}) {
  const KernelEvaluation ev = kernelp_diagonal(space, xi, z, p, opts);
  return bounds_from_kernel(space.domain(), xi, p, z, ev.K);
}

/// C_{K,p} for the compact set K at distance r from the boundary:
/// sum |xi_alpha| (2 sqrt(n) / r)^{|alpha|} (n!)^{1/p} (4 / (pi r^2))^{n/p}.
inline double submean_constant(const Functional& xi, double p, double r) {
  const auto n = static_cast<double>(xi.dimension());
  double series = 0.0;
  for (const auto& [alpha, c] : xi.terms()) series += std::abs(c) * std::pow(2.0 * std::sqrt(n) / r, alpha.degree());
  return series * std::pow(std::tgamma(n + 1.0), 1.0 / p) * std::pow(4.0 / (std::numbers::pi * r * r), n / p);
}

}  // namespace xibergman
