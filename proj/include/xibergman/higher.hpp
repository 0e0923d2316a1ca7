#pragma once

// Higher-order kernels K^{H,p} for a homogeneous polynomial H of degree k,
// the affine family S_H of functionals, and the identity
//   K^{H,p}(z) = min_{xi in S_H} K_{xi,p}(z)
// computed both directly and as an outer minimization over S_H.

#include <xibergman/algebra.hpp>
#include <xibergman/kernels.hpp>
#include <xibergman/pspace.hpp>
#include <xibergman/solver.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace xibergman {

/// H(z) = sum_{|alpha| = k} a_alpha z^alpha.
class HomogeneousPolynomial {
public:
  using Terms = std::map<MultiIndex, cplx, PrecLess>;

  HomogeneousPolynomial() = default;
  HomogeneousPolynomial(std::size_t n, Terms terms) : dimension_(n) {
    for (auto& [alpha, a] : terms) {
      require_same_dimension(n, alpha.dimension(), "HomogeneousPolynomial");
      if (a == cplx(0.0)) continue;
      if (degree_ < 0) degree_ = alpha.degree();
      if (alpha.degree() != degree_) throw std::invalid_argument("HomogeneousPolynomial: mixed degrees");
      terms_[alpha] = a;
    }
    if (terms_.empty()) throw std::invalid_argument("HomogeneousPolynomial: needs a nonzero coefficient");
  }

  static HomogeneousPolynomial monomial(const MultiIndex& alpha, cplx a = 1.0) {
    return HomogeneousPolynomial(alpha.dimension(), {{alpha, a}});
  }
  /// H = 1 in n variables.
  static HomogeneousPolynomial one(std::size_t n) { return monomial(MultiIndex::zero(n)); }

  std::size_t dimension() const { return dimension_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }

  /// xi_alpha = a_alpha alpha!, so that (xi . f)(z) = P_H(f)(z) = sum a_alpha D^alpha f(z).
  Functional top_functional() const {
    Functional xi(dimension_);
    for (const auto& [alpha, a] : terms_) xi.set(alpha, a * alpha.factorial());
    return xi;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [alpha, a] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(a.real()) + (a.imag() != 0.0 ? "," + std::to_string(a.imag()) : "") + ")";
      for (std::size_t j = 0; j < dimension_; ++j) {
        if (alpha[j] > 0) s += " z" + std::to_string(j + 1) + (alpha[j] > 1 ? "^" + std::to_string(alpha[j]) : "");
      }
    }
    return s;
  }

private:
  std::size_t dimension_ = 0;
  int degree_ = -1;
  Terms terms_;
};

/// P_H(f)(z) = sum_{|alpha| = k} a_alpha (D^alpha f)(z).
inline cplx apply_PH(const HomogeneousPolynomial& H, const PolyCoeffs& f, std::span<const cplx> z) {
  require_same_dimension(H.dimension(), f.dimension(), "apply_PH");
  return functional_apply(H.top_functional(), f, z);
}

/// Functionals agreeing with eta off a finite index set E0 (where eta vanishes);
/// a member is eta plus a free complex vector over E0.
class FunctionalFamily {
public:
  FunctionalFamily(Functional eta, std::vector<MultiIndex> free) : eta_(std::move(eta)), free_(std::move(free)) {
    std::sort(free_.begin(), free_.end(), PrecLess{});
    free_.erase(std::unique(free_.begin(), free_.end()), free_.end());
    for (const auto& alpha : free_) {
      require_same_dimension(eta_.dimension(), alpha.dimension(), "FunctionalFamily");
      if (eta_.coefficient(alpha) != cplx(0.0)) {
        throw std::invalid_argument("FunctionalFamily: eta must vanish on the free set, index " + alpha.to_string());
      }
    }
    eta_.require_nonzero("FunctionalFamily");
  }

  /// S_H: fixed top part a_alpha alpha!, free below degree k, zero above.
  static FunctionalFamily for_H(const HomogeneousPolynomial& H) {
    const int k = H.degree();
    return FunctionalFamily(H.top_functional(),
                            k > 0 ? enumerate_total_degree(H.dimension(), k - 1) : std::vector<MultiIndex>{});
  }

  const Functional& eta() const { return eta_; }
  const std::vector<MultiIndex>& free_indices() const { return free_; }
  std::size_t free_dimension() const { return free_.size(); }
  std::size_t dimension() const { return eta_.dimension(); }

  Functional member(const std::vector<cplx>& free_part) const {
    if (free_part.size() != free_.size()) throw std::invalid_argument("FunctionalFamily::member: wrong size");
    Functional xi = eta_;
    for (std::size_t i = 0; i < free_.size(); ++i) xi.set(free_[i], free_part[i]);
    return xi;
  }

  std::vector<cplx> free_part(const Functional& xi) const {
    std::vector<cplx> v;
    v.reserve(free_.size());
    for (const auto& alpha : free_) v.push_back(xi.coefficient(alpha));
    return v;
  }

  bool contains(const Functional& xi, double tol = 0.0) const {
    if (xi.dimension() != dimension()) return false;
    auto is_free = [&](const MultiIndex& a) { return std::binary_search(free_.begin(), free_.end(), a, PrecLess{}); };
    for (const auto& [alpha, c] : xi.terms()) {
      if (!is_free(alpha) && std::abs(c - eta_.coefficient(alpha)) > tol) return false;
    }
    for (const auto& [alpha, c] : eta_.terms()) {
      if (std::abs(c - xi.coefficient(alpha)) > tol) return false;
    }
    return true;
  }

private:
  Functional eta_;
  std::vector<MultiIndex> free_;
};

/// min ||f||_p subject to D^alpha f(z) = 0 for alpha in E0 and (eta . f)(z) = 1.
inline KernelEvaluation partition_kernel_direct(const PolySpace& space, const FunctionalFamily& family,
                                                std::span<const cplx> z, double p, const SolverOptions& opts = {}) {
  detail::check_kernel_inputs(space, family.eta(), z, p);
  const auto& E0 = family.free_indices();
  const auto m = static_cast<Eigen::Index>(E0.size());
  Eigen::MatrixXcd rows(m + 1, static_cast<Eigen::Index>(space.size()));
  for (Eigen::Index i = 0; i < m; ++i) rows.row(i) = space.taylor_row(z, E0[static_cast<std::size_t>(i)]);
  rows.row(m) = space.functional_row(family.eta(), z);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m + 1);
  rhs(m) = 1.0;
  LpSolution sol;
  try {
    sol = detail::solve_raw(space, rows, rhs, p, opts, std::nullopt);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string("higher kernel: constraints infeasible in the truncated space (") + e.what() +
                          ")");
  }
  KernelEvaluation ev = detail::finish_evaluation(space, family.eta(), z, p, sol);
  double jet = 0.0;
  for (const auto& beta : E0) jet = std::max(jet, std::abs(ev.minimizer.taylor(z, beta)));
  ev.diagnostics.constraint_residual = std::max(ev.diagnostics.constraint_residual, jet);
  return ev;
}

/// K^{H,p}(z): vanishing (k-1)-jet at z and P_H(f)(z) = 1.
inline KernelEvaluation higher_kernel_direct(const PolySpace& space, const HomogeneousPolynomial& H,
                                             std::span<const cplx> z, double p, const SolverOptions& opts = {}) {
  require_same_dimension(space.dimension(), H.dimension(), "higher_kernel_direct");
  if (H.degree() > space.max_degree() && !space.is_laurent()) {
    throw InfeasibleError("higher kernel: deg H = " + std::to_string(H.degree()) + " exceeds truncation degree " +
                          std::to_string(space.max_degree()));
  }
  return partition_kernel_direct(space, FunctionalFamily::for_H(H), z, p, opts);
}

struct NelderMeadOptions {
  int max_evaluations = 4000;
  double f_tolerance = 1e-11;  // relative spread of simplex values
  double x_tolerance = 1e-7;   // simplex diameter
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Nelder-Mead (dimension-dependent coefficients).
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                    std::vector<double> x0, const NelderMeadOptions& opts = {}) {
  const std::size_t d = x0.size();
  NelderMeadResult res;
  if (d == 0) {
    res.x = x0;
    res.f = fn(x0);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }
  const double dd = static_cast<double>(d);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dd, gamma = 0.75 - 0.5 / dd, delta = 1.0 - 1.0 / dd;
  std::vector<std::vector<double>> simplex(d + 1, x0);
  std::vector<double> values(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    const double h = opts.initial_step * std::max(1.0, std::abs(x0[i]));
    simplex[i + 1][i] += h;
  }
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = fn(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i <= d; ++i) values[i] = eval(simplex[i]);
  std::vector<std::size_t> order(d + 1);
  auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> r(d);
    for (std::size_t j = 0; j < d; ++j) r[j] = c[j] + t * (w[j] - c[j]);
    return r;
  };
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
    double diam = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s = std::max(s, std::abs(simplex[i][j] - simplex[best][j]));
      diam = std::max(diam, s);
    }
    const double spread = std::abs(values[worst] - values[best]);
    if (spread <= opts.f_tolerance * std::max(1e-300, std::abs(values[best])) && diam <= opts.x_tolerance) {
      res.converged = true;
      break;
    }
    if (evals >= opts.max_evaluations) break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / dd;
    }
    const auto xr = point(centroid, simplex[worst], -alpha);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const auto xe = point(centroid, simplex[worst], -alpha * beta);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto xc = outside ? point(centroid, simplex[worst], -alpha * gamma) : point(centroid, simplex[worst], gamma);
    const double fc = eval(xc);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      simplex[i] = point(simplex[best], simplex[i], delta);
      values[i] = eval(simplex[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (values[i] < values[best]) best = i;
  res.x = simplex[best];
  res.f = values[best];
  res.evaluations = evals;
  return res;
}

/// The p = 2 minimizer over the family by least squares in the jet-adapted
/// orthonormal basis: K_{xi,2}(z) = sum_a |c_a(xi)|^2 with c affine in the free part.
inline Functional minimizing_xi_p2(const PolySpace& space, const FunctionalFamily& family, std::span<const cplx> z) {
  if (family.free_dimension() == 0) return family.eta();
  const Eigen::RowVectorXcd c0 = space.to_ortho(space.functional_row(family.eta(), z));
  const auto& E0 = family.free_indices();
  Eigen::MatrixXcd A(c0.size(), static_cast<Eigen::Index>(E0.size()));
  for (std::size_t i = 0; i < E0.size(); ++i) {
    A.col(static_cast<Eigen::Index>(i)) = space.to_ortho(space.taylor_row(z, E0[i])).transpose();
  }
  const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(-c0.transpose());
  std::vector<cplx> free(E0.size());
  for (std::size_t i = 0; i < E0.size(); ++i) free[i] = x(static_cast<Eigen::Index>(i));
  return family.member(free);
}

/// xi* in S_H with K_{xi*,2}(z) = K^{H,2}(z): the triangular system
/// c_alpha(xi) = 0 for |alpha| <= k - 1 in the jet-adapted basis at z.
inline Functional minimizing_xi_p2(const PolySpace& space, const HomogeneousPolynomial& H, std::span<const cplx> z) {
  require_same_dimension(space.dimension(), H.dimension(), "minimizing_xi_p2");
  const FunctionalFamily family = FunctionalFamily::for_H(H);
  const auto& free = family.free_indices();
  if (free.empty()) return family.eta();
  if (space.is_laurent()) return minimizing_xi_p2(space, family, z);
  if (H.degree() > space.max_degree()) throw InfeasibleError("minimizing_xi_p2: deg H exceeds truncation degree");
  const OrthonormalBasis onb = orthonormal_basis(space, z, free.size());
  // In graded order the free set {|alpha| < k} is a prefix of E, and jets(b, a) = 0 for b < a.
  const auto m = static_cast<Eigen::Index>(free.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(onb.indices[static_cast<std::size_t>(i)] == free[static_cast<std::size_t>(i)])) {
      throw std::logic_error("minimizing_xi_p2: index sets out of order");
    }
  }
  Eigen::MatrixXcd M(m, m);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) M(a, b) = onb.jets(b, a);
    for (const auto& [beta, xb] : family.eta().terms()) {
      const Eigen::RowVectorXcd row = space.taylor_row(z, beta) * onb.transform;
      rhs(a) -= xb * row(a);
    }
  }
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < m; ++a) {
    dmax = std::max(dmax, std::abs(M(a, a)));
    dmin = std::min(dmin, std::abs(M(a, a)));
  }
  if (!(dmin > 1e-14 * dmax)) throw std::logic_error("minimizing_xi_p2: singular triangular system");
  const Eigen::VectorXcd x = M.triangularView<Eigen::Upper>().solve(rhs);
  std::vector<cplx> fp(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) fp[i] = x(static_cast<Eigen::Index>(i));
  return family.member(fp);
}

struct LocalMinimum {
  Functional xi;
  double K = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct InfResult {
  double K = 0.0;
  Functional xi_star;
  double direct_K = 0.0;  // partition_kernel_direct, for the lower-bound assertion
  int evaluations = 0;
  bool converged = false;
  std::vector<LocalMinimum> local_minima;  // one per seed
  std::vector<std::string> flags;
};

struct InfOptions {
  SolverOptions inner;
  NelderMeadOptions outer;
  /// Relative slack for K >= direct - tol.
  double tolerance = 1e-6;
};

/// min over the family of K_{xi,p}(z) by Nelder-Mead over real and imaginary
/// parts of the free coordinates, seeded at 0 and at the p = 2 minimizer.
inline InfResult partition_kernel_via_inf(const PolySpace& space, const FunctionalFamily& family,
                                          std::span<const cplx> z, double p, const InfOptions& opts = {}) {
  if (!(p >= 1.0)) throw std::invalid_argument("via-inf route requires p >= 1");
  const std::size_t m = family.free_dimension();
  InfResult out;
  out.K = std::numeric_limits<double>::infinity();
  auto to_free = [&](const std::vector<double>& x) {
    std::vector<cplx> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = cplx(x[2 * i], x[2 * i + 1]);
    return v;
  };
  // At p = 2 the inner value is sum_a |c_a(xi)|^2 in an orthonormal basis,
  // with c affine in the free coordinates.
  std::optional<Eigen::RowVectorXcd> c_eta;
  std::vector<Eigen::RowVectorXcd> c_free;
  if (p == 2.0) {
    c_eta = space.to_ortho(space.functional_row(family.eta(), z));
    for (const auto& alpha : family.free_indices()) c_free.push_back(space.to_ortho(space.taylor_row(z, alpha)));
  }
  // Warm start each inner solve from the previous minimizer (projected onto the new slice).
  std::optional<Eigen::VectorXcd> warm;
  auto objective = [&](const std::vector<double>& x) {
    if (c_eta) {
      Eigen::RowVectorXcd c = *c_eta;
      for (std::size_t i = 0; i < m; ++i) c += cplx(x[2 * i], x[2 * i + 1]) * c_free[i];
      return c.squaredNorm();
    }
    const Functional xi = family.member(to_free(x));
    SolverOptions inner = opts.inner;
    if (warm && !inner.start) inner.start = space.ortho_r().triangularView<Eigen::Upper>() * (*warm);
    try {
      const KernelEvaluation ev = kernelp_diagonal(space, xi, z, p, inner);
      warm = ev.minimizer.coeffs();
      return ev.K;
    } catch (const KernelZeroError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const InfeasibleError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(2 * m, 0.0);
  if (m > 0) {
    const Functional xi2 = minimizing_xi_p2(space, family, z);
    std::vector<double> s(2 * m);
    const auto fp = family.free_part(xi2);
    for (std::size_t i = 0; i < m; ++i) {
      s[2 * i] = fp[i].real();
      s[2 * i + 1] = fp[i].imag();
    }
    if (s != seeds.front()) seeds.push_back(std::move(s));
  }
  NelderMeadOptions nm = opts.outer;
  double eta_scale = 0.0;
  for (const auto& [alpha, c] : family.eta().terms()) eta_scale = std::max(eta_scale, std::abs(c));
  nm.initial_step *= eta_scale;
  out.converged = true;
  for (const auto& seed : seeds) {
    const NelderMeadResult r = nelder_mead(objective, seed, nm);
    LocalMinimum lm{family.member(to_free(r.x)), r.f, r.evaluations, r.converged};
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
    if (r.f < out.K) {
      out.K = r.f;
      out.xi_star = lm.xi;
    }
    out.local_minima.push_back(std::move(lm));
  }
  if (!out.converged) out.flags.push_back("outer-not-converged");
  out.direct_K = partition_kernel_direct(space, family, z, p, opts.inner).K;
  if (out.K < out.direct_K * (1.0 - opts.tolerance)) out.flags.push_back("below-direct");
  return out;
}

inline InfResult higher_kernel_via_inf(const PolySpace& space, const HomogeneousPolynomial& H, std::span<const cplx> z,
                                       double p, const InfOptions& opts = {}) {
  require_same_dimension(space.dimension(), H.dimension(), "higher_kernel_via_inf");
  return partition_kernel_via_inf(space, FunctionalFamily::for_H(H), z, p, opts);
}

}  // namespace xibergman
