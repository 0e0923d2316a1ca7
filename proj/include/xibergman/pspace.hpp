#pragma once

// Finite-dimensional surrogate of A^p(Omega): polynomials of bounded degree
// (Laurent band on the annulus) sampled at quadrature nodes.

#include <xibergman/algebra.hpp>
#include <xibergman/domains.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace xibergman {

class RankError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Truncation {
  automatic,     // Laurent on annuli, total degree elsewhere
  total_degree,  // |alpha| <= D
  per_axis,      // alpha_j <= D for every j
  laurent,       // z^j, -D <= j <= D (n = 1)
};

inline constexpr double kGramConditionLimit = 1e12;

inline int default_degree(std::size_t n) {
  switch (n) {
    case 1: return 16;
    case 2: return 10;
    default: return 6;
  }
}

class PolySpace;
using SpacePtr = std::shared_ptr<const PolySpace>;

/// Element of a PolySpace: coefficients against the space's raw basis.
class SpaceFunction {
public:
  SpaceFunction() = default;
  SpaceFunction(SpacePtr space, Eigen::VectorXcd coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {}

  const SpacePtr& space() const { return space_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  cplx value(std::span<const cplx> z) const;
  /// Taylor coefficient of index beta at z, i.e. D^beta f(z) / beta!.
  cplx taylor(std::span<const cplx> z, const MultiIndex& beta) const;
  cplx apply(const Functional& xi, std::span<const cplx> z) const;
  Eigen::VectorXcd node_values() const;
  double lp_norm(double p) const;
  /// Monomial coefficients about the space center; throws for Laurent spaces.
  PolyCoeffs to_poly() const;

  SpaceFunction operator*(cplx s) const { return SpaceFunction(space_, coeffs_ * s); }

private:
  SpacePtr space_;
  Eigen::VectorXcd coeffs_;
};

class PolySpace : public std::enable_shared_from_this<PolySpace> {
  struct Private {};

public:
  PolySpace(Private, Domain domain, int max_degree, Truncation trunc, QuadOrders orders)
      : domain_(std::move(domain)), max_degree_(max_degree), orders_(orders) {
    const std::size_t n = domain_.dimension();
    if (max_degree_ < 0) throw std::invalid_argument("PolySpace: degree must be non-negative");
    if (trunc == Truncation::automatic) trunc = domain_.is<Annulus>() ? Truncation::laurent : Truncation::total_degree;
    if (trunc == Truncation::laurent && n != 1) throw std::invalid_argument("PolySpace: Laurent band requires n = 1");
    if (trunc != Truncation::laurent && domain_.is<Annulus>()) {
      throw std::invalid_argument("PolySpace: annulus requires the Laurent band");
    }
    if (domain_.is<Product>()) {
      for (const auto& f : domain_.as<Product>().factors) {
        if (f.is<Annulus>()) throw std::invalid_argument("PolySpace: annulus factors are not supported");
      }
    }
    truncation_ = trunc;
    center_ = domain_.center();
    scales_ = domain_.axis_scales();
    if (trunc == Truncation::laurent) {
      for (int j = -max_degree_; j <= max_degree_; ++j) exponents_.push_back(j);
      jet_indices_ = enumerate_total_degree(1, 2 * max_degree_);
    } else {
      basis_ = trunc == Truncation::total_degree ? enumerate_total_degree(n, max_degree_)
                                                 : enumerate_per_axis(n, max_degree_);
      jet_indices_ = basis_;
    }
    quadrature_ = build_quadrature(domain_, orders_);
    build_cache();
  }

  static SpacePtr create(Domain domain, int max_degree = -1, Truncation trunc = Truncation::automatic,
                         std::optional<QuadOrders> orders = std::nullopt) {
    const std::size_t n = domain.dimension();
    if (max_degree < 0) max_degree = default_degree(n);
    return std::make_shared<const PolySpace>(Private{}, std::move(domain), max_degree, trunc,
                                             orders.value_or(QuadOrders::defaults(n)));
  }

  const Domain& domain() const { return domain_; }
  const Quadrature& quadrature() const { return quadrature_; }
  std::size_t dimension() const { return domain_.dimension(); }
  int max_degree() const { return max_degree_; }
  Truncation truncation() const { return truncation_; }
  bool is_laurent() const { return truncation_ == Truncation::laurent; }
  const Point& center() const { return center_; }
  const std::vector<double>& scales() const { return scales_; }
  QuadOrders orders() const { return orders_; }
  std::size_t size() const { return is_laurent() ? exponents_.size() : basis_.size(); }
  /// Monomial indices in graded order (empty for Laurent spaces).
  const std::vector<MultiIndex>& basis() const { return basis_; }
  const std::vector<int>& laurent_exponents() const { return exponents_; }
  /// Jet indices that determine an element of the space at any interior point.
  const std::vector<MultiIndex>& jet_indices() const { return jet_indices_; }
  /// Polynomials need not be dense in A^p of an arbitrary weighted cloud.
  bool unverified_density() const { return domain_.is<Cloud>(); }

  /// Basis values at the quadrature nodes (#nodes x #basis).
  const Eigen::MatrixXcd& node_values() const { return values_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  /// Discrete-L^2-orthonormal basis at the nodes: ortho = values * R^{-1}.
  const Eigen::MatrixXcd& ortho_values() const { return ortho_values_; }
  const Eigen::MatrixXcd& ortho_r() const { return ortho_r_; }
  /// A raw-basis row functional in orthonormal coordinates: row * R^{-1}.
  Eigen::RowVectorXcd to_ortho(const Eigen::RowVectorXcd& row) const {
    return ortho_r_.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(row);
  }
  /// Raw coefficients of sum_a c_a psi_a: R^{-1} c.
  Eigen::VectorXcd from_ortho(const Eigen::VectorXcd& c) const { return ortho_r_.triangularView<Eigen::Upper>().solve(c); }
  double gram_condition() const { return gram_condition_; }

  std::string describe() const {
    std::string t = is_laurent() ? "laurent" : truncation_ == Truncation::per_axis ? "per-axis" : "total-degree";
    return domain_.kind() + "/" + t + "/D=" + std::to_string(max_degree_);
  }

  /// phi_i(z) for every basis function.
  Eigen::RowVectorXcd basis_values(std::span<const cplx> z) const {
    require_same_dimension(dimension(), z.size(), "PolySpace::basis_values");
    Eigen::RowVectorXcd row(size());
    if (is_laurent()) {
      const cplx u = z[0] / scales_[0];
      for (std::size_t i = 0; i < exponents_.size(); ++i) row(i) = std::pow(u, exponents_[i]);
      return row;
    }
    const std::size_t n = dimension();
    std::vector<std::vector<cplx>> powers(n, std::vector<cplx>(max_degree_ + 1));
    for (std::size_t j = 0; j < n; ++j) {
      const cplx u = (z[j] - center_[j]) / scales_[j];
      powers[j][0] = 1.0;
      for (int k = 1; k <= max_degree_; ++k) powers[j][k] = powers[j][k - 1] * u;
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      cplx v = 1.0;
      for (std::size_t j = 0; j < n; ++j) v *= powers[j][basis_[i][j]];
      row(i) = v;
    }
    return row;
  }

  /// Row of Taylor coefficients D^beta phi_i(z) / beta!.
  Eigen::RowVectorXcd taylor_row(std::span<const cplx> z, const MultiIndex& beta) const {
    require_same_dimension(dimension(), z.size(), "PolySpace::taylor_row");
    require_same_dimension(dimension(), beta.dimension(), "PolySpace::taylor_row");
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(size());
    if (is_laurent()) {
      const double s = scales_[0];
      const cplx u = z[0] / s;
      const int b = beta[0];
      for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const int e = exponents_[i];
        const double c = binomial(e, b);
        if (c != 0.0) row(i) = c * std::pow(u, e - b) / std::pow(s, b);
      }
      return row;
    }
    const std::size_t n = dimension();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const MultiIndex& a = basis_[i];
      if (!a.dominates(beta)) continue;
      cplx v = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const cplx u = (z[j] - center_[j]) / scales_[j];
        v *= binomial(a[j], beta[j]) * std::pow(u, a[j] - beta[j]) / std::pow(scales_[j], beta[j]);
      }
      row(i) = v;
    }
    return row;
  }

  /// Row b with (xi . f)(z) = b * coeffs(f).
  Eigen::RowVectorXcd functional_row(const Functional& xi, std::span<const cplx> z) const {
    require_same_dimension(dimension(), xi.dimension(), "PolySpace::functional_row");
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(size());
    for (const auto& [beta, c] : xi.terms()) row += c * taylor_row(z, beta);
    return row;
  }

  /// Index of the raw basis function equal to (z - center)^alpha up to scaling, or -1.
  int monomial_position(const MultiIndex& alpha) const {
    if (is_laurent()) {
      const int e = alpha[0];
      return e <= max_degree_ ? e + max_degree_ : -1;
    }
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == alpha) return static_cast<int>(i);
    return -1;
  }

  /// Embeds a polynomial; throws if it does not fit the truncation.
  SpaceFunction from_poly(const PolyCoeffs& f) const {
    require_same_dimension(dimension(), f.dimension(), "PolySpace::from_poly");
    const PolyCoeffs g = taylor_shift(f, center_);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(size());
    for (const auto& [alpha, a] : g.terms()) {
      const int pos = monomial_position(alpha);
      if (pos < 0) throw std::invalid_argument("PolySpace: degree overflow for index " + alpha.to_string());
      double scale = 1.0;
      for (std::size_t j = 0; j < dimension(); ++j) scale *= std::pow(scales_[j], alpha[j]);
      c(pos) = a * scale;
    }
    return SpaceFunction(shared_from_this(), std::move(c));
  }

  SpaceFunction make(Eigen::VectorXcd coeffs) const {
    if (static_cast<std::size_t>(coeffs.size()) != size()) throw std::invalid_argument("PolySpace::make: wrong size");
    return SpaceFunction(shared_from_this(), std::move(coeffs));
  }

  SpacePtr ptr() const { return shared_from_this(); }

private:
  void build_cache() {
    const std::size_t N = quadrature_.size();
    values_.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(size()));
    weights_.resize(static_cast<Eigen::Index>(N));
    for (std::size_t q = 0; q < N; ++q) {
      values_.row(static_cast<Eigen::Index>(q)) = basis_values(quadrature_.node(q));
      weights_(static_cast<Eigen::Index>(q)) = quadrature_.weights()[q];
    }
    const Eigen::MatrixXcd weighted = weights_.cwiseSqrt().asDiagonal() * values_;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(weighted);
    ortho_r_ = qr.matrixQR().topRows(static_cast<Eigen::Index>(size())).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(ortho_r_).singularValues();
    const double smin = sv(sv.size() - 1);
    gram_condition_ = smin > 0.0 ? (sv(0) / smin) * (sv(0) / smin) : std::numeric_limits<double>::infinity();
    if (!(gram_condition_ <= kGramConditionLimit)) {
      throw RankError("PolySpace " + describe() + ": Gram condition estimate " + std::to_string(gram_condition_) +
                      " exceeds limit");
    }
    ortho_values_ = ortho_r_.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(values_);
  }

  Domain domain_;
  int max_degree_ = 0;
  QuadOrders orders_;
  Truncation truncation_ = Truncation::total_degree;
  Point center_;
  std::vector<double> scales_;
  std::vector<MultiIndex> basis_;
  std::vector<int> exponents_;
  std::vector<MultiIndex> jet_indices_;
  Quadrature quadrature_;
  Eigen::MatrixXcd values_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXcd ortho_values_;
  Eigen::MatrixXcd ortho_r_;
  double gram_condition_ = 0.0;
};

inline cplx SpaceFunction::value(std::span<const cplx> z) const { return (space_->basis_values(z) * coeffs_)(0); }

inline cplx SpaceFunction::taylor(std::span<const cplx> z, const MultiIndex& beta) const {
  return (space_->taylor_row(z, beta) * coeffs_)(0);
}

inline cplx SpaceFunction::apply(const Functional& xi, std::span<const cplx> z) const {
  return (space_->functional_row(xi, z) * coeffs_)(0);
}

inline Eigen::VectorXcd SpaceFunction::node_values() const { return space_->node_values() * coeffs_; }

inline double SpaceFunction::lp_norm(double p) const {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  const Eigen::VectorXcd v = node_values();
  double s = 0.0;
  for (Eigen::Index q = 0; q < v.size(); ++q) s += space_->weights()(q) * std::pow(std::abs(v(q)), p);
  return std::pow(s, 1.0 / p);
}

inline PolyCoeffs SpaceFunction::to_poly() const {
  if (space_->is_laurent()) throw std::logic_error("SpaceFunction::to_poly: Laurent space");
  PolyCoeffs out(space_->center(), space_->truncation() == Truncation::per_axis
                                       ? space_->max_degree() * static_cast<int>(space_->dimension())
                                       : space_->max_degree());
  const auto& basis = space_->basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double scale = 1.0;
    for (std::size_t j = 0; j < space_->dimension(); ++j) scale *= std::pow(space_->scales()[j], basis[i][j]);
    out.set(basis[i], coeffs_(static_cast<Eigen::Index>(i)) / scale);
  }
  return out;
}

/// (sum_q w_q |f(x_q)|^p)^{1/p}.
inline double lp_norm(const PolyCoeffs& f, const PolySpace& space, double p) {
  return space.from_poly(f).lp_norm(p);
}

/// G[i][j] = sum_q w_q phi_i(x_q) conj(phi_j(x_q)); throws RankError when ill-conditioned.
inline Eigen::MatrixXcd gram_matrix(const PolySpace& space) {
  const auto& A = space.node_values();
  Eigen::MatrixXcd G = A.transpose() * space.weights().asDiagonal() * A.conjugate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.adjoint());
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kGramConditionLimit) {
    throw RankError("gram_matrix: condition estimate exceeds limit");
  }
  return G;
}

/// Orthonormal basis adapted to the jet filtration at z0: sigma_alpha vanishes
/// to order alpha (every Taylor coefficient of index beta < alpha is zero) and
/// has a positive real coefficient at alpha.
struct OrthonormalBasis {
  SpacePtr space;
  Point z0;
  std::vector<MultiIndex> indices;  // E, graded order
  Eigen::MatrixXcd transform;       // column a: sigma_a in the raw basis
  Eigen::MatrixXcd jets;            // jets(b, a) = Taylor coefficient of sigma_a at index E_b

  std::size_t size() const { return indices.size(); }
  SpaceFunction sigma(std::size_t a) const { return space->make(transform.col(static_cast<Eigen::Index>(a))); }

  /// Discrete L^2 Gram of the returned basis.
  Eigen::MatrixXcd gram() const {
    const Eigen::MatrixXcd V = space->node_values() * transform;
    return V.adjoint() * space->weights().asDiagonal() * V;
  }
};

/// Starts from the discrete orthonormal coordinates and rotates them with the
/// Householder QR of the adjoint jet matrix, J^H = Q R, so that J Q = R^H is
/// lower triangular: sigma_a only has Taylor coefficients at E_b for b >= a.
/// Only the first `required` jets are checked for rank loss (all by default);
/// later diagonal entries may be dominated by rounding.
inline OrthonormalBasis orthonormal_basis(const PolySpace& space, std::span<const cplx> z0,
                                          std::size_t required = std::numeric_limits<std::size_t>::max()) {
  if (!contains(space.domain(), z0)) throw std::invalid_argument("orthonormal_basis: z0 outside domain");
  const auto& E = space.jet_indices();
  const auto nb = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXcd J(nb, nb);
  for (Eigen::Index r = 0; r < nb; ++r) J.row(r) = space.taylor_row(z0, E[static_cast<std::size_t>(r)]);
  const auto Rinv = space.ortho_r().triangularView<Eigen::Upper>();
  // Rows of J in orthonormal coordinates: J R^{-1}.
  const Eigen::MatrixXcd Js = Rinv.solve<Eigen::OnTheRight>(J);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Js.adjoint());
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(nb, nb);
  Eigen::MatrixXcd T = Js * Q;
  const auto checked = static_cast<Eigen::Index>(std::min<std::size_t>(required, space.size()));
  for (Eigen::Index r = 0; r < nb; ++r) {
    const cplx d = T(r, r);
    if (r < checked && !(std::abs(d) > 1e-14 * Js.row(r).norm())) {
      throw RankError("orthonormal_basis: numerical rank loss at index " + E[static_cast<std::size_t>(r)].to_string());
    }
    const cplx phase = std::abs(d) > 0.0 ? std::conj(d) / std::abs(d) : cplx(1.0);
    Q.col(r) *= phase;
    T.col(r) *= phase;
    for (Eigen::Index b = 0; b < r; ++b) T(b, r) = 0.0;
  }
  OrthonormalBasis out;
  out.space = space.ptr();
  out.z0.assign(z0.begin(), z0.end());
  out.indices = E;
  out.transform = Rinv.solve(Q);
  out.jets = T;
  return out;
}

}  // namespace xibergman
