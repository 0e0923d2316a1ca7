#pragma once

// Bounded model domains in C^n and their product quadratures.

#include <xibergman/algebra.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace xibergman {

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

/// Gauss-Legendre mapped to [a, b].
inline GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule r = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = 0.5 * (b - a) * r.x[i] + 0.5 * (b + a);
    r.w[i] *= 0.5 * (b - a);
  }
  return r;
}

}  // namespace detail

/// Lebesgue-measure quadrature: node q occupies nodes[q*n .. q*n+n).
class Quadrature {
public:
  Quadrature() = default;
  Quadrature(std::size_t n, std::vector<cplx> nodes, std::vector<double> weights, int radial, int angular)
      : dimension_(n), nodes_(std::move(nodes)), weights_(std::move(weights)), radial_order_(radial),
        angular_order_(angular) {
    if (nodes_.size() != weights_.size() * dimension_) throw std::invalid_argument("Quadrature: size mismatch");
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const cplx> node(std::size_t q) const { return {nodes_.data() + q * dimension_, dimension_}; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<cplx>& flat_nodes() const { return nodes_; }
  int radial_order() const { return radial_order_; }
  int angular_order() const { return angular_order_; }

  double volume() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  /// Tensor product: nodes (x, y) with weight w_x * w_y.
  friend Quadrature tensor(const Quadrature& a, const Quadrature& b, std::size_t cap) {
    const std::size_t total = a.size() * b.size();
    if (total > cap) {
      throw DomainError("tensor quadrature: " + std::to_string(total) + " nodes exceeds cap " + std::to_string(cap));
    }
    const std::size_t n = a.dimension_ + b.dimension_;
    std::vector<cplx> nodes;
    nodes.reserve(total * n);
    std::vector<double> w;
    w.reserve(total);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        auto x = a.node(i);
        auto y = b.node(j);
        nodes.insert(nodes.end(), x.begin(), x.end());
        nodes.insert(nodes.end(), y.begin(), y.end());
        w.push_back(a.weights_[i] * b.weights_[j]);
      }
    }
    return Quadrature(n, std::move(nodes), std::move(w), std::min(a.radial_order_, b.radial_order_),
                      std::min(a.angular_order_, b.angular_order_));
  }

private:
  std::size_t dimension_ = 0;
  std::vector<cplx> nodes_;
  std::vector<double> weights_;
  int radial_order_ = 0;
  int angular_order_ = 0;
};

struct Disk {
  double radius = 1.0;
  cplx center = 0.0;
};

struct Polydisc {
  std::vector<double> radii;
  Point center;
};

struct Ball {
  double radius = 1.0;
  Point center;
};

struct Annulus {
  double r_inner = 0.5;
  double r_outer = 1.0;
};

struct Cloud {
  std::size_t dimension = 1;
  std::vector<cplx> nodes;  // row-major, dimension entries per node
  std::vector<double> weights;
};

class Domain;

struct Product {
  std::vector<Domain> factors;
};

/// Default quadrature orders per dimension: radial 32 / angular 64 for n = 1.
struct QuadOrders {
  int radial = 32;
  int angular = 64;

  static QuadOrders defaults(std::size_t n) {
    switch (n) {
      case 1: return {32, 64};
      case 2: return {12, 24};
      default: return {7, 8};
    }
  }
};

inline constexpr std::size_t kMaxQuadratureNodes = 5'000'000;

class Domain {
public:
  using Shape = std::variant<Disk, Polydisc, Ball, Annulus, Cloud, Product>;

  Domain() : shape_(Disk{}) {}
  Domain(Shape s) : shape_(std::move(s)) { validate(); }

  static Domain disk(double r = 1.0, cplx c = 0.0) { return Domain(Disk{r, c}); }
  static Domain polydisc(std::vector<double> radii, Point center = {}) {
    if (center.empty()) center.assign(radii.size(), 0.0);
    return Domain(Polydisc{std::move(radii), std::move(center)});
  }
  static Domain ball(std::size_t n, double r = 1.0, Point center = {}) {
    if (center.empty()) center.assign(n, 0.0);
    return Domain(Ball{r, std::move(center)});
  }
  static Domain annulus(double r_in, double r_out) { return Domain(Annulus{r_in, r_out}); }
  static Domain cloud(std::size_t n, std::vector<cplx> nodes, std::vector<double> weights) {
    return Domain(Cloud{n, std::move(nodes), std::move(weights)});
  }

  const Shape& shape() const { return shape_; }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(shape_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(shape_);
  }

  std::string kind() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk>) return "disk";
          else if constexpr (std::is_same_v<S, Polydisc>) return "polydisc";
          else if constexpr (std::is_same_v<S, Ball>) return "ball";
          else if constexpr (std::is_same_v<S, Annulus>) return "annulus";
          else if constexpr (std::is_same_v<S, Cloud>) return "cloud";
          else return "product";
        },
        shape_);
  }

  std::size_t dimension() const {
    return std::visit(
        [](const auto& s) -> std::size_t {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk> || std::is_same_v<S, Annulus>) return 1;
          else if constexpr (std::is_same_v<S, Polydisc>) return s.radii.size();
          else if constexpr (std::is_same_v<S, Ball>) return s.center.size();
          else if constexpr (std::is_same_v<S, Cloud>) return s.dimension;
          else {
            std::size_t n = 0;
            for (const auto& f : s.factors) n += f.dimension();
            return n;
          }
        },
        shape_);
  }

  /// Center used for polynomial bases (centroid for clouds).
  Point center() const {
    return std::visit(
        [this](const auto& s) -> Point {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk>) return {s.center};
          else if constexpr (std::is_same_v<S, Polydisc> || std::is_same_v<S, Ball>) return s.center;
          else if constexpr (std::is_same_v<S, Annulus>) return {cplx(0.0)};
          else if constexpr (std::is_same_v<S, Cloud>) {
            Point c(s.dimension, 0.0);
            double wsum = 0.0;
            for (std::size_t q = 0; q < s.weights.size(); ++q) {
              for (std::size_t j = 0; j < s.dimension; ++j) c[j] += s.weights[q] * s.nodes[q * s.dimension + j];
              wsum += s.weights[q];
            }
            for (auto& v : c) v /= wsum;
            return c;
          } else {
            Point c;
            for (const auto& f : s.factors) {
              auto fc = f.center();
              c.insert(c.end(), fc.begin(), fc.end());
            }
            (void)this;
            return c;
          }
        },
        shape_);
  }

  /// Per-axis length scale: monomials are normalized by it so that the basis
  /// has unit size on the domain.
  std::vector<double> axis_scales() const {
    return std::visit(
        [](const auto& s) -> std::vector<double> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk>) return {s.radius};
          else if constexpr (std::is_same_v<S, Polydisc>) return s.radii;
          else if constexpr (std::is_same_v<S, Ball>) return std::vector<double>(s.center.size(), s.radius);
          else if constexpr (std::is_same_v<S, Annulus>) return {std::sqrt(s.r_inner * s.r_outer)};
          else if constexpr (std::is_same_v<S, Cloud>) {
            std::vector<double> sc(s.dimension, 0.0);
            Point c(s.dimension, 0.0);
            for (std::size_t q = 0; q < s.weights.size(); ++q)
              for (std::size_t j = 0; j < s.dimension; ++j) c[j] += s.nodes[q * s.dimension + j];
            for (auto& v : c) v /= static_cast<double>(std::max<std::size_t>(1, s.weights.size()));
            for (std::size_t q = 0; q < s.weights.size(); ++q)
              for (std::size_t j = 0; j < s.dimension; ++j)
                sc[j] = std::max(sc[j], std::abs(s.nodes[q * s.dimension + j] - c[j]));
            for (auto& v : sc)
              if (v == 0.0) v = 1.0;
            return sc;
          } else {
            std::vector<double> sc;
            for (const auto& f : s.factors) {
              auto fs = f.axis_scales();
              sc.insert(sc.end(), fs.begin(), fs.end());
            }
            return sc;
          }
        },
        shape_);
  }

  /// Closed-form Lebesgue volume; clouds report the weight sum.
  double analytic_volume() const {
    using std::numbers::pi;
    return std::visit(
        [](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk>) return pi * s.radius * s.radius;
          else if constexpr (std::is_same_v<S, Polydisc>) {
            double v = 1.0;
            for (double r : s.radii) v *= pi * r * r;
            return v;
          } else if constexpr (std::is_same_v<S, Ball>) {
            const auto n = static_cast<int>(s.center.size());
            return std::pow(pi, n) / std::tgamma(n + 1.0) * std::pow(s.radius, 2 * n);
          } else if constexpr (std::is_same_v<S, Annulus>) {
            return pi * (s.r_outer * s.r_outer - s.r_inner * s.r_inner);
          } else if constexpr (std::is_same_v<S, Cloud>) {
            double v = 0.0;
            for (double w : s.weights) v += w;
            return v;
          } else {
            double v = 1.0;
            for (const auto& f : s.factors) v *= f.analytic_volume();
            return v;
          }
        },
        shape_);
  }

  /// An upper bound on the Euclidean diameter (exact for shapes).
  double diameter() const {
    return std::visit(
        [](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Disk> || std::is_same_v<S, Ball>) return 2.0 * s.radius;
          else if constexpr (std::is_same_v<S, Polydisc>) {
            double r2 = 0.0;
            for (double r : s.radii) r2 += r * r;
            return 2.0 * std::sqrt(r2);
          } else if constexpr (std::is_same_v<S, Annulus>) return 2.0 * s.r_outer;
          else if constexpr (std::is_same_v<S, Cloud>) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < s.dimension; ++j) {
              double lo_r = std::numeric_limits<double>::max(), hi_r = -lo_r, lo_i = lo_r, hi_i = -lo_r;
              for (std::size_t q = 0; q < s.weights.size(); ++q) {
                const cplx v = s.nodes[q * s.dimension + j];
                lo_r = std::min(lo_r, v.real());
                hi_r = std::max(hi_r, v.real());
                lo_i = std::min(lo_i, v.imag());
                hi_i = std::max(hi_i, v.imag());
              }
              d2 += (hi_r - lo_r) * (hi_r - lo_r) + (hi_i - lo_i) * (hi_i - lo_i);
            }
            return std::sqrt(d2);
          } else {
            double d2 = 0.0;
            for (const auto& f : s.factors) d2 += f.diameter() * f.diameter();
            return std::sqrt(d2);
          }
        },
        shape_);
  }

  bool is_origin_centered() const {
    if (is<Cloud>()) return false;
    if (is<Annulus>()) return true;
    for (const auto& c : center()) {
      if (c != cplx(0.0)) return false;
    }
    return true;
  }

  bool operator==(const Domain& other) const;

  /// Throws DomainError on non-positive radii, empty clouds and the like.
  void validate() const;

private:
  Shape shape_;
};

inline bool domain_equal(const Domain& a, const Domain& b);

inline bool Domain::operator==(const Domain& other) const { return domain_equal(*this, other); }

inline void Domain::validate() const {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        auto finite = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
        if constexpr (std::is_same_v<S, Disk>) {
          if (!(s.radius > 0.0) || !std::isfinite(s.radius)) throw DomainError("disk: radius must be positive");
          if (!finite(s.center)) throw DomainError("disk: center must be finite");
        } else if constexpr (std::is_same_v<S, Polydisc>) {
          if (s.radii.empty()) throw DomainError("polydisc: no radii");
          if (s.center.size() != s.radii.size()) throw DomainError("polydisc: center dimension mismatch");
          for (double r : s.radii)
            if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("polydisc: radii must be positive");
        } else if constexpr (std::is_same_v<S, Ball>) {
          if (s.center.empty()) throw DomainError("ball: dimension must be positive");
          if (!(s.radius > 0.0) || !std::isfinite(s.radius)) throw DomainError("ball: radius must be positive");
        } else if constexpr (std::is_same_v<S, Annulus>) {
          if (!(s.r_inner > 0.0) || !(s.r_inner < s.r_outer) || !std::isfinite(s.r_outer))
            throw DomainError("annulus: require 0 < rInner < rOuter");
        } else if constexpr (std::is_same_v<S, Cloud>) {
          if (s.dimension == 0) throw DomainError("cloud: dimension must be positive");
          if (s.weights.empty()) throw DomainError("cloud: no nodes");
          if (s.nodes.size() != s.weights.size() * s.dimension) throw DomainError("cloud: node/weight size mismatch");
          for (double w : s.weights)
            if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("cloud: weights must be positive and finite");
          for (const auto& v : s.nodes)
            if (!finite(v)) throw DomainError("cloud: nodes must be finite");
        } else {
          if (s.factors.size() < 2) throw DomainError("product: need at least two factors");
        }
      },
      shape_);
}

inline bool domain_equal(const Domain& a, const Domain& b) {
  if (a.kind() != b.kind()) return false;
  return std::visit(
      [&b](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        const auto& t = b.as<S>();
        if constexpr (std::is_same_v<S, Disk>) return s.radius == t.radius && s.center == t.center;
        else if constexpr (std::is_same_v<S, Polydisc>) return s.radii == t.radii && s.center == t.center;
        else if constexpr (std::is_same_v<S, Ball>) return s.radius == t.radius && s.center == t.center;
        else if constexpr (std::is_same_v<S, Annulus>) return s.r_inner == t.r_inner && s.r_outer == t.r_outer;
        else if constexpr (std::is_same_v<S, Cloud>)
          return s.dimension == t.dimension && s.nodes == t.nodes && s.weights == t.weights;
        else {
          if (s.factors.size() != t.factors.size()) return false;
          for (std::size_t i = 0; i < s.factors.size(); ++i)
            if (!(s.factors[i] == t.factors[i])) return false;
          return true;
        }
      },
      a.shape());
}

namespace detail {

inline Quadrature disk_rule(double r_lo, double r_hi, cplx center, int radial, int angular) {
  const auto g = gauss_legendre(radial, r_lo, r_hi);
  std::vector<cplx> nodes;
  std::vector<double> w;
  nodes.reserve(static_cast<std::size_t>(radial) * angular);
  w.reserve(nodes.capacity());
  const double dtheta = 2.0 * std::numbers::pi / angular;
  for (int i = 0; i < radial; ++i) {
    for (int j = 0; j < angular; ++j) {
      const double theta = dtheta * (j + 0.5);
      nodes.push_back(center + std::polar(g.x[i], theta));
      w.push_back(g.w[i] * g.x[i] * dtheta);
    }
  }
  return Quadrature(1, std::move(nodes), std::move(w), radial, angular);
}

// Collapsed Gauss rule on the standard simplex {s_1..s_{m} >= 0, sum <= 1};
// returns the barycentric tuples (length m + 1) and weights.
inline void simplex_rule(std::size_t m, int order, std::vector<std::vector<double>>& pts, std::vector<double>& wts) {
  const auto g = gauss_legendre(order, 0.0, 1.0);
  pts.clear();
  wts.clear();
  std::vector<double> s(m + 1, 0.0);
  auto rec = [&](auto&& self, std::size_t j, double remaining, double weight) -> void {
    if (j == m) {
      s[m] = remaining;
      pts.push_back(s);
      wts.push_back(weight);
      return;
    }
    // s_j = R_j u_j with R_j the mass left; the Jacobian is prod_j R_j.
    for (int i = 0; i < order; ++i) {
      s[j] = remaining * g.x[i];
      self(self, j + 1, remaining * (1.0 - g.x[i]), weight * g.w[i] * remaining);
    }
  };
  rec(rec, 0, 1.0, 1.0);
}

}  // namespace detail

/// Builds nodes and Lebesgue weights; radial/angular orders apply per axis.
inline Quadrature build_quadrature(const Domain& d, int radial_order, int angular_order) {
  if (radial_order < 4 || angular_order < 4) throw DomainError("build_quadrature: orders must be >= 4");
  using std::numbers::pi;
  return std::visit(
      [&](const auto& s) -> Quadrature {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) {
          return detail::disk_rule(0.0, s.radius, s.center, radial_order, angular_order);
        } else if constexpr (std::is_same_v<S, Annulus>) {
          return detail::disk_rule(s.r_inner, s.r_outer, 0.0, radial_order, angular_order);
        } else if constexpr (std::is_same_v<S, Polydisc>) {
          Quadrature q = detail::disk_rule(0.0, s.radii[0], s.center[0], radial_order, angular_order);
          for (std::size_t j = 1; j < s.radii.size(); ++j) {
            q = tensor(q, detail::disk_rule(0.0, s.radii[j], s.center[j], radial_order, angular_order),
                       kMaxQuadratureNodes);
          }
          return q;
        } else if constexpr (std::is_same_v<S, Ball>) {
          const std::size_t n = s.center.size();
          if (n == 1) return detail::disk_rule(0.0, s.radius, s.center[0], radial_order, angular_order);
          // |z_j|^2 = rho^2 s_j with s on the simplex; dV = 2^{1-n} rho^{2n-1} drho ds dtheta.
          const auto g = detail::gauss_legendre(radial_order, 0.0, s.radius);
          std::vector<std::vector<double>> simplex;
          std::vector<double> sw;
          detail::simplex_rule(n - 1, std::max(4, (radial_order + 1) / 2), simplex, sw);
          std::size_t total = static_cast<std::size_t>(radial_order) * simplex.size();
          for (std::size_t j = 0; j < n; ++j) total *= static_cast<std::size_t>(angular_order);
          if (total > kMaxQuadratureNodes) {
            throw DomainError("build_quadrature: " + std::to_string(total) + " nodes exceeds cap");
          }
          std::vector<cplx> nodes;
          std::vector<double> w;
          nodes.reserve(total * n);
          w.reserve(total);
          const double dtheta = 2.0 * pi / angular_order;
          const double prefactor = std::pow(0.5, static_cast<double>(n - 1)) * std::pow(dtheta, static_cast<double>(n));
          std::vector<int> ang(n, 0);
          for (int i = 0; i < radial_order; ++i) {
            const double rho = g.x[i];
            const double wr = g.w[i] * std::pow(rho, 2.0 * n - 1.0) * prefactor;
            for (std::size_t t = 0; t < simplex.size(); ++t) {
              std::fill(ang.begin(), ang.end(), 0);
              for (;;) {
                for (std::size_t j = 0; j < n; ++j) {
                  const double mod = rho * std::sqrt(std::max(0.0, simplex[t][j]));
                  nodes.push_back(s.center[j] + std::polar(mod, dtheta * (ang[j] + 0.5)));
                }
                w.push_back(wr * sw[t]);
                std::size_t j = 0;
                while (j < n && ++ang[j] == angular_order) ang[j++] = 0;
                if (j == n) break;
              }
            }
          }
          return Quadrature(n, std::move(nodes), std::move(w), radial_order, angular_order);
        } else if constexpr (std::is_same_v<S, Cloud>) {
          return Quadrature(s.dimension, s.nodes, s.weights, radial_order, angular_order);
        } else {
          Quadrature q = build_quadrature(s.factors[0], radial_order, angular_order);
          for (std::size_t i = 1; i < s.factors.size(); ++i) {
            q = tensor(q, build_quadrature(s.factors[i], radial_order, angular_order), kMaxQuadratureNodes);
          }
          return q;
        }
      },
      d.shape());
}

inline Quadrature build_quadrature(const Domain& d, QuadOrders o) { return build_quadrature(d, o.radial, o.angular); }

/// Exact membership for shapes; clouds use the nodes' bounding box.
inline bool contains(const Domain& d, std::span<const cplx> z) {
  require_same_dimension(d.dimension(), z.size(), "contains");
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) return std::abs(z[0] - s.center) < s.radius;
        else if constexpr (std::is_same_v<S, Polydisc>) {
          for (std::size_t j = 0; j < z.size(); ++j)
            if (!(std::abs(z[j] - s.center[j]) < s.radii[j])) return false;
          return true;
        } else if constexpr (std::is_same_v<S, Ball>) {
          double r2 = 0.0;
          for (std::size_t j = 0; j < z.size(); ++j) r2 += std::norm(z[j] - s.center[j]);
          return std::sqrt(r2) < s.radius;
        } else if constexpr (std::is_same_v<S, Annulus>) {
          const double r = std::abs(z[0]);
          return r > s.r_inner && r < s.r_outer;
        } else if constexpr (std::is_same_v<S, Cloud>) {
          for (std::size_t j = 0; j < s.dimension; ++j) {
            double lo_r = std::numeric_limits<double>::max(), hi_r = -lo_r, lo_i = lo_r, hi_i = -lo_r;
            for (std::size_t q = 0; q < s.weights.size(); ++q) {
              const cplx v = s.nodes[q * s.dimension + j];
              lo_r = std::min(lo_r, v.real());
              hi_r = std::max(hi_r, v.real());
              lo_i = std::min(lo_i, v.imag());
              hi_i = std::max(hi_i, v.imag());
            }
            if (z[j].real() < lo_r || z[j].real() > hi_r || z[j].imag() < lo_i || z[j].imag() > hi_i) return false;
          }
          return true;
        } else {
          std::size_t off = 0;
          for (const auto& f : s.factors) {
            if (!contains(f, z.subspan(off, f.dimension()))) return false;
            off += f.dimension();
          }
          return true;
        }
      },
      d.shape());
}

/// delta(z) = inf over the boundary of |z - w|.
inline double boundary_distance(const Domain& d, std::span<const cplx> z) {
  if (d.is<Cloud>()) throw DomainError("boundary_distance: cloud domains have no boundary model");
  if (!contains(d, z)) throw DomainError("boundary_distance: point outside domain");
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) return s.radius - std::abs(z[0] - s.center);
        else if constexpr (std::is_same_v<S, Polydisc>) {
          double m = std::numeric_limits<double>::max();
          for (std::size_t j = 0; j < z.size(); ++j) m = std::min(m, s.radii[j] - std::abs(z[j] - s.center[j]));
          return m;
        } else if constexpr (std::is_same_v<S, Ball>) {
          double r2 = 0.0;
          for (std::size_t j = 0; j < z.size(); ++j) r2 += std::norm(z[j] - s.center[j]);
          return s.radius - std::sqrt(r2);
        } else if constexpr (std::is_same_v<S, Annulus>) {
          const double r = std::abs(z[0]);
          return std::min(r - s.r_inner, s.r_outer - r);
        } else if constexpr (std::is_same_v<S, Cloud>) {
          return 0.0;
        } else {
          double m = std::numeric_limits<double>::max();
          std::size_t off = 0;
          for (const auto& f : s.factors) {
            m = std::min(m, boundary_distance(f, z.subspan(off, f.dimension())));
            off += f.dimension();
          }
          return m;
        }
      },
      d.shape());
}

/// t * Omega for a domain centered at the origin.
inline Domain scale_domain(const Domain& d, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("scale_domain: factor must be positive");
  if (!d.is_origin_centered()) throw DomainError("scale_domain: domain must be a shape centered at the origin");
  return std::visit(
      [t](const auto& s) -> Domain {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) return Domain(Disk{s.radius * t, s.center});
        else if constexpr (std::is_same_v<S, Polydisc>) {
          Polydisc p = s;
          for (auto& r : p.radii) r *= t;
          return Domain(p);
        } else if constexpr (std::is_same_v<S, Ball>) return Domain(Ball{s.radius * t, s.center});
        else if constexpr (std::is_same_v<S, Annulus>) return Domain(Annulus{s.r_inner * t, s.r_outer * t});
        else if constexpr (std::is_same_v<S, Cloud>) throw DomainError("scale_domain: cloud");
        else {
          Product p;
          for (const auto& f : s.factors) p.factors.push_back(scale_domain(f, t));
          return Domain(p);
        }
      },
      d.shape());
}

/// Omega_1 x Omega_2; disks and polydiscs merge into a polydisc.
inline Domain product_domain(const Domain& a, const Domain& b) {
  if (a.is<Cloud>() || b.is<Cloud>()) throw DomainError("product_domain: cloud factor");
  auto as_polydisc = [](const Domain& d) -> std::optional<Polydisc> {
    if (d.is<Disk>()) return Polydisc{{d.as<Disk>().radius}, {d.as<Disk>().center}};
    if (d.is<Polydisc>()) return d.as<Polydisc>();
    return std::nullopt;
  };
  auto pa = as_polydisc(a);
  auto pb = as_polydisc(b);
  if (pa && pb) {
    Polydisc p = *pa;
    p.radii.insert(p.radii.end(), pb->radii.begin(), pb->radii.end());
    p.center.insert(p.center.end(), pb->center.begin(), pb->center.end());
    return Domain(p);
  }
  Product p;
  auto append = [&p](const Domain& d) {
    if (d.is<Product>()) {
      for (const auto& f : d.as<Product>().factors) p.factors.push_back(f);
    } else {
      p.factors.push_back(d);
    }
  };
  append(a);
  append(b);
  return Domain(p);
}

/// Rows "re,im,...,weight" (one complex coordinate per re/im pair).
inline Domain cloud_from_csv(std::istream& in) {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DomainError("cloud csv line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() < 3 || vals.size() % 2 == 0) {
      throw DomainError("cloud csv line " + std::to_string(lineno) + ": expected re,im,...,weight");
    }
    const std::size_t n = (vals.size() - 1) / 2;
    if (dim == 0) dim = n;
    if (n != dim) throw DomainError("cloud csv line " + std::to_string(lineno) + ": inconsistent dimension");
    for (std::size_t j = 0; j < n; ++j) nodes.emplace_back(vals[2 * j], vals[2 * j + 1]);
    weights.push_back(vals.back());
  }
  if (dim == 0) throw DomainError("cloud csv: no rows");
  return Domain::cloud(dim, std::move(nodes), std::move(weights));
}

}  // namespace xibergman
