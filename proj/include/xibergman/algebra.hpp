#pragma once

// Multi-indices, the graded ordering used for triangular bases, finitely
// supported functionals acting on holomorphic jets, and polynomial
// coefficient maps about a center.

#include <algorithm>
#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xibergman {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_) {
      if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
    }
    degree_ = std::accumulate(entries_.begin(), entries_.end(), 0);
  }
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }

  std::size_t dimension() const { return entries_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  bool operator==(const MultiIndex&) const = default;

  /// Componentwise beta <= alpha.
  bool dominates(const MultiIndex& beta) const {
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      if (beta.entries_[j] > entries_[j]) return false;
    }
    return true;
  }

  /// alpha! = prod_j alpha_j!
  double factorial() const {
    double f = 1.0;
    for (int e : entries_) {
      for (int i = 2; i <= e; ++i) f *= i;
    }
    return f;
  }

  MultiIndex operator+(const MultiIndex& other) const {
    require_same_dimension(dimension(), other.dimension(), "MultiIndex::operator+");
    std::vector<int> e(entries_);
    for (std::size_t j = 0; j < e.size(); ++j) e[j] += other.entries_[j];
    return MultiIndex(std::move(e));
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      if (j) s += ',';
      s += std::to_string(entries_[j]);
    }
    return s;
  }

private:
  std::vector<int> entries_;
  int degree_ = 0;
};

/// Graded order: total degree first; equal degrees are decided by the last
/// coordinate that differs, scanning from position n down to 1, the smaller
/// entry giving the smaller index.
inline std::strong_ordering prec_compare(const MultiIndex& a, const MultiIndex& b) {
  require_same_dimension(a.dimension(), b.dimension(), "prec_compare");
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (std::size_t j = a.dimension(); j-- > 0;) {
    if (a[j] != b[j]) return a[j] <=> b[j];
  }
  return std::strong_ordering::equal;
}

struct PrecLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return prec_compare(a, b) == std::strong_ordering::less;
  }
};

/// All multi-indices of dimension n with |alpha| <= max_degree, in graded order.
inline std::vector<MultiIndex> enumerate_total_degree(std::size_t n, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, std::size_t j, int remaining) -> void {
    if (j == n) {
      out.emplace_back(e);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      e[j] = v;
      self(self, j + 1, remaining - v);
    }
    e[j] = 0;
  };
  if (n == 0) throw std::invalid_argument("enumerate_total_degree: n must be positive");
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end(), PrecLess{});
  return out;
}

/// All multi-indices with every entry <= max_per_axis, in graded order.
inline std::vector<MultiIndex> enumerate_per_axis(std::size_t n, int max_per_axis) {
  std::vector<MultiIndex> out;
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      out.emplace_back(e);
      return;
    }
    for (int v = 0; v <= max_per_axis; ++v) {
      e[j] = v;
      self(self, j + 1);
    }
  };
  if (n == 0) throw std::invalid_argument("enumerate_per_axis: n must be positive");
  rec(rec, 0);
  std::sort(out.begin(), out.end(), PrecLess{});
  return out;
}

/// Generalized binomial coefficient C(a, b) for integer a (possibly negative) and b >= 0.
inline double binomial(int a, int b) {
  if (b < 0) return 0.0;
  if (a >= 0 && b > a) return 0.0;
  double r = 1.0;
  for (int i = 0; i < b; ++i) r = r * static_cast<double>(a - i) / static_cast<double>(i + 1);
  return r;
}

/// A finitely supported coefficient family acting on germs by
/// (xi . f)(z) = sum_alpha xi_alpha f^(alpha)(z) / alpha!.
class Functional {
public:
  using Terms = std::map<MultiIndex, cplx, PrecLess>;

  Functional() = default;
  explicit Functional(std::size_t n) : dimension_(n) {}
  Functional(std::size_t n, Terms terms) : dimension_(n) {
    for (auto& [idx, c] : terms) set(idx, c);
  }

  static Functional delta(const MultiIndex& alpha, cplx c = 1.0) {
    Functional xi(alpha.dimension());
    xi.set(alpha, c);
    return xi;
  }

  void set(const MultiIndex& alpha, cplx c) {
    require_same_dimension(dimension_, alpha.dimension(), "Functional::set");
    if (c == cplx(0.0)) {
      terms_.erase(alpha);
    } else {
      terms_[alpha] = c;
    }
  }

  cplx coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  std::size_t dimension() const { return dimension_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest |alpha| with nonzero coefficient; -1 for the zero functional.
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  /// Index of largest modulus coefficient, ties broken toward the smaller index.
  const MultiIndex& leading_index() const {
    if (terms_.empty()) throw std::invalid_argument("Functional: zero functional has no leading index");
    auto best = terms_.begin();
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (std::abs(it->second) > std::abs(best->second)) best = it;
    }
    return best->first;
  }

  void require_nonzero(const char* what) const {
    if (is_zero()) throw std::invalid_argument(std::string(what) + ": zero functional");
  }

private:
  std::size_t dimension_ = 0;
  Terms terms_;
};

/// Taylor coefficients a_alpha of f(z) = sum a_alpha (z - center)^alpha.
class PolyCoeffs {
public:
  using Terms = std::map<MultiIndex, cplx, PrecLess>;

  PolyCoeffs() = default;
  PolyCoeffs(Point center, int max_degree) : center_(std::move(center)), max_degree_(max_degree) {}
  PolyCoeffs(Point center, int max_degree, Terms terms)
      : center_(std::move(center)), max_degree_(max_degree) {
    for (auto& [idx, c] : terms) set(idx, c);
  }

  std::size_t dimension() const { return center_.size(); }
  const Point& center() const { return center_; }
  int max_degree() const { return max_degree_; }
  const Terms& terms() const { return terms_; }

  void set(const MultiIndex& alpha, cplx c) {
    require_same_dimension(dimension(), alpha.dimension(), "PolyCoeffs::set");
    if (alpha.degree() > max_degree_) {
      throw std::invalid_argument("PolyCoeffs::set: index " + alpha.to_string() + " exceeds maxDegree");
    }
    residual_.erase(alpha);
    if (c == cplx(0.0)) {
      terms_.erase(alpha);
    } else {
      terms_[alpha] = c;
    }
  }

  /// Rounding error left by the last taylor_shift (coefficient = stored + residual).
  cplx residual(const MultiIndex& alpha) const {
    auto it = residual_.find(alpha);
    return it == residual_.end() ? cplx(0.0) : it->second;
  }

  cplx coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  cplx evaluate(std::span<const cplx> z) const {
    require_same_dimension(dimension(), z.size(), "PolyCoeffs::evaluate");
    cplx s = 0.0;
    for (const auto& [alpha, a] : terms_) {
      cplx m = a;
      for (std::size_t j = 0; j < dimension(); ++j) m *= std::pow(z[j] - center_[j], alpha[j]);
      s += m;
    }
    return s;
  }

  PolyCoeffs& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      residual_.clear();
      return *this;
    }
    for (auto& [idx, c] : terms_) c *= s;
    for (auto& [idx, c] : residual_) c *= s;
    return *this;
  }

  friend PolyCoeffs operator*(cplx s, PolyCoeffs f) { return f *= s; }

  friend PolyCoeffs operator+(const PolyCoeffs& f, const PolyCoeffs& g) {
    require_same_dimension(f.dimension(), g.dimension(), "PolyCoeffs::operator+");
    for (std::size_t j = 0; j < f.dimension(); ++j) {
      if (f.center_[j] != g.center_[j]) throw std::invalid_argument("PolyCoeffs::operator+: centers differ");
    }
    PolyCoeffs r(f.center_, std::max(f.max_degree_, g.max_degree_));
    for (const auto& [idx, c] : f.terms_) r.terms_[idx] += c;
    for (const auto& [idx, c] : g.terms_) r.terms_[idx] += c;
    for (const auto& [idx, c] : f.residual_) r.residual_[idx] += c;
    for (const auto& [idx, c] : g.residual_) r.residual_[idx] += c;
    std::erase_if(r.terms_, [](const auto& kv) { return kv.second == cplx(0.0); });
    return r;
  }

private:
  friend PolyCoeffs taylor_shift(const PolyCoeffs& f, std::span<const cplx> new_center);

  Point center_;
  int max_degree_ = 0;
  Terms terms_;
  Terms residual_;
};

namespace detail {

// Binomial re-expansion accumulates terms of size up to (1+|shift|)^degree, so
// the transport is carried out in binary128 and rounded once at the end.
struct QuadComplex {
  __float128 re = 0;
  __float128 im = 0;
  QuadComplex() = default;
  QuadComplex(cplx c) : re(c.real()), im(c.imag()) {}
  QuadComplex(__float128 r, __float128 i) : re(r), im(i) {}
  QuadComplex operator*(const QuadComplex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  QuadComplex& operator+=(const QuadComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QuadComplex scaled(__float128 s) const { return {re * s, im * s}; }
  cplx to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  cplx low_part() const {
    return {static_cast<double>(re - static_cast<__float128>(static_cast<double>(re))),
            static_cast<double>(im - static_cast<__float128>(static_cast<double>(im)))};
  }
};

inline QuadComplex quad_pow(const QuadComplex& base, int e) {
  QuadComplex r(__float128(1), __float128(0));
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

inline __float128 quad_binomial(int a, int b) {
  __float128 r = 1;
  for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
  return r;
}

// All beta with beta <= alpha componentwise.
inline void for_each_subindex(const MultiIndex& alpha, auto&& fn) {
  const std::size_t n = alpha.dimension();
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      fn(MultiIndex(e));
      return;
    }
    for (int v = 0; v <= alpha[j]; ++v) {
      e[j] = v;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Re-expands f about new_center; exact up to a single final rounding, whose
/// error is kept so that shifting back recovers the input.
inline PolyCoeffs taylor_shift(const PolyCoeffs& f, std::span<const cplx> new_center) {
  require_same_dimension(f.dimension(), new_center.size(), "taylor_shift");
  const std::size_t n = f.dimension();
  std::vector<detail::QuadComplex> d(n);
  bool identity = true;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = detail::QuadComplex(new_center[j] - f.center()[j]);
    if (new_center[j] != f.center()[j]) identity = false;
  }
  Point c(new_center.begin(), new_center.end());
  if (identity) {
    PolyCoeffs same = f;
    same.center_ = c;
    return same;
  }

  std::map<MultiIndex, detail::QuadComplex, PrecLess> acc;
  for (const auto& [alpha, a] : f.terms()) {
    detail::QuadComplex qa(a);
    const detail::QuadComplex lo(f.residual(alpha));
    qa.re += lo.re;
    qa.im += lo.im;
    detail::for_each_subindex(alpha, [&](const MultiIndex& beta) {
      detail::QuadComplex t = qa;
      for (std::size_t j = 0; j < n; ++j) {
        t = (t * detail::quad_pow(d[j], alpha[j] - beta[j])).scaled(detail::quad_binomial(alpha[j], beta[j]));
      }
      acc[beta] += t;
    });
  }
  PolyCoeffs out(c, f.max_degree());
  for (const auto& [beta, v] : acc) {
    out.set(beta, v.to_double());
    if (v.low_part() != cplx(0.0)) out.residual_[beta] = v.low_part();
  }
  return out;
}

/// (xi . f)(z) = sum_alpha xi_alpha * (Taylor coefficient of f at z, index alpha).
inline cplx functional_apply(const Functional& xi, const PolyCoeffs& f, std::span<const cplx> z) {
  require_same_dimension(xi.dimension(), f.dimension(), "functional_apply");
  require_same_dimension(xi.dimension(), z.size(), "functional_apply");
  for (const auto& zj : z) {
    if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag())) {
      throw std::invalid_argument("functional_apply: point is not finite");
    }
  }
  const PolyCoeffs g = taylor_shift(f, z);
  cplx s = 0.0;
  for (const auto& [alpha, c] : xi.terms()) s += c * g.coefficient(alpha);
  return s;
}

}  // namespace xibergman
