#pragma once

// Verification batteries: module invariants and the acceptance criteria,
// each check reporting a worst-case metric against its threshold.

#include <xibergman/algebra.hpp>
#include <xibergman/domains.hpp>
#include <xibergman/green.hpp>
#include <xibergman/higher.hpp>
#include <xibergman/io.hpp>
#include <xibergman/kernels.hpp>
#include <xibergman/pspace.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace xibergman {

struct CheckResult {
  std::string suite;
  std::string name;
  std::string criterion;  // "AC1".."AC10", or empty for module invariants
  bool passed = false;
  double value = 0.0;      // worst observed metric
  double threshold = 0.0;  // bound it is compared against
  std::string detail;
  double seconds = 0.0;    // not part of the machine output
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  double budget = 0.0;  // seconds, 0 = unlimited
  unsigned threads = 0;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 42;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  /// Deterministic machine output: no timings.
  json machine_json() const {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back(json{{"suite", c.suite},
                         {"name", c.name},
                         {"criterion", c.criterion},
                         {"passed", c.passed},
                         {"value", num(c.value)},
                         {"threshold", num(c.threshold)},
                         {"detail", c.detail}});
    }
    return json{{"suite", suite}, {"seed", seed}, {"passed", passed()}, {"checks", arr}};
  }

  std::string table() const {
    std::string out;
    std::size_t w = 4;
    for (const auto& c : checks) w = std::max(w, c.name.size());
    for (const auto& c : checks) {
      std::string line = c.passed ? "PASS  " : "FAIL  ";
      line += c.suite + std::string(11 - std::min<std::size_t>(10, c.suite.size()), ' ');
      line += (c.criterion.empty() ? std::string("-") : c.criterion) + std::string(6 - std::min<std::size_t>(5, c.criterion.empty() ? 1 : c.criterion.size()), ' ');
      line += c.name + std::string(w + 2 - c.name.size(), ' ');
      line += "value=" + fmt12(c.value) + " limit=" + fmt12(c.threshold);
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.2fs", c.seconds);
      line += buf;
      if (!c.detail.empty()) line += "  " + c.detail;
      out += line + "\n";
    }
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.passed ? 0 : 1;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu checks, %zu failed, %.1fs\n", checks.size(), failed, seconds);
    return out + buf;
  }
};

namespace verify_detail {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  double value;
  double threshold;
  std::string detail;
};

/// value <= threshold.
inline Outcome at_most(double value, double threshold, std::string detail = {}) {
  return {value <= threshold, value, threshold, std::move(detail)};
}
/// value >= threshold.
inline Outcome at_least(double value, double threshold, std::string detail = {}) {
  return {value >= threshold, value, threshold, std::move(detail)};
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Runner {
public:
  Runner(VerifyReport& report, const VerifyOptions& opts, Clock::time_point start)
      : report_(report), opts_(opts), start_(start) {}

  void check(const std::string& suite, const std::string& name, const std::string& criterion,
             const std::function<Outcome()>& fn) {
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.criterion = criterion;
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (opts_.budget > 0.0 && elapsed > opts_.budget) {
      r.passed = false;
      r.detail = "skipped: budget exhausted";
      report_.checks.push_back(r);
      return;
    }
    const auto t0 = Clock::now();
    try {
      const Outcome o = fn();
      r.passed = o.passed;
      r.value = o.value;
      r.threshold = o.threshold;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report_.checks.push_back(r);
  }

  std::mt19937_64 rng(std::uint64_t salt) const { return std::mt19937_64(opts_.seed * 1000003ULL + salt); }
  const VerifyOptions& options() const { return opts_; }

private:
  VerifyReport& report_;
  const VerifyOptions& opts_;
  Clock::time_point start_;
};

inline Functional delta1(int k) { return Functional::delta(MultiIndex({k})); }
inline MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double a = u(rng);
  const double b = u(rng);
  return {a, b};
}

inline cplx random_in_disk(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmax * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, t);
}

/// Random element of the space from a standard complex normal coefficient vector.
inline SpaceFunction random_element(const PolySpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(space.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double a = nd(rng);
    const double b = nd(rng);
    c(i) = cplx(a, b) / std::pow(1.5, static_cast<double>(i % 12));
  }
  return space.make(c);
}

inline double closed_disk(double p, int k, double r = 1.0) {
  return (p * k + 2.0) / (2.0 * std::numbers::pi * std::pow(r, p * k + 2.0));
}

/// log K_{delta_0, p} on the unit disk at any p: -log pi - 2 log(1 - |z|^2).
inline double bergman_disk(cplx z) { return 1.0 / (std::numbers::pi * std::pow(1.0 - std::norm(z), 2)); }

// ---------------------------------------------------------------- algebra

inline void suite_algebra(Runner& R) {
  const std::string S = "algebra";
  R.check(S, "prec-total-order", "", [] {
    std::size_t bad = 0, pairs = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto idx = enumerate_total_degree(n, 4);
      for (const auto& a : idx) {
        for (const auto& b : idx) {
          ++pairs;
          const auto ab = prec_compare(a, b);
          const auto ba = prec_compare(b, a);
          if ((ab == std::strong_ordering::less) != (ba == std::strong_ordering::greater)) ++bad;
          if ((ab == std::strong_ordering::equal) != (a == b)) ++bad;
          for (const auto& c : idx) {
            if (ab == std::strong_ordering::less && prec_compare(b, c) == std::strong_ordering::less &&
                prec_compare(a, c) != std::strong_ordering::less) {
              ++bad;
            }
          }
        }
      }
    }
    return at_most(static_cast<double>(bad), 0.0, std::to_string(pairs) + " pairs");
  });
  R.check(S, "prec-examples", "", [] {
    int bad = 0;
    bad += prec_compare(mi({0, 1}), mi({2, 0})) != std::strong_ordering::less;
    bad += prec_compare(mi({1, 0}), mi({0, 1})) != std::strong_ordering::less;
    bad += prec_compare(mi({1, 1}), mi({1, 1})) != std::strong_ordering::equal;
    return at_most(bad, 0.0);
  });
  R.check(S, "functional-apply-examples", "", [] {
    double err = 0.0;
    PolyCoeffs z2({0.0}, 2);
    z2.set(mi({2}), 1.0);
    err = std::max(err, std::abs(functional_apply(delta1(0), z2, Point{0.5}) - 0.25));
    err = std::max(err, std::abs(functional_apply(delta1(1), z2, Point{1.0}) - 2.0));
    Functional xi(1);
    xi.set(mi({0}), 1.0);
    xi.set(mi({2}), 3.0);
    PolyCoeffs f({0.0}, 2);
    f.set(mi({0}), 1.0);
    f.set(mi({2}), 1.0);
    err = std::max(err, std::abs(functional_apply(xi, f, Point{0.0}) - 4.0));
    return at_most(err, 1e-14);
  });
  R.check(S, "functional-apply-linearity", "", [&] {
    auto rng = R.rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + trial % 3;
      const int deg = 6;
      PolyCoeffs f(Point(n, 0.0), deg), g(Point(n, 0.0), deg);
      for (const auto& a : enumerate_total_degree(n, deg)) {
        f.set(a, random_cplx(rng));
        g.set(a, random_cplx(rng));
      }
      Functional xi(n);
      for (const auto& a : enumerate_total_degree(n, 3)) xi.set(a, random_cplx(rng));
      Point z;
      for (std::size_t j = 0; j < n; ++j) z.push_back(random_cplx(rng, 0.7));
      const cplx a = random_cplx(rng, 2.0), b = random_cplx(rng, 2.0);
      const cplx lhs = functional_apply(xi, a * f + b * g, z);
      const cplx rhs = a * functional_apply(xi, f, z) + b * functional_apply(xi, g, z);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    return at_most(worst, 1e-12);
  });
  R.check(S, "taylor-shift-roundtrip", "", [&] {
    auto rng = R.rng(12);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 2; ++n) {
      for (int trial = 0; trial < 4; ++trial) {
        PolyCoeffs f(Point(n, 0.0), 20);
        for (const auto& a : enumerate_total_degree(n, 20)) f.set(a, random_cplx(rng));
        Point c;
        for (std::size_t j = 0; j < n; ++j) c.push_back(random_in_disk(rng, 2.0));
        const PolyCoeffs back = taylor_shift(taylor_shift(f, c), Point(n, 0.0));
        double fmax = 0.0, emax = 0.0;
        for (const auto& [a, v] : f.terms()) {
          fmax = std::max(fmax, std::abs(v));
          emax = std::max(emax, std::abs(back.coefficient(a) - v));
        }
        worst = std::max(worst, emax / fmax);
      }
    }
    return at_most(worst, 1e-12, "degree 20, |c| <= 2");
  });
  R.check(S, "witness-identity", "", [&] {
    auto rng = R.rng(13);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 3;
      Functional xi(n);
      for (const auto& a : enumerate_total_degree(n, 3)) xi.set(a, random_cplx(rng));
      const MultiIndex& a0 = xi.leading_index();
      Point z0;
      for (std::size_t j = 0; j < n; ++j) z0.push_back(random_cplx(rng, 0.5));
      PolyCoeffs w(z0, a0.degree());
      w.set(a0, 1.0);
      worst = std::max(worst, std::abs(functional_apply(xi, w, z0) - xi.coefficient(a0)));
    }
    return at_most(worst, 0.0);
  });
}

// ---------------------------------------------------------------- quadrature and spaces

inline void suite_quadrature(Runner& R) {
  const std::string S = "quadrature";
  const double pi = std::numbers::pi;
  R.check(S, "volume-disk", "", [&] {
    return at_most(std::abs(build_quadrature(Domain::disk(), 32, 64).volume() - pi), 1e-10);
  });
  R.check(S, "volume-bidisc", "", [&] {
    const Quadrature q = build_quadrature(Domain::polydisc({1.0, 1.0}), 32, 64);
    return at_most(std::abs(q.volume() - pi * pi), 1e-9, std::to_string(q.size()) + " nodes");
  });
  R.check(S, "volume-annulus", "", [&] {
    return at_most(std::abs(build_quadrature(Domain::annulus(0.5, 1.0), 32, 64).volume() - 0.75 * pi), 1e-10);
  });
  R.check(S, "volume-ball", "", [&] {
    const Quadrature q = build_quadrature(Domain::ball(2), QuadOrders::defaults(2));
    return at_most(rel(q.volume(), pi * pi / 2.0), 1e-10);
  });
  R.check(S, "nodes-inside", "", [&] {
    std::size_t outside = 0;
    for (const auto& d : {Domain::disk(0.5, cplx(0.2, 0.1)), Domain::annulus(0.5, 1.0), Domain::ball(2),
                          Domain::polydisc({1.0, 2.0})}) {
      const Quadrature q = build_quadrature(d, QuadOrders::defaults(d.dimension()));
      for (std::size_t i = 0; i < q.size(); ++i) outside += contains(d, q.node(i)) ? 0 : 1;
    }
    return at_most(static_cast<double>(outside), 0.0);
  });
  R.check(S, "disk-moments", "", [&] {
    const Quadrature q = build_quadrature(Domain::disk(), 32, 64);
    double worst = 0.0;
    for (int j = 0; j <= 20; ++j) {
      for (int k = 0; k <= 20; ++k) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          const cplx z = q.node(i)[0];
          s += q.weights()[i] * std::pow(z, j) * std::pow(std::conj(z), k);
        }
        const double expected = j == k ? pi / (k + 1.0) : 0.0;
        worst = std::max(worst, std::abs(s - expected));
      }
    }
    return at_most(worst, 1e-10, "int z^j conj(z)^k, j, k <= 20");
  });
  R.check(S, "scale-volume", "", [&] {
    double worst = 0.0;
    for (const auto& d : {Domain::disk(), Domain::polydisc({1.0, 2.0}), Domain::ball(2)}) {
      const double v = build_quadrature(d, QuadOrders::defaults(d.dimension())).volume();
      for (double t : {0.5, std::exp(-1.0), 1.7}) {
        const double vt = build_quadrature(scale_domain(d, t), QuadOrders::defaults(d.dimension())).volume();
        worst = std::max(worst, rel(vt, std::pow(t, 2.0 * d.dimension()) * v));
      }
    }
    return at_most(worst, 1e-9);
  });
  R.check(S, "product-volume", "", [&] {
    const Domain a = Domain::disk(1.0), b = Domain::disk(2.0);
    const Domain p = product_domain(a, b);
    const Domain t = product_domain(a, Domain::polydisc({1.0, 1.0}));
    const QuadOrders o{16, 32};
    double worst = rel(build_quadrature(p, o).volume(), build_quadrature(a, o).volume() * build_quadrature(b, o).volume());
    worst = std::max(worst, rel(build_quadrature(p, o).volume(), 4.0 * pi * pi));
    worst = std::max(worst, t.dimension() == 3 ? 0.0 : 1.0);
    return at_most(worst, 1e-9);
  });
  R.check(S, "boundary-distance", "", [&] {
    double err = std::abs(boundary_distance(Domain::disk(), Point{0.0}) - 1.0);
    err = std::max(err, std::abs(boundary_distance(Domain::disk(), Point{0.3}) - 0.7));
    err = std::max(err, std::abs(boundary_distance(Domain::polydisc({1.0, 1.0}), Point{0.5, 0.2}) - 0.5));
    err = std::max(err, std::abs(boundary_distance(Domain::annulus(0.5, 1.0), Point{0.6}) - 0.1));
    int wrong = 0;
    wrong += !contains(Domain::disk(), Point{0.99});
    wrong += contains(Domain::disk(), Point{1.01});
    wrong += contains(Domain::annulus(0.5, 1.0), Point{0.4});
    return at_most(err + wrong, 1e-15);
  });
  R.check(S, "lp-norm-examples", "", [&] {
    const SpacePtr sp = PolySpace::create(Domain::disk(), 16);
    double worst = 0.0;
    PolyCoeffs one({0.0}, 0);
    one.set(mi({0}), 1.0);
    worst = std::max(worst, rel(lp_norm(one, *sp, 2.0), std::sqrt(pi)));
    for (int k = 0; k <= 8; ++k) {
      PolyCoeffs zk({0.0}, k);
      zk.set(mi({k}), 1.0);
      worst = std::max(worst, rel(lp_norm(zk, *sp, 2.0), std::sqrt(pi / (k + 1.0))));
    }
    PolyCoeffs z({0.0}, 1);
    z.set(mi({1}), 1.0);
    for (double p : {1.0, 1.5, 3.0}) worst = std::max(worst, rel(std::pow(lp_norm(z, *sp, p), p), 2.0 * pi / (p + 2.0)));
    return at_most(worst, 1e-10);
  });
  R.check(S, "gram-disk", "", [&] {
    const Eigen::MatrixXcd G = gram_matrix(*PolySpace::create(Domain::disk(), 2));
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(3, 3);
    E(0, 0) = pi;
    E(1, 1) = pi / 2.0;
    E(2, 2) = pi / 3.0;
    return at_most((G - E).cwiseAbs().maxCoeff(), 1e-12);
  });
  R.check(S, "gram-hermitian", "", [&] {
    double worst = 0.0;
    for (const auto& d : {Domain::polydisc({1.0, 1.0}), Domain::disk(0.7, cplx(0.1, -0.2)), Domain::annulus(0.5, 1.0),
                          Domain::ball(2)}) {
      const SpacePtr sp = PolySpace::create(d, d.dimension() == 1 ? 8 : 4);
      const Eigen::MatrixXcd G = gram_matrix(*sp);
      worst = std::max(worst, (G - G.adjoint()).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff());
    }
    const Eigen::MatrixXcd G = gram_matrix(*PolySpace::create(Domain::polydisc({1.0, 1.0}), 1));
    worst = std::max(worst, std::abs(G(1, 2)));
    return at_most(worst, 1e-12);
  });
  R.check(S, "orthonormal-disk-closed-form", "", [&] {
    const SpacePtr sp = PolySpace::create(Domain::disk(), 16);
    const OrthonormalBasis onb = orthonormal_basis(*sp, Point{0.0});
    double worst = std::abs(onb.sigma(0).value(Point{0.0}) - 1.0 / std::sqrt(pi));
    for (std::size_t k = 0; k < onb.size(); ++k) {
      Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sp->size()));
      expected(static_cast<Eigen::Index>(k)) = std::sqrt((k + 1.0) / pi);
      worst = std::max(worst, (onb.transform.col(static_cast<Eigen::Index>(k)) - expected).cwiseAbs().maxCoeff());
    }
    return at_most(worst, 1e-10, "sigma_k = sqrt((k+1)/pi) z^k");
  });
  R.check(S, "orthonormal-gram-and-jets", "", [&] {
    double worst = 0.0;
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
      worst = std::max(worst, (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff());
      // Taylor coefficients recomputed from the basis functions, relative to the jet row size.
      for (std::size_t b = 0; b < onb.size(); ++b) {
        const Eigen::RowVectorXcd row = sp->taylor_row(c.z, onb.indices[b]);
        const double scale = sp->to_ortho(row).norm();
        const Eigen::RowVectorXcd t = row * onb.transform;
        for (Eigen::Index a = static_cast<Eigen::Index>(b) + 1; a < t.size(); ++a) {
          worst = std::max(worst, std::abs(t(a)) / scale);
        }
        if (!(onb.jets(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real() > 0.0)) worst = 1.0;
      }
    }
    return at_most(worst, 1e-9, "Gram = I; D^beta sigma_alpha(z0) = 0 for beta < alpha");
  });
  R.check(S, "truncation-monotone", "", [&] {
    double worst_drop = 0.0;
    for (cplx z : {cplx(0.0), cplx(0.3), cplx(0.5, 0.2), cplx(0.0, -0.7)}) {
      double prev = 0.0;
      for (int D = 2; D <= 16; D += 2) {
        const double K = kernel2_diagonal(*PolySpace::create(Domain::disk(), D), delta1(0), Point{z}).K;
        worst_drop = std::max(worst_drop, (prev - K) / K);
        prev = K;
      }
    }
    return at_most(worst_drop, 1e-12, "K non-decreasing in D");
  });
  R.check(S, "truncation-stabilization", "", [&] {
    double worst = 0.0;
    const SpacePtr s14 = PolySpace::create(Domain::disk(), 14), s16 = PolySpace::create(Domain::disk(), 16);
    for (cplx z : {cplx(0.0), cplx(0.2), cplx(0.0, 0.3), cplx(-0.3)}) {
      worst = std::max(worst, rel(kernel2_diagonal(*s14, delta1(0), Point{z}).K,
                                  kernel2_diagonal(*s16, delta1(0), Point{z}).K));
    }
    return at_most(worst, 1e-8, "D = 14 vs 16 for |z| <= 0.3");
  });
  R.check(S, "bergman-series", "", [&] {
    const SpacePtr sp = PolySpace::create(Domain::disk(), 30);
    double worst = 0.0;
    for (cplx z : {cplx(0.0), cplx(0.25), cplx(0.0, 0.5), cplx(0.3, -0.4)}) {
      const OrthonormalBasis onb = orthonormal_basis(*sp, Point{0.0});
      double s = 0.0;
      for (std::size_t k = 0; k < onb.size(); ++k) s += std::norm(onb.sigma(k).value(Point{z}));
      worst = std::max(worst, rel(s, bergman_disk(z)));
    }
    return at_most(worst, 1e-6, "D = 30, |z| <= 0.5");
  });
  R.check(S, "sub-mean-value-bound", "", [&] {
    auto rng = R.rng(21);
    const SpacePtr sp = PolySpace::create(Domain::disk(), 16);
    Functional xi(1);
    xi.set(mi({0}), 1.0);
    xi.set(mi({1}), cplx(0.5, -0.25));
    double worst = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double C = submean_constant(xi, p, 0.5);
      for (int i = 0; i < 200; ++i) {
        SpaceFunction f = random_element(*sp, rng);
        f = f * cplx(1.0 / f.lp_norm(p));
        const Point z{random_in_disk(rng, 0.5)};
        worst = std::max(worst, std::abs(f.apply(xi, z)) / C);
      }
    }
    return at_most(worst, 1.0, "|xi.f(z)| / C_{K,p}, K = {|z| <= 1/2}");
  });
}

// ---------------------------------------------------------------- kernels

inline void suite_kernels(Runner& R) {
  const std::string S = "kernels";
  const double pi = std::numbers::pi;
  const SpacePtr disk = PolySpace::create(Domain::disk(), 16, Truncation::automatic, QuadOrders{32, 64});

  R.check(S, "closed-form-disk", "AC1", [&] {
    double worst_irls = 0.0, worst_exact = 0.0, slowest = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      for (int k = 0; k <= 2; ++k) {
        const auto t0 = Clock::now();
        const double K = p == 2.0 ? kernel2_diagonal(*disk, delta1(k), Point{0.0}).K
                                  : kernelp_diagonal(*disk, delta1(k), Point{0.0}, p).K;
        slowest = std::max(slowest, std::chrono::duration<double>(Clock::now() - t0).count());
        (p == 2.0 ? worst_exact : worst_irls) = std::max(p == 2.0 ? worst_exact : worst_irls, rel(K, closed_disk(p, k)));
      }
    }
    const bool ok = worst_irls <= 1e-4 && worst_exact <= 1e-9 && slowest < 5.0;
    return Outcome{ok, std::max(worst_irls / 1e-4, worst_exact / 1e-9), 1.0,
                   "irls rel " + fmt12(worst_irls) + " (<= 1e-4), exact rel " + fmt12(worst_exact) + " (<= 1e-9)" +
                       (slowest < 5.0 ? "" : ", a case exceeded 5 s")};
  });
  R.check(S, "closed-form-scaled-disk", "", [&] {
    double worst = 0.0;
    for (double r : {0.5, 2.0}) {
      const SpacePtr sp = PolySpace::create(Domain::disk(r), 16);
      for (double p : {1.5, 2.0, 3.0})
        for (int k : {0, 1}) worst = std::max(worst, rel(kernelp_diagonal(*sp, delta1(k), Point{0.0}, p).K, closed_disk(p, k, r)));
    }
    return at_most(worst, 1e-8);
  });
  R.check(S, "off-center-disk", "", [&] {
    // K_{delta_0, p} is the same for every p by the change of variables under disk automorphisms.
    const SpacePtr sp = PolySpace::create(Domain::disk(), 24);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0})
      for (cplx z : {cplx(0.3), cplx(0.0, -0.5)})
        worst = std::max(worst, rel(kernelp_diagonal(*sp, delta1(0), Point{z}, p).K, bergman_disk(z)));
    return at_most(worst, 1e-6, "K = 1/(pi (1 - |z|^2)^2) for all p");
  });
  R.check(S, "bidisc-origin", "", [&] {
    const SpacePtr sp = PolySpace::create(Domain::polydisc({1.0, 1.0}), 6, Truncation::automatic, QuadOrders{8, 16});
    return at_most(rel(kernel2_diagonal(*sp, Functional::delta(mi({0, 0})), Point{0.0, 0.0}).K, 1.0 / (pi * pi)), 1e-12);
  });
  R.check(S, "evaluation-invariants", "", [&] {
    double worst_k = 0.0, worst_c = 0.0, worst_n = 0.0;
    Functional xi(1);
    xi.set(mi({0}), 1.0);
    xi.set(mi({2}), cplx(0.3, 0.2));
    for (double p : {1.5, 2.0, 3.0}) {
      for (cplx z : {cplx(0.0), cplx(0.4, -0.3)}) {
        const KernelEvaluation ev = kernelp_diagonal(*disk, xi, Point{z}, p);
        worst_k = std::max(worst_k, rel(ev.K, std::pow(ev.m, -p)));
        worst_c = std::max(worst_c, ev.diagnostics.constraint_residual);
        worst_n = std::max(worst_n, rel(ev.minimizer.lp_norm(p), ev.m));
      }
    }
    return Outcome{worst_k <= 1e-12 && worst_c <= 1e-9 && worst_n <= 1e-8, std::max({worst_k, worst_c, worst_n}), 1e-8,
                   "K = m^-p " + fmt12(worst_k) + ", constraint " + fmt12(worst_c) + ", norm " + fmt12(worst_n)};
  });
  R.check(S, "cross-path-p2", "AC2", [&] {
    auto rng = R.rng(31);
    const SpacePtr bid = PolySpace::create(Domain::polydisc({1.0, 1.0}));
    const SpacePtr dsk = PolySpace::create(Domain::disk());
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const bool on_disk = i < 10;
      const PolySpace& sp = on_disk ? *dsk : *bid;
      const std::size_t n = sp.dimension();
      Functional xi(n);
      for (const auto& a : enumerate_total_degree(n, 2))
        if (rng() % 2 == 0 || a.degree() == 0) xi.set(a, random_cplx(rng));
      Point z;
      for (std::size_t j = 0; j < n; ++j) z.push_back(random_in_disk(rng, 0.8));
      worst = std::max(worst, rel(kernelp_diagonal(sp, xi, z, 2.0).K, kernel2_diagonal(sp, xi, z).K));
    }
    return at_most(worst, 1e-9, "10 disk + 10 bidisc cases");
  });
  R.check(S, "product-formula", "AC3", [&] {
    // Tensor quadrature and per-axis truncation make the factorization exact in the discrete problem.
    const QuadOrders o{12, 24};
    const int D = 6;
    const SpacePtr d1 = PolySpace::create(Domain::disk(), D, Truncation::per_axis, o);
    const SpacePtr d2 = PolySpace::create(Domain::disk(0.8, cplx(0.1, 0.0)), D, Truncation::per_axis, o);
    const SpacePtr prod = PolySpace::create(product_domain(d1->domain(), d2->domain()), D, Truncation::per_axis, o);
    struct Case {
      Functional x1, x2;
      cplx z1, z2;
    };
    Functional mix(1);
    mix.set(mi({0}), 1.0);
    mix.set(mi({1}), cplx(0.0, 0.5));
    const std::vector<Case> cases = {{delta1(0), delta1(0), 0.3, cplx(0.1, -0.2)},
                                     {delta1(1), mix, cplx(0.0, 0.2), 0.25}};
    double w2 = 0.0, w15 = 0.0;
    for (const auto& c : cases) {
      Functional x0(2);
      for (const auto& [a, u] : c.x1.terms())
        for (const auto& [b, v] : c.x2.terms()) x0.set(mi({a[0], b[0]}), u * v);
      for (double p : {2.0, 1.5}) {
        const double m0 = kernelp_diagonal(*prod, x0, Point{c.z1, c.z2}, p).m;
        const double m1 = kernelp_diagonal(*d1, c.x1, Point{c.z1}, p).m;
        const double m2 = kernelp_diagonal(*d2, c.x2, Point{c.z2}, p).m;
        (p == 2.0 ? w2 : w15) = std::max(p == 2.0 ? w2 : w15, rel(m0, m1 * m2));
      }
    }
    // The p = 2 value must also match the continuous bidisc closed form at the origin.
    const double K00 = kernel2_diagonal(*prod, Functional::delta(mi({0, 0})), Point{0.0, cplx(0.1, 0.0)}).K;
    w2 = std::max(w2, rel(K00, 1.0 / (pi * pi * 0.64)));
    return Outcome{w2 <= 1e-6 && w15 <= 1e-4, std::max(w2 / 1e-6, w15 / 1e-4), 1.0,
                   "p=2 rel " + fmt12(w2) + " (<= 1e-6), p=1.5 rel " + fmt12(w15) + " (<= 1e-4)"};
  });
  R.check(S, "off-diagonal-examples", "", [&] {
    double worst = 0.0;
    const OffDiagonalKernel k0 = off_diagonal(*disk, delta1(0), Point{0.0}, 2.0);
    for (cplx z : {cplx(0.0), cplx(0.5, 0.3), cplx(-0.8)}) worst = std::max(worst, std::abs(k0.values.value(Point{z}) - 1.0 / pi));
    const OffDiagonalKernel k1 = off_diagonal(*disk, delta1(1), Point{0.0}, 2.0);
    for (cplx z : {cplx(0.5, 0.3), cplx(-0.8)}) worst = std::max(worst, std::abs(k1.values.value(Point{z}) - 2.0 / pi * z));
    for (double p : {1.5, 3.0}) {
      const Point w{cplx(0.2, -0.4)};
      Functional xi(1);
      xi.set(mi({0}), 1.0);
      xi.set(mi({1}), 0.5);
      const OffDiagonalKernel k = off_diagonal(*disk, xi, w, p);
      worst = std::max(worst, rel(std::real(k.values.apply(xi, w)), k.base.K) + std::abs(std::imag(k.values.apply(xi, w))));
    }
    return at_most(worst, 1e-8);
  });
  R.check(S, "reproducing-formula", "AC5", [&] {
    auto rng = R.rng(41);
    const SpacePtr ann = PolySpace::create(Domain::annulus(0.5, 1.0), 16);
    double worst_rep = 0.0, worst_orth = 0.0, worst_self = 0.0;
    struct Setting {
      const PolySpace* sp;
      Point w;
      Functional xi;
    };
    Functional mix(1);
    mix.set(mi({0}), 1.0);
    mix.set(mi({1}), cplx(0.3, -0.2));
    const std::vector<Setting> settings = {{disk.get(), {cplx(0.2, 0.1)}, mix},
                                           {disk.get(), {cplx(-0.5)}, delta1(1)},
                                           {ann.get(), {cplx(0.0, 0.72)}, mix},
                                           {ann.get(), {cplx(-0.6, 0.2)}, delta1(0)}};
    for (const auto& st : settings) {
      for (double p : {1.5, 2.0, 3.0}) {
        const KernelEvaluation ev = kernelp_diagonal(*st.sp, st.xi, st.w, p);
        worst_self = std::max(worst_self, reproducing_residual(ev, ev.minimizer));
        for (int i = 0; i < 30; ++i) {
          const SpaceFunction f = random_element(*st.sp, rng);
          worst_rep = std::max(worst_rep, reproducing_residual(ev, f));
          // (xi . m)(w) = 1, so g = f - (xi . f)(w) m lies in the annihilator of xi at w.
          const SpaceFunction g = st.sp->make(f.coeffs() - f.apply(st.xi, st.w) * ev.minimizer.coeffs());
          const double scale = g.lp_norm(p) * std::pow(ev.m, p - 1.0);
          worst_orth = std::max(worst_orth, std::abs(reproducing_integral(ev, g)) / scale);
        }
      }
    }
    const bool ok = worst_rep <= 1e-5 && worst_orth <= 1e-8 && worst_self <= 1e-9;
    return Outcome{ok, std::max({worst_rep / 1e-5, worst_orth / 1e-8, worst_self / 1e-9}), 1.0,
                   "residual " + fmt12(worst_rep) + " (<= 1e-5), orthogonality " + fmt12(worst_orth) +
                       " (<= 1e-8), self " + fmt12(worst_self) + " (<= 1e-9); 30 polynomials x p in {1.5,2,3} x disk, annulus"};
  });
  R.check(S, "mean-value-property", "", [&] {
    PolyCoeffs f({0.0}, 2);
    f.set(mi({2}), 1.0);
    return at_most(reproducing_residual(*disk, delta1(0), Point{0.0}, 2.0, f), 1e-8);
  });
  R.check(S, "h-inequalities", "AC8", [&] {
    auto rng = R.rng(51);
    double worst = -std::numeric_limits<double>::infinity();
    double diag = 0.0;
    Functional mix(1);
    mix.set(mi({0}), 1.0);
    mix.set(mi({1}), cplx(0.2, 0.1));
    for (double p : {1.5, 3.0}) {
      for (int i = 0; i < 25; ++i) {
        const Functional& xi = i % 2 == 0 ? delta1(0) : mix;
        const KernelEvaluation ez = kernelp_diagonal(*disk, xi, Point{random_in_disk(rng, 0.7)}, p);
        const KernelEvaluation ew = kernelp_diagonal(*disk, xi, Point{random_in_disk(rng, 0.7)}, p);
        const HQuantity h = h_quantity(ez, ew);
        worst = std::max(worst, h.lhs - h.rhs);
        if (i == 0) {
          const HQuantity hz = h_quantity(ez, ez);
          diag = std::max({diag, std::abs(hz.H) / ez.K, hz.lhs, std::abs(hz.rhs)});
        }
      }
    }
    return Outcome{worst <= 1e-8 && diag <= 1e-10, worst, 1e-8,
                   "max lhs - rhs over 25 pairs x p in {1.5,3}; z = w gives " + fmt12(diag)};
  });
  R.check(S, "h-examples", "", [&] {
    const HQuantity a = h_quantity(*disk, delta1(0), 1.5, Point{0.1}, Point{0.2});
    const HQuantity b = h_quantity(*disk, delta1(0), 3.0, Point{0.0}, Point{0.3});
    return at_most(std::max(a.lhs - a.rhs, b.lhs - b.rhs), 1e-8);
  });
  R.check(S, "bounds", "AC8", [&] {
    int violations = 0, cases = 0;
    double worst_ratio = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      for (int k : {0, 1}) {
        for (double x : {0.0, 0.5, 0.9}) {
          const Bounds b = bounds_check(*disk, delta1(k), p, Point{x});
          ++cases;
          violations += b.holds() && b.lower > 0.0 && std::isfinite(b.upper) ? 0 : 1;
          worst_ratio = std::max(worst_ratio, b.K / b.upper);
        }
      }
    }
    const Bounds b0 = bounds_check(*disk, delta1(0), 2.0, Point{0.0});
    const double ex = std::abs(b0.lower - 1.0 / (4.0 * std::numbers::pi));
    return Outcome{violations == 0 && ex < 1e-12, static_cast<double>(violations), 0.0,
                   std::to_string(cases) + " cases, max K/upper " + fmt12(worst_ratio) + ", lower(0) = 1/(4 pi) err " + fmt12(ex)};
  });
  R.check(S, "domain-monotonicity-exhaustion", "AC8", [&] {
    bool ok = true;
    std::string detail;
    double final_gap = 0.0;
    for (double p : {1.5, 2.0}) {
      for (int k : {0, 1}) {
        const double Kd = kernelp_diagonal(*disk, delta1(k), Point{0.0}, p).K;
        double prev = std::numeric_limits<double>::infinity();
        for (double r : {0.5, 0.9, 0.99, 0.999}) {
          const SpacePtr sp = PolySpace::create(Domain::disk(r), 16);
          const double K = kernelp_diagonal(*sp, delta1(k), Point{0.0}, p).K;
          if (!(K >= Kd)) ok = false;
          if (r <= 0.9 && !(K > Kd)) ok = false;
          if (!(K < prev)) ok = false;
          prev = K;
          if (r == 0.999) final_gap = std::max(final_gap, (K - Kd) / Kd);
        }
      }
    }
    return Outcome{ok && final_gap <= 1e-2, final_gap, 1e-2, ok ? "ordered and decreasing" : "ordering violated"};
  });
  R.check(S, "uniqueness-random-starts", "", [&] {
    auto rng = R.rng(61);
    double worst = 0.0;
    Functional mix(1);
    mix.set(mi({0}), 1.0);
    mix.set(mi({1}), cplx(0.4, 0.1));
    for (double p : {1.5, 3.0}) {
      const Point z{cplx(0.3, -0.2)};
      std::vector<Eigen::VectorXcd> sols;
      for (int s = 0; s < 5; ++s) {
        const Eigen::VectorXcd x0 = random_feasible_start(*disk, mix, z, rng(), 1.0);
        sols.push_back(kernelp_diagonal(*disk, mix, z, p, with_raw_start(*disk, {}, x0)).minimizer.coeffs());
      }
      for (std::size_t a = 0; a < sols.size(); ++a)
        for (std::size_t b = a + 1; b < sols.size(); ++b) worst = std::max(worst, disk->make(sols[a] - sols[b]).lp_norm(2.0));
    }
    return at_most(worst, 1e-6, "pairwise L2 distance of minimizers from 5 random starts");
  });
  R.check(S, "log-psh-circle-means", "AC9", [&] {
    double worst = std::numeric_limits<double>::infinity();
    const int M = 24;
    const double r = 0.1;
    for (double p : {1.5, 2.0}) {
      for (int c = 0; c < 10; ++c) {
        const cplx center = std::polar(0.06 * c, 2.0 * std::numbers::pi * 0.37 * c);
        const double l0 = std::log(kernelp_diagonal(*disk, delta1(0), Point{center}, p).K);
        double mean = 0.0;
        for (int j = 0; j < M; ++j) {
          const Point z{center + std::polar(r, 2.0 * std::numbers::pi * j / M)};
          mean += std::log(kernelp_diagonal(*disk, delta1(0), z, p).K) / M;
        }
        worst = std::min(worst, mean - l0);
      }
    }
    return at_least(worst, -1e-6, "min circle-mean excess of log K, r = 0.1, 10 centers x p in {1.5,2}");
  });
  R.check(S, "strict-psh-margin", "AC9", [&] {
    const int M = 32;
    const double r = 0.1;
    const double l0 = std::log(kernel2_diagonal(*disk, delta1(0), Point{0.0}).K);
    double mean = 0.0;
    for (int j = 0; j < M; ++j) mean += std::log(kernel2_diagonal(*disk, delta1(0), Point{std::polar(r, 2.0 * std::numbers::pi * j / M)}).K) / M;
    return at_least(mean - l0, 1e-4, "circle-mean excess at r = 0.1, p = 2, delta_0");
  });
  R.check(S, "boundary-blow-up", "AC10", [&] {
    const SpacePtr sp = PolySpace::create(Domain::disk(), 24);
    const double p = 1.5;
    std::vector<double> X, Y;
    for (double x : {0.5, 0.6, 0.7, 0.8, 0.9}) {
      X.push_back(-std::log(boundary_distance(sp->domain(), Point{x})));
      Y.push_back(std::log(kernelp_diagonal(*sp, delta1(0), Point{x}, p).K));
    }
    const double mx = std::accumulate(X.begin(), X.end(), 0.0) / X.size();
    const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / Y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      sxy += (X[i] - mx) * (Y[i] - my);
      sxx += (X[i] - mx) * (X[i] - mx);
    }
    return at_least(sxy / sxx, p, "least-squares slope of log K vs -log delta, D = 24");
  });
  R.check(S, "lipschitz-smoke", "", [&] {
    double L = 0.0;
    const double h = 1e-3;
    for (double p : {1.5, 2.0}) {
      for (cplx z : {cplx(0.0), cplx(0.3, 0.1), cplx(-0.2, 0.45)}) {
        const double K0 = kernelp_diagonal(*disk, delta1(1), Point{z}, p).K;
        for (cplx dir : {cplx(1.0), cplx(0.0, 1.0)}) {
          const double K1 = kernelp_diagonal(*disk, delta1(1), Point{z + h * dir}, p).K;
          L = std::max(L, std::abs(K1 - K0) / h);
        }
      }
    }
    return at_most(L, 1e3, "fitted Lipschitz constant on |z| <= 0.5");
  });
  R.check(S, "nonconvex-flagged", "", [&] {
    const KernelEvaluation ev = kernelp_diagonal(*disk, delta1(0), Point{0.2}, 0.5);
    bool flagged = false;
    for (const auto& f : ev.diagnostics.flags) flagged = flagged || f == "nonconvex-best-found";
    return Outcome{flagged && ev.K > 0.0 && ev.diagnostics.method == "multistart", flagged ? 0.0 : 1.0, 0.0,
                   "p = 0.5 result carries nonconvex-best-found"};
  });
  R.check(S, "cloud-flagged", "", [&] {
    const Quadrature q = build_quadrature(Domain::disk(), 8, 16);
    const Domain cl = Domain::cloud(1, q.flat_nodes(), q.weights());
    const SpacePtr sp = PolySpace::create(cl, 4);
    const KernelEvaluation ev = kernelp_diagonal(*sp, delta1(0), Point{0.0}, 2.0);
    bool flagged = false;
    for (const auto& f : ev.diagnostics.flags) flagged = flagged || f == "unverified-density";
    return Outcome{flagged, flagged ? 0.0 : 1.0, 0.0, "cloud result carries unverified-density"};
  });
}

// ---------------------------------------------------------------- higher

inline void suite_higher(Runner& R) {
  const std::string S = "higher";
  const double pi = std::numbers::pi;
  const SpacePtr disk = PolySpace::create(Domain::disk(), 16);
  auto Hz = [](int k) { return HomogeneousPolynomial::monomial(mi({k})); };

  R.check(S, "apply-PH-examples", "", [&] {
    PolyCoeffs z3({0.0}, 3), z2({0.0}, 2), g({0.0}, 2);
    z3.set(mi({3}), 1.0);
    z2.set(mi({2}), 1.0);
    g.set(mi({0}), 2.0);
    g.set(mi({1}), cplx(0.0, 1.0));
    g.set(mi({2}), -1.0);
    double err = std::abs(apply_PH(Hz(2), z3, Point{0.0}));
    err = std::max(err, std::abs(apply_PH(Hz(2), z2, Point{0.0}) - 2.0));
    err = std::max(err, std::abs(apply_PH(HomogeneousPolynomial::one(1), g, Point{0.4}) - g.evaluate(Point{0.4})));
    return at_most(err, 1e-14);
  });
  R.check(S, "direct-closed-form", "", [&] {
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0}) {
      for (int k : {1, 2}) {
        const double expected = std::pow(std::tgamma(k + 1.0), p) * closed_disk(p, k);
        worst = std::max(worst, rel(higher_kernel_direct(*disk, Hz(k), Point{0.0}, p).K, expected));
      }
      worst = std::max(worst, rel(higher_kernel_direct(*disk, HomogeneousPolynomial::one(1), Point{0.3}, p).K,
                                  kernelp_diagonal(*disk, delta1(0), Point{0.3}, p).K));
    }
    return at_most(worst, 1e-8, "(k!)^p (pk+2)/(2 pi); H = 1 equals delta_0");
  });
  R.check(S, "three-route-agreement", "AC4", [&] {
    double w2 = 0.0, w15 = 0.0;
    for (int k : {1, 2}) {
      for (double x : {0.0, 0.3}) {
        const Point z{x};
        const double direct = higher_kernel_direct(*disk, Hz(k), z, 2.0).K;
        const InfResult inf = higher_kernel_via_inf(*disk, Hz(k), z, 2.0);
        const double star = kernel2_diagonal(*disk, minimizing_xi_p2(*disk, Hz(k), z), z).K;
        w2 = std::max({w2, rel(inf.K, direct), rel(star, direct), rel(star, inf.K)});
        const double d15 = higher_kernel_direct(*disk, Hz(k), z, 1.5).K;
        const InfResult i15 = higher_kernel_via_inf(*disk, Hz(k), z, 1.5);
        w15 = std::max(w15, rel(i15.K, d15));
      }
    }
    return Outcome{w2 <= 1e-7 && w15 <= 1e-4, std::max(w2 / 1e-7, w15 / 1e-4), 1.0,
                   "p=2 pairwise rel " + fmt12(w2) + " (<= 1e-7), p=1.5 rel " + fmt12(w15) + " (<= 1e-4)"};
  });
  R.check(S, "minimizing-xi-examples", "", [&] {
    const Functional a = minimizing_xi_p2(*disk, Hz(2), Point{0.0});
    double err = std::abs(a.coefficient(mi({2})) - 2.0) + std::abs(a.coefficient(mi({0}))) + std::abs(a.coefficient(mi({1})));
    const Functional b = minimizing_xi_p2(*disk, HomogeneousPolynomial::one(1), Point{0.3});
    err += std::abs(b.coefficient(mi({0})) - 1.0) + (b.terms().size() == 1 ? 0.0 : 1.0);
    const Functional c = minimizing_xi_p2(*disk, Hz(1), Point{0.3});
    err += rel(kernel2_diagonal(*disk, c, Point{0.3}).K, higher_kernel_direct(*disk, Hz(1), Point{0.3}, 2.0).K);
    err += std::abs(c.coefficient(mi({0}))) > 1e-3 ? 0.0 : 1.0;
    return at_most(err, 1e-8);
  });
  R.check(S, "sandwich", "", [&] {
    auto rng = R.rng(71);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k : {1, 2}) {
      const FunctionalFamily fam = FunctionalFamily::for_H(Hz(k));
      for (double p : {1.5, 2.0}) {
        for (double x : {0.0, 0.3}) {
          const Point z{x};
          const double direct = higher_kernel_direct(*disk, Hz(k), z, p).K;
          std::optional<Eigen::VectorXcd> warm;
          for (int i = 0; i < 50; ++i) {
            std::vector<cplx> free(fam.free_dimension());
            for (auto& c : free) c = random_in_disk(rng, 3.0);
            const Functional xi = fam.member(free);
            SolverOptions o;
            const KernelEvaluation ev = kernelp_diagonal(*disk, xi, z, p, warm ? with_raw_start(*disk, o, *warm) : o);
            warm = ev.minimizer.coeffs();
            worst = std::max(worst, (direct - ev.K) / std::max(1.0, ev.K));
          }
        }
      }
    }
    return at_most(worst, 1e-8, "max (K^{H,p} - K_xi) over 50 random xi in S_H per (H, p, z)");
  });
  R.check(S, "bidisc-higher-p2", "", [&] {
    const SpacePtr bid = PolySpace::create(Domain::polydisc({1.0, 1.0}), 6, Truncation::automatic, QuadOrders{8, 16});
    double worst = 0.0;
    for (const auto& H : {HomogeneousPolynomial::monomial(mi({1, 0})), HomogeneousPolynomial::monomial(mi({1, 1})),
                          HomogeneousPolynomial(2, {{mi({2, 0}), 1.0}, {mi({1, 1}), 0.5}})}) {
      for (const Point& z : {Point{0.0, 0.0}, Point{0.3, cplx(0.0, 0.2)}}) {
        const double direct = higher_kernel_direct(*bid, H, z, 2.0).K;
        const double inf = higher_kernel_via_inf(*bid, H, z, 2.0).K;
        const double star = kernel2_diagonal(*bid, minimizing_xi_p2(*bid, H, z), z).K;
        worst = std::max({worst, rel(inf, direct), rel(star, direct), rel(star, inf)});
      }
    }
    return at_most(worst, 1e-7, "direct, via-inf and minimizing-xi routes on the bidisc");
  });
  R.check(S, "nontrivial-infinite-dim", "", [&] {
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 4; ++j)
      for (double p : {1.5, 2.0}) smallest = std::min(smallest, higher_kernel_direct(*disk, Hz(j), Point{0.0}, p).K);
    for (const auto& d : {Domain::polydisc({1.0, 1.0}), Domain::ball(2)}) {
      const SpacePtr ind = PolySpace::create(azukawa_indicatrix(GreenModel::balanced(d)), 4, Truncation::automatic,
                                             QuadOrders{8, 16});
      smallest = std::min(smallest, higher_kernel_direct(*ind, HomogeneousPolynomial::monomial(mi({1, 0})), Point{0.0, 0.0}, 2.0).K);
    }
    return at_least(smallest, 1e-300, "K^{z^j,p} > 0 for j <= 4 on the disk; K^{z1,2} > 0 on bidisc and ball indicatrices");
  });
  R.check(S, "higher-monotone-moebius", "", [&] {
    // The minimizer vanishes at the pole; |f|^p is not smooth there, so finer quadrature is used.
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(i == 30 ? 0.0 : -3.0 + 0.1 * i);
    double worst = 0.0;
    std::string detail;
    bool ok = true;
    for (double p : {1.0, 1.5, 2.0}) {
      SweepOptions o;
      o.degree = 24;
      o.orders = QuadOrders{128, 256};
      o.threads = R.options().threads;
      const SweepTable t = sweep(GreenModel::moebius(0.5), Hz(1), p, grid, o);
      const double slack = p == 1.0 ? 1e-3 : 1e-8;
      const ColumnCheck c = check_columns(t, slack);
      ok = ok && c.monotone && !t.any_flagged();
      worst = std::max(worst, c.worst_drop / slack);
      detail += "p=" + fmt12(p) + " drop " + fmt12(c.worst_drop) + " (slack " + fmt12(slack) + ") ";
    }
    return Outcome{ok, worst, 1.0, detail};
  });
}

// ---------------------------------------------------------------- green

inline std::vector<double> uniform_grid(double a, double b, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(i + 1 == points ? b : a + (b - a) * i / (points - 1));
  return g;
}

inline void suite_green(Runner& R) {
  const std::string S = "green";
  const double pi = std::numbers::pi;
  R.check(S, "sublevel-examples", "", [&] {
    double err = 0.0;
    const Domain a = sublevel_domain(GreenModel::balanced(Domain::disk()), -1.0);
    err += std::abs(a.as<Disk>().radius - std::exp(-1.0));
    const Domain b = sublevel_domain(GreenModel::moebius(0.5), 0.0);
    err += std::abs(b.as<Disk>().radius - 1.0) + std::abs(b.as<Disk>().center);
    const Domain c = sublevel_domain(GreenModel::moebius(0.5), std::log(0.5));
    err += std::abs(c.as<Disk>().radius - 0.4) + std::abs(c.as<Disk>().center - 0.4);
    const Domain d = sublevel_domain(GreenModel::balanced(Domain::polydisc({1.0, 2.0})), -1.0);
    err += std::abs(d.as<Polydisc>().radii[1] - 2.0 * std::exp(-1.0));
    return at_most(err, 1e-14);
  });
  R.check(S, "azukawa-balanced", "", [&] {
    int wrong = 0;
    for (const auto& d : {Domain::disk(), Domain::polydisc({1.0, 1.0}), Domain::ball(2)})
      wrong += azukawa_indicatrix(GreenModel::balanced(d)) == d ? 0 : 1;
    bool threw = false;
    try {
      (void)azukawa_indicatrix(GreenModel::moebius(0.5));
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    wrong += threw ? 0 : 1;
    return at_most(wrong, 0.0);
  });
  R.check(S, "hausdorff-balanced", "", [&] {
    double err = 0.0;
    for (const auto& d : {Domain::disk(), Domain::polydisc({1.0, 2.0}), Domain::ball(2, 1.5)}) {
      for (double a : {-3.0, -1.0, -0.2}) {
        const Domain back = scale_domain(sublevel_domain(GreenModel::balanced(d), a), std::exp(-a));
        err += std::abs(back.diameter() - d.diameter()) + std::abs(back.analytic_volume() - d.analytic_volume());
      }
    }
    return at_most(err, 1e-12, "Omega_a = e^{-a}{G < a} equals the domain");
  });
  R.check(S, "sweep-disk-closed-form", "", [&] {
    double worst = 0.0;
    const auto grid = uniform_grid(-2.0, 0.0, 9);
    for (double p : {1.5, 2.0}) {
      for (int k : {0, 1}) {
        SweepOptions o;
        o.threads = R.options().threads;
        const SweepTable t = sweep(GreenModel::balanced(Domain::disk()), delta1(k), p, grid, o);
        for (const auto& row : t.rows) {
          worst = std::max(worst, rel(row.K, closed_disk(p, k, std::exp(row.a))));
          worst = std::max(worst, rel(row.scaled, closed_disk(p, k)));
        }
      }
    }
    return at_most(worst, 1e-8, "K_a = (pk+2)/(2 pi e^{(pk+2)a})");
  });
  R.check(S, "moebius-sweeps", "AC6", [&] {
    const auto grid = uniform_grid(-3.0, 0.0, 31);
    bool ok = true;
    double worst_drop = 0.0, worst_curv = 0.0;
    for (int k : {0, 1}) {
      for (double p : {1.0, 1.5, 2.0}) {
        SweepOptions o;
        o.degree = 24;
        o.threads = R.options().threads;
        const SweepTable t = sweep(GreenModel::moebius(0.5), delta1(k), p, grid, o);
        const ColumnCheck c = check_columns(t, 1e-8, 1e-6);
        ok = ok && c.monotone && c.log_convex && !t.any_flagged();
        worst_drop = std::max(worst_drop, c.worst_drop);
        worst_curv = std::min(worst_curv, c.worst_curvature);
      }
    }
    return Outcome{ok, worst_drop, 1e-8,
                   "max relative drop " + fmt12(worst_drop) + " (<= 1e-8), min second difference of log K " +
                       fmt12(worst_curv) + " (>= -1e-6); 31-point grid on [-3, 0], D = 24"};
  });
  R.check(S, "balanced-sweeps-constant", "AC6", [&] {
    double worst = 0.0;
    bool flagged = false;
    struct Case {
      Domain d;
      Functional xi;
      std::vector<double> p;
      int points;
      std::optional<QuadOrders> orders;
      int degree;
    };
    const std::vector<Case> cases = {
        {Domain::disk(), delta1(0), {1.0, 1.5, 2.0}, 31, std::nullopt, -1},
        {Domain::disk(), delta1(1), {1.0, 1.5, 2.0}, 31, std::nullopt, -1},
        {Domain::polydisc({1.0, 1.0}), Functional::delta(mi({1, 0})), {1.5, 2.0}, 7, QuadOrders{8, 16}, 6},
        {Domain::ball(2), Functional::delta(mi({0, 0})), {2.0}, 7, std::nullopt, 6}};
    for (const auto& c : cases) {
      for (double p : c.p) {
        SweepOptions o;
        o.orders = c.orders;
        o.degree = c.degree;
        o.threads = R.options().threads;
        const SweepTable t = sweep(GreenModel::balanced(c.d), c.xi, p, uniform_grid(-3.0, 0.0, c.points), o);
        flagged = flagged || t.any_flagged();
        worst = std::max(worst, check_columns(t).spread);
      }
    }
    return Outcome{worst <= 1e-7 && !flagged, worst, 1e-7, "relative spread of the scaled column; disk, bidisc, ball"};
  });
  R.check(S, "sweep-top-row-and-bound", "", [&] {
    const auto grid = uniform_grid(-2.0, 0.0, 11);
    SweepOptions o;
    o.threads = R.options().threads;
    o.degree = 24;
    double err = 0.0;
    bool bounded = true;
    for (double p : {1.5, 2.0}) {
      const SweepTable t = sweep(GreenModel::moebius(0.5), delta1(1), p, grid, o);
      const SpacePtr whole = PolySpace::create(Domain::disk(), 24);
      err = std::max(err, rel(t.rows.back().K, kernelp_diagonal(*whole, delta1(1), Point{0.5}, p).K));
      for (const auto& r : t.rows) bounded = bounded && r.scaled <= t.rows.back().scaled * (1.0 + 1e-6);
    }
    return Outcome{err <= 1e-10 && bounded, err, 1e-10, bounded ? "a = 0 row is the whole-domain kernel; column bounded by it" : "upper bound violated"};
  });
  R.check(S, "limit-chain", "AC7", [&] {
    bool ok = true;
    double worst_tail = 0.0;
    std::string detail;
    struct Case {
      Domain d;
      HomogeneousPolynomial H;
      std::optional<QuadOrders> orders;
      int degree;
    };
    const std::vector<Case> cases = {{Domain::disk(), HomogeneousPolynomial::one(1), std::nullopt, -1},
                                     {Domain::disk(), HomogeneousPolynomial::monomial(mi({1})), std::nullopt, -1},
                                     {Domain::polydisc({1.0, 1.0}), HomogeneousPolynomial::one(2), QuadOrders{8, 16}, 6},
                                     {Domain::polydisc({1.0, 1.0}), HomogeneousPolynomial::monomial(mi({1, 0})), QuadOrders{8, 16}, 6}};
    const std::vector<double> grid = {-3.2, -3.0, -2.0, -1.0, 0.0};
    for (const auto& c : cases) {
      for (double p : {1.5, 2.0}) {
        SweepOptions o;
        o.orders = c.orders;
        o.degree = c.degree;
        o.threads = R.options().threads;
        const Functional xi = FunctionalFamily::for_H(c.H).eta();
        const LimitChain lc = limit_chain_check(GreenModel::balanced(c.d), c.H, xi, p, grid, o, 1e-6);
        ok = ok && lc.pass && lc.tail_gap <= 1e-4;
        worst_tail = std::max(worst_tail, lc.tail_gap);
        if (!lc.pass) detail += c.d.kind() + " p=" + fmt12(p) + " failed; ";
      }
    }
    if (detail.empty()) detail = "lhs >= limit >= rhs within 1e-6 on disk and bidisc, H in {1, z}, p in {1.5, 2}";
    return Outcome{ok, worst_tail, 1e-4, detail};
  });
}

}  // namespace verify_detail

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"algebra", "quadrature", "kernels", "higher", "green", "all"};
  return names;
}

inline VerifyReport run_verify(const std::string& suite, const VerifyOptions& opts = {}) {
  using namespace verify_detail;
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("verify: unknown suite '" + suite + "'");
  }
  VerifyReport report;
  report.suite = suite;
  report.seed = opts.seed;
  const auto start = Clock::now();
  Runner R(report, opts, start);
  const bool all = suite == "all";
  if (all || suite == "algebra") suite_algebra(R);
  if (all || suite == "quadrature") suite_quadrature(R);
  if (all || suite == "kernels") suite_kernels(R);
  if (all || suite == "higher") suite_higher(R);
  if (all || suite == "green") suite_green(R);
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace xibergman
