#pragma once

// Closed-form pluricomplex Green functions on model domains, their sublevel
// sets {G(., o) < a}, and sweeps of a -> e^{(2n + pk)a} K_{{G < a}}(o).

#include <xibergman/domains.hpp>
#include <xibergman/higher.hpp>
#include <xibergman/kernels.hpp>
#include <xibergman/pspace.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace xibergman {

enum class GreenKind { balanced, moebius };

class GreenModel {
public:
  /// G(z, 0) = log of the Minkowski gauge of an origin-centered balanced shape.
  static GreenModel balanced(Domain base) {
    if (!base.is_origin_centered() || base.is<Annulus>() || base.is<Cloud>()) {
      throw DomainError("GreenModel: balanced model needs an origin-centered disk, polydisc, ball or product of them");
    }
    GreenModel g;
    g.kind_ = GreenKind::balanced;
    g.pole_ = Point(base.dimension(), 0.0);
    g.base_ = std::move(base);
    return g;
  }

  /// Unit disk with G(z, z0) = log |z - z0| / |1 - conj(z0) z|.
  static GreenModel moebius(cplx pole) {
    if (!(std::abs(pole) < 1.0)) throw DomainError("GreenModel: pole must lie in the unit disk");
    GreenModel g;
    g.kind_ = GreenKind::moebius;
    g.base_ = Domain::disk();
    g.pole_ = {pole};
    return g;
  }

  GreenKind kind() const { return kind_; }
  const Domain& base() const { return base_; }
  const Point& pole() const { return pole_; }
  std::size_t dimension() const { return base_.dimension(); }
  std::string describe() const {
    return kind_ == GreenKind::balanced ? "balanced/" + base_.kind() : "moebius-disk";
  }

private:
  GreenKind kind_ = GreenKind::balanced;
  Domain base_ = Domain::disk();
  Point pole_;
};

/// {G(., o) < a} for a <= 0.
inline Domain sublevel_domain(const GreenModel& g, double a) {
  if (!(a <= 0.0) || !std::isfinite(a)) throw std::invalid_argument("sublevel_domain: a must be <= 0");
  const double s = std::exp(a);
  if (g.kind() == GreenKind::balanced) return a == 0.0 ? g.base() : scale_domain(g.base(), s);
  const cplx z0 = g.pole()[0];
  const double r2 = std::norm(z0);
  const double den = 1.0 - s * s * r2;
  return Domain::disk(s * (1.0 - r2) / den, z0 * (1.0 - s * s) / den);
}

/// I_Omega(o); for a balanced domain with pole at the origin it is the domain itself.
inline Domain azukawa_indicatrix(const GreenModel& g) {
  if (g.kind() == GreenKind::balanced) return g.base();
  if (std::abs(g.pole()[0]) == 0.0) return Domain::disk();
  throw std::invalid_argument("azukawa_indicatrix: no closed form for an off-center Moebius pole");
}

/// Either a functional xi or a homogeneous polynomial H (higher-order kernel).
using SweepTarget = std::variant<Functional, HomogeneousPolynomial>;

inline int target_degree(const SweepTarget& t) {
  return std::visit([](const auto& v) { return v.degree(); }, t);
}

struct SweepRow {
  double a = 0.0;
  double K = 0.0;
  double scaled = 0.0;  // e^{(2n + pk)a} K
  double logK = 0.0;
  bool flagged = false;
  std::string message;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double p = 2.0;
  int k = 0;
  std::size_t n = 1;
  int degree = 0;
  std::string model;
  std::string target;  // "xi" or "H"

  bool any_flagged() const {
    for (const auto& r : rows)
      if (r.flagged) return true;
    return false;
  }
};

struct SweepOptions {
  int degree = -1;
  std::optional<QuadOrders> orders;
  SolverOptions solver;
  unsigned threads = 0;  // 0: XIBERGMAN_THREADS, then hardware concurrency
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("XIBERGMAN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results are
/// written by index so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// K at the pole of one sublevel domain.
inline KernelEvaluation sublevel_kernel(const GreenModel& g, const SweepTarget& target, double p, double a,
                                        const SweepOptions& opts) {
  const SpacePtr space = PolySpace::create(sublevel_domain(g, a), opts.degree, Truncation::automatic, opts.orders);
  if (const auto* xi = std::get_if<Functional>(&target)) return kernelp_diagonal(*space, *xi, g.pole(), p, opts.solver);
  return higher_kernel_direct(*space, std::get<HomogeneousPolynomial>(target), g.pole(), p, opts.solver);
}

inline SweepTable sweep(const GreenModel& g, const SweepTarget& target, double p, const std::vector<double>& a_grid,
                        const SweepOptions& opts = {}) {
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] <= 0.0)) throw std::invalid_argument("sweep: grid values must be <= 0");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1])) throw std::invalid_argument("sweep: grid must be strictly increasing");
  }
  std::visit([&](const auto& v) { require_same_dimension(g.dimension(), v.dimension(), "sweep"); }, target);
  SweepTable table;
  table.p = p;
  table.k = target_degree(target);
  table.n = g.dimension();
  table.degree = opts.degree < 0 ? default_degree(g.dimension()) : opts.degree;
  table.model = g.describe();
  table.target = std::holds_alternative<Functional>(target) ? "xi" : "H";
  table.rows.resize(a_grid.size());
  const double exponent = 2.0 * static_cast<double>(table.n) + p * table.k;
  parallel_for(a_grid.size(), resolve_threads(opts.threads), [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.a = a_grid[i];
    try {
      const KernelEvaluation ev = sublevel_kernel(g, target, p, row.a, opts);
      row.K = ev.K;
      row.scaled = std::exp(exponent * row.a) * ev.K;
      row.logK = std::log(ev.K);
      if (ev.diagnostics.flagged()) {
        row.flagged = true;
        for (const auto& f : ev.diagnostics.flags) row.message += (row.message.empty() ? "" : ";") + f;
      }
    } catch (const std::exception& e) {
      row.flagged = true;
      row.message = e.what();
      row.K = row.scaled = row.logK = std::nan("");
    }
  });
  return table;
}

struct ColumnCheck {
  bool monotone = true;       // scaled column non-decreasing
  bool log_convex = true;     // second differences of logK >= -slack
  double worst_drop = 0.0;    // largest relative decrease of the scaled column
  double worst_curvature = 0.0;  // most negative second difference of logK
  double spread = 0.0;        // (max - min) / max of the scaled column
};

inline ColumnCheck check_columns(const SweepTable& t, double monotone_slack = 1e-8, double convex_slack = 1e-6) {
  ColumnCheck c;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    lo = std::min(lo, t.rows[i].scaled);
    hi = std::max(hi, t.rows[i].scaled);
    if (i > 0) {
      const double drop = (t.rows[i - 1].scaled - t.rows[i].scaled) / std::abs(t.rows[i - 1].scaled);
      c.worst_drop = std::max(c.worst_drop, drop);
      if (!(drop <= monotone_slack)) c.monotone = false;
    }
    if (i > 1) {
      const double h1 = t.rows[i - 1].a - t.rows[i - 2].a;
      const double h2 = t.rows[i].a - t.rows[i - 1].a;
      // Divided second difference scaled to unit spacing for comparison with the slack.
      const double d2 = ((t.rows[i].logK - t.rows[i - 1].logK) / h2 - (t.rows[i - 1].logK - t.rows[i - 2].logK) / h1) *
                        (0.5 * (h1 + h2));
      c.worst_curvature = std::min(c.worst_curvature, d2);
      if (!(d2 >= -convex_slack)) c.log_convex = false;
    }
  }
  c.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  return c;
}

struct LimitChain {
  double lhs = 0.0;    // K_{xi, Omega, p}(o)
  double limit = 0.0;  // scaled column at the most negative a
  double rhs = 0.0;    // K^{H,p} on the indicatrix
  double tail_gap = 0.0;  // relative gap between the last two grid rows nearest -infinity
  bool pass = false;
  SweepTable table;
};

/// K_{xi,Omega,p}(o) >= lim e^{(2n + pk)a} K_a >= K^{H,p}_{I_Omega(o)}(o), with the
/// limit read off the most negative grid point.
inline LimitChain limit_chain_check(const GreenModel& g, const HomogeneousPolynomial& H, const Functional& xi, double p,
                                    const std::vector<double>& a_grid, const SweepOptions& opts = {},
                                    double tolerance = 1e-6) {
  if (g.kind() != GreenKind::balanced) throw std::invalid_argument("limit_chain_check: needs a balanced model");
  if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("limit_chain_check: requires 0 < p <= 2");
  if (a_grid.size() < 2) throw std::invalid_argument("limit_chain_check: grid needs at least two points");
  if (!FunctionalFamily::for_H(H).contains(xi, 1e-14)) throw std::invalid_argument("limit_chain_check: xi not in S_H");
  LimitChain out;
  out.table = sweep(g, xi, p, a_grid, opts);
  if (out.table.any_flagged()) {
    out.pass = false;
    return out;
  }
  const SpacePtr whole = PolySpace::create(g.base(), opts.degree, Truncation::automatic, opts.orders);
  out.lhs = kernelp_diagonal(*whole, xi, g.pole(), p, opts.solver).K;
  out.limit = out.table.rows.front().scaled;
  out.tail_gap = std::abs(out.table.rows[1].scaled - out.table.rows[0].scaled) / std::abs(out.table.rows[0].scaled);
  const SpacePtr ind = PolySpace::create(azukawa_indicatrix(g), opts.degree, Truncation::automatic, opts.orders);
  out.rhs = higher_kernel_direct(*ind, H, g.pole(), p, opts.solver).K;
  const double t = tolerance * std::max({std::abs(out.lhs), std::abs(out.limit), std::abs(out.rhs)});
  out.pass = out.lhs >= out.limit - t && out.limit - t >= out.rhs - 2.0 * t;
  return out;
}

}  // namespace xibergman
