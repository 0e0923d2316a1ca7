#pragma once

// Command-line front end: compute, sweep and verify subcommands over a
// RunConfig assembled from flags and an optional JSON config document.

#include <xibergman/green.hpp>
#include <xibergman/higher.hpp>
#include <xibergman/io.hpp>
#include <xibergman/kernels.hpp>
#include <xibergman/verify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>

namespace xibergman::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kFlagged = 2, kChecksFailed = 3 };

/// Invalid or missing configuration; `field` is the flag / JSON key at fault.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// Raw string values keyed by flag name (without dashes); flags win over the config file.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError(key, "missing required value (--" + key + ")");
    return it->second;
  }
  std::string get_or(const std::string& key, std::string fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "domain", "xi",     "H",    "p",       "z",       "pole",   "degree",         "radial-order", "angular-order",
      "a-grid", "out",    "format", "seed",  "threads", "budget", "suite",          "route",        "tolerance",
      "max-iterations", "truncation"};
  return keys;
}

/// Merges a JSON config document under the flag values already present.
inline void merge_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, val] : doc.items()) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown config key");
    if (cfg.has(key)) continue;
    if (val.is_string()) {
      cfg.values[key] = val.get<std::string>();
    } else if (val.is_number() || val.is_object() || val.is_boolean()) {
      cfg.values[key] = val.dump();
    } else if (val.is_array()) {
      // Lists map to their comma-separated flag form.
      std::string s;
      for (const auto& item : val) {
        if (!item.is_number() && !item.is_string()) throw ConfigError(key, "list entries must be numbers or strings");
        s += (s.empty() ? "" : ",") + (item.is_string() ? item.get<std::string>() : item.dump());
      }
      cfg.values[key] = s;
    } else {
      throw ConfigError(key, "unsupported value");
    }
  }
}

namespace detail {

template <class Fn>
auto field(const std::string& key, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

inline double get_double(const RunConfig& c, const std::string& key) {
  return field(key, [&] { return xibergman::detail::parse_double(c.get(key), key); });
}

inline int get_int(const RunConfig& c, const std::string& key, int fallback) {
  if (!c.has(key)) return fallback;
  return field(key, [&] { return xibergman::detail::parse_int(c.get(key), key); });
}

inline double get_p(const RunConfig& c) {
  const double p = get_double(c, "p");
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p", "must be a finite number > 0");
  return p;
}

inline Domain get_domain(const RunConfig& c) {
  return field("domain", [&] { return parse_domain(c.get_or("domain", "disk")); });
}

inline std::optional<QuadOrders> get_orders(const RunConfig& c, std::size_t n) {
  if (!c.has("radial-order") && !c.has("angular-order")) return std::nullopt;
  QuadOrders o = QuadOrders::defaults(n);
  o.radial = get_int(c, "radial-order", o.radial);
  o.angular = get_int(c, "angular-order", o.angular);
  if (o.radial < 1) throw ConfigError("radial-order", "must be >= 1");
  if (o.angular < 1) throw ConfigError("angular-order", "must be >= 1");
  return o;
}

inline Truncation get_truncation(const RunConfig& c) {
  const std::string t = c.get_or("truncation", "auto");
  if (t == "auto") return Truncation::automatic;
  if (t == "total") return Truncation::total_degree;
  if (t == "per-axis") return Truncation::per_axis;
  if (t == "laurent") return Truncation::laurent;
  throw ConfigError("truncation", "expected auto, total, per-axis or laurent");
}

inline SolverOptions get_solver(const RunConfig& c) {
  SolverOptions o;
  o.seed = static_cast<std::uint64_t>(get_int(c, "seed", 42));
  if (c.has("tolerance")) {
    o.tolerance = get_double(c, "tolerance");
    if (!(o.tolerance > 0.0)) throw ConfigError("tolerance", "must be > 0");
  }
  o.max_iterations = get_int(c, "max-iterations", o.max_iterations);
  if (o.max_iterations < 1) throw ConfigError("max-iterations", "must be >= 1");
  return o;
}

inline std::string get_format(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.get_or("format", fallback);
  if (f != "json" && f != "csv") throw ConfigError("format", "expected json or csv");
  return f;
}

inline unsigned get_threads(const RunConfig& c) {
  const int t = get_int(c, "threads", 0);
  if (t < 0) throw ConfigError("threads", "must be >= 0");
  return static_cast<unsigned>(t);
}

/// Writes to --out if given, otherwise to `out`.
inline void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (!c.has("out")) {
    out << text;
    return;
  }
  std::ofstream f(c.get("out"));
  if (!f) throw ConfigError("out", "cannot open '" + c.get("out") + "' for writing");
  f << text;
}

inline bool solver_flagged(const KernelDiagnostics& d) {
  if (!d.converged) return true;
  for (const auto& f : d.flags)
    if (f == "nonconvex-best-found" || f == "not-converged" || f == "below-direct" || f == "outer-not-converged")
      return true;
  return false;
}

inline json metadata(const RunConfig& c, const std::string& command) {
  return json{{"command", command}, {"seed", get_int(c, "seed", 42)}};
}

}  // namespace detail

inline int cmd_compute(const RunConfig& c, std::ostream& out) {
  using namespace detail;
  const Domain domain = get_domain(c);
  const std::size_t n = domain.dimension();
  const double p = get_p(c);
  const int degree = get_int(c, "degree", -1);
  if (c.has("degree") && degree < 0) throw ConfigError("degree", "must be >= 0");
  const auto orders = get_orders(c, n);
  const SolverOptions solver = get_solver(c);
  const std::string format = get_format(c, "json");
  if (c.has("xi") == c.has("H")) throw ConfigError(c.has("xi") ? "H" : "xi", "give exactly one of --xi and --H");
  const Point z = field("z", [&] { return parse_point(c.get("z"), n, "z"); });
  if (!contains(domain, z)) throw ConfigError("z", "point lies outside the domain");

  SpacePtr space;
  try {
    space = PolySpace::create(domain, degree, get_truncation(c), orders);
  } catch (const DomainError& e) {
    throw ConfigError("domain", e.what());
  }

  json doc = metadata(c, "compute");
  doc["domain"] = domain_to_json(domain);
  KernelEvaluation ev;
  bool flagged = false;
  std::optional<cplx> off_value;
  if (c.has("H")) {
    const HomogeneousPolynomial H = field("H", [&] { return parse_H(c.get("H"), n); });
    if (H.dimension() != n) throw ConfigError("H", "dimension does not match the domain");
    const std::string route = c.get_or("route", "direct");
    if (route == "direct") {
      ev = higher_kernel_direct(*space, H, z, p, solver);
    } else if (route == "inf") {
      InfOptions io;
      io.inner = solver;
      const InfResult r = higher_kernel_via_inf(*space, H, z, p, io);
      ev = kernelp_diagonal(*space, r.xi_star, z, p, solver);
      for (const auto& f : r.flags) ev.diagnostics.flags.push_back(f);
      doc["via_inf"] = json{{"K", num(r.K)},
                            {"direct_K", num(r.direct_K)},
                            {"evaluations", r.evaluations},
                            {"converged", r.converged},
                            {"xi_star", functional_to_json(r.xi_star)}};
      flagged = !r.converged;
    } else {
      throw ConfigError("route", "expected direct or inf");
    }
    doc["H"] = H_to_json(H);
  } else {
    const Functional xi = field("xi", [&] { return parse_functional(c.get("xi")); });
    if (xi.dimension() != n) throw ConfigError("xi", "index length does not match the domain dimension");
    if (c.has("pole")) {
      // Off-diagonal K(z, w) with the pole w.
      const Point w = field("pole", [&] { return parse_point(c.get("pole"), n, "pole"); });
      if (!contains(domain, w)) throw ConfigError("pole", "point lies outside the domain");
      if (!(p >= 1.0)) throw ConfigError("p", "off-diagonal kernel needs p >= 1");
      const OffDiagonalKernel k = off_diagonal(*space, xi, w, p, solver);
      ev = k.base;
      off_value = k.values.value(z);
      doc["off_diagonal"] = json{{"z", point_json(z)}, {"w", point_json(w)}, {"value", cplx_json(k.values.value(z))}};
    } else {
      ev = p == 2.0 && !c.has("tolerance") ? kernel2_diagonal(*space, xi, z) : kernelp_diagonal(*space, xi, z, p, solver);
    }
  }
  flagged = flagged || solver_flagged(ev.diagnostics);
  doc["result"] = evaluation_json(ev);

  if (format == "json") {
    emit(c, out, doc.dump(2) + "\n");
  } else {
    std::string text = csv_header(n) + "\n" + csv_row(ev) + "\n";
    if (off_value) {
      text = "# off-diagonal K(z,w) = " + fmt12(off_value->real()) + "," + fmt12(off_value->imag()) + "\n" + text;
    }
    emit(c, out, "# seed=" + std::to_string(get_int(c, "seed", 42)) + "\n" + text);
  }
  return flagged ? kFlagged : kOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  using namespace detail;
  const std::vector<double> grid = field("a-grid", [&] { return parse_grid(c.get("a-grid")); });
  const Domain domain = get_domain(c);
  const std::size_t n = domain.dimension();
  const double p = get_p(c);
  GreenModel model = GreenModel::moebius(0.0);
  const Point pole = c.has("pole") ? field("pole", [&] { return parse_point(c.get("pole"), n, "pole"); }) : Point(n, 0.0);
  bool origin = true;
  for (cplx v : pole) origin = origin && v == cplx(0.0);
  try {
    if (origin) {
      model = GreenModel::balanced(domain);
    } else {
      if (!(domain == Domain::disk())) throw ConfigError("pole", "an off-origin pole is only supported on the unit disk");
      model = GreenModel::moebius(pole[0]);
    }
  } catch (const DomainError& e) {
    throw ConfigError(origin ? "domain" : "pole", e.what());
  }
  SweepOptions so;
  so.degree = get_int(c, "degree", -1);
  so.orders = get_orders(c, n);
  so.solver = get_solver(c);
  so.threads = get_threads(c);
  if (c.has("xi") == c.has("H")) throw ConfigError(c.has("xi") ? "H" : "xi", "give exactly one of --xi and --H");
  SweepTarget target = c.has("xi") ? SweepTarget(field("xi", [&] { return parse_functional(c.get("xi")); }))
                                   : SweepTarget(field("H", [&] { return parse_H(c.get("H"), n); }));
  const std::size_t tdim = std::visit([](const auto& v) { return v.dimension(); }, target);
  if (tdim != n) throw ConfigError(c.has("xi") ? "xi" : "H", "dimension does not match the domain");
  const std::string format = get_format(c, "csv");

  const SweepTable table = sweep(model, target, p, grid, so);
  if (format == "csv") {
    emit(c, out, "# seed=" + std::to_string(get_int(c, "seed", 42)) + "\n" + sweep_csv(table));
  } else {
    json doc = metadata(c, "sweep");
    doc["domain"] = domain_to_json(domain);
    doc["pole"] = point_json(pole);
    doc["table"] = sweep_json(table);
    emit(c, out, doc.dump(2) + "\n");
  }
  return table.any_flagged() ? kFlagged : kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  using namespace detail;
  const std::string suite = c.get_or("suite", "all");
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("suite", "unknown suite '" + suite + "' (algebra, quadrature, kernels, higher, green, all)");
  }
  VerifyOptions vo;
  vo.seed = static_cast<std::uint64_t>(get_int(c, "seed", 42));
  vo.threads = get_threads(c);
  if (c.has("budget")) {
    vo.budget = get_double(c, "budget");
    if (!(vo.budget >= 0.0)) throw ConfigError("budget", "must be >= 0");
  }
  const std::string format = c.get_or("format", "table");
  if (format != "table" && format != "json") throw ConfigError("format", "verify output is table or json");
  const VerifyReport report = run_verify(suite, vo);
  const std::string machine = report.machine_json().dump(2) + "\n";
  if (format == "json") {
    emit(c, out, machine);
  } else {
    out << report.table();
    if (c.has("out")) {
      emit(c, out, machine);
    } else {
      out << machine;
    }
  }
  return report.passed() ? kOk : kChecksFailed;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"xibergman: p-Bergman kernels with respect to functionals on model domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "xibergman 0.1.0");

  std::map<std::string, std::string> flags;
  std::string config_path;
  auto add_common = [&](CLI::App* sub, const std::vector<std::string>& keys) {
    for (const auto& key : keys) sub->add_option("--" + key, flags[key]);
    sub->add_option("--config", config_path, "JSON document mirroring the flags");
  };
  CLI::App* compute = app.add_subcommand("compute", "evaluate one kernel value");
  add_common(compute, {"domain", "xi", "H", "p", "z", "pole", "degree", "radial-order", "angular-order", "out", "format",
                       "seed", "threads", "route", "tolerance", "max-iterations", "truncation"});
  CLI::App* sw = app.add_subcommand("sweep", "scaled kernel over sublevel sets of the Green function");
  add_common(sw, {"domain", "xi", "H", "p", "pole", "degree", "radial-order", "angular-order", "a-grid", "out", "format",
                  "seed", "threads", "tolerance", "max-iterations"});
  CLI::App* ver = app.add_subcommand("verify", "run verification suites");
  add_common(ver, {"suite", "budget", "seed", "threads", "format", "out"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  for (const auto& [key, value] : flags) {
    if (chosen->get_option_no_throw("--" + key) != nullptr && chosen->count("--" + key) > 0) cfg.values[key] = value;
  }
  try {
    if (!config_path.empty()) merge_config_file(cfg, config_path);
    if (cfg.command == "compute") return cmd_compute(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace xibergman::cli
