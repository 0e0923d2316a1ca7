#pragma once

// Text formats: functionals, H strings, domain strings, points, a-grids, and
// JSON / CSV output with 12 significant digits and no locale dependence.

#include <xibergman/algebra.hpp>
#include <xibergman/domains.hpp>
#include <xibergman/green.hpp>
#include <xibergman/higher.hpp>
#include <xibergman/kernels.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xibergman {

using json = nlohmann::ordered_json;

class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Shortest decimal form with at most 12 significant digits.
inline std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  std::string s(buf, r.ptr);
  if (s == "-0") s = "0";
  return s;
}

/// v rounded to 12 significant digits (so JSON output carries at most 12).
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = fmt12(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

inline json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

inline json cplx_json(cplx c) { return json::array({num(c.real()), num(c.imag())}); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_double(std::string_view s, const std::string& what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ParseError(what + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

inline int parse_int(std::string_view s, const std::string& what) {
  s = trim(s);
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ParseError(what + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

/// Complex scalar: "1.5", "-2i", "0.3+0.1i", "0.3-1e-2i", "re:im".
inline cplx parse_complex(std::string_view text, const std::string& what = "complex") {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError(what + ": empty value");
  if (auto c = s.find(':'); c != std::string_view::npos) {
    return {detail::parse_double(s.substr(0, c), what), detail::parse_double(s.substr(c + 1), what)};
  }
  if (s.back() != 'i' && s.back() != 'j') return {detail::parse_double(s, what), 0.0};
  s.remove_suffix(1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view t) {
    t = detail::trim(t);
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return detail::parse_double(t, what);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(s)};
  return {detail::parse_double(s.substr(0, split), what), imag_part(s.substr(split))};
}

/// Point in C^n: comma-separated complex coordinates.
inline Point parse_point(std::string_view text, std::size_t n, const std::string& what = "point") {
  Point z;
  for (const auto& part : detail::split(text, ',')) z.push_back(parse_complex(part, what));
  if (z.size() == 1 && n > 1) {
    if (z[0] == cplx(0.0)) return Point(n, 0.0);
  }
  if (z.size() != n) {
    throw ParseError(what + ": expected " + std::to_string(n) + " coordinate(s), got " + std::to_string(z.size()));
  }
  return z;
}

inline MultiIndex parse_index(std::string_view text, const std::string& what) {
  std::vector<int> e;
  for (const auto& part : detail::split(text, ',')) {
    const int v = detail::parse_int(part, what);
    if (v < 0) throw ParseError(what + ": negative index entry");
    e.push_back(v);
  }
  return MultiIndex(std::move(e));
}

/// JSON form {"a1,..,an": [re, im], ...}.
inline Functional functional_from_json(const json& j) {
  if (!j.is_object() || j.empty()) throw ParseError("xi: expected a non-empty JSON object");
  Functional xi;
  bool first = true;
  for (const auto& [key, val] : j.items()) {
    const MultiIndex alpha = parse_index(key, "xi");
    if (first) {
      xi = Functional(alpha.dimension());
      first = false;
    }
    cplx c;
    if (val.is_number()) {
      c = val.get<double>();
    } else if (val.is_array() && val.size() == 2 && val[0].is_number() && val[1].is_number()) {
      c = {val[0].get<double>(), val[1].get<double>()};
    } else {
      throw ParseError("xi: coefficient for '" + key + "' must be [re, im]");
    }
    if (alpha.dimension() != xi.dimension()) throw ParseError("xi: inconsistent index lengths");
    xi.set(alpha, xi.coefficient(alpha) + c);
  }
  return xi;
}

/// "a1,..,an:re[:im]" terms separated by ';' (or a JSON object).
inline Functional parse_functional(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (!s.empty() && s.front() == '{') {
    try {
      return functional_from_json(json::parse(s));
    } catch (const json::exception& e) {
      throw ParseError(std::string("xi: ") + e.what());
    }
  }
  Functional xi;
  bool first = true;
  for (const auto& term : detail::split(s, ';')) {
    if (term.empty()) continue;
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw ParseError("xi: term '" + term + "' needs index:coefficient");
    const MultiIndex alpha = parse_index(std::string_view(term).substr(0, colon), "xi");
    const cplx c = parse_complex(std::string_view(term).substr(colon + 1), "xi");
    if (first) {
      xi = Functional(alpha.dimension());
      first = false;
    }
    if (alpha.dimension() != xi.dimension()) throw ParseError("xi: inconsistent index lengths");
    xi.set(alpha, xi.coefficient(alpha) + c);
  }
  if (first) throw ParseError("xi: empty functional");
  if (xi.is_zero()) throw ParseError("xi: zero functional");
  return xi;
}

inline json functional_to_json(const Functional& xi) {
  json j = json::object();
  for (const auto& [alpha, c] : xi.terms()) {
    std::string key;
    for (std::size_t i = 0; i < alpha.dimension(); ++i) key += (i ? "," : "") + std::to_string(alpha[i]);
    j[key] = cplx_json(c);
  }
  return j;
}

/// "z1^2: 1.0, z1 z2: 0.5"; a monomial of "1" is the constant; n is the
/// ambient dimension (0: the largest variable index used).
inline HomogeneousPolynomial parse_H(std::string_view text, std::size_t n = 0) {
  std::string_view s = detail::trim(text);
  if (!s.empty() && s.front() == '{') {
    try {
      const json j = json::parse(s);
      const Functional xi = functional_from_json(j.contains("terms") ? j.at("terms") : j);
      HomogeneousPolynomial::Terms t;
      for (const auto& [alpha, c] : xi.terms()) t[alpha] = c;
      HomogeneousPolynomial H(xi.dimension(), t);
      if (j.contains("degree") && j.at("degree").get<int>() != H.degree()) throw ParseError("H: degree field mismatch");
      return H;
    } catch (const json::exception& e) {
      throw ParseError(std::string("H: ") + e.what());
    }
  }
  struct Term {
    std::vector<std::pair<std::size_t, int>> powers;
    cplx c;
  };
  std::vector<Term> terms;
  std::size_t maxvar = 0;
  // Split on commas that separate terms; a "(re,im)" coefficient may contain one.
  std::vector<std::string> parts;
  {
    int depth = 0;
    std::string cur;
    for (char ch : s) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
  }
  for (auto part : parts) {
    const std::string_view p = detail::trim(part);
    if (p.empty()) continue;
    const auto colon = p.find(':');
    std::string_view mono = detail::trim(colon == std::string_view::npos ? p : p.substr(0, colon));
    cplx c = 1.0;
    if (colon != std::string_view::npos) {
      std::string_view cs = detail::trim(p.substr(colon + 1));
      if (!cs.empty() && cs.front() == '(' && cs.back() == ')') {
        const auto inner = cs.substr(1, cs.size() - 2);
        const auto comma = inner.find(',');
        if (comma == std::string_view::npos) throw ParseError("H: '(re,im)' coefficient expected");
        c = {detail::parse_double(inner.substr(0, comma), "H"), detail::parse_double(inner.substr(comma + 1), "H")};
      } else {
        c = parse_complex(cs, "H");
      }
    }
    Term t{{}, c};
    if (mono != "1") {
      std::string m(mono);
      for (char& ch : m)
        if (ch == '*') ch = ' ';
      std::stringstream ss(m);
      std::string tok;
      while (ss >> tok) {
        if (tok.size() < 2 || tok[0] != 'z') throw ParseError("H: bad factor '" + tok + "'");
        const auto caret = tok.find('^');
        const int var = detail::parse_int(std::string_view(tok).substr(1, caret == std::string::npos ? std::string::npos : caret - 1), "H");
        const int e = caret == std::string::npos ? 1 : detail::parse_int(std::string_view(tok).substr(caret + 1), "H");
        if (var < 1 || e < 0) throw ParseError("H: bad factor '" + tok + "'");
        t.powers.emplace_back(static_cast<std::size_t>(var), e);
        maxvar = std::max(maxvar, static_cast<std::size_t>(var));
      }
      if (t.powers.empty()) throw ParseError("H: empty monomial");
    }
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ParseError("H: empty polynomial");
  if (n == 0) n = std::max<std::size_t>(1, maxvar);
  if (maxvar > n) throw ParseError("H: variable z" + std::to_string(maxvar) + " exceeds dimension " + std::to_string(n));
  HomogeneousPolynomial::Terms out;
  for (const auto& t : terms) {
    std::vector<int> e(n, 0);
    for (const auto& [v, k] : t.powers) e[v - 1] += k;
    out[MultiIndex(e)] += t.c;
  }
  try {
    return HomogeneousPolynomial(n, out);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("H: ") + e.what());
  }
}

inline json H_to_json(const HomogeneousPolynomial& H) {
  json terms = json::object();
  for (const auto& [alpha, c] : H.terms()) {
    std::string key;
    for (std::size_t i = 0; i < alpha.dimension(); ++i) key += (i ? "," : "") + std::to_string(alpha[i]);
    terms[key] = cplx_json(c);
  }
  return json{{"degree", H.degree()}, {"terms", terms}};
}

namespace detail {

inline std::vector<double> double_list(const json& j, const std::string& what) {
  std::vector<double> v;
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ParseError(what + ": expected a number or an array");
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError(what + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

// [re, im] for n = 1, or [[re, im], ...] / [re1, re2, ...] for n > 1.
inline Point center_from_json(const json& j, std::size_t n, const std::string& what) {
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    Point c;
    for (const auto& e : j) {
      const auto v = double_list(e, what);
      if (v.size() != 2) throw ParseError(what + ": expected [re, im] pairs");
      c.emplace_back(v[0], v[1]);
    }
    if (c.size() != n) throw ParseError(what + ": wrong number of coordinates");
    return c;
  }
  const auto v = double_list(j, what);
  if (n == 1 && v.size() == 2) return {cplx(v[0], v[1])};
  if (v.size() == n) {
    Point c;
    for (double x : v) c.emplace_back(x, 0.0);
    return c;
  }
  throw ParseError(what + ": wrong number of coordinates");
}

}  // namespace detail

inline Domain domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape")) throw ParseError("domain: expected an object with a \"shape\" field");
  const std::string shape = j.at("shape").get<std::string>();
  auto get = [&](const char* key, double dflt) { return j.contains(key) ? j.at(key).get<double>() : dflt; };
  Domain d = Domain::disk();
  if (shape == "disk") {
    const cplx c = j.contains("center") ? detail::center_from_json(j.at("center"), 1, "domain.center")[0] : cplx(0.0);
    d = Domain::disk(get("radius", 1.0), c);
  } else if (shape == "polydisc" || shape == "bidisc" || shape == "tridisc") {
    std::vector<double> radii;
    if (j.contains("radii")) radii = detail::double_list(j.at("radii"), "domain.radii");
    else radii.assign(shape == "tridisc" ? 3 : 2, get("radius", 1.0));
    const std::size_t n = radii.size();
    Point c = j.contains("center") ? detail::center_from_json(j.at("center"), n, "domain.center") : Point(n, 0.0);
    d = Domain::polydisc(radii, c);
  } else if (shape == "ball") {
    const auto n = static_cast<std::size_t>(j.contains("dimension") ? j.at("dimension").get<int>() : 2);
    Point c = j.contains("center") ? detail::center_from_json(j.at("center"), n, "domain.center") : Point(n, 0.0);
    d = Domain::ball(n, get("radius", 1.0), c);
  } else if (shape == "annulus") {
    d = Domain::annulus(get("r_inner", get("rInner", 0.5)), get("r_outer", get("rOuter", 1.0)));
  } else if (shape == "cloud") {
    if (!j.contains("csv")) throw ParseError("domain: cloud needs a \"csv\" path");
    std::ifstream in(j.at("csv").get<std::string>());
    if (!in) throw ParseError("domain: cannot open cloud csv '" + j.at("csv").get<std::string>() + "'");
    d = cloud_from_csv(in);
  } else if (shape == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").size() < 2) {
      throw ParseError("domain: product needs at least two factors");
    }
    d = domain_from_json(j.at("factors")[0]);
    for (std::size_t i = 1; i < j.at("factors").size(); ++i) d = product_domain(d, domain_from_json(j.at("factors")[i]));
  } else {
    throw ParseError("domain: unknown shape '" + shape + "'");
  }
  d.validate();
  return d;
}

/// Shorthand "disk", "disk:0.5", "bidisc", "polydisc:1,2", "ball", "ball:3",
/// "ball:2:0.5", "annulus", "annulus:0.5,1", "cloud:path.csv", or a JSON object.
inline Domain parse_domain(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (!s.empty() && s.front() == '{') {
    try {
      return domain_from_json(json::parse(s));
    } catch (const json::exception& e) {
      throw ParseError(std::string("domain: ") + e.what());
    }
  }
  const auto colon = s.find(':');
  const std::string name(s.substr(0, colon));
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
  auto numbers = [&](char sep) {
    std::vector<double> v;
    if (!args.empty())
      for (const auto& a : detail::split(args, sep)) v.push_back(detail::parse_double(a, "domain"));
    return v;
  };
  Domain d = Domain::disk();
  if (name == "disk") {
    const auto v = numbers(',');
    d = Domain::disk(v.empty() ? 1.0 : v[0]);
  } else if (name == "bidisc") {
    d = Domain::polydisc({1.0, 1.0});
  } else if (name == "tridisc") {
    d = Domain::polydisc({1.0, 1.0, 1.0});
  } else if (name == "polydisc") {
    const auto v = numbers(',');
    if (v.empty()) throw ParseError("domain: polydisc needs radii, e.g. polydisc:1,2");
    d = Domain::polydisc(v);
  } else if (name == "ball") {
    const auto v = numbers(':');
    const auto n = v.empty() ? std::size_t{2} : static_cast<std::size_t>(v[0]);
    d = Domain::ball(n, v.size() > 1 ? v[1] : 1.0);
  } else if (name == "annulus") {
    const auto v = numbers(',');
    d = Domain::annulus(v.size() > 0 ? v[0] : 0.5, v.size() > 1 ? v[1] : 1.0);
  } else if (name == "cloud") {
    std::ifstream in{std::string(args)};
    if (!in) throw ParseError("domain: cannot open cloud csv '" + std::string(args) + "'");
    d = cloud_from_csv(in);
  } else {
    throw ParseError("domain: unknown shape '" + name + "'");
  }
  d.validate();
  return d;
}

inline json domain_to_json(const Domain& d) {
  return std::visit(
      [&](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) {
          return json{{"shape", "disk"}, {"radius", num(s.radius)}, {"center", cplx_json(s.center)}};
        } else if constexpr (std::is_same_v<S, Polydisc>) {
          json r = json::array(), c = json::array();
          for (double x : s.radii) r.push_back(num(x));
          for (cplx x : s.center) c.push_back(cplx_json(x));
          return json{{"shape", "polydisc"}, {"radii", r}, {"center", c}};
        } else if constexpr (std::is_same_v<S, Ball>) {
          json c = json::array();
          for (cplx x : s.center) c.push_back(cplx_json(x));
          return json{{"shape", "ball"}, {"dimension", s.center.size()}, {"radius", num(s.radius)}, {"center", c}};
        } else if constexpr (std::is_same_v<S, Annulus>) {
          return json{{"shape", "annulus"}, {"r_inner", num(s.r_inner)}, {"r_outer", num(s.r_outer)}};
        } else if constexpr (std::is_same_v<S, Cloud>) {
          return json{{"shape", "cloud"}, {"dimension", s.dimension}, {"nodes", s.weights.size()}};
        } else {
          json f = json::array();
          for (const auto& x : s.factors) f.push_back(domain_to_json(x));
          return json{{"shape", "product"}, {"factors", f}};
        }
      },
      d.shape());
}

/// "start:stop:step" (inclusive, stop snapped) or a comma list.
inline std::vector<double> parse_grid(std::string_view text) {
  const std::string_view s = detail::trim(text);
  std::vector<double> out;
  if (s.find(':') != std::string_view::npos) {
    const auto parts = detail::split(s, ':');
    if (parts.size() != 3) throw ParseError("a-grid: expected start:stop:step");
    const double a = detail::parse_double(parts[0], "a-grid");
    const double b = detail::parse_double(parts[1], "a-grid");
    const double h = detail::parse_double(parts[2], "a-grid");
    if (!(h > 0.0) || !(b >= a)) throw ParseError("a-grid: need start <= stop and step > 0");
    const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
    if (count > 100000) throw ParseError("a-grid: too many points");
    for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * h);
    if (std::abs(out.back() - b) <= 1e-9 * std::max(1.0, std::abs(b))) out.back() = b;
  } else {
    for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_double(part, "a-grid"));
  }
  if (out.empty()) throw ParseError("a-grid: empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] > 0.0) throw ParseError("a-grid: values must be <= 0 (got " + fmt12(out[i]) + ")");
    if (i > 0 && !(out[i] > out[i - 1])) throw ParseError("a-grid: values must be strictly increasing");
  }
  return out;
}

inline json point_json(std::span<const cplx> z) {
  json j = json::array();
  for (cplx c : z) j.push_back(cplx_json(c));
  return j;
}

inline json diagnostics_json(const KernelDiagnostics& d) {
  json flags = json::array(), notes = json::array();
  for (const auto& f : d.flags) flags.push_back(f);
  for (const auto& f : d.notes) notes.push_back(f);
  return json{{"method", d.method},
              {"iterations", d.iterations},
              {"newton_iterations", d.newton_iterations},
              {"final_relative_step", num(d.final_rel_step)},
              {"constraint_residual", num(d.constraint_residual)},
              {"eps", num(d.eps)},
              {"converged", d.converged},
              {"flags", flags},
              {"notes", notes}};
}

inline json evaluation_json(const KernelEvaluation& ev) {
  json coeffs = json::array();
  for (Eigen::Index i = 0; i < ev.minimizer.coeffs().size(); ++i) coeffs.push_back(cplx_json(ev.minimizer.coeffs()(i)));
  const auto& space = *ev.minimizer.space();
  json basis = json::array();
  if (space.is_laurent()) {
    for (int e : space.laurent_exponents()) basis.push_back(std::to_string(e));
  } else {
    for (const auto& a : space.basis()) basis.push_back(a.to_string());
  }
  json scales = json::array();
  for (double s : space.scales()) scales.push_back(num(s));
  return json{{"p", num(ev.p)},
              {"z", point_json(ev.z)},
              {"xi", functional_to_json(ev.xi)},
              {"degree", ev.degree},
              {"m", num(ev.m)},
              {"K", num(ev.K)},
              {"minimizer",
               {{"basis", space.is_laurent() ? "laurent (z/s)^j" : "((z - c)/s)^alpha"},
                {"center", point_json(space.center())},
                {"scales", scales},
                {"indices", basis},
                {"coefficients", coeffs}}},
              {"diagnostics", diagnostics_json(ev.diagnostics)}};
}

inline std::string csv_header(std::size_t n) {
  std::string h;
  if (n == 1) {
    h = "z_re,z_im";
  } else {
    for (std::size_t j = 1; j <= n; ++j) h += (j > 1 ? "," : "") + ("z" + std::to_string(j) + "_re,z") + std::to_string(j) + "_im";
  }
  return h + ",p,m,K,iterations,flag";
}

inline std::string csv_row(const KernelEvaluation& ev) {
  std::string r;
  for (std::size_t j = 0; j < ev.z.size(); ++j) r += (j ? "," : "") + fmt12(ev.z[j].real()) + "," + fmt12(ev.z[j].imag());
  std::string flag;
  for (const auto& f : ev.diagnostics.flags) flag += (flag.empty() ? "" : ";") + f;
  if (flag.empty()) flag = "ok";
  return r + "," + fmt12(ev.p) + "," + fmt12(ev.m) + "," + fmt12(ev.K) + "," + std::to_string(ev.diagnostics.iterations) +
         "," + flag;
}

inline std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

inline std::string sweep_csv(const SweepTable& t) {
  std::string out = "# model=" + t.model + " target=" + t.target + " p=" + fmt12(t.p) + " k=" + std::to_string(t.k) +
                    " n=" + std::to_string(t.n) + " degree=" + std::to_string(t.degree) + "\n";
  out += "a,K,scaled,logK,flag\n";
  for (const auto& r : t.rows) {
    out += fmt12(r.a) + "," + fmt12(r.K) + "," + fmt12(r.scaled) + "," + fmt12(r.logK) + "," +
           (r.flagged ? (r.message.empty() ? std::string("flagged") : csv_safe(r.message)) : std::string("ok")) + "\n";
  }
  return out;
}

inline json sweep_json(const SweepTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"a", num(r.a)},
                        {"K", num(r.K)},
                        {"scaled", num(r.scaled)},
                        {"logK", num(r.logK)},
                        {"flag", r.flagged ? (r.message.empty() ? std::string("flagged") : r.message) : "ok"}});
  }
  return json{{"model", t.model}, {"target", t.target}, {"p", num(t.p)}, {"k", t.k},
              {"n", t.n},         {"degree", t.degree}, {"rows", rows}};
}

}  // namespace xibergman
