#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "tfuncert/certifier.hpp"
#include "tfuncert/constants.hpp"
#include "tfuncert/errors.hpp"
#include "tfuncert/variational.hpp"

namespace tfuncert::cli {
namespace {

using std::numbers::pi;
using Json = nlohmann::json;

// Thrown for invocations that parse but are structurally wrong.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json exponent_json(Exponent e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

// "key=value" tokens into a map; every key must be in `allowed`.
std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& tokens,
                                               const std::vector<std::string>& allowed) {
  std::map<std::string, std::string> out;
  for (const auto& t : tokens) {
    if (t.empty()) continue;  // a bare flag such as `--extremal` yields one empty token
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == t.size()) {
      throw UsageError("expected key=value, got '" + t + "'");
    }
    const std::string key = t.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("unknown key '" + key + "'");
    }
    out[key] = t.substr(eq + 1);
  }
  return out;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw DomainError("not a number: '" + text + "'");
  return v;
}

Exponent require_exponent(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw UsageError("missing " + key + "=");
  return parse_exponent(it->second);
}

Exponent exponent_or(const std::map<std::string, std::string>& kv, const std::string& key,
                     Exponent fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_exponent(it->second);
}

double number_or(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_number(it->second);
}

// "N,L" or "N,L,d"
Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) throw UsageError("--grid expects N,L or N,L,d");
  const double n = parse_number(parts[0]);
  const double d = parts.size() == 3 ? parse_number(parts[2]) : 1.0;
  if (n != std::floor(n) || d != std::floor(d)) throw DomainError("N and d must be integers");
  return make_grid(static_cast<int>(n), parse_number(parts[1]), static_cast<int>(d));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

Eigen::MatrixXd scaled_identity(int d, double c) {
  return c * Eigen::MatrixXd::Identity(d, d);
}

// ---------------------------------------------------------------------------
// constants

struct ConstantsArgs {
  std::vector<std::string> cp, dual, h, b, check_cp, check_gg, check_lieb, partner, leindler;
  std::string format = "json";
};

std::vector<Json> constants_rows(const ConstantsArgs& a) {
  std::vector<Json> rows;
  for (const auto& p : a.cp) {
    const Exponent e = parse_exponent(p);
    rows.push_back({{"quantity", "C_p"}, {"p", exponent_json(e)}, {"value", babenko_beckner(e)}});
  }
  for (const auto& p : a.dual) {
    const Exponent e = parse_exponent(p);
    rows.push_back(
        {{"quantity", "dual"}, {"p", exponent_json(e)}, {"value", exponent_json(holder_dual(e))}});
  }
  if (!a.h.empty()) {
    const auto kv = parse_pairs(a.h, {"r", "p"});
    const double r = require_exponent(kv, "r").value();
    const double p = require_exponent(kv, "p").value();
    rows.push_back({{"quantity", "H"}, {"r", r}, {"p", p}, {"value", lieb_H(r, p)}});
  }
  if (!a.b.empty()) {
    const auto kv = parse_pairs(a.b, {"r", "s", "u", "v", "d"});
    const Exponent r = require_exponent(kv, "r"), s = require_exponent(kv, "s");
    const Exponent u = require_exponent(kv, "u"), v = require_exponent(kv, "v");
    const int d = static_cast<int>(number_or(kv, "d", 1.0));
    rows.push_back({{"quantity", "B"},
                    {"r", exponent_json(r)},
                    {"s", exponent_json(s)},
                    {"u", exponent_json(u)},
                    {"v", exponent_json(v)},
                    {"d", d},
                    {"value", sharp_B(r, s, u, v, d)}});
  }
  if (!a.check_cp.empty()) {
    const auto kv = parse_pairs(a.check_cp, {"p", "q", "a", "b"});
    const Exponent p = require_exponent(kv, "p"), q = require_exponent(kv, "q");
    if (!kv.count("a") || !kv.count("b")) throw UsageError("--check-cp needs a= and b=");
    const double av = parse_number(kv.at("a")), bv = parse_number(kv.at("b"));
    Json row = check_cowling_price(p, q, av, bv).to_json();
    row["quantity"] = "cowling_price";
    row["p"] = exponent_json(p);
    row["q"] = exponent_json(q);
    row["a"] = av;
    row["b"] = bv;
    rows.push_back(row);
  }
  if (!a.check_gg.empty()) {
    const auto kv =
        parse_pairs(a.check_gg, {"d", "p", "q", "a", "b", "r", "s", "alpha", "beta"});
    Json spec = Json::object();
    for (const auto& [k, v] : kv) {
      if (k == "p" || k == "q" || k == "r" || k == "s") {
        spec[k] = exponent_json(parse_exponent(v));
      } else {
        spec[k] = parse_number(v);
      }
    }
    const ExponentSet e = ExponentSet::from_json(spec);
    Json row = check_galperin_grochenig(e).to_json();
    row["quantity"] = "galperin_grochenig";
    row["exponents"] = e.to_json();
    rows.push_back(row);
  }
  if (!a.check_lieb.empty()) {
    const auto kv = parse_pairs(a.check_lieb, {"r", "s", "u", "v"});
    const Exponent r = require_exponent(kv, "r"), s = require_exponent(kv, "s");
    const Exponent u = require_exponent(kv, "u"), v = require_exponent(kv, "v");
    rows.push_back({{"quantity", "lieb_domain"},
                    {"r", exponent_json(r)},
                    {"s", exponent_json(s)},
                    {"u", exponent_json(u)},
                    {"v", exponent_json(v)},
                    {"holds", check_lieb_domain(r, s, u, v)}});
  }
  if (!a.partner.empty()) {
    const auto kv = parse_pairs(a.partner, {"s", "r", "u"});
    const Exponent s = require_exponent(kv, "s"), r = require_exponent(kv, "r");
    const Exponent u = require_exponent(kv, "u");
    rows.push_back({{"quantity", "partner_v"},
                    {"s", exponent_json(s)},
                    {"r", exponent_json(r)},
                    {"u", exponent_json(u)},
                    {"value", exponent_json(solve_partner_exponent(s, r, u))}});
  }
  if (!a.leindler.empty()) {
    const auto kv = parse_pairs(a.leindler, {"u", "v", "r"});
    const auto duals =
        leindler_duals(require_exponent(kv, "u"), require_exponent(kv, "v"), require_exponent(kv, "r"));
    auto dual_json = [](const GeneralizedDual& g) -> Json {
      if (g.infinite) return "inf";
      return g.value;
    };
    rows.push_back(
        {{"quantity", "leindler_duals"}, {"m", dual_json(duals.m)}, {"n", dual_json(duals.n)}});
  }
  return rows;
}

void print_text(const std::vector<Json>& rows, std::ostream& out) {
  for (const auto& row : rows) {
    out << row.at("quantity").get<std::string>();
    for (const auto& [k, v] : row.items()) {
      if (k == "quantity") continue;
      out << "  " << k << '=' << v.dump();
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
  std::string id;
  std::string lattice;
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  std::string grid = "512,12";
  double tol = kCertifyTolerance;
  std::string json_out;
  bool extremal = false;
  std::vector<std::string> extremal_params;
  std::string m, n, r;
  std::string input, input_g;
  std::optional<double> bound;
};

InequalityId resolve_id(const std::string& name) {
  if (name == "lieb_reverse") return InequalityId::lieb_reverse_x_omega;
  if (name == "cowling_price" || name == "functional") {
    return InequalityId::cowling_price_functional;
  }
  return parse_inequality_id(name);
}

Exponent young_output_exponent(Exponent m, Exponent n) {
  // 1/r = 1/m + 1/n - 1
  const double inv = m.reciprocal() + n.reciprocal() - 1.0;
  if (inv < 0.0) throw DomainError("1/m + 1/n must be at least 1");
  return inv == 0.0 ? Exponent::infinity() : Exponent(1.0 / inv);
}

std::vector<CertificateReport> extremal_reports(InequalityId id, const Grid& grid,
                                                const std::vector<std::string>& tokens,
                                                const CertifyArgs& a) {
  const int d = grid.dim();
  const auto gaussian = [&] { return sample_gaussian(GaussianSpec::isotropic(d, pi), grid); };
  switch (id) {
    case InequalityId::hausdorff_young: {
      const auto kv = parse_pairs(tokens, {"r"});
      return {certify_hausdorff_young(gaussian(), exponent_or(kv, "r", 1.5), a.tol)};
    }
    case InequalityId::young: {
      const auto kv = parse_pairs(tokens, {"m", "n", "shift", "k"});
      const Exponent m = exponent_or(kv, "m", 1.25), n = exponent_or(kv, "n", 1.25);
      const auto pair = build_young_extremals(m, n, grid, pi, number_or(kv, "shift", 0.0), 0.0,
                                              number_or(kv, "k", 0.0));
      return {certify_young(pair.f, pair.g, m, n, young_output_exponent(m, n), a.tol)};
    }
    case InequalityId::leindler: {
      const auto kv = parse_pairs(tokens, {"m", "n"});
      const Exponent m = exponent_or(kv, "m", 0.8), n = exponent_or(kv, "n", 0.8);
      const auto pair = build_leindler_extremals(m, n, grid);
      return {certify_leindler(pair.f, pair.g, m, n, young_output_exponent(m, n), a.tol)};
    }
    case InequalityId::lieb_reverse_x_omega:
    case InequalityId::lieb_reverse_omega_x: {
      const auto kv = parse_pairs(tokens, {"r", "s", "u", "A", "B"});
      const Exponent r = exponent_or(kv, "r", 1.5), s = exponent_or(kv, "s", 1.5);
      const double rdual_inv = 1.0 - r.reciprocal();
      const Exponent u = kv.count("u") ? parse_exponent(kv.at("u"))
                                       : Exponent(2.0 / (s.reciprocal() + rdual_inv));
      const Exponent v = solve_partner_exponent(s, r, u);
      const IntegrationOrder order = id == InequalityId::lieb_reverse_x_omega
                                         ? IntegrationOrder::x_inner
                                         : IntegrationOrder::omega_inner;
      const auto pair = build_lieb_extremals(r, s, u, v, scaled_identity(d, number_or(kv, "A", pi)),
                                             scaled_identity(d, number_or(kv, "B", 0.0)), grid,
                                             order);
      return {certify_lieb_reverse(pair.f, pair.g, r, s, u, v, order, a.tol)};
    }
    case InequalityId::lieb_forward: {
      const auto kv = parse_pairs(tokens, {"r", "p"});
      const double r = number_or(kv, "r", 4.0), p = number_or(kv, "p", 2.0);
      const auto pair = build_lieb_forward_extremals(r, p, grid);
      return {certify_lieb_forward(pair.f, pair.g, r, p, a.tol)};
    }
    case InequalityId::heisenberg:
      parse_pairs(tokens, {});
      return {certify_heisenberg(gaussian(), a.tol)};
    case InequalityId::modulation_bound: {
      const auto kv = parse_pairs(tokens, {"r", "s", "u", "v"});
      const Exponent r = exponent_or(kv, "r", 2.0), s = exponent_or(kv, "s", 2.0);
      const Exponent u = exponent_or(kv, "u", 2.0), v = exponent_or(kv, "v", 2.0);
      const auto window = default_window(grid);
      return {certify_modulation_bound(window, window, r, s, u, v, Side::frequency, a.tol),
              certify_modulation_bound(window, window, r, s, u, v, Side::time, a.tol)};
    }
    case InequalityId::cowling_price_functional: {
      parse_pairs(tokens, {});
      const auto window = default_window(grid);
      return {certify_banach_functional(window, window, ExponentSet{},
                                        a.bound.value_or(heisenberg_functional_bound()), a.tol)};
    }
  }
  throw DomainError("no extremal construction for this inequality");
}

std::vector<CertificateReport> input_reports(InequalityId id, const CertifyArgs& a) {
  const SampledFunction f = sampled_function_from_json(read_json_file(a.input));
  const SampledFunction g = a.input_g.empty() ? f : sampled_function_from_json(read_json_file(a.input_g));
  auto need = [](const std::string& text, const char* flag) {
    if (text.empty()) throw UsageError(std::string("missing ") + flag);
    return parse_exponent(text);
  };
  switch (id) {
    case InequalityId::hausdorff_young:
      return {certify_hausdorff_young(f, need(a.r, "--r"), a.tol)};
    case InequalityId::young:
    case InequalityId::leindler: {
      const Exponent m = need(a.m, "--m"), n = need(a.n, "--n");
      const Exponent r = a.r.empty() ? young_output_exponent(m, n) : parse_exponent(a.r);
      return {id == InequalityId::young ? certify_young(f, g, m, n, r, a.tol)
                                        : certify_leindler(f, g, m, n, r, a.tol)};
    }
    case InequalityId::heisenberg:
      return {certify_heisenberg(f, a.tol)};
    default:
      throw DomainError("input files are accepted for hausdorff_young, young, leindler and heisenberg");
  }
}

std::vector<ExponentSet> battery_lattice(InequalityId id, const CertifyArgs& a) {
  if (!a.lattice.empty()) {
    const Json j = read_json_file(a.lattice);
    if (!j.is_array() || j.empty()) throw DomainError("lattice must be a non-empty JSON array");
    std::vector<ExponentSet> out;
    for (const auto& item : j) out.push_back(ExponentSet::from_json(item));
    return out;
  }
  if (!a.m.empty() || !a.n.empty() || !a.r.empty()) {
    ExponentSet e;
    if (id == InequalityId::young || id == InequalityId::leindler) {
      if (a.m.empty() || a.n.empty()) throw UsageError("--m and --n go together");
      e.p = parse_exponent(a.m);
      e.q = parse_exponent(a.n);
      e.r = a.r.empty() ? young_output_exponent(e.p, e.q) : parse_exponent(a.r);
    } else if (id == InequalityId::hausdorff_young && !a.r.empty()) {
      e.r = parse_exponent(a.r);
    } else {
      throw UsageError("--m/--n/--r apply to young, leindler and hausdorff_young");
    }
    return {e};
  }
  return default_lattice(id);
}

int exit_for(const std::vector<CertificateReport>& reports) {
  bool failed = false;
  for (const auto& r : reports) {
    if (r.error) return kExitDomain;
    failed = failed || !r.pass;
  }
  return failed ? kExitFailure : kExitPass;
}

int certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
  const InequalityId id = resolve_id(a.id);
  const Grid grid = parse_grid(a.grid);
  if (a.extremal && !a.input.empty()) throw UsageError("--extremal and --input are exclusive");
  std::vector<CertificateReport> reports;
  if (a.extremal) {
    reports = extremal_reports(id, grid, a.extremal_params, a);
  } else if (!a.input.empty()) {
    reports = input_reports(id, a);
  } else {
    if (a.seeds == 0) throw UsageError("--seeds must be positive");
    BatteryOptions opts;
    opts.grid = grid;
    opts.tol = a.tol;
    opts.first_seed = a.seed;
    opts.functional_bound = a.bound;
    reports = run_battery(id, battery_lattice(id, a), a.seeds, opts);
  }

  std::ostringstream lines;
  std::size_t failures = 0;
  std::size_t errors = 0;
  for (const auto& r : reports) {
    lines << r.to_json().dump() << '\n';
    failures += (!r.pass && !r.error) ? 1 : 0;
    errors += r.error ? 1 : 0;
  }
  if (a.json_out.empty()) {
    out << lines.str();
  } else {
    write_text_file(a.json_out, lines.str());
  }
  err << to_string(id) << ": " << reports.size() << " reports, " << failures << " violations, "
      << errors << " errors\n";
  return exit_for(reports);
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
  bool oscillator = false;
  std::string psi, phi, m0;
  std::optional<std::string> grid;
  int count = 3;
  std::string csv;
};

// zero | abs[:c] | power:k[:c] | const:c on |t|.
std::function<double(std::span<const double>)> spatial_rule(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw UsageError("empty weight spec");
  auto radius = [](std::span<const double> t) {
    double r2 = 0.0;
    for (double v : t) r2 += v * v;
    return std::sqrt(r2);
  };
  const std::string& kind = parts[0];
  if (kind == "zero" && parts.size() == 1) return [](std::span<const double>) { return 0.0; };
  if (kind == "abs" && parts.size() <= 2) {
    const double c = parts.size() == 2 ? parse_number(parts[1]) : 1.0;
    return [=](std::span<const double> t) { return c * radius(t); };
  }
  if (kind == "power" && (parts.size() == 2 || parts.size() == 3)) {
    const double k = parse_number(parts[1]);
    const double c = parts.size() == 3 ? parse_number(parts[2]) : 1.0;
    return [=](std::span<const double> t) { return c * std::pow(radius(t), k); };
  }
  if (kind == "const" && parts.size() == 2) {
    const double c = parse_number(parts[1]);
    return [=](std::span<const double>) { return c; };
  }
  throw UsageError("unknown weight spec '" + spec + "'");
}

// const:c | bump:c, the latter 1 + c exp(-π(|x|² + |ω|²)).
AdmissibleTriple build_triple(const Grid& grid, const SpectrumArgs& a) {
  const auto psi = spatial_rule(a.psi.empty() ? "abs" : a.psi);
  const auto phi = spatial_rule(a.phi.empty() ? "abs" : a.phi);
  const std::string m0 = a.m0.empty() ? "const:1" : a.m0;
  const auto colon = m0.find(':');
  if (colon == std::string::npos) throw UsageError("unknown m0 spec '" + m0 + "'");
  const std::string kind = m0.substr(0, colon);
  const double c = parse_number(m0.substr(colon + 1));
  auto tabulate = [&](std::vector<double> m0_values) {
    std::vector<double> ps(grid.size()), ph(grid.size());
    const Grid freq = grid.conjugate();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.point(i);
      const auto w = freq.point(i);
      ps[i] = psi(std::span<const double>(x.data(), grid.dim()));
      ph[i] = phi(std::span<const double>(w.data(), grid.dim()));
    }
    return AdmissibleTriple(grid, std::move(ps), std::move(ph), std::move(m0_values));
  };
  if (kind == "const") return tabulate({c});
  if (kind == "bump") {
    return AdmissibleTriple::from_rules(
        grid, psi, phi, [c](std::span<const double> x, std::span<const double> w) {
          double r2 = 0.0;
          for (double v : x) r2 += v * v;
          for (double v : w) r2 += v * v;
          return 1.0 + c * std::exp(-pi * r2);
        });
  }
  throw UsageError("unknown m0 spec '" + m0 + "'");
}

int spectrum(const SpectrumArgs& a, std::ostream& out) {
  if (a.count < 1) throw DomainError("--count must be positive");
  std::vector<Json> rows;
  std::vector<SampledFunction> states;
  if (a.oscillator) {
    if (!a.psi.empty() || !a.phi.empty() || !a.m0.empty()) {
      throw UsageError("--oscillator fixes the weights; drop --psi/--phi/--m0");
    }
    const Grid grid = parse_grid(a.grid.value_or("1024,16"));
    if (grid.dim() != 1) throw DomainError("the three-point oscillator is one-dimensional");
    const auto sp = oscillator_spectrum(grid.points_per_axis(), grid.extent(), a.count);
    for (int k = 0; k < a.count; ++k) {
      rows.push_back({{"index", k},
                      {"lambda", sp.eigenvalues[k]},
                      {"reference", (2.0 * k + 1.0) / (2.0 * pi)},
                      {"method", "three_point"},
                      {"grid", to_json(sp.grid)}});
    }
    states = sp.states;
  } else {
    const Grid grid = parse_grid(a.grid.value_or("512,12"));
    const auto pair = build_forms(build_triple(grid, a), default_window(grid));
    for (const auto& s : smallest_eigen(pair, a.count)) {
      Json row = s.to_json();
      row["method"] = "generalized";
      rows.push_back(row);
      states.push_back(s.eigenvector);
    }
  }
  for (const auto& row : rows) out << row.dump() << '\n';
  if (!a.csv.empty()) {
    for (std::size_t k = 0; k < states.size(); ++k) {
      write_text_file(a.csv + "_" + std::to_string(k) + ".csv", to_csv(states[k]));
    }
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// minimize

struct MinimizeArgs {
  std::string preset;
  std::string exponents;
  int starts = 5;
  double tol = 1e-4;
  int max_iterations = 5000;
  std::uint64_t seed = 0;
  std::string grid = "512,12";
  std::string csv;
};

int minimize(const MinimizeArgs& a, std::ostream& out) {
  if (a.preset.empty() == a.exponents.empty()) {
    throw UsageError("give exactly one of --preset and --exponents");
  }
  ExponentSet e;
  if (!a.preset.empty() && a.preset != "heisenberg") {
    throw DomainError("unknown preset '" + a.preset + "'");
  }
  if (!a.exponents.empty()) e = ExponentSet::from_json(read_json_file(a.exponents));
  const Grid grid = parse_grid(a.grid);
  if (grid.dim() != e.d) throw DomainError("grid dimension differs from the exponent set");
  MinimizeOptions opts;
  opts.tol = a.tol;
  opts.max_iterations = a.max_iterations;
  const auto res = minimize_multistart(e, grid, a.starts, a.seed, opts);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool all_converged = true;
  for (std::size_t i = 0; i < res.starts.size(); ++i) {
    const auto& s = res.starts[i];
    Json row = s.to_json();
    row["start"] = i;
    row["seed"] = a.seed + i;
    out << row.dump() << '\n';
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
    all_converged = all_converged && s.converged;
  }
  const auto& best = res.starts[res.best];
  out << Json{{"best", res.best},
              {"lambda", best.lambda},
              {"spread", hi - lo},
              {"all_converged", all_converged},
              {"exponents", e.to_json()},
              {"tol", a.tol}}
             .dump()
      << '\n';
  if (!a.csv.empty()) write_text_file(a.csv, to_csv(best.minimizer));
  return best.converged ? kExitPass : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-frequency uncertainty toolkit", "tfuncert"};
  app.require_subcommand(1);

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Sharp constants, duals and condition checks");
  constants->add_option("--Cp", ca.cp, "Babenko-Beckner constant C_p")->expected(1, -1);
  constants->add_option("--dual", ca.dual, "Hölder dual p'")->expected(1, -1);
  constants->add_option("--H", ca.h, "Lieb constant H(r,p): r= p=")->expected(1, -1);
  constants->add_option("--B", ca.b, "Constant B(r,s,u,v): r= s= u= v= [d=]")->expected(1, -1);
  constants->add_option("--check-cp", ca.check_cp, "Cowling-Price condition: p= q= a= b=")
      ->expected(1, -1);
  constants
      ->add_option("--check-gg", ca.check_gg,
                   "Galperin-Gröchenig condition: d= p= q= a= b= r= s= alpha= beta=")
      ->expected(1, -1);
  constants->add_option("--check-lieb", ca.check_lieb, "Ambiguity exponent domain: r= s= u= v=")
      ->expected(1, -1);
  constants->add_option("--partner", ca.partner, "Partner exponent v: s= r= u=")->expected(1, -1);
  constants->add_option("--leindler-duals", ca.leindler, "Duals of u/r' and v/r': u= v= r=")
      ->expected(1, -1);
  constants->add_option("--format", ca.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  CertifyArgs ce;
  auto* cert = app.add_subcommand("certify", "Certify an inequality on extremal or random inputs");
  cert->add_option("id", ce.id, "Inequality name")->required();
  cert->add_option("--lattice", ce.lattice, "JSON array of exponent sets");
  cert->add_option("--seeds", ce.seeds, "Random inputs per lattice point");
  cert->add_option("--seed", ce.seed, "First seed");
  cert->add_option("--grid", ce.grid, "N,L[,d]");
  cert->add_option("--tol", ce.tol, "Slack tolerance");
  cert->add_option("--json", ce.json_out, "Write reports to this file");
  auto* extremal =
      cert->add_option("--extremal", ce.extremal_params,
                       "Saturation check on the extremal pair, optional key=value parameters")
          ->expected(0, -1);
  cert->add_option("--m", ce.m, "First Young/Leindler exponent");
  cert->add_option("--n", ce.n, "Second Young/Leindler exponent");
  cert->add_option("--r", ce.r, "Output exponent");
  cert->add_option("--input", ce.input, "Sampled-function JSON file");
  cert->add_option("--input-g", ce.input_g, "Second sampled-function JSON file");
  cert->add_option("--bound", ce.bound, "Functional constant K");

  SpectrumArgs sa;
  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of the weighted uncertainty problem");
  spec->add_flag("--oscillator", sa.oscillator, "Three-point harmonic oscillator");
  spec->add_option("--psi", sa.psi, "zero | abs[:c] | power:k[:c] | const:c");
  spec->add_option("--phi", sa.phi, "zero | abs[:c] | power:k[:c] | const:c");
  spec->add_option("--m0", sa.m0, "const:c | bump:c");
  spec->add_option("--grid", sa.grid, "N,L[,d]");
  spec->add_option("--count", sa.count, "Number of eigenpairs");
  spec->add_option("--csv", sa.csv, "Write eigenvectors to <prefix>_<k>.csv");

  MinimizeArgs ma;
  auto* mini = app.add_subcommand("minimize", "Minimize the weighted moment functional");
  mini->add_option("--preset", ma.preset, "heisenberg");
  mini->add_option("--exponents", ma.exponents, "Exponent-set JSON file");
  mini->add_option("--starts", ma.starts, "Number of random starts");
  mini->add_option("--tol", ma.tol, "Euler-Lagrange residual target");
  mini->add_option("--max-iter", ma.max_iterations, "Iteration cap per start");
  mini->add_option("--seed", ma.seed, "First seed");
  mini->add_option("--grid", ma.grid, "N,L[,d]");
  mini->add_option("--csv", ma.csv, "Write the best minimizer here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*constants) {
      const auto rows = constants_rows(ca);
      if (rows.empty()) throw UsageError("request at least one quantity");
      if (ca.format == "text") {
        print_text(rows, out);
      } else {
        for (const auto& row : rows) out << row.dump() << '\n';
      }
      return kExitPass;
    }
    if (*cert) {
      ce.extremal = extremal->count() > 0;
      return certify(ce, out, err);
    }
    if (*spec) return spectrum(sa, out);
    return minimize(ma, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace tfuncert::cli
