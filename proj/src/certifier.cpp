#include "tfuncert/certifier.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "tfuncert/errors.hpp"
#include "tfuncert/parallel.hpp"
#include "tfuncert/transforms.hpp"

namespace tfuncert {
namespace {

using std::numbers::pi;

constexpr double kRelationTol = 1e-12;

constexpr std::array<std::pair<InequalityId, const char*>, 9> kNames{{
    {InequalityId::hausdorff_young, "hausdorff_young"},
    {InequalityId::young, "young"},
    {InequalityId::leindler, "leindler"},
    {InequalityId::lieb_forward, "lieb_forward"},
    {InequalityId::lieb_reverse_x_omega, "lieb_reverse_x_omega"},
    {InequalityId::lieb_reverse_omega_x, "lieb_reverse_omega_x"},
    {InequalityId::heisenberg, "heisenberg"},
    {InequalityId::cowling_price_functional, "cowling_price_functional"},
    {InequalityId::modulation_bound, "modulation_bound"},
}};

nlohmann::json exponent_json(Exponent e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void check_convolution_relation(Exponent m, Exponent n, Exponent r) {
  const double defect = m.reciprocal() + n.reciprocal() - 1.0 - r.reciprocal();
  if (std::abs(defect) > kRelationTol) {
    throw DomainError("exponent relation 1/m + 1/n = 1 + 1/r violated by " +
                      std::to_string(defect));
  }
}

void require_non_negative(const SampledFunction& f, const char* what) {
  bool nonzero = false;
  for (const Complex& z : f.values()) {
    if (z.imag() != 0.0 || z.real() < 0.0) {
      throw DomainError(std::string(what) + " must be real and non-negative");
    }
    nonzero = nonzero || z.real() > 0.0;
  }
  if (!nonzero) throw DomainError(std::string(what) + " must not vanish identically");
}

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!f.grid().matches(g.grid())) throw DomainError("inputs live on different grids");
}

double ambiguity_norm(const SampledFunction& f, const SampledFunction& g, const MixedOrder& order) {
  MixedNormAccumulator acc(f.grid(), order, WeightSpec::unit());
  for_each_ambiguity_block(f, g, [&](std::size_t first, std::size_t count,
                                     std::span<const Complex> block) {
    acc.add_rows(first, count, block);
  });
  return acc.value();
}

double stft_norm(const SampledFunction& f, const SampledFunction& g, const MixedOrder& order) {
  MixedNormAccumulator acc(f.grid(), order, WeightSpec::unit());
  for_each_stft_block(f, g, [&](std::size_t first, std::size_t count,
                                std::span<const Complex> block) {
    acc.add_rows(first, count, block);
  });
  return acc.value();
}

// Dual of a finite exponent above one; 1 for infinity.
double dual_value(Exponent p) { return holder_dual(p).value(); }

Eigen::MatrixXd scalar_matrix(int d, double value) {
  return value * Eigen::MatrixXd::Identity(d, d);
}

// exp(-width |x - shift|² + i k·x), shift and k applied along every axis.
SampledFunction shifted_gaussian(const Grid& grid, double width, double shift, double k) {
  const int d = grid.dim();
  GaussianSpec spec;
  spec.quad_real = scalar_matrix(d, width);
  spec.quad_imag = Eigen::MatrixXd::Zero(d, d);
  spec.linear = Eigen::VectorXcd::Constant(d, Complex(2.0 * width * shift, k));
  spec.log_amplitude = -width * shift * shift * d;
  return sample_gaussian(spec, grid);
}

ExponentSet lattice_point(double r, double s, double u, Exponent v) {
  ExponentSet e;
  e.r = r;
  e.s = s;
  e.u = u;
  e.v = v;
  return e;
}

std::vector<ExponentSet> reverse_lattice() {
  std::vector<ExponentSet> out;
  for (double r : {1.25, 1.5, 2.0}) {
    for (double s : {1.25, 1.5, 2.0}) {
      for (double u : {1.5, 2.0}) {
        try {
          const Exponent v = solve_partner_exponent(s, r, u);
          if (check_lieb_domain(r, s, u, v)) out.push_back(lattice_point(r, s, u, v));
        } catch (const DomainError&) {
          // (r, s, u) admits no partner; skip the point
        }
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(InequalityId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

InequalityId parse_inequality_id(const std::string& name) {
  for (const auto& [key, text] : kNames) {
    if (name == text) return key;
  }
  throw DomainError("unknown inequality '" + name + "'");
}

CertificateReport CertificateReport::make(InequalityId id, double lhs, double rhs,
                                          double constant, double tol, const Grid& grid,
                                          nlohmann::json exponents, std::string label) {
  if (!(lhs >= 0.0) || !(rhs >= 0.0) || !std::isfinite(lhs) || !std::isfinite(rhs)) {
    throw NumericalError("certificate sides must be finite and non-negative");
  }
  CertificateReport rep;
  rep.id = id;
  rep.exponents = std::move(exponents);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.constant = constant;
  rep.tol = tol;
  rep.slack = lhs - rhs;
  if (lhs == 0.0 && rhs == 0.0) {
    rep.ratio = 1.0;
  } else if (rhs == 0.0) {
    rep.ratio = std::numeric_limits<double>::infinity();
  } else {
    rep.ratio = lhs / rhs;
  }
  rep.gap = std::abs(rep.ratio - 1.0);
  rep.pass = rep.slack >= -tol;
  rep.grid = tfuncert::to_json(grid);
  rep.label = std::move(label);
  return rep;
}

CertificateReport CertificateReport::failed(InequalityId id, nlohmann::json exponents,
                                            std::string error) {
  CertificateReport rep;
  rep.id = id;
  rep.exponents = std::move(exponents);
  rep.ratio = std::numeric_limits<double>::quiet_NaN();
  rep.gap = std::numeric_limits<double>::quiet_NaN();
  rep.pass = false;
  rep.error = std::move(error);
  return rep;
}

CertificateReport CertificateReport::flipped() const {
  CertificateReport rep = *this;
  std::swap(rep.lhs, rep.rhs);
  rep.slack = rep.lhs - rep.rhs;
  if (rep.lhs == 0.0 && rep.rhs == 0.0) {
    rep.ratio = 1.0;
  } else if (rep.rhs == 0.0) {
    rep.ratio = std::numeric_limits<double>::infinity();
  } else {
    rep.ratio = rep.lhs / rep.rhs;
  }
  rep.gap = std::abs(rep.ratio - 1.0);
  rep.pass = !error && rep.slack >= -rep.tol;
  return rep;
}

nlohmann::json CertificateReport::to_json() const {
  nlohmann::json j{{"id", to_string(id)},
                   {"exponents", exponents},
                   {"lhs", lhs},
                   {"rhs", rhs},
                   {"constant", constant},
                   {"ratio", finite_or_null(ratio)},
                   {"slack", slack},
                   {"gap", finite_or_null(gap)},
                   {"tol", tol},
                   {"pass", pass},
                   {"grid", grid},
                   {"label", label}};
  if (error) j["error"] = *error;
  return j;
}

// ---------------------------------------------------------------------------
// Certifiers

CertificateReport certify_hausdorff_young(const SampledFunction& f, Exponent r, double tol) {
  if (r.is_infinite() || r.value() < 1.0 || r.value() > 2.0) {
    throw DomainError("Hausdorff-Young needs r in [1, 2], got " + r.to_string());
  }
  const Exponent rd = holder_dual(r);
  const double constant = std::pow(babenko_beckner(r), f.grid().dim());
  const nlohmann::json exps{{"r", exponent_json(r)}, {"r_dual", exponent_json(rd)}};
  const std::string label = "lhs = C_r^d, rhs = |f^|_{r'} / |f|_r";
  if (f.is_zero()) {
    return CertificateReport::make(InequalityId::hausdorff_young, 0.0, 0.0, constant, tol,
                                   f.grid(), exps, label);
  }
  const double rhs = fourier_weighted(f, rd) / lp_weighted(f, r);
  return CertificateReport::make(InequalityId::hausdorff_young, constant, rhs, constant, tol,
                                 f.grid(), exps, label);
}

CertificateReport certify_young(const SampledFunction& f, const SampledFunction& g, Exponent m,
                                Exponent n, Exponent r, double tol) {
  require_same_grid(f, g);
  for (Exponent e : {m, n, r}) {
    if (e.is_finite() && e.value() < 1.0) throw DomainError("Young needs m, n, r >= 1");
  }
  check_convolution_relation(m, n, r);
  const bool fubini = m.value() == 1.0 && n.value() == 1.0 && r.value() == 1.0;
  if (fubini) {
    require_non_negative(f, "f");
    require_non_negative(g, "g");
  }
  const int d = f.grid().dim();
  const double constant =
      std::pow(babenko_beckner(m) * babenko_beckner(n) / babenko_beckner(r), d);
  const nlohmann::json exps{
      {"m", exponent_json(m)}, {"n", exponent_json(n)}, {"r", exponent_json(r)}};
  const std::string label = "lhs = (C_m C_n / C_r)^d, rhs = |f*g|_r / (|f|_m |g|_n)";
  if (f.is_zero() || g.is_zero()) {
    return CertificateReport::make(InequalityId::young, 0.0, 0.0, constant, tol, f.grid(), exps,
                                   label);
  }
  const double rhs =
      lp_weighted(convolve(f, g), r) / (lp_weighted(f, m) * lp_weighted(g, n));
  return CertificateReport::make(InequalityId::young, constant, rhs, constant, tol, f.grid(), exps,
                                 label);
}

CertificateReport certify_leindler(const SampledFunction& f, const SampledFunction& g,
                                   Exponent m, Exponent n, Exponent r, double tol) {
  require_same_grid(f, g);
  if (m.is_infinite() || n.is_infinite() || m.value() > 1.0 || n.value() > 1.0) {
    throw DomainError("Leindler needs 0 < m, n <= 1");
  }
  check_convolution_relation(m, n, r);
  require_non_negative(f, "f");
  require_non_negative(g, "g");
  const int d = f.grid().dim();
  const double constant =
      std::pow(babenko_beckner(m) * babenko_beckner(n) / babenko_beckner(r), d);
  const nlohmann::json exps{
      {"m", exponent_json(m)}, {"n", exponent_json(n)}, {"r", exponent_json(r)}};
  // Quasi-norms with r < 1 magnify transform round-off in the tails, so the
  // non-negative convolution is summed directly.
  const double lhs =
      lp_weighted(convolve_direct(f, g), r) / (lp_weighted(f, m) * lp_weighted(g, n));
  return CertificateReport::make(InequalityId::leindler, lhs, constant, constant, tol, f.grid(),
                                 exps, "lhs = |f*g|_r / (|f|_m |g|_n), rhs = (C_m C_n / C_r)^d");
}

CertificateReport certify_lieb_reverse(const SampledFunction& f, const SampledFunction& g,
                                       Exponent r, Exponent s, Exponent u, Exponent v,
                                       IntegrationOrder order, double tol) {
  require_same_grid(f, g);
  if (!check_lieb_domain(r, s, u, v)) {
    throw DomainError("(r, s, u, v) outside the reverse ambiguity domain");
  }
  const Grid& grid = f.grid();
  const double constant = sharp_B(r, s, u, v, grid.dim());
  const bool x_inner = order == IntegrationOrder::x_inner;
  const InequalityId id =
      x_inner ? InequalityId::lieb_reverse_x_omega : InequalityId::lieb_reverse_omega_x;
  const nlohmann::json exps{{"r", exponent_json(r)},
                            {"s", exponent_json(s)},
                            {"u", exponent_json(u)},
                            {"v", exponent_json(v)}};
  const std::string label =
      x_inner ? "lhs = |A(f,g)|_{r,s} / (|f^|_u |g^|_v), rhs = B(r,s,u,v)"
              : "lhs = |A(f,g)|_{r,s} / (|f|_u |g|_v), rhs = B(r,s,u,v)";
  const double nf = x_inner ? fourier_weighted(f, u) : lp_weighted(f, u);
  const double ng = x_inner ? fourier_weighted(g, v) : lp_weighted(g, v);
  if (nf == 0.0 || ng == 0.0) {
    return CertificateReport::make(id, 0.0, 0.0, constant, tol, grid, exps, label);
  }
  const double mixed = ambiguity_norm(f, g, MixedOrder{r, s, order});
  return CertificateReport::make(id, mixed / (nf * ng), constant, constant, tol, grid, exps,
                                 label);
}

CertificateReport certify_lieb_forward(const SampledFunction& f, const SampledFunction& g,
                                       double r, double p, double tol) {
  require_same_grid(f, g);
  if (f.grid().dim() != 1) throw DomainError("the forward ambiguity bound is stated for d = 1");
  if (!(r > 2.0) || !std::isfinite(r)) throw DomainError("the forward ambiguity bound needs r > 2");
  const double constant = std::pow(lieb_H(r, p), 1.0 / r);
  const double pd = p / (p - 1.0);
  const nlohmann::json exps{{"r", r}, {"p", p}, {"p_dual", pd}};
  const std::string label = "lhs = H(r,p)^{1/r}, rhs = |A(f,g)|_r / (|f|_p |g|_{p'})";
  if (f.is_zero() || g.is_zero()) {
    return CertificateReport::make(InequalityId::lieb_forward, 0.0, 0.0, constant, tol, f.grid(),
                                   exps, label);
  }
  const double amb = ambiguity_norm(f, g, MixedOrder{r, r, IntegrationOrder::x_inner});
  const double rhs = amb / (lp_weighted(f, p) * lp_weighted(g, pd));
  return CertificateReport::make(InequalityId::lieb_forward, constant, rhs, constant, tol,
                                 f.grid(), exps, label);
}

CertificateReport certify_heisenberg(const SampledFunction& f, double tol) {
  if (f.grid().dim() != 1) throw DomainError("the Heisenberg certificate is stated for d = 1");
  const double constant = 1.0 / (2.0 * pi);
  const std::string label = "lhs = (|x f|^2 + |w f^|^2) / |f|^2, rhs = 1/(2 pi)";
  const double mass = std::pow(l2_norm(f), 2);
  if (mass == 0.0) {
    return CertificateReport::make(InequalityId::heisenberg, 0.0, 0.0, constant, tol, f.grid(),
                                   nlohmann::json::object(), label);
  }
  const double x_moment = moment_seminorm(f, 2.0, 1.0, Side::time);
  const double w_moment = moment_seminorm(f, 2.0, 1.0, Side::frequency);
  const double lhs = (x_moment * x_moment + w_moment * w_moment) / mass;
  return CertificateReport::make(InequalityId::heisenberg, lhs, constant, constant, tol, f.grid(),
                                 nlohmann::json::object(), label);
}

double evaluate_banach_functional(const SampledFunction& f, Exponent p, Exponent q, double a,
                                  double b) {
  return moment_seminorm(f, p, a, Side::time) + moment_seminorm(f, q, b, Side::frequency);
}

double heisenberg_functional_bound() { return 1.0 / std::sqrt(pi); }

CertificateReport certify_banach_functional(const SampledFunction& f, const SampledFunction& g,
                                            const ExponentSet& e, double bound, double tol) {
  require_same_grid(f, g);
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw DomainError("functional bound must be positive and finite");
  }
  const std::string label = "lhs = F[f] / |f|_{M^{r,s}_{alpha,beta}}, rhs = K";
  const double mod = modulation_norm(f, g, e.r, e.s, e.alpha, e.beta);
  if (mod == 0.0) {
    return CertificateReport::make(InequalityId::cowling_price_functional, 0.0, 0.0, bound, tol,
                                   f.grid(), e.to_json(), label);
  }
  const double lhs = evaluate_banach_functional(f, e.p, e.q, e.a, e.b) / mod;
  return CertificateReport::make(InequalityId::cowling_price_functional, lhs, bound, bound, tol,
                                 f.grid(), e.to_json(), label);
}

CertificateReport certify_modulation_bound(const SampledFunction& f, const SampledFunction& g,
                                           Exponent r, Exponent s, Exponent u, Exponent v,
                                           Side side, double tol) {
  require_same_grid(f, g);
  if (!check_lieb_domain(r, s, u, v)) {
    throw DomainError("(r, s, u, v) outside the modulation bound domain");
  }
  const Grid& grid = f.grid();
  const double constant = sharp_B(r, s, u, v, grid.dim());
  const bool frequency = side == Side::frequency;
  nlohmann::json exps{{"r", exponent_json(r)},
                      {"s", exponent_json(s)},
                      {"u", exponent_json(u)},
                      {"v", exponent_json(v)},
                      {"side", frequency ? "frequency" : "time"}};
  const std::string label =
      frequency ? "lhs = |f|_{g,M^{r,s}} / (B |g^|_v |f^|_u), rhs = 1"
                : "lhs = |V_g f|_{L^{r,s}, w inner} / (B |g|_v |f|_u), rhs = 1";
  const double nf = frequency ? fourier_weighted(f, u) : lp_weighted(f, u);
  if (nf == 0.0) {
    return CertificateReport::make(InequalityId::modulation_bound, 0.0, 0.0, constant, tol, grid,
                                   exps, label);
  }
  const double ng = frequency ? fourier_weighted(g, v) : lp_weighted(g, v);
  if (ng == 0.0) throw DomainError("window must not vanish");
  const double mod =
      frequency ? stft_norm(f, g, MixedOrder{r, s, IntegrationOrder::x_inner})
                : stft_norm(f, g, MixedOrder{r, s, IntegrationOrder::omega_inner});
  return CertificateReport::make(InequalityId::modulation_bound, mod / (constant * ng * nf), 1.0,
                                 constant, tol, grid, exps, label);
}

// ---------------------------------------------------------------------------
// Extremal inputs

FunctionPair build_lieb_extremals(Exponent r, Exponent s, Exponent u, Exponent v,
                                  const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Grid& grid, IntegrationOrder order) {
  if (!check_lieb_domain(r, s, u, v)) {
    throw DomainError("(r, s, u, v) outside the reverse ambiguity domain");
  }
  const bool x_inner = order == IntegrationOrder::x_inner;
  const Exponent strict = x_inner ? r : s;
  if (!(strict.value() > 1.0 && strict.value() < 2.0)) {
    throw DomainError(std::string("equality needs 1 < ") + (x_inner ? "r" : "s") + " < 2");
  }
  const double rd = dual_value(r);
  if (u.is_infinite() || v.is_infinite() || !(u.value() < rd) || !(v.value() < rd)) {
    throw DomainError("equality needs 0 < u, v < r'");
  }
  const LeindlerDuals duals = leindler_duals(u, v, r);
  if (duals.m.infinite || duals.n.infinite) throw DomainError("width dual is infinite");
  const int d = grid.dim();
  if (A.rows() != d || A.cols() != d || B.rows() != d || B.cols() != d) {
    throw DomainError("A and B must be d x d");
  }
  auto profile = [&](double width, const Grid& where) {
    GaussianSpec spec;
    spec.quad_real = width * A;
    spec.quad_imag = B;
    spec.linear = Eigen::VectorXcd::Zero(d);
    return sample_gaussian(spec, where);
  };
  if (!x_inner) return {profile(duals.m.magnitude(), grid), profile(duals.n.magnitude(), grid)};
  const Grid spectral = grid.conjugate();
  return {inverse_fourier(profile(duals.m.magnitude(), spectral)),
          inverse_fourier(profile(duals.n.magnitude(), spectral))};
}

FunctionPair build_lieb_forward_extremals(double r, double p, const Grid& grid) {
  if (grid.dim() != 1) throw DomainError("the forward ambiguity bound is stated for d = 1");
  if (!(r > 2.0) || !std::isfinite(r)) throw DomainError("the forward ambiguity bound needs r > 2");
  lieb_H(r, p);  // range check
  const double rd = r / (r - 1.0);
  const double pd = p / (p - 1.0);
  const double m = p / rd;
  const double n = pd / rd;
  if (!(m > 1.0) || !(n > 1.0)) throw DomainError("equality needs p, p' > r'");
  const double md = m / (m - 1.0);
  const double nd = n / (n - 1.0);
  return {shifted_gaussian(grid, md * pi, 0.0, 0.0), shifted_gaussian(grid, nd * pi, 0.0, 0.0)};
}

FunctionPair build_young_extremals(Exponent m, Exponent n, const Grid& grid, double width,
                                   double shift_f, double shift_g, double frequency) {
  if (!(m.value() > 1.0) || !(n.value() > 1.0)) throw DomainError("equality needs m, n > 1");
  if (!(width > 0.0)) throw DomainError("width must be positive");
  const double md = dual_value(m);
  const double nd = dual_value(n);
  return {shifted_gaussian(grid, md * width, shift_f, frequency),
          shifted_gaussian(grid, nd * width, shift_g, frequency)};
}

FunctionPair build_leindler_extremals(Exponent m, Exponent n, const Grid& grid, double width,
                                      double shift_f, double shift_g) {
  if (m.is_infinite() || n.is_infinite() || !(m.value() < 1.0) || !(n.value() < 1.0)) {
    throw DomainError("equality needs 0 < m, n < 1");
  }
  if (!(width > 0.0)) throw DomainError("width must be positive");
  const double md = std::abs(m.value() / (m.value() - 1.0));
  const double nd = std::abs(n.value() / (n.value() - 1.0));
  return {shifted_gaussian(grid, md * width, shift_f, 0.0),
          shifted_gaussian(grid, nd * width, shift_g, 0.0)};
}

// ---------------------------------------------------------------------------
// Batteries

SampledFunction battery_input(const Grid& grid, std::uint64_t seed, bool non_negative) {
  RandomFunctionSpec spec;
  spec.seed = seed;
  spec.band_fraction = 0.05 + 0.05 * static_cast<double>((seed / 5) % 3);
  spec.envelope_width = grid.extent() * (0.07 + 0.015 * static_cast<double>(seed % 5));
  SampledFunction f = random_smooth(spec, grid);
  if (!non_negative) return f;
  std::vector<Complex> mod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mod[i] = std::abs(f[i]);
  return {grid, std::move(mod)};
}

std::vector<ExponentSet> default_lattice(InequalityId id) {
  std::vector<ExponentSet> out;
  auto push = [&](auto&& fill) {
    ExponentSet e;
    fill(e);
    out.push_back(e);
  };
  switch (id) {
    case InequalityId::hausdorff_young:
      for (double r : {1.0, 1.25, 1.5, 1.75, 2.0}) push([&](ExponentSet& e) { e.r = r; });
      break;
    case InequalityId::young:
      for (auto [m, n] : {std::pair{1.0, 1.0}, {1.25, 1.25}, {1.5, 1.2}, {1.0, 1.5}, {2.0, 2.0}}) {
        const double inv_r = 1.0 / m + 1.0 / n - 1.0;
        push([&](ExponentSet& e) {
          e.p = m;
          e.q = n;
          e.r = inv_r == 0.0 ? Exponent::infinity() : Exponent(1.0 / inv_r);
        });
      }
      break;
    case InequalityId::leindler:
      for (auto [m, n] : {std::pair{1.0, 1.0}, {0.8, 0.8}, {0.9, 0.7}}) {
        push([&](ExponentSet& e) {
          e.p = m;
          e.q = n;
          e.r = 1.0 / (1.0 / m + 1.0 / n - 1.0);
        });
      }
      break;
    case InequalityId::lieb_forward:
      for (auto [r, p] : {std::pair{4.0, 2.0}, {3.0, 2.0}, {4.0, 1.6}}) {
        push([&](ExponentSet& e) {
          e.r = r;
          e.p = p;
        });
      }
      break;
    case InequalityId::lieb_reverse_x_omega:
    case InequalityId::lieb_reverse_omega_x:
    case InequalityId::modulation_bound:
      out = reverse_lattice();
      break;
    case InequalityId::heisenberg:
    case InequalityId::cowling_price_functional:
      out.emplace_back();
      break;
  }
  return out;
}

std::vector<CertificateReport> run_battery(InequalityId id, const std::vector<ExponentSet>& lattice,
                                           std::size_t seeds, const BatteryOptions& options) {
  const std::size_t per_seed = id == InequalityId::modulation_bound ? 2 : 1;
  const std::size_t per_point = seeds * per_seed;
  std::vector<CertificateReport> reports(lattice.size() * per_point);
  const Grid& grid = options.grid;
  const double tol = options.tol;
  // Keeps f and g statistically independent for every seed.
  constexpr std::uint64_t kPartnerOffset = 0x9E3779B97F4A7C15ULL;

  parallel_for(reports.size(), [&](std::size_t slot) {
    const std::size_t point = slot / per_point;
    const std::size_t within = slot % per_point;
    const std::uint64_t seed = options.first_seed + within / per_seed;
    const ExponentSet& e = lattice[point];
    try {
      switch (id) {
        case InequalityId::hausdorff_young:
          reports[slot] = certify_hausdorff_young(battery_input(grid, seed), e.r, tol);
          break;
        case InequalityId::young: {
          const bool unit = e.p.value() == 1.0 && e.q.value() == 1.0 && e.r.value() == 1.0;
          reports[slot] =
              certify_young(battery_input(grid, seed, unit),
                            battery_input(grid, seed + kPartnerOffset, unit), e.p, e.q, e.r, tol);
          break;
        }
        case InequalityId::leindler:
          reports[slot] =
              certify_leindler(battery_input(grid, seed, true),
                               battery_input(grid, seed + kPartnerOffset, true), e.p, e.q, e.r, tol);
          break;
        case InequalityId::lieb_forward:
          reports[slot] = certify_lieb_forward(battery_input(grid, seed),
                                               battery_input(grid, seed + kPartnerOffset),
                                               e.r.value(), e.p.value(), tol);
          break;
        case InequalityId::lieb_reverse_x_omega:
        case InequalityId::lieb_reverse_omega_x: {
          const IntegrationOrder order = id == InequalityId::lieb_reverse_x_omega
                                             ? IntegrationOrder::x_inner
                                             : IntegrationOrder::omega_inner;
          reports[slot] = certify_lieb_reverse(battery_input(grid, seed),
                                               battery_input(grid, seed + kPartnerOffset), e.r,
                                               e.s, e.u, e.v, order, tol);
          break;
        }
        case InequalityId::heisenberg:
          reports[slot] = certify_heisenberg(battery_input(grid, seed), tol);
          break;
        case InequalityId::cowling_price_functional: {
          double bound = 0.0;
          if (options.functional_bound) {
            bound = *options.functional_bound;
          } else {
            const ExponentSet preset;
            const bool matches = e.p == preset.p && e.q == preset.q && e.a == preset.a &&
                                 e.b == preset.b && e.r == preset.r && e.s == preset.s &&
                                 e.alpha == 0.0 && e.beta == 0.0;
            if (!matches) throw DomainError("no certified functional bound for these exponents");
            bound = heisenberg_functional_bound();
          }
          reports[slot] =
              certify_banach_functional(battery_input(grid, seed), default_window(grid), e, bound,
                                        tol);
          break;
        }
        case InequalityId::modulation_bound: {
          const Side side = within % per_seed == 0 ? Side::frequency : Side::time;
          reports[slot] = certify_modulation_bound(battery_input(grid, seed), default_window(grid),
                                                   e.r, e.s, e.u, e.v, side, tol);
          break;
        }
      }
    } catch (const std::exception& ex) {
      reports[slot] = CertificateReport::failed(id, e.to_json(), ex.what());
    }
  });
  return reports;
}

}  // namespace tfuncert
