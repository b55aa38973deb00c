#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tfuncert/constants.hpp"
#include "tfuncert/exponent.hpp"
#include "tfuncert/norms.hpp"
#include "tfuncert/sampling.hpp"

namespace tfuncert {

enum class InequalityId {
  hausdorff_young,
  young,
  leindler,
  lieb_forward,
  lieb_reverse_x_omega,
  lieb_reverse_omega_x,
  heisenberg,
  cowling_price_functional,
  modulation_bound,
};

std::string to_string(InequalityId id);
// Accepts the names produced by to_string.
InequalityId parse_inequality_id(const std::string& name);

inline constexpr double kCertifyTolerance = 1e-8;

/*
 * Outcome of one certification. Every certifier arranges its two sides so
 * that the inequality reads lhs >= rhs, after dividing out the norms of the
 * inputs (so both sides are scale free). Verdict and derived numbers are
 * pure functions of (lhs, rhs, tol):
 *
 *   slack = lhs - rhs,  pass = slack >= -tol,
 *   ratio = lhs / rhs (1 when both vanish),  gap = |ratio - 1|.
 */
struct CertificateReport {
  InequalityId id = InequalityId::heisenberg;
  nlohmann::json exponents = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;  // the sharp constant entering the inequality
  double ratio = 1.0;
  double slack = 0.0;
  double gap = 0.0;
  double tol = kCertifyTolerance;
  bool pass = true;
  nlohmann::json grid = nlohmann::json::object();
  std::string label;                 // which side holds which quantity
  std::optional<std::string> error;  // set when the point could not be evaluated

  static CertificateReport make(InequalityId id, double lhs, double rhs, double constant,
                                double tol, const Grid& grid, nlohmann::json exponents,
                                std::string label);
  static CertificateReport failed(InequalityId id, nlohmann::json exponents, std::string error);

  // The same numbers with the sides exchanged, verdict recomputed.
  [[nodiscard]] CertificateReport flipped() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

// C_r^d ‖f‖_r >= ‖f̂‖_{r'} for r in [1, 2].
CertificateReport certify_hausdorff_young(const SampledFunction& f, Exponent r,
                                          double tol = kCertifyTolerance);

// (C_m C_n / C_r)^d ‖f‖_m ‖g‖_n >= ‖f ⋆ g‖_r with 1/m + 1/n = 1 + 1/r. At
// m = n = r = 1 the certificate is the mass-factorization identity and the
// inputs must be non-negative.
CertificateReport certify_young(const SampledFunction& f, const SampledFunction& g, Exponent m,
                                Exponent n, Exponent r, double tol = kCertifyTolerance);

// ‖f ⋆ g‖_r >= (C_m C_n / C_r)^d ‖f‖_m ‖g‖_n for non-negative f, g and
// 0 < m, n <= 1 with 1/m + 1/n = 1 + 1/r.
CertificateReport certify_leindler(const SampledFunction& f, const SampledFunction& g,
                                   Exponent m, Exponent n, Exponent r,
                                   double tol = kCertifyTolerance);

// ‖A(f,g)‖_{L^{r,s}} >= B(r,s,u,v) ‖f̂‖_u ‖ĝ‖_v (x inner) or
// ‖A(f,g)‖_{L^{r,s}} >= B(r,s,u,v) ‖f‖_u ‖g‖_v (ω inner).
CertificateReport certify_lieb_reverse(const SampledFunction& f, const SampledFunction& g,
                                       Exponent r, Exponent s, Exponent u, Exponent v,
                                       IntegrationOrder order, double tol = kCertifyTolerance);

// H(r,p)^{1/r} ‖f‖_p ‖g‖_{p'} >= ‖A(f,g)‖_r, d = 1, r > 2, r' <= p, p' <= r.
CertificateReport certify_lieb_forward(const SampledFunction& f, const SampledFunction& g,
                                       double r, double p, double tol = kCertifyTolerance);

// ‖x f‖² + ‖ω f̂‖² >= ‖f‖² / (2π), d = 1.
CertificateReport certify_heisenberg(const SampledFunction& f, double tol = kCertifyTolerance);

// ‖|x|^a f‖_p + ‖|ω|^b f̂‖_q
double evaluate_banach_functional(const SampledFunction& f, Exponent p, Exponent q, double a,
                                  double b);

// The optimal constant of the Heisenberg-type functional at p = q = 2,
// a = b = 1, r = s = 2, α = β = 0: 1/√π.
double heisenberg_functional_bound();

// 𝔉^{p,q}_{a,b}[f] >= K ‖f‖_{M^{r,s}_{α,β}} with window g.
CertificateReport certify_banach_functional(const SampledFunction& f, const SampledFunction& g,
                                            const ExponentSet& e, double bound,
                                            double tol = kCertifyTolerance);

// ‖f‖_{g,M^{r,s}} / (B ‖ĝ‖_v) >= ‖f̂‖_u (frequency side) or
// ‖f‖_{g,M^{r,s}} / (B ‖g‖_v) >= ‖f‖_u (time side, ω-inner norm).
CertificateReport certify_modulation_bound(const SampledFunction& f, const SampledFunction& g,
                                           Exponent r, Exponent s, Exponent u, Exponent v,
                                           Side side, double tol = kCertifyTolerance);

struct FunctionPair {
  SampledFunction f;
  SampledFunction g;
};

/*
 * Chirped Gaussian pair saturating the reverse ambiguity bound. With
 * m = u/r', n = v/r' and their duals m', n':
 *
 *   x inner:  f̂(ω) = exp(-ω·(|m'|A + iB)ω),  ĝ(ω) = exp(-ω·(|n'|A + iB)ω)
 *   ω inner:  the same profiles in x.
 *
 * Both members carry the same chirp; ambiguity pairs f with conj(g), so the
 * chirps cancel to a pure modulation. The strict range 1 < r < 2 (x inner)
 * or 1 < s < 2 (ω inner) and 0 < u, v < r' is enforced.
 */
FunctionPair build_lieb_extremals(Exponent r, Exponent s, Exponent u, Exponent v,
                                  const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Grid& grid,
                                  IntegrationOrder order = IntegrationOrder::x_inner);

// f = exp(-m'π|x|²), g = exp(-n'π|x|²) with m = p/r', n = p'/r', r > 2, d = 1.
FunctionPair build_lieb_forward_extremals(double r, double p, const Grid& grid);

// f = exp(-m' width |x - shift_f|² + i k·x), g = exp(-n' width |x - shift_g|² + i k·x),
// m, n > 1.
FunctionPair build_young_extremals(Exponent m, Exponent n, const Grid& grid,
                                   double width = std::numbers::pi, double shift_f = 0.0, double shift_g = 0.0,
                                   double frequency = 0.0);

// f = exp(-|m'| width |x - shift_f|²), g = exp(-|n'| width |x - shift_g|²),
// 0 < m, n < 1.
FunctionPair build_leindler_extremals(Exponent m, Exponent n, const Grid& grid,
                                      double width = std::numbers::pi, double shift_f = 0.0,
                                      double shift_g = 0.0);

struct BatteryOptions {
  Grid grid = make_grid(512, 12.0, 1);
  double tol = kCertifyTolerance;
  std::uint64_t first_seed = 0;
  // K for the functional battery; defaults to the Heisenberg value, which is
  // only certified at the matching exponents.
  std::optional<double> functional_bound;
};

/*
 * Random-input sweep. Lattice points are read per inequality:
 *
 *   hausdorff_young           r
 *   young, leindler           (p, q, r) as (m, n, r)
 *   lieb_forward              (r, p)
 *   lieb_reverse_*            (r, s, u, v)
 *   modulation_bound          (r, s, u, v); both sides are certified
 *   heisenberg                exponents unused
 *   cowling_price_functional  (p, q, a, b, r, s, alpha, beta)
 *
 * Reports come back ordered by (lattice index, seed[, side]). A point that
 * raises is recorded as a failed report and the sweep continues.
 */
std::vector<CertificateReport> run_battery(InequalityId id, const std::vector<ExponentSet>& lattice,
                                           std::size_t seeds,
                                           const BatteryOptions& options = BatteryOptions{});

// A small valid lattice per inequality, used when none is supplied.
std::vector<ExponentSet> default_lattice(InequalityId id);

// Seeded test input for batteries: random_smooth with an envelope fitted to
// the grid. Non-negative inputs take the modulus.
SampledFunction battery_input(const Grid& grid, std::uint64_t seed, bool non_negative = false);

}  // namespace tfuncert
