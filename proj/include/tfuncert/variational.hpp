#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tfuncert/constants.hpp"
#include "tfuncert/norms.hpp"
#include "tfuncert/sampling.hpp"

namespace tfuncert {

// ---------------------------------------------------------------------------
// Hilbert case

/*
 * Two Hermitian matrices on the sample vector u = (u(x_j))_j of a grid:
 *
 *   u^H form0 u     = ‖u‖²_{M²_{m₀}}                     (STFT energy, weight m₀²)
 *   u^H form_full u = ‖u‖²_{M²_{m₀}} + ‖ψ u‖² + ‖φ û‖²
 *
 * The STFT part uses the same circular window shift as stft(), so the two
 * routes agree to rounding.
 */
struct QuadraticFormPair {
  Grid grid;
  Eigen::MatrixXcd form0;
  Eigen::MatrixXcd form_full;
};

// Assembly costs O(N^{3d}) for a tabulated m₀ and O(N^{2d}) for a constant
// one. g must have unit L² norm. Throws NumericalError if form0 is not
// positive-definite.
QuadraticFormPair build_forms(const AdmissibleTriple& weights, const SampledFunction& window);

struct EigenSolution {
  double nu = 0.0;      // generalized eigenvalue of form_full against form0
  double lambda = 0.0;  // nu - 1
  SampledFunction eigenvector;  // unit ‖·‖_{M²_{m₀}}
  double residual = 0.0;        // ‖F v - ν F₀ v‖ / ‖F v‖
  int index = 0;
  [[nodiscard]] nlohmann::json to_json() const;
};

// The `count` smallest generalized eigenpairs, ascending.
std::vector<EigenSolution> smallest_eigen(const QuadraticFormPair& pair, int count);

/*
 * The operator A defined by (u, v)_{M²_{m₀}} = (Au, v)_{ψ,φ,m₀}. It is applied
 * through a Cholesky factorization of form_full; no matrix inverse is formed.
 */
class LocalizationOperator {
 public:
  explicit LocalizationOperator(const QuadraticFormPair& pair);
  [[nodiscard]] SampledFunction apply(const SampledFunction& u) const;
  // (u, v)_{ψ,φ,m₀}
  [[nodiscard]] Complex full_inner(const SampledFunction& u, const SampledFunction& v) const;

 private:
  const QuadraticFormPair* pair_;
  Eigen::LLT<Eigen::MatrixXcd> factor_;
};

SampledFunction operator_A_apply(const QuadraticFormPair& pair, const SampledFunction& u);

// -(1/4π²) f'' + x² f = λ f on the nodes of make_grid(N, L), three-point
// second difference, zero outside [-L/2, L/2).
struct OscillatorSpectrum {
  Grid grid;
  std::vector<double> eigenvalues;     // ascending
  std::vector<SampledFunction> states;  // unit L² norm, positive at the first local peak
};

// count in [1, 10]. Eigenvalues by Sturm-sequence bisection to full
// precision, eigenvectors by inverse iteration.
OscillatorSpectrum oscillator_spectrum(int n, double extent, int count);

// ---------------------------------------------------------------------------
// Banach case

// ‖|x|^a f‖_p (time) or ‖|ω|^a f̂‖_p (frequency); a = 0 gives the plain norm.
struct MomentTerm {
  Exponent p = 2.0;
  double power = 1.0;
  Side side = Side::time;
};

// ‖V_g f‖ in L^{r,s} (x inner) with weight ⟨x⟩^α ⟨ω⟩^β.
struct ModulationTerm {
  Exponent r = 2.0;
  Exponent s = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  SampledFunction window;
};

using FunctionalTerm = std::variant<MomentTerm, ModulationTerm>;

double term_value(const SampledFunction& f, const FunctionalTerm& term);

/*
 * First-order coefficient of t in term(f + t u). For a moment term
 *
 *   Φ(f)^{1-p} Σ |x_j|^{ap} |f_j|^{p-2} Re(f_j conj(u_j)) h^d,
 *
 * and for the modulation term the same structure over phase space with the
 * inner integrals ‖V_g f(·, ω)‖ entering as I(ω)^{s/r - 1}. Nodes where f (or
 * V_g f) vanishes contribute zero. Exponents must be finite and >= 1.
 */
double frechet_directional(const SampledFunction& f, const SampledFunction& u,
                           const FunctionalTerm& term);

// G with frechet_directional(f, u) = Re (G, u) for every u.
SampledFunction frechet_gradient(const SampledFunction& f, const FunctionalTerm& term);

// The terms of 𝔉^{p,q}_{a,b} and of the constraint ‖·‖_{M^{r,s}_{α,β}}.
struct BanachProblem {
  ExponentSet exponents;
  SampledFunction window;

  [[nodiscard]] MomentTerm time_term() const;
  [[nodiscard]] MomentTerm frequency_term() const;
  [[nodiscard]] ModulationTerm constraint_term() const;
  [[nodiscard]] double functional(const SampledFunction& f) const;
  [[nodiscard]] double constraint(const SampledFunction& f) const;
};

// max over u of |d𝔉[u] - λ dM[u]| / ‖u‖₂. Throws DomainError unless
// ‖f‖_{M^{r,s}_{α,β}} = 1 within 1e-8.
double el_residual_banach(const SampledFunction& f, double lambda, const ExponentSet& e,
                          const SampledFunction& window,
                          const std::vector<SampledFunction>& directions);

struct MinimizeOptions {
  double tol = 1e-4;  // EL residual target
  int max_iterations = 5000;
  int memory = 10;          // non-monotone reference window
  double armijo = 1e-4;     // sufficient-decrease coefficient
  std::uint64_t probe_seed = 7;
};

struct BanachSolution {
  SampledFunction minimizer;  // ‖·‖_{M^{r,s}_{α,β}} = 1
  double lambda = 0.0;        // 𝔉[minimizer]
  double el_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool exploratory = false;  // the existence condition failed for these exponents
  [[nodiscard]] nlohmann::json to_json() const;
};

/*
 * Minimizes 𝔉[f] on the sphere ‖f‖_{M^{r,s}_{α,β}} = 1. The descent direction
 * is the gradient of the scale-free quotient 𝔉/M, which on the sphere equals
 * ∇𝔉 - 𝔉 ∇M, i.e. the constraint gradient projected out with the multiplier
 * λ = 𝔉. Steps use the Barzilai-Borwein length, backtracked by halving
 * against the largest of the last `memory` values; every iterate is
 * renormalized. Stops when the EL residual over {descent direction, f, three
 * random probes} is below options.tol.
 */
BanachSolution minimize_banach(const ExponentSet& e, const SampledFunction& window,
                               const SampledFunction& init,
                               const MinimizeOptions& options = MinimizeOptions{});

struct MultiStartResult {
  std::vector<BanachSolution> starts;
  std::size_t best = 0;  // smallest λ among converged starts (any start if none converged)
  [[nodiscard]] nlohmann::json to_json() const;
};

// Independent starts from random_smooth inputs with seeds first_seed, first_seed+1, ...
MultiStartResult minimize_multistart(const ExponentSet& e, const Grid& grid, int starts,
                                     std::uint64_t first_seed = 0,
                                     const MinimizeOptions& options = MinimizeOptions{});

}  // namespace tfuncert
