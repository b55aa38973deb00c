#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "tfuncert/exponent.hpp"
#include "tfuncert/sampling.hpp"
#include "tfuncert/transforms.hpp"

namespace tfuncert {

// (Σ |f(x_j)|^p ⟨x_j⟩^{ap} h^d)^{1/p}, ⟨x⟩ = 1 + |x|; p = ∞ takes the grid max.
// Exponents below one give the quasi-norm by the same formula.
double lp_weighted(const SampledFunction& f, Exponent p, double a = 0.0);

// lp_weighted(fourier(f), q, b)
double fourier_weighted(const SampledFunction& f, Exponent q, double b = 0.0);

enum class Side { time, frequency };

// ‖ |x|^a f ‖_p (time side) or ‖ |ω|^a f̂ ‖_p (frequency side).
double moment_seminorm(const SampledFunction& f, Exponent p, double a, Side side);

// Time-frequency weights. Each variant evaluates on the phase-space grid
// (x-node, ω-node) of a given spatial grid.
struct BracketWeight {
  double alpha = 0.0;  // ⟨x⟩^α ⟨ω⟩^β
  double beta = 0.0;
};
struct PowerXWeight {
  double a = 0.0;  // |x|^a
};
struct PowerOmegaWeight {
  double b = 0.0;  // |ω|^b
};
struct TabulatedWeight {
  std::vector<double> values;  // row-major (x-node, ω-node), non-negative
};

/*
 * An m₀-admissible triple (ψ, φ, m₀) tabulated on a grid. ψ is sampled on the
 * spatial nodes, φ on the frequency nodes, m₀ on phase space (row-major over
 * x-node, ω-node). A single m₀ entry stands for a constant, which keeps d = 2
 * phase spaces from being materialized. Only |ψ| and |φ| enter any formula, so
 * the magnitudes are stored. The composite m = sqrt(m₀² + |ψ|² + |φ|²) must be
 * finite and strictly positive.
 */
class AdmissibleTriple {
 public:
  using SpatialRule = std::function<double(std::span<const double>)>;
  using PhaseRule = std::function<double(std::span<const double> x, std::span<const double> w)>;

  AdmissibleTriple(const Grid& grid, std::vector<double> psi, std::vector<double> phi,
                   std::vector<double> m0);

  static AdmissibleTriple from_rules(const Grid& grid, const SpatialRule& psi,
                                     const SpatialRule& phi, const PhaseRule& m0);
  // ψ(x) = |x|, φ(ω) = |ω|, m₀ ≡ 1: the harmonic-oscillator triple.
  static AdmissibleTriple oscillator(const Grid& grid);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> psi() const { return psi_; }
  [[nodiscard]] std::span<const double> phi() const { return phi_; }
  [[nodiscard]] std::span<const double> m0() const { return m0_; }
  [[nodiscard]] double m0_at(std::size_t xi, std::size_t wi) const {
    return m0_.size() == 1 ? m0_[0] : m0_[xi * grid_.size() + wi];
  }
  [[nodiscard]] double composite(std::size_t xi, std::size_t wi) const;
  // Same triple with ψ multiplied by `factor`.
  [[nodiscard]] AdmissibleTriple with_scaled_psi(double factor) const;

 private:
  Grid grid_;
  std::vector<double> psi_;
  std::vector<double> phi_;
  std::vector<double> m0_;
};

class WeightSpec {
 public:
  using Variant = std::variant<BracketWeight, PowerXWeight, PowerOmegaWeight, TabulatedWeight,
                               AdmissibleTriple>;

  WeightSpec(Variant v);  // NOLINT(google-explicit-constructor)
  static WeightSpec unit() { return WeightSpec(BracketWeight{}); }

  // Weight at (x-node xi, ω-node wi) of the phase space over `grid`. For an
  // admissible triple this is the composite m.
  [[nodiscard]] double at(const Grid& grid, std::size_t xi, std::size_t wi) const;
  [[nodiscard]] bool is_unit() const;
  [[nodiscard]] const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

enum class IntegrationOrder {
  x_inner,      // (∫ (∫ |F|^r dx)^{s/r} dω)^{1/s}
  omega_inner,  // (∫ (∫ |F|^r dω)^{s/r} dx)^{1/s}
};

struct MixedOrder {
  Exponent inner;
  Exponent outer;
  IntegrationOrder order = IntegrationOrder::x_inner;
};

/*
 * Streaming evaluator of ‖w F‖ in a mixed Lebesgue norm over the phase space
 * of `grid`. Feed every row (fixed x-node) exactly once, then call value().
 * Each output slot is summed in feed order, so a fixed feed order gives the
 * same bits for any thread count.
 */
class MixedNormAccumulator {
 public:
  MixedNormAccumulator(const Grid& grid, MixedOrder order, WeightSpec weight);

  void add_row(std::size_t xi, std::span<const Complex> row);
  // `count` consecutive rows starting at x-node `first`, stored back to back.
  void add_rows(std::size_t first, std::size_t count, std::span<const Complex> block);
  // The finished norm. For finite exponents the pre-root power sum is
  // available through power_sum() when the outer exponent is finite.
  [[nodiscard]] double value() const;
  [[nodiscard]] double power_sum() const;

 private:
  void row_weights(std::size_t xi, std::span<double> out) const;
  [[nodiscard]] double magnitude_power(double magnitude, Exponent e) const;

  Grid grid_;
  MixedOrder order_;
  WeightSpec weight_;
  std::vector<double> column_factor_;  // separable part of the weight along ω
  std::vector<double> omega_slots_;    // x-inner: running Σ_x (or max) per ω-node
  std::vector<double> row_inner_;      // ω-inner: inner value per x-node
  std::size_t rows_seen_ = 0;
};

double mixed_norm(const PhaseSpaceFunction& F, const MixedOrder& order,
                  const WeightSpec& weight = WeightSpec::unit());

// The window used whenever one is not supplied: 2^{d/4} e^{-π|x|²}, unit L² norm.
SampledFunction default_window(const Grid& grid);

// ‖f‖_{M^{r,s}_{α,β}} with window g (x inner, bracket weight).
double modulation_norm(const SampledFunction& f, const SampledFunction& g, Exponent r, Exponent s,
                       double alpha = 0.0, double beta = 0.0);

// (ΣΣ |m V_g f|² cell)^{1/2}, evaluated as x-inner (2,2) with weight m.
double modulation_norm_m(const SampledFunction& f, const SampledFunction& g, const WeightSpec& m);

struct PsiPhiTerms {
  double modulation_sq;  // ‖f‖²_{M²_{m₀}}
  double psi_sq;         // ‖ψ f‖²
  double phi_sq;         // ‖φ f̂‖²
  [[nodiscard]] double total() const { return modulation_sq + psi_sq + phi_sq; }
};

PsiPhiTerms psi_phi_terms(const SampledFunction& f, const SampledFunction& g,
                          const AdmissibleTriple& w);
// sqrt(‖f‖²_{M²_{m₀}} + ‖ψ f‖² + ‖φ f̂‖²)
double psi_phi_norm(const SampledFunction& f, const SampledFunction& g, const AdmissibleTriple& w);

}  // namespace tfuncert
