#include "tfuncert/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfuncert/errors.hpp"
#include "tfuncert/parallel.hpp"

namespace tfuncert {
namespace {

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
}

// |v|^p with the common exponents kept exact.
double power_of(double magnitude, double p) {
  if (p == 1.0) return magnitude;
  if (p == 2.0) return magnitude * magnitude;
  return std::pow(magnitude, p);
}

// (Σ |f_j|^p w_j^p h^d)^{1/p}, or max_j |f_j| w_j for p = ∞.
template <typename WeightAt>
double weighted_power_norm(const SampledFunction& f, Exponent p, WeightAt weight) {
  const Grid& grid = f.grid();
  if (p.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]) * weight(grid, i));
    return m;
  }
  const double e = p.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::abs(f[i]);
    if (v == 0.0) continue;
    acc += power_of(v * weight(grid, i), e);
  }
  return std::pow(acc * grid.cell_volume(), 1.0 / e);
}

}  // namespace

double lp_weighted(const SampledFunction& f, Exponent p, double a) {
  require_non_negative(a, "weight power a");
  if (a == 0.0) return weighted_power_norm(f, p, [](const Grid&, std::size_t) { return 1.0; });
  return weighted_power_norm(f, p, [a](const Grid& g, std::size_t i) {
    return std::pow(1.0 + g.radius(i), a);
  });
}

double fourier_weighted(const SampledFunction& f, Exponent q, double b) {
  return lp_weighted(fourier(f), q, b);
}

double moment_seminorm(const SampledFunction& f, Exponent p, double a, Side side) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("moment power must be positive");
  auto weight = [a](const Grid& g, std::size_t i) { return std::pow(g.radius(i), a); };
  if (side == Side::time) return weighted_power_norm(f, p, weight);
  return weighted_power_norm(fourier(f), p, weight);
}

// ---------------------------------------------------------------------------
// Weights

AdmissibleTriple::AdmissibleTriple(const Grid& grid, std::vector<double> psi,
                                   std::vector<double> phi, std::vector<double> m0)
    : grid_(grid), psi_(std::move(psi)), phi_(std::move(phi)), m0_(std::move(m0)) {
  const std::size_t m = grid_.size();
  if (psi_.size() != m || phi_.size() != m) {
    throw DomainError("psi and phi must be tabulated on the N^d grid nodes");
  }
  if (m0_.size() != 1 && m0_.size() != m * m) {
    throw DomainError("m0 must be a constant or tabulated on the phase-space grid");
  }
  for (auto* table : {&psi_, &phi_}) {
    for (auto& v : *table) {
      if (!std::isfinite(v)) throw DomainError("non-finite admissible weight value");
      v = std::abs(v);
    }
  }
  for (double v : m0_) require_non_negative(v, "m0");
  if (m0_.size() == 1 && m0_[0] > 0.0) return;
  for (std::size_t xi = 0; xi < m; ++xi) {
    for (std::size_t wi = 0; wi < m; ++wi) {
      const double c = composite(xi, wi);
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("composite weight sqrt(m0^2 + |psi|^2 + |phi|^2) must be positive");
      }
    }
  }
}

AdmissibleTriple AdmissibleTriple::from_rules(const Grid& grid, const SpatialRule& psi,
                                              const SpatialRule& phi, const PhaseRule& m0) {
  const Grid freq = grid.conjugate();
  const std::size_t m = grid.size();
  const auto d = static_cast<std::size_t>(grid.dim());
  std::vector<double> ps(m), ph(m), mm(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    auto x = grid.point(i);
    auto w = freq.point(i);
    ps[i] = psi(std::span<const double>(x.data(), d));
    ph[i] = phi(std::span<const double>(w.data(), d));
  }
  for (std::size_t xi = 0; xi < m; ++xi) {
    auto x = grid.point(xi);
    for (std::size_t wi = 0; wi < m; ++wi) {
      auto w = freq.point(wi);
      mm[xi * m + wi] = m0(std::span<const double>(x.data(), d), std::span<const double>(w.data(), d));
    }
  }
  return {grid, std::move(ps), std::move(ph), std::move(mm)};
}

AdmissibleTriple AdmissibleTriple::oscillator(const Grid& grid) {
  const Grid freq = grid.conjugate();
  std::vector<double> ps(grid.size()), ph(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ps[i] = grid.radius(i);
    ph[i] = freq.radius(i);
  }
  return {grid, std::move(ps), std::move(ph), {1.0}};
}

double AdmissibleTriple::composite(std::size_t xi, std::size_t wi) const {
  const double m0 = m0_at(xi, wi);
  return std::sqrt(m0 * m0 + psi_[xi] * psi_[xi] + phi_[wi] * phi_[wi]);
}

AdmissibleTriple AdmissibleTriple::with_scaled_psi(double factor) const {
  std::vector<double> ps(psi_);
  for (auto& v : ps) v *= factor;
  return {grid_, std::move(ps), phi_, m0_};
}

WeightSpec::WeightSpec(Variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, BracketWeight>) {
          require_non_negative(w.alpha, "bracket power alpha");
          require_non_negative(w.beta, "bracket power beta");
        } else if constexpr (std::is_same_v<T, PowerXWeight>) {
          require_non_negative(w.a, "power weight a");
        } else if constexpr (std::is_same_v<T, PowerOmegaWeight>) {
          require_non_negative(w.b, "power weight b");
        } else if constexpr (std::is_same_v<T, TabulatedWeight>) {
          for (double x : w.values) require_non_negative(x, "tabulated weight");
        }
      },
      v_);
}

bool WeightSpec::is_unit() const {
  const auto* b = std::get_if<BracketWeight>(&v_);
  return b != nullptr && b->alpha == 0.0 && b->beta == 0.0;
}

double WeightSpec::at(const Grid& grid, std::size_t xi, std::size_t wi) const {
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, BracketWeight>) {
          return std::pow(1.0 + grid.radius(xi), w.alpha) *
                 std::pow(1.0 + grid.conjugate().radius(wi), w.beta);
        } else if constexpr (std::is_same_v<T, PowerXWeight>) {
          return std::pow(grid.radius(xi), w.a);
        } else if constexpr (std::is_same_v<T, PowerOmegaWeight>) {
          return std::pow(grid.conjugate().radius(wi), w.b);
        } else if constexpr (std::is_same_v<T, TabulatedWeight>) {
          if (w.values.size() != grid.size() * grid.size()) {
            throw DomainError("tabulated weight does not match the phase-space grid");
          }
          return w.values[xi * grid.size() + wi];
        } else {
          if (!w.grid().matches(grid)) throw DomainError("admissible triple lives on another grid");
          return w.composite(xi, wi);
        }
      },
      v_);
}

// ---------------------------------------------------------------------------
// Mixed norms

MixedNormAccumulator::MixedNormAccumulator(const Grid& grid, MixedOrder order, WeightSpec weight)
    : grid_(grid), order_(order), weight_(std::move(weight)) {
  const std::size_t m = grid_.size();
  const Grid freq = grid_.conjugate();
  column_factor_.assign(m, 1.0);
  if (const auto* b = std::get_if<BracketWeight>(&weight_.variant())) {
    for (std::size_t k = 0; k < m; ++k) column_factor_[k] = std::pow(1.0 + freq.radius(k), b->beta);
  } else if (const auto* pw = std::get_if<PowerOmegaWeight>(&weight_.variant())) {
    for (std::size_t k = 0; k < m; ++k) column_factor_[k] = std::pow(freq.radius(k), pw->b);
  } else if (const auto* t = std::get_if<TabulatedWeight>(&weight_.variant())) {
    if (t->values.size() != m * m) {
      throw DomainError("tabulated weight does not match the phase-space grid");
    }
  } else if (const auto* tr = std::get_if<AdmissibleTriple>(&weight_.variant())) {
    if (!tr->grid().matches(grid_)) throw DomainError("admissible triple lives on another grid");
  }
  if (order_.order == IntegrationOrder::x_inner) {
    omega_slots_.assign(m, 0.0);
  } else {
    row_inner_.assign(m, 0.0);
  }
}

void MixedNormAccumulator::row_weights(std::size_t xi, std::span<double> out) const {
  const std::size_t m = grid_.size();
  const auto& v = weight_.variant();
  if (const auto* b = std::get_if<BracketWeight>(&v)) {
    const double rf = std::pow(1.0 + grid_.radius(xi), b->alpha);
    for (std::size_t k = 0; k < m; ++k) out[k] = rf * column_factor_[k];
  } else if (const auto* px = std::get_if<PowerXWeight>(&v)) {
    std::fill(out.begin(), out.end(), std::pow(grid_.radius(xi), px->a));
  } else if (std::holds_alternative<PowerOmegaWeight>(v)) {
    std::copy(column_factor_.begin(), column_factor_.end(), out.begin());
  } else if (const auto* t = std::get_if<TabulatedWeight>(&v)) {
    std::copy_n(t->values.begin() + static_cast<std::ptrdiff_t>(xi * m), m, out.begin());
  } else {
    const auto& tr = std::get<AdmissibleTriple>(v);
    for (std::size_t k = 0; k < m; ++k) out[k] = tr.composite(xi, k);
  }
}

double MixedNormAccumulator::magnitude_power(double magnitude, Exponent e) const {
  return power_of(magnitude, e.value());
}

void MixedNormAccumulator::add_row(std::size_t xi, std::span<const Complex> row) {
  add_rows(xi, 1, row);
}

void MixedNormAccumulator::add_rows(std::size_t first, std::size_t count,
                                    std::span<const Complex> block) {
  const std::size_t m = grid_.size();
  if (block.size() != count * m || first + count > m) {
    throw DomainError("phase-space block does not fit the accumulator grid");
  }
  const bool unit = weight_.is_unit();
  // |w F| for every entry of the block.
  std::vector<double> mag(block.size());
  parallel_for(count, [&](std::size_t i) {
    std::span<double> out(mag.data() + i * m, m);
    if (!unit) row_weights(first + i, out);
    for (std::size_t k = 0; k < m; ++k) {
      const double a = std::abs(block[i * m + k]);
      out[k] = unit ? a : a * out[k];
    }
  });

  const Exponent inner = order_.inner;
  if (order_.order == IntegrationOrder::x_inner) {
    const double h = grid_.cell_volume();
    const std::size_t chunks = std::min<std::size_t>(m, worker_count() * 4);
    const std::size_t span_len = (m + chunks - 1) / chunks;
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t lo = c * span_len;
      const std::size_t hi = std::min(m, lo + span_len);
      for (std::size_t i = 0; i < count; ++i) {
        const double* row = mag.data() + i * m;
        for (std::size_t k = lo; k < hi; ++k) {
          if (inner.is_infinite()) {
            omega_slots_[k] = std::max(omega_slots_[k], row[k]);
          } else if (row[k] != 0.0) {
            omega_slots_[k] += magnitude_power(row[k], inner) * h;
          }
        }
      }
    });
  } else {
    const double dw = std::pow(grid_.freq_spacing(), grid_.dim());
    parallel_for(count, [&](std::size_t i) {
      const double* row = mag.data() + i * m;
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (inner.is_infinite()) {
          acc = std::max(acc, row[k]);
        } else if (row[k] != 0.0) {
          acc += magnitude_power(row[k], inner) * dw;
        }
      }
      row_inner_[first + i] = acc;
    });
  }
  rows_seen_ += count;
}

double MixedNormAccumulator::power_sum() const {
  if (rows_seen_ != grid_.size()) throw NumericalError("mixed norm evaluated before all rows arrived");
  if (order_.outer.is_infinite()) throw DomainError("power sum is undefined for an infinite outer exponent");
  const bool x_inner = order_.order == IntegrationOrder::x_inner;
  const std::vector<double>& slots = x_inner ? omega_slots_ : row_inner_;
  const double outer_cell =
      x_inner ? std::pow(grid_.freq_spacing(), grid_.dim()) : grid_.cell_volume();
  const double s = order_.outer.value();
  // slot holds the inner sum before its 1/r root (or the max when r = ∞).
  const double lift = order_.inner.is_infinite() ? s : s / order_.inner.value();
  double acc = 0.0;
  for (double v : slots) {
    if (v != 0.0) acc += power_of(v, lift) * outer_cell;
  }
  return acc;
}

double MixedNormAccumulator::value() const {
  if (rows_seen_ != grid_.size()) throw NumericalError("mixed norm evaluated before all rows arrived");
  if (order_.outer.is_infinite()) {
    const bool x_inner = order_.order == IntegrationOrder::x_inner;
    const std::vector<double>& slots = x_inner ? omega_slots_ : row_inner_;
    double m = 0.0;
    for (double v : slots) m = std::max(m, v);
    return order_.inner.is_infinite() ? m : std::pow(m, 1.0 / order_.inner.value());
  }
  const double s = order_.outer.value();
  return s == 2.0 ? std::sqrt(power_sum()) : std::pow(power_sum(), 1.0 / s);
}

double mixed_norm(const PhaseSpaceFunction& F, const MixedOrder& order, const WeightSpec& weight) {
  MixedNormAccumulator acc(F.grid(), order, weight);
  acc.add_rows(0, F.rows(), F.values());
  return acc.value();
}

// ---------------------------------------------------------------------------
// Modulation norms

SampledFunction default_window(const Grid& grid) {
  const double log_amp = 0.25 * grid.dim() * std::numbers::ln2;
  return sample_gaussian(GaussianSpec::isotropic(grid.dim(), std::numbers::pi, log_amp), grid);
}

namespace {

MixedNormAccumulator stream_modulation(const SampledFunction& f, const SampledFunction& g,
                                       MixedOrder order, WeightSpec weight) {
  MixedNormAccumulator acc(f.grid(), order, std::move(weight));
  for_each_stft_block(f, g, [&](std::size_t first, std::size_t count,
                                std::span<const Complex> block) {
    acc.add_rows(first, count, block);
  });
  return acc;
}

double modulation_sq(const SampledFunction& f, const SampledFunction& g, const WeightSpec& m) {
  return stream_modulation(f, g, {2.0, 2.0, IntegrationOrder::x_inner}, m).power_sum();
}

}  // namespace

double modulation_norm(const SampledFunction& f, const SampledFunction& g, Exponent r, Exponent s,
                       double alpha, double beta) {
  return stream_modulation(f, g, {r, s, IntegrationOrder::x_inner},
                           WeightSpec(BracketWeight{alpha, beta}))
      .value();
}

double modulation_norm_m(const SampledFunction& f, const SampledFunction& g, const WeightSpec& m) {
  return std::sqrt(modulation_sq(f, g, m));
}

PsiPhiTerms psi_phi_terms(const SampledFunction& f, const SampledFunction& g,
                          const AdmissibleTriple& w) {
  if (!w.grid().matches(f.grid())) throw DomainError("admissible triple lives on another grid");
  const Grid& grid = f.grid();
  const std::size_t m = grid.size();

  PsiPhiTerms t{};
  if (w.m0().size() == 1) {
    const double c = w.m0()[0];
    t.modulation_sq = c * c * modulation_sq(f, g, WeightSpec::unit());
  } else {
    const std::vector<double> m0(w.m0().begin(), w.m0().end());
    t.modulation_sq = modulation_sq(f, g, WeightSpec(TabulatedWeight{m0}));
  }

  double psi_acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) psi_acc += std::norm(w.psi()[i] * f[i]);
  t.psi_sq = psi_acc * grid.cell_volume();

  const SampledFunction fh = fourier(f);
  double phi_acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) phi_acc += std::norm(w.phi()[k] * fh[k]);
  t.phi_sq = phi_acc * fh.grid().cell_volume();
  return t;
}

double psi_phi_norm(const SampledFunction& f, const SampledFunction& g, const AdmissibleTriple& w) {
  return std::sqrt(psi_phi_terms(f, g, w).total());
}

}  // namespace tfuncert
