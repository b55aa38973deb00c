#include "tfuncert/variational.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "tfuncert/errors.hpp"
#include "tfuncert/parallel.hpp"
#include "tfuncert/transforms.hpp"

namespace tfuncert {
namespace {

using std::numbers::pi;

// Largest phase-space side (N^d) for which dense Hilbert forms are assembled.
constexpr std::size_t kMaxDenseSize = 4096;

// Line-search trials whose boundary exceeds this share of the peak are
// rejected before any transform sees them (stft() refuses above 1e-10).
constexpr double kTrialDecay = 1e-11;

inline int shifted(int i, int j, int n) { return (i - j + n / 2 + n) % n; }

// Flat index of g(t_s - x_j) under the circular shift used by stft().
std::size_t window_index(const Grid& grid, std::size_t s, std::size_t j) {
  const int n = grid.points_per_axis();
  if (grid.dim() == 1) return static_cast<std::size_t>(shifted(static_cast<int>(s), static_cast<int>(j), n));
  auto si = grid.axis_indices(s);
  auto ji = grid.axis_indices(j);
  return grid.flat_index({shifted(si[0], ji[0], n), shifted(si[1], ji[1], n)});
}

// Flat index of (s - t) mod N along each axis.
std::size_t lag_index(const Grid& grid, std::size_t s, std::size_t t) {
  const int n = grid.points_per_axis();
  if (grid.dim() == 1) return static_cast<std::size_t>((static_cast<int>(s) - static_cast<int>(t) + n) % n);
  auto si = grid.axis_indices(s);
  auto ti = grid.axis_indices(t);
  return grid.flat_index({(si[0] - ti[0] + n) % n, (si[1] - ti[1] + n) % n});
}

/*
 * P(Δ) = Σ_k v_k e^{2πi Δh·ω_k} for lags Δ in [0, N)^d. With ω_k = (k - N/2)/L
 * the phase is (-1)^{Δ₁+Δ₂} e^{2πi Δ·k/N}, a backward DFT between sign flips,
 * and P is N-periodic in every lag component.
 */
std::vector<Complex> lag_symbol(std::span<const double> v, const Grid& grid) {
  std::vector<Complex> out(v.begin(), v.end());
  detail::dft_inplace(out, grid.points_per_axis(), grid.dim(), false);
  detail::checkerboard_inplace(out, grid.points_per_axis(), grid.dim());
  return out;
}

void require_unit_window(const SampledFunction& g) {
  if (std::abs(l2_norm(g) - 1.0) > 1e-10) throw DomainError("window must have unit L2 norm");
}

double weighted_sum_power(std::span<const Complex> values, std::span<const double> weight,
                          Exponent p, double cell) {
  if (p.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m = std::max(m, weight[i] * std::abs(values[i]));
    return m;
  }
  double acc = 0.0;
  const double pv = p.value();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = weight[i] * std::abs(values[i]);
    acc += pv == 2.0 ? a * a : std::pow(a, pv);
  }
  return std::pow(acc * cell, 1.0 / pv);
}

// |x|^a on the nodes of a grid, with 0^0 = 1.
std::vector<double> power_weight(const Grid& grid, double a) {
  std::vector<double> w(grid.size(), 1.0);
  if (a == 0.0) return w;
  for (std::size_t i = 0; i < grid.size(); ++i) w[i] = std::pow(grid.radius(i), a);
  return w;
}

void require_differentiable(Exponent e, const char* name) {
  if (e.is_infinite() || e.value() < 1.0) {
    throw DomainError(std::string("Fréchet derivative needs finite ") + name + " >= 1");
  }
}

// |z|^{p-2} z with the value 0 at z = 0.
Complex signed_power(Complex z, double p) {
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  return p == 2.0 ? z : std::pow(m, p - 2.0) * z;
}

SampledFunction moment_carrier(const SampledFunction& f, const MomentTerm& t) {
  if (t.power < 0.0) throw DomainError("moment power must be non-negative");
  return t.side == Side::time ? f : fourier(f);
}

double moment_value(const SampledFunction& f, const MomentTerm& t) {
  const SampledFunction F = moment_carrier(f, t);
  const auto w = power_weight(F.grid(), t.power);
  return weighted_sum_power(F.values(), w, t.p, F.grid().cell_volume());
}

// Φ^{1-p} w^p |F|^{p-2} F on the carrier grid.
SampledFunction moment_kernel(const SampledFunction& F, const MomentTerm& t, double value) {
  const double p = t.p.value();
  const auto w = power_weight(F.grid(), t.power);
  const double scale = std::pow(value, 1.0 - p);
  std::vector<Complex> k(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    k[i] = scale * std::pow(w[i], p) * signed_power(F[i], p);
  }
  return {F.grid(), std::move(k)};
}

// Φ^{1-s} I(ω)^{s/r-1} w^r |V|^{r-2} V over phase space, with Φ and I from V.
PhaseSpaceFunction modulation_kernel(const PhaseSpaceFunction& V, const ModulationTerm& t,
                                     double* value_out) {
  const Grid& grid = V.grid();
  const std::size_t m = grid.size();
  const double r = t.r.value();
  const double s = t.s.value();
  const WeightSpec weight(BracketWeight{t.alpha, t.beta});
  std::vector<double> wr(m * m);
  std::vector<double> inner(m, 0.0);
  for (std::size_t xi = 0; xi < m; ++xi) {
    for (std::size_t wi = 0; wi < m; ++wi) {
      const double w = weight.at(grid, xi, wi);
      const double a = w * std::abs(V.at(xi, wi));
      wr[xi * m + wi] = r == 2.0 ? w * w : std::pow(w, r);
      inner[wi] += r == 2.0 ? a * a : std::pow(a, r);
    }
  }
  const double h = grid.cell_volume();
  const double dw = grid.conjugate().cell_volume();
  double outer = 0.0;
  for (std::size_t wi = 0; wi < m; ++wi) {
    inner[wi] *= h;
    outer += std::pow(inner[wi], s / r);
  }
  const double value = std::pow(outer * dw, 1.0 / s);
  if (value_out) *value_out = value;
  if (value == 0.0) throw DomainError("modulation term vanishes at f");
  const double lead = std::pow(value, 1.0 - s);
  std::vector<Complex> k(m * m);
  for (std::size_t wi = 0; wi < m; ++wi) {
    if (inner[wi] == 0.0) continue;
    const double col = lead * std::pow(inner[wi], s / r - 1.0);
    for (std::size_t xi = 0; xi < m; ++xi) {
      k[xi * m + wi] = col * wr[xi * m + wi] * signed_power(V.at(xi, wi), r);
    }
  }
  return {grid, std::move(k)};
}

double real_inner(const SampledFunction& a, const SampledFunction& b) { return inner(a, b).real(); }

SampledFunction axpy(double alpha, const SampledFunction& x, const SampledFunction& y) {
  return y + Complex(alpha) * x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hilbert case

QuadraticFormPair build_forms(const AdmissibleTriple& weights, const SampledFunction& window) {
  const Grid& grid = weights.grid();
  if (!grid.matches(window.grid())) throw DomainError("window grid does not match the weights");
  require_unit_window(window);
  require_decay(window, "window");
  const std::size_t m = grid.size();
  if (m > kMaxDenseSize) throw DomainError("dense Hilbert forms are limited to N^d <= 4096");

  const double h = grid.cell_volume();
  const double dw = grid.conjugate().cell_volume();
  const double scale = h * dw * h * h;  // phase-space cell times the two h^d from V
  Eigen::MatrixXcd form0 = Eigen::MatrixXcd::Zero(m, m);

  if (weights.m0().size() == 1) {
    // Σ_k e^{2πiΔh·ω_k} = N^d δ_Δ0: the form is diagonal.
    double energy = 0.0;
    for (const auto& v : window.values()) energy += std::norm(v);
    const double c = weights.m0()[0];
    const double diag = scale * static_cast<double>(m) * c * c * energy;
    form0.diagonal().setConstant(diag);
  } else {
    // W_j(Δ) = Σ_k m₀²(x_j, ω_k) e^{2πiΔh·ω_k}, one lag symbol per x-node.
    std::vector<std::vector<Complex>> symbols(m);
    parallel_for(m, [&](std::size_t j) {
      std::vector<double> row(m);
      for (std::size_t k = 0; k < m; ++k) row[k] = std::pow(weights.m0_at(j, k), 2);
      symbols[j] = lag_symbol(row, grid);
    });
    parallel_for(m, [&](std::size_t t) {
      for (std::size_t s = 0; s < m; ++s) {
        const std::size_t lag = lag_index(grid, s, t);
        Complex acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          acc += window[window_index(grid, s, j)] * std::conj(window[window_index(grid, t, j)]) *
                 symbols[j][lag];
        }
        form0(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = scale * acc;
      }
    });
  }
  form0 = (0.5 * (form0 + form0.adjoint())).eval();

  Eigen::MatrixXcd full = form0;
  for (std::size_t s = 0; s < m; ++s) {
    full(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) +=
        std::pow(weights.psi()[s], 2) * h;
  }
  std::vector<double> phi_sq(m);
  bool any_phi = false;
  for (std::size_t k = 0; k < m; ++k) {
    phi_sq[k] = std::pow(weights.phi()[k], 2);
    any_phi = any_phi || phi_sq[k] != 0.0;
  }
  if (any_phi) {
    const std::vector<Complex> symbol = lag_symbol(phi_sq, grid);
    const double phi_scale = dw * h * h;
    parallel_for(m, [&](std::size_t t) {
      for (std::size_t s = 0; s < m; ++s) {
        full(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) +=
            phi_scale * symbol[lag_index(grid, s, t)];
      }
    });
    full = (0.5 * (full + full.adjoint())).eval();
  }

  Eigen::LLT<Eigen::MatrixXcd> check(form0);
  if (check.info() != Eigen::Success) {
    throw NumericalError("form0 is not positive-definite on this grid");
  }
  return {grid, std::move(form0), std::move(full)};
}

nlohmann::json EigenSolution::to_json() const {
  return {{"index", index},
          {"nu", nu},
          {"lambda", lambda},
          {"residual", residual},
          {"grid", tfuncert::to_json(eigenvector.grid())}};
}

std::vector<EigenSolution> smallest_eigen(const QuadraticFormPair& pair, int count) {
  const auto m = pair.form0.rows();
  if (count < 1 || count > m) throw DomainError("eigenpair count must lie in [1, N^d]");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      pair.form_full, pair.form0, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("generalized eigensolver did not converge");
  }
  std::vector<EigenSolution> out;
  for (int i = 0; i < count; ++i) {
    const double nu = solver.eigenvalues()(i);
    Eigen::VectorXcd v = solver.eigenvectors().col(i);
    // Fix the phase: the entry of largest modulus becomes real and positive.
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    v *= std::conj(v(peak)) / std::abs(v(peak));
    const Eigen::VectorXcd fv = pair.form_full * v;
    const double residual = (fv - nu * (pair.form0 * v)).norm() / fv.norm();
    if (!(residual <= 1e-8)) {
      throw NumericalError("eigenpair " + std::to_string(i) + " residual " +
                           std::to_string(residual) + " exceeds 1e-8");
    }
    out.push_back({nu, nu - 1.0, SampledFunction::from_vector(pair.grid, v), residual, i});
  }
  return out;
}

LocalizationOperator::LocalizationOperator(const QuadraticFormPair& pair)
    : pair_(&pair), factor_(pair.form_full) {
  if (factor_.info() != Eigen::Success) {
    throw NumericalError("form_full is not positive-definite");
  }
}

SampledFunction LocalizationOperator::apply(const SampledFunction& u) const {
  if (!u.grid().matches(pair_->grid)) throw DomainError("function lives on another grid");
  const Eigen::VectorXcd w = factor_.solve(pair_->form0 * u.to_vector());
  return SampledFunction::from_vector(pair_->grid, w);
}

Complex LocalizationOperator::full_inner(const SampledFunction& u,
                                         const SampledFunction& v) const {
  return v.to_vector().dot(pair_->form_full * u.to_vector());
}

SampledFunction operator_A_apply(const QuadraticFormPair& pair, const SampledFunction& u) {
  return LocalizationOperator(pair).apply(u);
}

OscillatorSpectrum oscillator_spectrum(int n, double extent, int count) {
  if (count < 1 || count > 10) throw DomainError("oscillator eigenvalue count must lie in [1, 10]");
  const Grid grid = make_grid(n, extent, 1);
  const double h = grid.spacing();
  const double c = 1.0 / (4.0 * pi * pi * h * h);
  std::vector<double> diag(n);
  for (int j = 0; j < n; ++j) diag[j] = 2.0 * c + grid.node(j) * grid.node(j);
  const double off = -c;

  // Number of eigenvalues strictly below sigma (Sturm count via LDLᵀ pivots).
  auto below = [&](double sigma) {
    int negatives = 0;
    double pivot = 1.0;
    for (int j = 0; j < n; ++j) {
      pivot = diag[j] - sigma - (j > 0 ? off * off / pivot : 0.0);
      if (pivot == 0.0) pivot = -std::numeric_limits<double>::epsilon() * (std::abs(sigma) + c);
      negatives += pivot < 0.0 ? 1 : 0;
    }
    return negatives;
  };

  const double lo0 = *std::min_element(diag.begin(), diag.end()) - 2.0 * c;
  const double hi0 = *std::max_element(diag.begin(), diag.end()) + 2.0 * c;
  OscillatorSpectrum out{grid, {}, {}};
  for (int k = 0; k < count; ++k) {
    double lo = lo0;
    double hi = hi0;
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                                               std::max(std::abs(lo), std::abs(hi));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) > k ? hi : lo) = mid;
    }
    out.eigenvalues.push_back(0.5 * (lo + hi));
  }

  for (int k = 0; k < count; ++k) {
    const double lambda = out.eigenvalues[k];
    // Shift slightly off the eigenvalue so the tridiagonal solve stays regular.
    const double sigma = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
    std::vector<double> x(n, 1.0);
    std::vector<double> cprime(n), dprime(n);
    for (int sweep = 0; sweep < 3; ++sweep) {
      // Thomas algorithm for (T - σ) y = x.
      double denom = diag[0] - sigma;
      cprime[0] = off / denom;
      dprime[0] = x[0] / denom;
      for (int j = 1; j < n; ++j) {
        denom = diag[j] - sigma - off * cprime[j - 1];
        cprime[j] = off / denom;
        dprime[j] = (x[j] - off * dprime[j - 1]) / denom;
      }
      x[n - 1] = dprime[n - 1];
      for (int j = n - 2; j >= 0; --j) x[j] = dprime[j] - cprime[j] * x[j + 1];
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm * h);
      for (double& v : x) v /= norm;
    }
    const double peak = *std::max_element(x.begin(), x.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    // Sign convention: the leftmost significant entry is positive.
    const auto first = std::find_if(x.begin(), x.end(), [&](double v) {
      return std::abs(v) > 1e-3 * std::abs(peak);
    });
    const double sign = *first < 0.0 ? -1.0 : 1.0;
    std::vector<Complex> values(n);
    for (int j = 0; j < n; ++j) values[j] = sign * x[j];
    out.states.emplace_back(grid, std::move(values));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Banach case

double term_value(const SampledFunction& f, const FunctionalTerm& term) {
  if (const auto* mt = std::get_if<MomentTerm>(&term)) return moment_value(f, *mt);
  const auto& t = std::get<ModulationTerm>(term);
  return modulation_norm(f, t.window, t.r, t.s, t.alpha, t.beta);
}

double frechet_directional(const SampledFunction& f, const SampledFunction& u,
                           const FunctionalTerm& term) {
  if (!f.grid().matches(u.grid())) throw DomainError("direction lives on another grid");
  if (const auto* mt = std::get_if<MomentTerm>(&term)) {
    require_differentiable(mt->p, "p");
    const SampledFunction F = moment_carrier(f, *mt);
    const SampledFunction U = moment_carrier(u, *mt);
    const double value = moment_value(f, *mt);
    if (value == 0.0) throw DomainError("moment term vanishes at f");
    const double p = mt->p.value();
    const auto w = power_weight(F.grid(), mt->power);
    double acc = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      acc += std::pow(w[i], p) * (signed_power(F[i], p) * std::conj(U[i])).real();
    }
    return std::pow(value, 1.0 - p) * acc * F.grid().cell_volume();
  }
  const auto& t = std::get<ModulationTerm>(term);
  require_differentiable(t.r, "r");
  require_differentiable(t.s, "s");
  const PhaseSpaceFunction V = stft(f, t.window);
  const PhaseSpaceFunction U = stft(u, t.window);
  const PhaseSpaceFunction K = modulation_kernel(V, t, nullptr);
  double acc = 0.0;
  for (std::size_t i = 0; i < K.values().size(); ++i) {
    acc += (K.values()[i] * std::conj(U.values()[i])).real();
  }
  return acc * K.cell_weight();
}

SampledFunction frechet_gradient(const SampledFunction& f, const FunctionalTerm& term) {
  if (const auto* mt = std::get_if<MomentTerm>(&term)) {
    require_differentiable(mt->p, "p");
    const double value = moment_value(f, *mt);
    if (value == 0.0) throw DomainError("moment term vanishes at f");
    const SampledFunction kernel = moment_kernel(moment_carrier(f, *mt), *mt, value);
    // The transform is unitary, so the frequency-side kernel pulls back by its inverse.
    return mt->side == Side::time ? kernel : inverse_fourier(kernel);
  }
  const auto& t = std::get<ModulationTerm>(term);
  require_differentiable(t.r, "r");
  require_differentiable(t.s, "s");
  const PhaseSpaceFunction K = modulation_kernel(stft(f, t.window), t, nullptr);
  return stft_adjoint(K, t.window);
}

MomentTerm BanachProblem::time_term() const { return {exponents.p, exponents.a, Side::time}; }

MomentTerm BanachProblem::frequency_term() const {
  return {exponents.q, exponents.b, Side::frequency};
}

ModulationTerm BanachProblem::constraint_term() const {
  return {exponents.r, exponents.s, exponents.alpha, exponents.beta, window};
}

double BanachProblem::functional(const SampledFunction& f) const {
  return term_value(f, time_term()) + term_value(f, frequency_term());
}

double BanachProblem::constraint(const SampledFunction& f) const {
  return term_value(f, constraint_term());
}

double el_residual_banach(const SampledFunction& f, double lambda, const ExponentSet& e,
                          const SampledFunction& window,
                          const std::vector<SampledFunction>& directions) {
  const BanachProblem problem{e, window};
  const double c = problem.constraint(f);
  if (std::abs(c - 1.0) > 1e-8) {
    throw DomainError("f is off the constraint set: norm " + std::to_string(c));
  }
  double worst = 0.0;
  for (const auto& u : directions) {
    const double size = l2_norm(u);
    if (size == 0.0) throw DomainError("test directions must be nonzero");
    const double lhs = frechet_directional(f, u, problem.time_term()) +
                       frechet_directional(f, u, problem.frequency_term());
    const double rhs = frechet_directional(f, u, problem.constraint_term());
    worst = std::max(worst, std::abs(lhs - lambda * rhs) / size);
  }
  return worst;
}

nlohmann::json BanachSolution::to_json() const {
  return {{"lambda", lambda},
          {"el_residual", el_residual},
          {"iterations", iterations},
          {"converged", converged},
          {"exploratory", exploratory},
          {"grid", tfuncert::to_json(minimizer.grid())}};
}

BanachSolution minimize_banach(const ExponentSet& e, const SampledFunction& window,
                               const SampledFunction& init, const MinimizeOptions& options) {
  if (init.is_zero()) throw DomainError("initial guess must be nonzero");
  if (!init.grid().matches(window.grid())) throw DomainError("window grid does not match init");
  const BanachProblem problem{e, window};
  const MomentTerm tx = problem.time_term();
  const MomentTerm tw = problem.frequency_term();
  const ModulationTerm tm = problem.constraint_term();

  auto normalize = [&](const SampledFunction& f) {
    return Complex(1.0 / problem.constraint(f)) * f;
  };
  // Gradient of 𝔉/M at a point on the sphere: ∇𝔉 - 𝔉 ∇M.
  auto descent = [&](const SampledFunction& f, double value) {
    const SampledFunction gf = frechet_gradient(f, tx) + frechet_gradient(f, tw);
    return axpy(-value, frechet_gradient(f, tm), gf);
  };

  const Grid& grid = init.grid();
  std::vector<SampledFunction> probes;
  for (std::uint64_t k = 0; k < 3; ++k) {
    probes.push_back(random_smooth({options.probe_seed + k, 0.1, 0.12 * grid.extent()}, grid));
  }
  auto residual = [&](const SampledFunction& f, double value, const SampledFunction& d) {
    std::vector<SampledFunction> dirs{f};
    if (!d.is_zero()) dirs.push_back(d);
    dirs.insert(dirs.end(), probes.begin(), probes.end());
    return el_residual_banach(f, value, e, window, dirs);
  };

  // Search directions pass through ⟨x⟩^{-1} F^{-1} ⟨ω⟩^{-2} F ⟨x⟩^{-1}, with
  // ⟨t⟩ = (1 + t²)^{1/2}. Without this the two moments make the iteration stiff
  // enough to amplify rounding noise into the aliasing region in a few steps.
  auto bracket = [](const Grid& on, double power) {
    std::vector<Complex> m(on.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
      m[k] = std::pow(1.0 + std::pow(on.radius(k), 2), power / 2.0);
    }
    return SampledFunction(on, std::move(m));
  };
  const SampledFunction time_damp = bracket(grid, -1.0);
  const SampledFunction freq_damp = bracket(grid.conjugate(), -2.0);
  // exp(-(|x| / 0.4L)^16): 1 - 1e-2 at |x| = 0.3L, 4e-16 at the edge. Keeps the
  // FFT noise floor of the gradient from reaching the boundary nodes.
  const SampledFunction edge_taper = [&] {
    std::vector<Complex> m(grid.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
      m[k] = std::exp(-std::pow(grid.radius(k) / (0.4 * grid.extent()), 16));
    }
    return SampledFunction(grid, std::move(m));
  }();
  auto precondition = [&](const SampledFunction& g) {
    const SampledFunction smooth =
        inverse_fourier(pointwise(freq_damp, fourier(pointwise(time_damp, g))));
    return pointwise(edge_taper, pointwise(time_damp, smooth));
  };

  BanachSolution sol{normalize(init), 0.0, 0.0, 0, false, !check_galperin_grochenig(e).holds()};
  SampledFunction f = sol.minimizer;
  double value = problem.functional(f);
  SampledFunction d = descent(f, value);
  SampledFunction pd = precondition(d);
  std::deque<double> recent{value};
  double step = 1.0;
  SampledFunction f_prev = f;
  SampledFunction d_prev = d;
  SampledFunction pd_prev = pd;

  for (int it = 0;; ++it) {
    if (l2_norm(pd) <= options.tol) {
      const double res = residual(f, value, pd);
      if (res <= options.tol) {
        sol = {f, value, res, it, true, sol.exploratory};
        return sol;
      }
    }
    if (it >= options.max_iterations) break;
    const double slope = real_inner(d, pd);
    if (it > 0) {
      // Barzilai-Borwein length (s, y) / (y, P y) in the preconditioned metric.
      const SampledFunction s = f - f_prev;
      const SampledFunction y = d - d_prev;
      const double sy = real_inner(s, y);
      const double ypy = real_inner(y, pd - pd_prev);
      step = sy > 0.0 && ypy > 0.0 ? std::clamp(sy / ypy, 1e-10, 1e10)
                                   : std::min(1.0, 1.0 / l2_norm(pd));
    }
    const double reference = *std::max_element(recent.begin(), recent.end());
    SampledFunction trial = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = axpy(-step, pd, f);
      if (trial.boundary_ratio() <= kTrialDecay) {
        const double trial_value = problem.functional(trial) / problem.constraint(trial);
        if (trial_value <= reference - options.armijo * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no decrease along the direction: stationary to rounding
    f_prev = f;
    d_prev = d;
    pd_prev = pd;
    f = normalize(trial);
    value = problem.functional(f);
    d = descent(f, value);
    pd = precondition(d);
    recent.push_back(value);
    if (static_cast<int>(recent.size()) > options.memory) recent.pop_front();
    sol.iterations = it + 1;
  }
  sol.minimizer = f;
  sol.lambda = value;
  sol.el_residual = residual(f, value, pd);
  sol.converged = sol.el_residual <= options.tol;
  return sol;
}

nlohmann::json MultiStartResult::to_json() const {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& s : starts) all.push_back(s.to_json());
  return {{"best", best}, {"starts", all}};
}

MultiStartResult minimize_multistart(const ExponentSet& e, const Grid& grid, int starts,
                                     std::uint64_t first_seed, const MinimizeOptions& options) {
  if (starts < 1) throw DomainError("need at least one start");
  const SampledFunction window = default_window(grid);
  std::vector<std::optional<BanachSolution>> slots(static_cast<std::size_t>(starts));
  parallel_for(slots.size(), [&](std::size_t i) {
    const auto init = random_smooth({first_seed + i, 0.1, 0.12 * grid.extent()}, grid);
    slots[i] = minimize_banach(e, window, init, options);
  });
  MultiStartResult out;
  for (auto& s : slots) out.starts.push_back(std::move(*s));
  bool found = false;
  for (std::size_t i = 0; i < out.starts.size(); ++i) {
    const auto& s = out.starts[i];
    const bool better = !found || s.lambda < out.starts[out.best].lambda;
    if (s.converged && better) {
      out.best = i;
      found = true;
    }
  }
  if (!found) {
    for (std::size_t i = 1; i < out.starts.size(); ++i) {
      if (out.starts[i].lambda < out.starts[out.best].lambda) out.best = i;
    }
  }
  return out;
}

}  // namespace tfuncert
