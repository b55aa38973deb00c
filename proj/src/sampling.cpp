#include "tfuncert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tfuncert/errors.hpp"
#include "tfuncert/transforms.hpp"

namespace tfuncert {

// ---------------------------------------------------------------------------
// Grid

Grid make_grid(int n, double extent, int dim) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("grid size N=" + std::to_string(n) + " is not a power of two >= 8");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw DomainError("grid extent must be positive and finite");
  }
  if (dim != 1 && dim != 2) {
    throw DomainError("unsupported dimension d=" + std::to_string(dim));
  }
  return Grid(n, extent, dim);
}

std::size_t Grid::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 2> Grid::axis_indices(std::size_t flat) const {
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / n_), static_cast<int>(flat % n_)};
}

std::size_t Grid::flat_index(std::array<int, 2> idx) const {
  if (dim_ == 1) return static_cast<std::size_t>(idx[0]);
  return static_cast<std::size_t>(idx[0]) * n_ + idx[1];
}

std::array<double, 2> Grid::point(std::size_t flat) const {
  auto idx = axis_indices(flat);
  if (dim_ == 1) return {node(idx[0]), 0.0};
  return {node(idx[0]), node(idx[1])};
}

double Grid::radius(std::size_t flat) const {
  auto p = point(flat);
  return std::hypot(p[0], p[1]);
}

bool Grid::on_boundary(std::size_t flat) const {
  auto idx = axis_indices(flat);
  auto edge = [this](int j) { return j == 0 || j == n_ - 1; };
  return dim_ == 1 ? edge(idx[0]) : (edge(idx[0]) || edge(idx[1]));
}

Grid Grid::conjugate() const { return Grid(n_, n_ / extent_, dim_); }

bool Grid::matches(const Grid& other) const {
  return n_ == other.n_ && dim_ == other.dim_ &&
         std::abs(extent_ - other.extent_) <= 1e-12 * std::max(extent_, other.extent_);
}

// ---------------------------------------------------------------------------
// SampledFunction

SampledFunction::SampledFunction(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("sample count " + std::to_string(values_.size()) +
                      " does not match grid size " + std::to_string(grid_.size()));
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("non-finite sample value");
    }
  }
}

SampledFunction SampledFunction::zeros(const Grid& grid) {
  return SampledFunction(grid, std::vector<Complex>(grid.size()));
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledFunction::boundary_ratio() const {
  double peak = max_abs();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (grid_.on_boundary(i)) edge = std::max(edge, std::abs(values_[i]));
  }
  return edge / peak;
}

bool SampledFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) { return v == 0.0; });
}

Eigen::VectorXcd SampledFunction::to_vector() const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) v[static_cast<Eigen::Index>(i)] = values_[i];
  return v;
}

SampledFunction SampledFunction::from_vector(const Grid& grid, const Eigen::VectorXcd& v) {
  return SampledFunction(grid, std::vector<Complex>(v.data(), v.data() + v.size()));
}

namespace {

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!f.grid().matches(g.grid())) throw DomainError("functions live on different grids");
}

template <typename Op>
SampledFunction combine(const SampledFunction& f, const SampledFunction& g, Op op) {
  require_same_grid(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i], g[i]);
  return {f.grid(), std::move(out)};
}

}  // namespace

SampledFunction operator*(Complex c, const SampledFunction& f) {
  std::vector<Complex> out(f.values().begin(), f.values().end());
  for (auto& v : out) v *= c;
  return {f.grid(), std::move(out)};
}

SampledFunction operator+(const SampledFunction& f, const SampledFunction& g) {
  return combine(f, g, [](Complex a, Complex b) { return a + b; });
}

SampledFunction operator-(const SampledFunction& f, const SampledFunction& g) {
  return combine(f, g, [](Complex a, Complex b) { return a - b; });
}

SampledFunction pointwise(const SampledFunction& f, const SampledFunction& g) {
  return combine(f, g, [](Complex a, Complex b) { return a * b; });
}

Complex inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
  return acc * f.grid().cell_volume();
}

double l2_norm(const SampledFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.grid().cell_volume());
}

// ---------------------------------------------------------------------------
// Gaussians

GaussianSpec GaussianSpec::isotropic(int dim, double a, Complex log_amplitude) {
  GaussianSpec spec;
  spec.quad_real = a * Eigen::MatrixXd::Identity(dim, dim);
  spec.quad_imag = Eigen::MatrixXd::Zero(dim, dim);
  spec.linear = Eigen::VectorXcd::Zero(dim);
  spec.log_amplitude = log_amplitude;
  return spec;
}

void GaussianSpec::validate() const {
  const auto d = quad_real.rows();
  if (d < 1 || d > 2 || quad_real.cols() != d || quad_imag.rows() != d || quad_imag.cols() != d ||
      linear.size() != d) {
    throw DomainError("Gaussian parameters have inconsistent shapes");
  }
  if ((quad_real - quad_real.transpose()).norm() > 1e-12 * (1.0 + quad_real.norm()) ||
      (quad_imag - quad_imag.transpose()).norm() > 1e-12 * (1.0 + quad_imag.norm())) {
    throw DomainError("Gaussian quadratic parts must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(quad_real, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("Gaussian real quadratic part must be positive-definite");
  }
}

Complex GaussianSpec::evaluate(std::span<const double> t) const {
  const auto d = quad_real.rows();
  Complex exponent = log_amplitude;
  for (Eigen::Index i = 0; i < d; ++i) {
    exponent += linear[i] * t[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex q(quad_real(i, j), quad_imag(i, j));
      exponent -= t[static_cast<std::size_t>(i)] * q * t[static_cast<std::size_t>(j)];
    }
  }
  return std::exp(exponent);
}

SampledFunction sample_gaussian(const GaussianSpec& spec, const Grid& grid) {
  spec.validate();
  if (spec.quad_real.rows() != grid.dim()) {
    throw DomainError("Gaussian dimension does not match grid dimension");
  }
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto p = grid.point(i);
    values[i] = spec.evaluate(std::span<const double>(p.data(), static_cast<std::size_t>(grid.dim())));
  }
  SampledFunction f(grid, std::move(values));
  if (f.boundary_ratio() > 1e-12) throw DomainError("grid too small for this Gaussian");
  return f;
}

SampledFunction sample_closure(const PointRule& rule, const Grid& grid) {
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto p = grid.point(i);
    values[i] = rule(std::span<const double>(p.data(), static_cast<std::size_t>(grid.dim())));
  }
  return {grid, std::move(values)};
}

// ---------------------------------------------------------------------------
// Random test functions

SampledFunction random_smooth(const RandomFunctionSpec& spec, const Grid& grid) {
  if (!(spec.band_fraction > 0.0) || spec.band_fraction > 0.5) {
    throw DomainError("band-limit fraction must lie in (0, 0.5]");
  }
  if (!(spec.envelope_width > 0.0)) throw DomainError("envelope width must be positive");

  const Grid freq = grid.conjugate();
  const double cutoff = spec.band_fraction * grid.points_per_axis() / (2.0 * grid.extent());
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> coeffs(freq.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    // Draw for every node so the stream does not depend on the cutoff.
    double re = normal(rng);
    double im = normal(rng);
    if (freq.radius(k) <= cutoff) coeffs[k] = Complex(re, im);
  }
  SampledFunction band = inverse_fourier(SampledFunction(freq, std::move(coeffs)));

  const double sigma2 = spec.envelope_width * spec.envelope_width;
  std::vector<Complex> values(band.values().begin(), band.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double r = grid.radius(i);
    values[i] *= std::exp(-std::numbers::pi * r * r / sigma2);
  }
  SampledFunction shaped(grid, std::move(values));
  double norm = l2_norm(shaped);
  if (norm == 0.0) throw NumericalError("random function vanished; widen the band");
  return Complex(1.0 / norm) * shaped;
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_csv(const SampledFunction& f) {
  std::ostringstream os;
  os.precision(17);
  const Grid& g = f.grid();
  os << (g.dim() == 1 ? "x,re,im\n" : "x,y,re,im\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto p = g.point(i);
    os << p[0] << ',';
    if (g.dim() == 2) os << p[1] << ',';
    os << f[i].real() << ',' << f[i].imag() << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const Grid& grid) {
  return {{"N", grid.points_per_axis()}, {"L", grid.extent()}, {"d", grid.dim()}};
}

nlohmann::json to_json(const SampledFunction& f) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : f.values()) values.push_back({v.real(), v.imag()});
  return {{"grid", to_json(f.grid())}, {"values", std::move(values)}};
}

SampledFunction sampled_function_from_json(const nlohmann::json& j) {
  try {
    const auto& gj = j.at("grid");
    Grid grid = make_grid(gj.at("N").get<int>(), gj.at("L").get<double>(), gj.at("d").get<int>());
    std::vector<Complex> values;
    values.reserve(grid.size());
    for (const auto& pair : j.at("values")) {
      values.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return {grid, std::move(values)};
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed sampled-function JSON: ") + e.what());
  }
}

}  // namespace tfuncert
