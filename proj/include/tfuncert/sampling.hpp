#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace tfuncert {

using Complex = std::complex<double>;

/*
 * Centered uniform grid on [-L/2, L/2)^d with N nodes per axis.
 *
 *   h      = L / N            node spacing
 *   dω     = 1 / L            spacing of the DFT-conjugate frequency grid
 *   x_j    = -L/2 + j h
 *   ω_k    = -N/(2L) + k / L
 *
 * The frequency grid is itself a Grid with the same N and extent N / L, so a
 * Fourier transform maps functions on grid G to functions on conjugate(G) and
 * conjugate(conjugate(G)) == G.
 */
class Grid {
 public:
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int points_per_axis() const { return n_; }
  [[nodiscard]] double extent() const { return extent_; }
  [[nodiscard]] double spacing() const { return extent_ / n_; }
  [[nodiscard]] double freq_spacing() const { return 1.0 / extent_; }

  // N^d
  [[nodiscard]] std::size_t size() const;
  // h^d, the rectangle-rule weight of one node.
  [[nodiscard]] double cell_volume() const;

  [[nodiscard]] double node(int j) const { return -0.5 * extent_ + j * spacing(); }
  [[nodiscard]] double freq(int k) const { return -0.5 * n_ / extent_ + k / extent_; }

  // Per-axis indices of a flat (row-major) index.
  [[nodiscard]] std::array<int, 2> axis_indices(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(std::array<int, 2> idx) const;
  // Coordinates of a flat node; unused trailing entries are zero.
  [[nodiscard]] std::array<double, 2> point(std::size_t flat) const;
  // Euclidean |x| at a flat node.
  [[nodiscard]] double radius(std::size_t flat) const;
  // True when the node sits on the outer face of the box.
  [[nodiscard]] bool on_boundary(std::size_t flat) const;

  [[nodiscard]] Grid conjugate() const;

  // Same N and d, extents equal to 1e-12 relative.
  [[nodiscard]] bool matches(const Grid& other) const;

  friend Grid make_grid(int n, double extent, int dim);

 private:
  Grid(int n, double extent, int dim) : n_(n), extent_(extent), dim_(dim) {}

  int n_;
  double extent_;
  int dim_;
};

// N must be a power of two >= 8, L > 0, d in {1, 2}.
Grid make_grid(int n, double extent, int dim = 1);

// Complex samples of a function at the nodes of a grid, row-major over axes.
// Values are validated finite at construction and never change afterwards.
class SampledFunction {
 public:
  SampledFunction(Grid grid, std::vector<Complex> values);

  static SampledFunction zeros(const Grid& grid);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const Complex> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const Complex& operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] double max_abs() const;
  // max |f| over boundary nodes divided by max |f|; 0 for the zero function.
  [[nodiscard]] double boundary_ratio() const;
  [[nodiscard]] bool is_zero() const;

  [[nodiscard]] Eigen::VectorXcd to_vector() const;
  static SampledFunction from_vector(const Grid& grid, const Eigen::VectorXcd& v);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

SampledFunction operator*(Complex c, const SampledFunction& f);
SampledFunction operator+(const SampledFunction& f, const SampledFunction& g);
SampledFunction operator-(const SampledFunction& f, const SampledFunction& g);
// Pointwise product.
SampledFunction pointwise(const SampledFunction& f, const SampledFunction& g);

// (f, g) = Σ f conj(g) h^d
Complex inner(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);

/*
 * value(t) = exp(-t·(A + iB)t + c·t + γ)
 * A symmetric positive-definite, B symmetric, both d×d.
 */
struct GaussianSpec {
  Eigen::MatrixXd quad_real;
  Eigen::MatrixXd quad_imag;
  Eigen::VectorXcd linear;
  Complex log_amplitude{0.0, 0.0};

  // exp(-a|t|^2 + γ) with no chirp and no linear term.
  static GaussianSpec isotropic(int dim, double a, Complex log_amplitude = 0.0);

  [[nodiscard]] Complex evaluate(std::span<const double> t) const;
  void validate() const;
};

// Throws DomainError("grid too small for this Gaussian") when the boundary
// magnitude exceeds 1e-12 of the maximum.
SampledFunction sample_gaussian(const GaussianSpec& spec, const Grid& grid);

using PointRule = std::function<Complex(std::span<const double>)>;
SampledFunction sample_closure(const PointRule& rule, const Grid& grid);

struct RandomFunctionSpec {
  std::uint64_t seed = 0;
  double band_fraction = 0.1;  // ρ in (0, 0.5]
  double envelope_width = 2.0;  // σ > 0
};

// Band-limited complex Gaussian noise shaped by exp(-π|x|²/σ²), unit L² norm.
// Deterministic in (seed, grid).
SampledFunction random_smooth(const RandomFunctionSpec& spec, const Grid& grid);

// CSV with header x[,y],re,im
std::string to_csv(const SampledFunction& f);
nlohmann::json to_json(const SampledFunction& f);
SampledFunction sampled_function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Grid& grid);

}  // namespace tfuncert
