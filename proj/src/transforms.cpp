#include "tfuncert/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "tfuncert/errors.hpp"
#include "tfuncert/parallel.hpp"

namespace tfuncert {
namespace {

using detail::checkerboard_inplace;
using detail::dft_inplace;

void transform_inplace(std::span<Complex> data, const Grid& grid, bool forward) {
  const int n = grid.points_per_axis();
  const int d = grid.dim();
  checkerboard_inplace(data, n, d);
  dft_inplace(data, n, d, forward);
  checkerboard_inplace(data, n, d);
  // Both directions scale by the node volume of the input grid: h^d forward,
  // (1/L)^d when the input is a spectrum on the conjugate grid.
  const double scale = grid.cell_volume();
  for (auto& v : data) v *= scale;
}

// Index of g(t_i - x_j) on the periodic grid along one axis.
inline int shifted(int i, int j, int n) { return (i - j + n / 2 + n) % n; }

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!f.grid().matches(g.grid())) throw DomainError("functions live on different grids");
}

// conj(g(t - x_j)) for all t, with x_j the flat node xi.
void conj_shifted_window(const SampledFunction& g, std::size_t xi, std::span<Complex> out) {
  const Grid& grid = g.grid();
  const int n = grid.points_per_axis();
  if (grid.dim() == 1) {
    const int j = static_cast<int>(xi);
    for (int i = 0; i < n; ++i) out[i] = std::conj(g[shifted(i, j, n)]);
    return;
  }
  auto jj = grid.axis_indices(xi);
  for (int i1 = 0; i1 < n; ++i1) {
    const int s1 = shifted(i1, jj[0], n);
    for (int i2 = 0; i2 < n; ++i2) {
      out[static_cast<std::size_t>(i1) * n + i2] =
          std::conj(g[static_cast<std::size_t>(s1) * n + shifted(i2, jj[1], n)]);
    }
  }
}

// Row of V_g f at x-node xi, written into `row` (length N^d).
void stft_row(const SampledFunction& f, const SampledFunction& g, std::size_t xi,
              std::span<Complex> row) {
  conj_shifted_window(g, xi, row);
  for (std::size_t i = 0; i < row.size(); ++i) row[i] *= f[i];
  transform_inplace(row, f.grid(), true);
}

std::size_t negated_index(const Grid& grid, std::size_t xi) {
  const int n = grid.points_per_axis();
  auto jj = grid.axis_indices(xi);
  return grid.flat_index({(n - jj[0]) % n, grid.dim() == 2 ? (n - jj[1]) % n : 0});
}

// e^{-iπ ω·x} for the x-node xi across all ω-nodes, applied to `row`.
void apply_ambiguity_phase(const Grid& grid, std::size_t xi, std::span<Complex> row) {
  const Grid freq = grid.conjugate();
  auto x = grid.point(xi);
  for (std::size_t k = 0; k < row.size(); ++k) {
    auto w = freq.point(k);
    row[k] *= std::polar(1.0, -std::numbers::pi * (w[0] * x[0] + w[1] * x[1]));
  }
}

void require_stft_inputs(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  if (g.is_zero()) throw DomainError("STFT window must be nonzero");
  require_decay(f, "signal");
  require_decay(g, "window");
}

// Computes rows in parallel batches and hands each batch over in order, so the
// consumer sees a deterministic sequence while the FFT work is spread out.
void visit_blocks(std::size_t rows, const BlockVisitor& visit,
                  const std::function<void(std::size_t, std::span<Complex>)>& compute) {
  const std::size_t width = rows;  // phase space is square: N^d by N^d
  const std::size_t batch = std::clamp<std::size_t>(worker_count() * 8, 1, rows);
  std::vector<Complex> block(batch * width);
  for (std::size_t first = 0; first < rows; first += batch) {
    const std::size_t count = std::min(batch, rows - first);
    parallel_for(count, [&](std::size_t i) {
      compute(first + i, std::span<Complex>(block.data() + i * width, width));
    });
    visit(first, count, std::span<const Complex>(block.data(), count * width));
  }
}

BlockVisitor rows_of(std::size_t width, const RowVisitor& visit) {
  return [width, &visit](std::size_t first, std::size_t count, std::span<const Complex> block) {
    for (std::size_t i = 0; i < count; ++i) visit(first + i, block.subspan(i * width, width));
  };
}

}  // namespace

void require_decay(const SampledFunction& f, const std::string& what) {
  if (f.boundary_ratio() > kAliasingGuard) {
    throw DomainError("aliasing risk: " + what + " does not decay at the grid boundary");
  }
}

SampledFunction fourier(const SampledFunction& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  transform_inplace(data, f.grid(), true);
  return {f.grid().conjugate(), std::move(data)};
}

SampledFunction inverse_fourier(const SampledFunction& spectrum) {
  std::vector<Complex> data(spectrum.values().begin(), spectrum.values().end());
  transform_inplace(data, spectrum.grid(), false);
  return {spectrum.grid().conjugate(), std::move(data)};
}

SampledFunction convolve(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  require_decay(f, "first convolution factor");
  require_decay(g, "second convolution factor");
  // (f ⋆ g)^ = f̂ ĝ holds exactly for the continuous transform; on the
  // periodic grid it is the circular convolution, which equals the linear one
  // once both factors have decayed.
  SampledFunction product = pointwise(fourier(f), fourier(g));
  return inverse_fourier(product);
}

SampledFunction convolve_direct(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  const int n = grid.points_per_axis();
  const int half = n / 2;
  const std::size_t size = grid.size();
  const double cell = grid.cell_volume();
  std::vector<Complex> out(size);
  // x_i - y_j sits on node i - j + N/2 along each axis.
  parallel_for(size, [&](std::size_t i) {
    const auto xi = grid.axis_indices(i);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      const auto yj = grid.axis_indices(j);
      std::array<int, 2> k{0, 0};
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a) {
        k[a] = xi[a] - yj[a] + half;
        inside = inside && k[a] >= 0 && k[a] < n;
      }
      if (inside) acc += f[grid.flat_index(k)] * g[j];
    }
    out[i] = acc * cell;
  });
  return {grid, std::move(out)};
}

// ---------------------------------------------------------------------------
// PhaseSpaceFunction

PhaseSpaceFunction::PhaseSpaceFunction(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size() * grid_.size()) {
    throw DomainError("phase-space sample count does not match grid");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("non-finite phase-space value");
    }
  }
}

double PhaseSpaceFunction::cell_weight() const {
  return grid_.cell_volume() * std::pow(grid_.freq_spacing(), grid_.dim());
}

std::string to_csv(const PhaseSpaceFunction& F) {
  std::ostringstream os;
  os.precision(17);
  const Grid& g = F.grid();
  const Grid w = F.freq_grid();
  os << (g.dim() == 1 ? "x,omega,re,im\n" : "x,y,omega_x,omega_y,re,im\n");
  for (std::size_t xi = 0; xi < F.rows(); ++xi) {
    auto x = g.point(xi);
    for (std::size_t wi = 0; wi < F.cols(); ++wi) {
      auto o = w.point(wi);
      const Complex& v = F.at(xi, wi);
      if (g.dim() == 1) {
        os << x[0] << ',' << o[0] << ',';
      } else {
        os << x[0] << ',' << x[1] << ',' << o[0] << ',' << o[1] << ',';
      }
      os << v.real() << ',' << v.imag() << '\n';
    }
  }
  return os.str();
}

nlohmann::json to_json(const PhaseSpaceFunction& F) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t xi = 0; xi < F.rows(); ++xi) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& v : F.row(xi)) row.push_back({v.real(), v.imag()});
    rows.push_back(std::move(row));
  }
  return {{"grid", to_json(F.grid())}, {"layout", "rows=x,cols=omega"}, {"values", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// STFT and ambiguity

PhaseSpaceFunction stft(const SampledFunction& f, const SampledFunction& g) {
  require_stft_inputs(f, g);
  const std::size_t m = f.size();
  std::vector<Complex> values(m * m);
  parallel_for(m, [&](std::size_t xi) {
    stft_row(f, g, xi, std::span<Complex>(values.data() + xi * m, m));
  });
  return {f.grid(), std::move(values)};
}

void for_each_stft_block(const SampledFunction& f, const SampledFunction& g,
                         const BlockVisitor& visit) {
  require_stft_inputs(f, g);
  visit_blocks(f.size(), visit, [&](std::size_t xi, std::span<Complex> row) {
    stft_row(f, g, xi, row);
  });
}

void for_each_stft_row(const SampledFunction& f, const SampledFunction& g, const RowVisitor& visit) {
  for_each_stft_block(f, g, rows_of(f.size(), visit));
}

PhaseSpaceFunction ambiguity(const SampledFunction& f, const SampledFunction& g) {
  PhaseSpaceFunction V = stft(f, g);
  const Grid& grid = f.grid();
  const std::size_t m = f.size();
  std::vector<Complex> values(m * m);
  parallel_for(m, [&](std::size_t xi) {
    auto src = V.row(negated_index(grid, xi));
    std::span<Complex> dst(values.data() + xi * m, m);
    std::copy(src.begin(), src.end(), dst.begin());
    apply_ambiguity_phase(grid, xi, dst);
  });
  return {grid, std::move(values)};
}

void for_each_ambiguity_block(const SampledFunction& f, const SampledFunction& g,
                              const BlockVisitor& visit) {
  require_stft_inputs(f, g);
  const Grid& grid = f.grid();
  visit_blocks(f.size(), visit, [&](std::size_t xi, std::span<Complex> row) {
    stft_row(f, g, negated_index(grid, xi), row);
    apply_ambiguity_phase(grid, xi, row);
  });
}

void for_each_ambiguity_row(const SampledFunction& f, const SampledFunction& g,
                            const RowVisitor& visit) {
  for_each_ambiguity_block(f, g, rows_of(f.size(), visit));
}

std::vector<Complex> ambiguity_direct_row(const SampledFunction& f, const SampledFunction& g,
                                          int lag_index) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  if (grid.dim() != 1) throw DomainError("direct ambiguity evaluation is implemented for d = 1");
  const int n = grid.points_per_axis();
  if (lag_index < 0 || lag_index >= n || lag_index % 2 != 0) {
    throw DomainError("direct ambiguity needs an even lag index in [0, N)");
  }
  require_decay(f, "signal");
  require_decay(g, "window");
  // x_j = (j - N/2) h, so x_j / 2 is an on-grid shift of (j - N/2)/2 nodes.
  const int half = (lag_index - n / 2) / 2;
  std::vector<Complex> row(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int minus = ((i - half) % n + n) % n;
    const int plus = ((i + half) % n + n) % n;
    row[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(minus)] *
                                       std::conj(g[static_cast<std::size_t>(plus)]);
  }
  transform_inplace(row, grid, true);
  return row;
}

SampledFunction stft_adjoint(const PhaseSpaceFunction& K, const SampledFunction& g) {
  const Grid& grid = K.grid();
  if (!grid.matches(g.grid())) throw DomainError("window grid does not match phase-space grid");
  const std::size_t m = grid.size();
  const Grid freq = grid.conjugate();
  const double h = grid.cell_volume();
  std::vector<Complex> acc(m);
  std::vector<Complex> row(m);
  std::vector<Complex> window(m);
  for (std::size_t xi = 0; xi < m; ++xi) {
    auto src = K.row(xi);
    std::copy(src.begin(), src.end(), row.begin());
    // Σ_ω K(x, ω) e^{2πi t·ω} (1/L)^d, i.e. the inverse transform of the row.
    transform_inplace(row, freq, false);
    conj_shifted_window(g, xi, window);
    for (std::size_t t = 0; t < m; ++t) acc[t] += std::conj(window[t]) * row[t] * h;
  }
  return {grid, std::move(acc)};
}

}  // namespace tfuncert
