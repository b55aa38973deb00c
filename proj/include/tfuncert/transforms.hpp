#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tfuncert/sampling.hpp"

namespace tfuncert {

// Relative boundary magnitude above which circular shifts would alias.
inline constexpr double kAliasingGuard = 1e-10;

/*
 * Continuous-convention Fourier transform f̂(ω) = ∫ f(x) e^{-2πi x·ω} dx.
 *
 * For x_j = -L/2 + jh and ω_k = -N/(2L) + k/L the kernel factors as
 * e^{-2πi x_j ω_k} = (-1)^{j+k} e^{-2πi jk/N} (N/4 is an integer), so the
 * transform is a DFT between two checkerboard sign flips scaled by h^d.
 * The result lives on f.grid().conjugate() and is exactly unitary.
 */
SampledFunction fourier(const SampledFunction& f);
SampledFunction inverse_fourier(const SampledFunction& spectrum);

// (f ⋆ g)(x) = ∫ f(x - y) g(y) dy via a DFT product. Both inputs must decay
// below kAliasingGuard at the boundary ("aliasing risk" otherwise).
SampledFunction convolve(const SampledFunction& f, const SampledFunction& g);
// Same integral as a direct node sum, O(N^{2d}), with terms whose argument
// leaves the box dropped. No transform round-off enters, so non-negative
// inputs give a non-negative result whose relative accuracy holds in the tails.
SampledFunction convolve_direct(const SampledFunction& f, const SampledFunction& g);

// Field on (x-node, ω-node) pairs: rows follow the spatial grid, columns the
// conjugate frequency grid. Integrals over phase space carry the weight
// h^d · (1/L)^d per cell.
class PhaseSpaceFunction {
 public:
  PhaseSpaceFunction(Grid grid, std::vector<Complex> values);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] Grid freq_grid() const { return grid_.conjugate(); }
  [[nodiscard]] std::size_t rows() const { return grid_.size(); }
  [[nodiscard]] std::size_t cols() const { return grid_.size(); }
  [[nodiscard]] double cell_weight() const;

  [[nodiscard]] const Complex& at(std::size_t xi, std::size_t wi) const {
    return values_[xi * cols() + wi];
  }
  [[nodiscard]] std::span<const Complex> row(std::size_t xi) const {
    return {values_.data() + xi * cols(), cols()};
  }
  [[nodiscard]] std::span<const Complex> values() const { return values_; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

// CSV with header x,omega,re,im (d = 1) or x,y,omega_x,omega_y,re,im (d = 2).
std::string to_csv(const PhaseSpaceFunction& F);
nlohmann::json to_json(const PhaseSpaceFunction& F);

// Receives one phase-space row (fixed x-node, all ω-nodes) at a time.
using RowVisitor = std::function<void(std::size_t xi, std::span<const Complex> row)>;
// Receives `count` consecutive rows starting at `first`, stored back to back.
using BlockVisitor =
    std::function<void(std::size_t first, std::size_t count, std::span<const Complex> block)>;

/*
 * V_g f(x_j, ω_k) = Σ_t f(t) conj(g(t - x_j)) e^{-2πi t·ω_k} h^d
 *
 * Window translation is an on-grid circular shift; the aliasing guard turns
 * wrap-around into a DomainError. The streaming form visits rows in
 * ascending x order and never holds the whole field, which keeps d = 2 at
 * N = 128 within memory.
 */
PhaseSpaceFunction stft(const SampledFunction& f, const SampledFunction& g);
void for_each_stft_row(const SampledFunction& f, const SampledFunction& g, const RowVisitor& visit);
// Rows inside a block are computed in parallel; blocks arrive in ascending order.
void for_each_stft_block(const SampledFunction& f, const SampledFunction& g,
                         const BlockVisitor& visit);

// A(f,g)(x, ω) = e^{-iπ ω·x} V_g f(-x, ω)
PhaseSpaceFunction ambiguity(const SampledFunction& f, const SampledFunction& g);
void for_each_ambiguity_row(const SampledFunction& f, const SampledFunction& g,
                            const RowVisitor& visit);
void for_each_ambiguity_block(const SampledFunction& f, const SampledFunction& g,
                              const BlockVisitor& visit);

// Direct evaluation of A(f,g)(x_j, ·) = Σ_t f(t - x_j/2) conj(g(t + x_j/2)) e^{-2πi ω t} h
// for d = 1. Only lags whose half lands on a node are accepted (j even).
std::vector<Complex> ambiguity_direct_row(const SampledFunction& f, const SampledFunction& g,
                                          int lag_index);

// Adjoint of f ↦ V_g f with respect to the phase-space cell weight and the
// h^d-weighted inner product on functions:
//   Re Σ K conj(V_g u) h^d (1/L)^d = Re (stft_adjoint(K, g), u).
SampledFunction stft_adjoint(const PhaseSpaceFunction& K, const SampledFunction& g);

// Guard shared by all shift-based transforms.
void require_decay(const SampledFunction& f, const std::string& what);

}  // namespace tfuncert
