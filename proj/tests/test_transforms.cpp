#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfuncert/errors.hpp"
#include "tfuncert/sampling.hpp"
#include "tfuncert/transforms.hpp"

using namespace tfuncert;
using std::numbers::pi;

namespace {

Grid desk() { return make_grid(512, 12.0); }

SampledFunction ground_state(const Grid& g) {
  return sample_gaussian(GaussianSpec::isotropic(g.dim(), pi, 0.25 * g.dim() * std::numbers::ln2), g);
}

double sup_diff(const SampledFunction& a, const SampledFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double phase_l2(const PhaseSpaceFunction& F) {
  double acc = 0.0;
  for (const auto& v : F.values()) acc += std::norm(v);
  return std::sqrt(acc * F.cell_weight());
}

}  // namespace

TEST_CASE("Gaussian is a fixed point of the transform") {
  Grid g = desk();
  auto f = sample_gaussian(GaussianSpec::isotropic(1, pi), g);
  auto fh = fourier(f);
  CHECK(fh.grid().matches(g.conjugate()));
  auto expected = sample_gaussian(GaussianSpec::isotropic(1, pi), fh.grid());
  CHECK(sup_diff(fh, expected) < 1e-12);
}

TEST_CASE("transform of a shifted, modulated Gaussian") {
  // e^{-π(x-1)²} e^{2πi·2x}  ↦  e^{-π(ω-2)²} e^{-2πi(ω-2)}
  Grid g = desk();
  auto f = sample_closure(
      [](std::span<const double> x) {
        return std::exp(Complex(-pi * (x[0] - 1) * (x[0] - 1), 4 * pi * x[0]));
      },
      g);
  auto fh = fourier(f);
  const Grid w = fh.grid();
  double err = 0.0;
  for (int k = 0; k < 512; ++k) {
    const double om = w.node(k);
    Complex ex = std::exp(Complex(-pi * (om - 2) * (om - 2), -2 * pi * (om - 2)));
    err = std::max(err, std::abs(fh[static_cast<std::size_t>(k)] - ex));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("transform of zero") {
  Grid g = desk();
  CHECK(fourier(SampledFunction::zeros(g)).is_zero());
  CHECK(inverse_fourier(SampledFunction::zeros(g.conjugate())).is_zero());
}

TEST_CASE("unitarity on a random battery") {
  Grid g = desk();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_smooth({seed, 0.1, 2.0}, g);
    const double ratio = l2_norm(fourier(f)) / l2_norm(f);
    REQUIRE(std::abs(ratio - 1.0) <= 1e-12);
  }
}

TEST_CASE("inverse and double transform") {
  Grid g = desk();
  auto f = random_smooth({7, 0.1, 2.0}, g);
  CHECK(sup_diff(inverse_fourier(fourier(f)), f) < 1e-12);
  auto spectrum = fourier(f);
  CHECK(sup_diff(fourier(inverse_fourier(spectrum)), spectrum) < 1e-12);
  auto ff = fourier(fourier(f));
  CHECK(ff.grid().matches(g));
  double err = 0.0;
  for (std::size_t j = 0; j < 512; ++j) err = std::max(err, std::abs(ff[j] - f[(512 - j) % 512]));
  CHECK(err < 1e-12);
}

TEST_CASE("two-dimensional transform") {
  Grid g = make_grid(64, 10.0, 2);
  auto f = sample_gaussian(GaussianSpec::isotropic(2, pi), g);
  auto fh = fourier(f);
  CHECK(sup_diff(fh, sample_gaussian(GaussianSpec::isotropic(2, pi), fh.grid())) < 1e-12);
  auto r = random_smooth({3, 0.2, 2.0}, g);
  CHECK(std::abs(l2_norm(fourier(r)) - 1.0) < 1e-12);
  CHECK(sup_diff(inverse_fourier(fourier(r)), r) < 1e-12);
}

TEST_CASE("convolution") {
  Grid g = desk();
  auto gauss = sample_gaussian(GaussianSpec::isotropic(1, pi), g);
  SUBCASE("closed form") {
    auto c = convolve(gauss, gauss);
    auto expected = sample_gaussian(
        GaussianSpec::isotropic(1, pi / 2, -0.5 * std::numbers::ln2), g);
    CHECK(sup_diff(c, expected) < 1e-12);
  }
  SUBCASE("approximate identity") {
    const double eps = 0.04;
    auto spike = sample_gaussian(GaussianSpec::isotropic(1, pi / (eps * eps), -std::log(eps)), g);
    auto f = random_smooth({11, 0.05, 2.0}, g);
    CHECK(sup_diff(convolve(f, spike), f) < 1e-2 * f.max_abs());
  }
  SUBCASE("mass factorizes for non-negative factors") {
    auto h = sample_gaussian(GaussianSpec::isotropic(1, 3.0, 0.3), g);
    auto mass = [&](const SampledFunction& f) {
      double m = 0.0;
      for (const auto& v : f.values()) m += std::abs(v) * g.spacing();
      return m;
    };
    const double lhs = mass(convolve(gauss, h));
    CHECK(std::abs(lhs / (mass(gauss) * mass(h)) - 1.0) < 1e-10);
  }
  SUBCASE("aliasing guard") {
    auto wide = sample_closure(
        [](std::span<const double> x) { return Complex(std::exp(-0.1 * x[0] * x[0])); }, g);
    CHECK_THROWS_WITH_AS(convolve(wide, gauss), doctest::Contains("aliasing risk"), DomainError);
  }
  SUBCASE("grid mismatch") {
    auto other = sample_gaussian(GaussianSpec::isotropic(1, pi), make_grid(256, 12.0));
    CHECK_THROWS_AS(convolve(gauss, other), DomainError);
    CHECK_THROWS_AS(convolve_direct(gauss, other), DomainError);
  }
  SUBCASE("direct sum agrees with the transform route") {
    auto f = random_smooth({5, 0.1, 1.2}, g);
    auto h = random_smooth({6, 0.1, 1.2}, g);
    CHECK(sup_diff(convolve_direct(f, h), convolve(f, h)) < 1e-13);
    auto c = convolve_direct(gauss, gauss);
    for (const auto& v : c.values()) {
      REQUIRE(v.real() >= 0.0);
      REQUIRE(v.imag() == 0.0);
    }
    // Tails keep relative accuracy: exp(-πx²/2)/√2 at x = ±5.
    auto expected = sample_gaussian(
        GaussianSpec::isotropic(1, pi / 2, -0.5 * std::numbers::ln2), g);
    CHECK(std::abs(c[42].real() / expected[42].real() - 1.0) < 1e-12);
  }
  SUBCASE("direct sum in two dimensions") {
    Grid g2 = make_grid(16, 10.0, 2);
    auto a = sample_gaussian(GaussianSpec::isotropic(2, 2.0), g2);
    auto b = sample_gaussian(GaussianSpec::isotropic(2, 3.0), g2);
    CHECK(sup_diff(convolve_direct(a, b), convolve(a, b)) < 1e-13);
  }
}

TEST_CASE("STFT of matched Gaussians") {
  Grid g = desk();
  auto f = ground_state(g);
  auto V = stft(f, f);
  const Grid w = V.freq_grid();
  double err = 0.0;
  for (std::size_t xi = 0; xi < V.rows(); ++xi) {
    const double x = g.node(static_cast<int>(xi));
    for (std::size_t wi = 0; wi < V.cols(); ++wi) {
      const double om = w.node(static_cast<int>(wi));
      err = std::max(err, std::abs(std::abs(V.at(xi, wi)) - std::exp(-pi * (x * x + om * om) / 2)));
    }
  }
  CHECK(err < 1e-8);

  // Direct quadrature with the window evaluated off the grid, at a few points.
  for (auto [xi, wi] : {std::pair{256, 256}, {300, 200}, {190, 330}, {256, 301}}) {
    const double x = g.node(xi);
    const double om = w.node(wi);
    Complex acc = 0.0;
    for (int t = 0; t < 512; ++t) {
      const double tt = g.node(t);
      const double window = std::pow(2.0, 0.25) * std::exp(-pi * (tt - x) * (tt - x));
      acc += f[static_cast<std::size_t>(t)] * window * std::polar(1.0, -2 * pi * tt * om) * g.spacing();
    }
    CHECK(std::abs(V.at(static_cast<std::size_t>(xi), static_cast<std::size_t>(wi)) - acc) < 1e-12);
  }
}

TEST_CASE("STFT edge cases") {
  Grid g = desk();
  auto win = ground_state(g);
  auto zero = stft(SampledFunction::zeros(g), win);
  for (const auto& v : zero.values()) REQUIRE(v == 0.0);
  CHECK_THROWS_WITH_AS(stft(win, SampledFunction::zeros(g)), doctest::Contains("nonzero"),
                       DomainError);
  auto wide = sample_closure([](std::span<const double>) { return Complex(1.0); }, g);
  CHECK_THROWS_WITH_AS(stft(wide, win), doctest::Contains("aliasing risk"), DomainError);
}

TEST_CASE("Moyal identity") {
  Grid g = desk();
  auto win = ground_state(g);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto f = random_smooth({seed, 0.1, 2.0}, g);
    auto h = random_smooth({seed + 100, 0.1, 1.5}, g);
    const double lhs = phase_l2(stft(f, h));
    CHECK(std::abs(lhs / (l2_norm(f) * l2_norm(h)) - 1.0) < 1e-8);
    CHECK(std::abs(phase_l2(stft(f, win)) - 1.0) < 1e-8);
  }
}

TEST_CASE("Moyal identity in two dimensions") {
  Grid g = make_grid(32, 8.0, 2);
  auto win = ground_state(g);
  auto f = random_smooth({5, 0.25, 1.2}, g);
  CHECK(std::abs(phase_l2(stft(f, win)) - 1.0) < 1e-8);
}

TEST_CASE("STFT covariance under grid translation") {
  Grid g = desk();
  auto win = ground_state(g);
  auto f = random_smooth({9, 0.1, 1.5}, g);
  const int shift = 40;
  std::vector<Complex> moved(512);
  for (int i = 0; i < 512; ++i) moved[static_cast<std::size_t>(i)] = i >= shift ? f[static_cast<std::size_t>(i - shift)] : 0.0;
  SampledFunction tf(g, moved);
  auto V = stft(f, win);
  auto Vt = stft(tf, win);
  const double x0 = shift * g.spacing();
  const Grid w = V.freq_grid();
  double err = 0.0;
  for (std::size_t xi = shift; xi < 512; ++xi) {
    for (std::size_t wi = 0; wi < 512; ++wi) {
      Complex ex = std::polar(1.0, -2 * pi * x0 * w.node(static_cast<int>(wi))) * V.at(xi - shift, wi);
      err = std::max(err, std::abs(Vt.at(xi, wi) - ex));
    }
  }
  CHECK(err < 1e-8);
}

TEST_CASE("ambiguity function") {
  Grid g = desk();
  auto f = random_smooth({21, 0.1, 1.5}, g);
  auto h = random_smooth({22, 0.1, 1.5}, g);
  auto A = ambiguity(f, h);
  auto V = stft(f, h);
  SUBCASE("modulus is the reflected STFT") {
    double err = 0.0;
    for (std::size_t xi = 0; xi < 512; ++xi) {
      for (std::size_t wi = 0; wi < 512; ++wi) {
        err = std::max(err, std::abs(std::abs(A.at(xi, wi)) - std::abs(V.at((512 - xi) % 512, wi))));
      }
    }
    CHECK(err < 1e-15);
  }
  SUBCASE("matched Gaussians at the origin") {
    auto f0 = ground_state(g);
    auto A0 = ambiguity(f0, f0);
    CHECK(std::abs(A0.at(256, 256) - Complex(1.0)) < 1e-12);
  }
  SUBCASE("symplectic symmetry") {
    auto B = ambiguity(fourier(f), fourier(h));
    double err = 0.0;
    for (std::size_t j = 0; j < 512; ++j) {
      for (std::size_t k = 0; k < 512; ++k) {
        err = std::max(err, std::abs(A.at(j, k) - B.at((512 - k) % 512, j)));
      }
    }
    CHECK(err < 1e-8);
  }
  SUBCASE("direct evaluation at even lags") {
    double err = 0.0;
    for (int lag : {256, 200, 310, 100, 412}) {
      auto row = ambiguity_direct_row(f, h, lag);
      for (std::size_t k = 0; k < 512; ++k) {
        err = std::max(err, std::abs(row[k] - A.at(static_cast<std::size_t>(lag), k)));
      }
    }
    CHECK(err < 1e-12);
    CHECK_THROWS_AS(ambiguity_direct_row(f, h, 201), DomainError);
  }
  SUBCASE("streaming rows reproduce the stored field") {
    double err = 0.0;
    for_each_ambiguity_row(f, h, [&](std::size_t xi, std::span<const Complex> row) {
      for (std::size_t k = 0; k < row.size(); ++k) err = std::max(err, std::abs(row[k] - A.at(xi, k)));
    });
    CHECK(err == 0.0);
    std::size_t seen = 0;
    for_each_stft_row(f, h, [&](std::size_t xi, std::span<const Complex> row) {
      CHECK(xi == seen++);
      for (std::size_t k = 0; k < row.size(); ++k) err = std::max(err, std::abs(row[k] - V.at(xi, k)));
    });
    CHECK(err == 0.0);
    CHECK(seen == 512);
  }
}

TEST_CASE("STFT adjoint") {
  Grid g = make_grid(128, 10.0);
  auto win = ground_state(g);
  auto u = random_smooth({31, 0.2, 1.5}, g);
  auto seed_field = stft(random_smooth({32, 0.2, 1.5}, g), random_smooth({33, 0.2, 1.0}, g));
  auto adj = stft_adjoint(seed_field, win);
  auto Vu = stft(u, win);
  Complex lhs = 0.0;
  for (std::size_t i = 0; i < Vu.values().size(); ++i) {
    lhs += seed_field.values()[i] * std::conj(Vu.values()[i]);
  }
  lhs *= Vu.cell_weight();
  const Complex rhs = inner(adj, u);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("phase-space serialization") {
  auto win = ground_state(make_grid(8, 8.0));
  auto V = stft(win, win);
  const std::string csv = to_csv(V);
  CHECK(csv.rfind("x,omega,re,im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  auto j = to_json(V);
  CHECK(j["values"].size() == 8);
  CHECK(j["values"][0].size() == 8);
}
