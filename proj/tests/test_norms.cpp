#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfuncert/errors.hpp"
#include "tfuncert/norms.hpp"

using namespace tfuncert;
using std::numbers::pi;

namespace {

Grid desk() { return make_grid(512, 12.0); }

SampledFunction ground_state(const Grid& g) { return default_window(g); }

SampledFunction gauss(const Grid& g) { return sample_gaussian(GaussianSpec::isotropic(1, pi), g); }

// A phase-space field built from a rule on (x, ω).
PhaseSpaceFunction field(const Grid& g, const std::function<Complex(double, double)>& rule) {
  const Grid w = g.conjugate();
  std::vector<Complex> v(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      v[i * g.size() + k] = rule(g.node(static_cast<int>(i)), w.node(static_cast<int>(k)));
    }
  }
  return {g, std::move(v)};
}

}  // namespace

TEST_CASE("weighted Lebesgue norms") {
  SUBCASE("unit mass indicator") {
    Grid g = make_grid(64, 8.0);
    auto ind = sample_closure(
        [](std::span<const double> x) { return Complex(x[0] >= 0 && x[0] < 1 ? 1.0 : 0.0); }, g);
    CHECK(lp_weighted(ind, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  Grid g = desk();
  auto f = gauss(g);
  CHECK(std::abs(lp_weighted(f, 2.0) - std::pow(2.0, -0.25)) < 1e-14);
  CHECK(lp_weighted(f, Exponent::infinity()) == 1.0);
  SUBCASE("bracket weight against a direct sum") {
    double acc = 0.0;
    for (int j = 0; j < 512; ++j) {
      const double x = g.node(j);
      acc += std::pow(std::exp(-pi * x * x) * (1 + std::abs(x)), 1.5) * g.spacing();
    }
    CHECK(lp_weighted(f, 1.5, 1.0) == doctest::Approx(std::pow(acc, 1 / 1.5)).epsilon(1e-13));
    double sup = 0.0;
    for (int j = 0; j < 512; ++j) {
      const double x = g.node(j);
      sup = std::max(sup, std::exp(-pi * x * x) * (1 + std::abs(x)) * (1 + std::abs(x)));
    }
    CHECK(lp_weighted(f, Exponent::infinity(), 2.0) == doctest::Approx(sup).epsilon(1e-15));
  }
  SUBCASE("quasi-norm exponent") {
    // ∫ e^{-πx²/2} dx = √2
    CHECK(lp_weighted(f, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("homogeneity") {
    auto r = random_smooth({4, 0.1, 2.0}, g);
    for (Complex c : {Complex(2.0), Complex(-0.5), Complex(0, 1), Complex(0.3, -1.7)}) {
      for (double p : {0.7, 1.0, 1.5, 2.0, 3.0}) {
        CHECK(lp_weighted(c * r, p, 0.5) ==
              doctest::Approx(std::abs(c) * lp_weighted(r, p, 0.5)).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(lp_weighted(f, 2.0, -1.0), DomainError);
}

TEST_CASE("Fourier-weighted norms") {
  Grid g = desk();
  CHECK(std::abs(fourier_weighted(gauss(g), 2.0) - std::pow(2.0, -0.25)) < 1e-14);
  CHECK(fourier_weighted(SampledFunction::zeros(g), 2.0) == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random_smooth({seed, 0.1, 2.0}, g);
    CHECK(std::abs(fourier_weighted(f, 2.0) - lp_weighted(f, 2.0)) < 1e-12);
  }
}

TEST_CASE("moment seminorms") {
  Grid g = desk();
  auto f0 = ground_state(g);
  const double expected = std::sqrt(1 / (4 * pi));
  CHECK(std::abs(moment_seminorm(f0, 2.0, 1.0, Side::time) - expected) < 1e-14);
  CHECK(std::abs(moment_seminorm(f0, 2.0, 1.0, Side::frequency) - expected) < 1e-14);
  CHECK(moment_seminorm(SampledFunction::zeros(g), 2.0, 1.0, Side::time) == 0.0);
  CHECK_THROWS_AS(moment_seminorm(f0, 2.0, 0.0, Side::time), DomainError);
}

TEST_CASE("mixed norms") {
  SUBCASE("unit phase-space square") {
    Grid g = make_grid(64, 8.0);
    auto box = field(g, [](double x, double w) {
      return Complex(x >= 0 && x < 1 && w >= 0 && w < 1 ? 1.0 : 0.0);
    });
    for (double r : {0.5, 1.0, 1.5, 2.0, 4.0}) {
      for (double s : {0.5, 1.0, 2.0, 3.0}) {
        for (auto order : {IntegrationOrder::x_inner, IntegrationOrder::omega_inner}) {
          CHECK(mixed_norm(box, {r, s, order}) == doctest::Approx(1.0).epsilon(1e-14));
        }
      }
    }
    CHECK(mixed_norm(box, {Exponent::infinity(), 2.0}) == doctest::Approx(1.0));
    CHECK(mixed_norm(box, {2.0, Exponent::infinity()}) == doctest::Approx(1.0));
  }
  SUBCASE("STFT of the normalized Gaussian") {
    Grid g = desk();
    auto f0 = ground_state(g);
    CHECK(std::abs(mixed_norm(stft(f0, f0), {2.0, 2.0}) - 1.0) < 1e-12);
  }
  SUBCASE("order swap on a symmetric field") {
    Grid g = make_grid(64, 8.0);  // square phase space: x and ω grids coincide
    auto F = field(g, [](double x, double w) {
      return Complex(std::exp(-pi * (x * x + w * w)) * (1 + x * w), 0.3 * x * w);
    });
    for (auto [r, s] : {std::pair{1.5, 3.0}, {0.8, 2.0}, {2.0, 1.0}}) {
      CHECK(mixed_norm(F, {r, s, IntegrationOrder::x_inner}) ==
            doctest::Approx(mixed_norm(F, {r, s, IntegrationOrder::omega_inner})).epsilon(1e-13));
    }
  }
  SUBCASE("equal exponents flatten") {
    Grid g = make_grid(128, 10.0);
    auto F = stft(random_smooth({1, 0.2, 1.5}, g), random_smooth({2, 0.2, 1.5}, g));
    for (double r : {1.0, 1.5, 3.0}) {
      double acc = 0.0;
      for (const auto& v : F.values()) acc += std::pow(std::abs(v), r);
      const double flat = std::pow(acc * F.cell_weight(), 1 / r);
      for (auto order : {IntegrationOrder::x_inner, IntegrationOrder::omega_inner}) {
        CHECK(mixed_norm(F, {r, r, order}) == doctest::Approx(flat).epsilon(1e-12));
      }
    }
  }
  SUBCASE("iterated sums against a direct evaluation") {
    Grid g = make_grid(32, 8.0);
    auto F = stft(random_smooth({3, 0.3, 1.0}, g), default_window(g));
    const double r = 1.3, s = 2.7, alpha = 0.5, beta = 1.5;
    const Grid w = g.conjugate();
    double outer = 0.0;
    for (std::size_t k = 0; k < 32; ++k) {
      double inner = 0.0;
      for (std::size_t j = 0; j < 32; ++j) {
        const double wt = std::pow(1 + std::abs(g.node(static_cast<int>(j))), alpha) *
                          std::pow(1 + std::abs(w.node(static_cast<int>(k))), beta);
        inner += std::pow(wt * std::abs(F.at(j, k)), r) * g.spacing();
      }
      outer += std::pow(inner, s / r) * w.spacing();
    }
    CHECK(mixed_norm(F, {r, s}, WeightSpec(BracketWeight{alpha, beta})) ==
          doctest::Approx(std::pow(outer, 1 / s)).epsilon(1e-13));

    std::vector<double> table(32 * 32);
    for (std::size_t j = 0; j < 32; ++j) {
      for (std::size_t k = 0; k < 32; ++k) {
        table[j * 32 + k] = std::pow(1 + std::abs(g.node(static_cast<int>(j))), alpha) *
                            std::pow(1 + std::abs(w.node(static_cast<int>(k))), beta);
      }
    }
    CHECK(mixed_norm(F, {r, s}, WeightSpec(TabulatedWeight{table})) ==
          doctest::Approx(std::pow(outer, 1 / s)).epsilon(1e-13));
  }
  SUBCASE("power weights") {
    Grid g = make_grid(32, 8.0);
    auto F = stft(default_window(g), default_window(g));
    const Grid w = g.conjugate();
    double acc_x = 0.0, acc_w = 0.0;
    for (std::size_t j = 0; j < 32; ++j) {
      for (std::size_t k = 0; k < 32; ++k) {
        const double m2 = std::norm(F.at(j, k));
        acc_x += m2 * std::pow(g.node(static_cast<int>(j)), 2) * F.cell_weight();
        acc_w += m2 * std::pow(w.node(static_cast<int>(k)), 2) * F.cell_weight();
      }
    }
    CHECK(mixed_norm(F, {2.0, 2.0}, WeightSpec(PowerXWeight{1.0})) ==
          doctest::Approx(std::sqrt(acc_x)).epsilon(1e-13));
    CHECK(mixed_norm(F, {2.0, 2.0}, WeightSpec(PowerOmegaWeight{1.0})) ==
          doctest::Approx(std::sqrt(acc_w)).epsilon(1e-13));
  }
  SUBCASE("incomplete stream") {
    Grid g = make_grid(8, 8.0);
    MixedNormAccumulator acc(g, {2.0, 2.0}, WeightSpec::unit());
    acc.add_row(0, std::vector<Complex>(8));
    CHECK_THROWS_AS((void)acc.value(), NumericalError);
    CHECK_THROWS_AS(acc.add_row(1, std::vector<Complex>(5)), DomainError);
  }
}

TEST_CASE("weight validation") {
  CHECK_THROWS_AS(WeightSpec(BracketWeight{-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(WeightSpec(PowerXWeight{-0.5}), DomainError);
  CHECK_THROWS_AS(WeightSpec(TabulatedWeight{{1.0, -2.0}}), DomainError);
  Grid g = make_grid(8, 8.0);
  std::vector<double> zeros(8, 0.0);
  CHECK_THROWS_AS(AdmissibleTriple(g, zeros, zeros, {0.0}), DomainError);
  CHECK_THROWS_AS(AdmissibleTriple(g, std::vector<double>(7), zeros, {1.0}), DomainError);
  CHECK_THROWS_AS(AdmissibleTriple(g, zeros, zeros, std::vector<double>(10, 1.0)), DomainError);
  AdmissibleTriple t(g, {-1, 0, 0, 0, 0, 0, 0, 0}, zeros, {1.0});
  CHECK(t.psi()[0] == 1.0);
  CHECK(t.composite(0, 0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("modulation norms") {
  Grid g = desk();
  auto win = ground_state(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random_smooth({seed, 0.1, 2.0}, g);
    CHECK(std::abs(modulation_norm(f, win, 2.0, 2.0) - l2_norm(f)) < 1e-8);
    CHECK(std::abs(modulation_norm_m(f, win, WeightSpec::unit()) - l2_norm(f)) < 1e-8);
  }
  auto f = random_smooth({77, 0.1, 2.0}, g);
  CHECK(modulation_norm(SampledFunction::zeros(g), win, 1.5, 2.0) == 0.0);
  CHECK(modulation_norm_m(SampledFunction::zeros(g), win, WeightSpec::unit()) == 0.0);
  CHECK(modulation_norm(f, win, 1.5, 1.2, 1.0, 1.0) >= modulation_norm(f, win, 1.5, 1.2));
  CHECK(modulation_norm_m(f, win, WeightSpec(BracketWeight{1.0, 0.5})) ==
        modulation_norm(f, win, 2.0, 2.0, 1.0, 0.5));
  CHECK_THROWS_AS(modulation_norm(f, SampledFunction::zeros(g), 2.0, 2.0), DomainError);
}

TEST_CASE("two-dimensional modulation norm") {
  Grid g = make_grid(32, 8.0, 2);
  auto f = random_smooth({8, 0.25, 1.2}, g);
  CHECK(std::abs(modulation_norm(f, default_window(g), 2.0, 2.0) - 1.0) < 1e-8);
}

TEST_CASE("psi-phi norm") {
  Grid g = desk();
  auto win = ground_state(g);
  std::vector<double> zeros(g.size(), 0.0);
  auto f = random_smooth({5, 0.1, 2.0}, g);
  SUBCASE("degenerate triple") {
    AdmissibleTriple t(g, zeros, zeros, {1.0});
    CHECK(std::abs(psi_phi_norm(f, win, t) - 1.0) < 1e-8);
  }
  SUBCASE("oscillator triple at the ground state") {
    auto t = AdmissibleTriple::oscillator(g);
    CHECK(std::abs(psi_phi_norm(win, win, t) - std::sqrt(1 + 1 / (2 * pi))) < 1e-12);
    CHECK(psi_phi_norm(SampledFunction::zeros(g), win, t) == 0.0);
  }
  SUBCASE("defining identity") {
    auto t = AdmissibleTriple::oscillator(g);
    auto terms = psi_phi_terms(f, win, t);
    const double m = modulation_norm_m(f, win, WeightSpec::unit());
    const double n = psi_phi_norm(f, win, t);
    CHECK(n * n - m * m == doctest::Approx(terms.psi_sq + terms.phi_sq).epsilon(1e-13));
  }
  SUBCASE("tabulated m0 agrees with the constant form") {
    Grid small = make_grid(64, 8.0);
    auto w = default_window(small);
    auto h = random_smooth({6, 0.2, 1.2}, small);
    auto c = AdmissibleTriple::oscillator(small);
    std::vector<double> ps(c.psi().begin(), c.psi().end()), ph(c.phi().begin(), c.phi().end());
    AdmissibleTriple tab(small, ps, ph, std::vector<double>(small.size() * small.size(), 1.0));
    CHECK(psi_phi_norm(h, w, tab) == doctest::Approx(psi_phi_norm(h, w, c)).epsilon(1e-14));
    auto rule = AdmissibleTriple::from_rules(
        small, [](std::span<const double> x) { return x[0]; },
        [](std::span<const double> w) { return w[0]; },
        [](std::span<const double>, std::span<const double>) { return 1.0; });
    CHECK(psi_phi_norm(h, w, rule) == doctest::Approx(psi_phi_norm(h, w, c)).epsilon(1e-14));
  }
}
