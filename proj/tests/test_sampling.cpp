#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfuncert/errors.hpp"
#include "tfuncert/sampling.hpp"

using namespace tfuncert;
using std::numbers::pi;

TEST_CASE("grid spacing and node layout") {
  Grid g = make_grid(8, 8.0, 1);
  CHECK(g.spacing() == 1.0);
  CHECK(g.freq_spacing() == 0.125);
  for (int j = 0; j < 8; ++j) CHECK(g.node(j) == -4.0 + j);
  CHECK(g.node(4) == 0.0);

  Grid big = make_grid(512, 12.0, 1);
  CHECK(big.spacing() * 512 == 12.0);
  CHECK(big.freq(0) == doctest::Approx(-512.0 / 24.0));
  CHECK(big.freq(511) < 512.0 / 24.0);
  CHECK(big.node(256) == 0.0);
  CHECK(big.freq_spacing() * big.extent() == 1.0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(7, 8.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(4, 8.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(8, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(8, -1.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(8, 8.0, 3), DomainError);
}

TEST_CASE("two-dimensional grid indexing") {
  Grid g = make_grid(16, 4.0, 2);
  CHECK(g.size() == 256);
  CHECK(g.cell_volume() == doctest::Approx(0.0625));
  auto idx = g.axis_indices(g.flat_index({3, 7}));
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 7);
  CHECK(g.radius(g.flat_index({8, 8})) == 0.0);
  CHECK(g.on_boundary(g.flat_index({0, 5})));
  CHECK_FALSE(g.on_boundary(g.flat_index({1, 5})));
  CHECK(g.conjugate().conjugate().matches(g));
}

TEST_CASE("sampled function rejects bad samples") {
  Grid g = make_grid(8, 8.0);
  CHECK_THROWS_AS(SampledFunction(g, std::vector<Complex>(7)), DomainError);
  std::vector<Complex> bad(8);
  bad[3] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(SampledFunction(g, bad), DomainError);
}

TEST_CASE("Gaussian sampling") {
  Grid g = make_grid(512, 12.0);
  SUBCASE("normalized ground state") {
    auto f0 = sample_gaussian(GaussianSpec::isotropic(1, pi, 0.25 * std::numbers::ln2), g);
    CHECK(f0[256].real() == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(l2_norm(f0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("real positive without chirp") {
    auto f = sample_gaussian(GaussianSpec::isotropic(1, pi), g);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(f[i].imag() == 0.0);
      CHECK(f[i].real() > 0.0);
    }
  }
  SUBCASE("chirp has unit modulus") {
    auto spec = GaussianSpec::isotropic(1, pi);
    spec.quad_imag(0, 0) = 1.0;
    auto f = sample_gaussian(spec, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = g.node(static_cast<int>(i));
      worst = std::max(worst, std::abs(std::abs(f[i]) - std::exp(-pi * x * x)));
    }
    CHECK(worst < 1e-15);
  }
  SUBCASE("undersized grid") {
    CHECK_THROWS_WITH_AS(sample_gaussian(GaussianSpec::isotropic(1, 0.01), g),
                         "grid too small for this Gaussian", DomainError);
  }
  SUBCASE("invalid quadratic part") {
    auto spec = GaussianSpec::isotropic(1, -1.0);
    CHECK_THROWS_AS(sample_gaussian(spec, g), DomainError);
    auto mismatched = GaussianSpec::isotropic(2, pi);
    CHECK_THROWS_AS(sample_gaussian(mismatched, g), DomainError);
  }
}

TEST_CASE("anisotropic two-dimensional Gaussian") {
  Grid g = make_grid(64, 10.0, 2);
  GaussianSpec spec = GaussianSpec::isotropic(2, pi);
  spec.quad_real(0, 1) = spec.quad_real(1, 0) = 0.5;
  auto f = sample_gaussian(spec, g);
  auto p = g.point(g.flat_index({40, 20}));
  const double expected = std::exp(-(pi * p[0] * p[0] + pi * p[1] * p[1] + p[0] * p[1]));
  CHECK(f[g.flat_index({40, 20})].real() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("closure sampling") {
  Grid g = make_grid(64, 8.0);
  auto zero = sample_closure([](std::span<const double>) { return Complex(0.0); }, g);
  CHECK(zero.is_zero());
  auto step = sample_closure(
      [](std::span<const double> x) { return Complex(x[0] >= 0.0 && x[0] < 1.0 ? 1.0 : 0.0); }, g);
  double mass = 0.0;
  for (const auto& v : step.values()) mass += v.real() * g.spacing();
  CHECK(mass == doctest::Approx(1.0));
  auto hermite = sample_closure(
      [](std::span<const double> x) { return Complex(x[0] * std::exp(-pi * x[0] * x[0])); }, g);
  CHECK(hermite[32].real() == 0.0);
  CHECK(hermite[40].real() == doctest::Approx(std::exp(-pi)));
  CHECK_THROWS_AS(
      sample_closure([](std::span<const double>) { return Complex(INFINITY, 0.0); }, g),
      DomainError);
}

TEST_CASE("random smooth functions") {
  Grid g = make_grid(512, 12.0);
  RandomFunctionSpec spec{42, 0.1, 2.0};
  auto a = random_smooth(spec, g);
  auto b = random_smooth(spec, g);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
  CHECK(std::abs(l2_norm(a) - 1.0) < 1e-12);
  CHECK(a.boundary_ratio() < 1e-8);
  spec.seed = 43;
  auto c = random_smooth(spec, g);
  CHECK(c[256] != a[256]);

  CHECK_THROWS_AS(random_smooth({1, 0.0, 2.0}, g), DomainError);
  CHECK_THROWS_AS(random_smooth({1, 0.6, 2.0}, g), DomainError);
  CHECK_THROWS_AS(random_smooth({1, 0.1, 0.0}, g), DomainError);
}

TEST_CASE("serialization") {
  Grid g = make_grid(8, 8.0);
  auto f = sample_closure([](std::span<const double> x) { return Complex(x[0], -x[0]); }, g);
  auto j = to_json(f);
  CHECK(j["grid"]["N"] == 8);
  CHECK(j["grid"]["L"] == 8.0);
  CHECK(j["grid"]["d"] == 1);
  auto back = sampled_function_from_json(j);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
  const std::string csv = to_csv(f);
  CHECK(csv.rfind("x,re,im\n", 0) == 0);
  CHECK_THROWS_AS(sampled_function_from_json(nlohmann::json{{"grid", 3}}), DomainError);

  Grid g2 = make_grid(8, 4.0, 2);
  CHECK(to_csv(SampledFunction::zeros(g2)).rfind("x,y,re,im\n", 0) == 0);
}
