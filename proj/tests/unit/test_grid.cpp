#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace testing;

TEST_SUITE("grid") {
  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(Grid::create({1, {16}, {}}), InvalidArgument);
    CHECK_THROWS_AS(Grid::create({2, {16, 15}, {}}), InvalidArgument);
    CHECK_THROWS_AS(Grid::create({2, {16, 6}, {}}), InvalidArgument);
    CHECK_THROWS_AS(Grid::create({2, {16}, {}}), InvalidArgument);
    CHECK_THROWS_AS(Grid::create({2, {16, 16}, {1.0, -1.0}}), InvalidArgument);
    const auto g = Grid::create({3, {8, 10, 12}, {1.0, 2.0, 3.0}});
    CHECK(g->size() == 960);
    CHECK(g->band_limit() == 2);
    CHECK(g->volume() == doctest::Approx(6.0));
    CHECK(g->spacing(2) == doctest::Approx(0.25));
  }

  TEST_CASE("field storage matches the grid") {
    const auto g = grid2(8);
    CHECK(ScalarField(g).size() == 64);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(63)), InvalidArgument);
    CHECK(SymTensor2(g).count() == 3);
    CHECK(SymTensor2(grid3(8)).count() == 6);
    CHECK(TwoForm(grid3(8)).count() == 3);
    CHECK_THROWS_AS(ScalarField(g) + ScalarField(grid2(10)), InvalidArgument);
  }

  TEST_CASE("derivative of sin x1") {
    const auto g = grid2(32);
    const auto f = field(g, [](auto x) { return std::sin(x[0]); });
    const auto df = partial_derivative(f, 0);
    CHECK(sup_norm(df - field(g, [](auto x) { return std::cos(x[0]); })) <= 1e-12);
    CHECK(sup_norm(partial_derivative(f, 1)) <= 1e-14);
    CHECK(sup_norm(partial_derivative(ScalarField(g, 1.0), 1)) == 0.0);
    CHECK_THROWS_AS(partial_derivative(f, 2), InvalidArgument);
    CHECK_THROWS_AS(partial_derivative(f, -1), InvalidArgument);
  }

  TEST_CASE("every resolvable single mode differentiates to round-off") {
    const auto g = Grid::create({2, {16, 12}, {3.0, 2.0 * kPi}});
    for (int k0 = 0; k0 < 8; ++k0)
      for (int k1 = 0; k1 < 6; ++k1) {
        CAPTURE(k0);
        CAPTURE(k1);
        const double w0 = 2.0 * kPi * k0 / 3.0;
        const auto f = field(g, [&](auto x) { return std::cos(w0 * x[0] + k1 * x[1] + 0.3); });
        const auto d0 = field(g, [&](auto x) { return -w0 * std::sin(w0 * x[0] + k1 * x[1] + 0.3); });
        const auto d1 = field(g, [&](auto x) { return -k1 * std::sin(w0 * x[0] + k1 * x[1] + 0.3); });
        CHECK(sup_norm(partial_derivative(f, 0) - d0) <= 1e-11);
        CHECK(sup_norm(partial_derivative(f, 1) - d1) <= 1e-11);
      }
  }

  TEST_CASE("Nyquist mode derivative is zero") {
    const auto g = grid2(8);
    const auto f = field(g, [](auto x) { return std::cos(4.0 * x[0]); });
    CHECK(sup_norm(partial_derivative(f, 0)) <= 1e-13);
  }

  TEST_CASE("gradient and divergence agree with partial derivatives") {
    const auto g = grid3(12);
    const auto f = random_bandlimited_field(g, 3, 3, 1.0);
    const OneForm df = gradient(f);
    for (int a = 0; a < 3; ++a)
      CHECK(sup_norm(df[a] - partial_derivative(f, a)) <= 1e-13);
    const OneForm u = random_oneform(g, 4);
    ScalarField expect(g);
    for (int a = 0; a < 3; ++a) expect += partial_derivative(u[a], a);
    CHECK(sup_norm(divergence(u.components()) - expect) <= 1e-13);
  }

  TEST_CASE("mixed partials commute") {
    for (auto g : {grid2(32), grid3(16)}) {
      const auto f = random_bandlimited_field(g, 11, g->band_limit(), 1.0);
      for (int a = 0; a < g->dim(); ++a)
        for (int b = 0; b < a; ++b)
          CHECK(sup_norm(partial_derivative(partial_derivative(f, a), b) -
                         partial_derivative(partial_derivative(f, b), a)) <= 1e-10);
    }
  }

  TEST_CASE("quadrature") {
    const auto g = grid2(32);
    const ScalarField one(g, 1.0);
    CHECK(integrate(one, one) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));
    const auto s = field(g, [](auto x) { return std::sin(x[0]); });
    CHECK(std::abs(integrate(s, one)) <= 1e-12);
    const auto s2 = field(g, [](auto x) { return std::sin(x[0]) * std::sin(x[0]); });
    CHECK(integrate(s2, one) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
    ScalarField bad(g, 1.0);
    bad[17] = 0.0;
    CHECK_THROWS_AS(integrate(s, bad), DegenerateMetric);
  }

  TEST_CASE("integral of a derivative vanishes") {
    for (auto g : {grid2(32), grid3(12)})
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = random_bandlimited_field(g, seed, g->band_limit(), 1.0);
        for (int a = 0; a < g->dim(); ++a)
          CHECK(std::abs(integrate(partial_derivative(f, a))) <= 1e-10);
      }
  }

  TEST_CASE("random band-limited fields") {
    const auto g = grid3(16);
    const auto a = random_bandlimited_field(g, 7, 3, 0.1);
    const auto b = random_bandlimited_field(g, 7, 3, 0.1);
    CHECK(a.values().size() == b.values().size());
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    CHECK(sup_norm(a) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(mean(a)) <= 1e-12);
    CHECK(sup_norm(a - random_bandlimited_field(g, 8, 3, 0.1)) > 1e-3);
    CHECK_THROWS_AS(random_bandlimited_field(g, 7, 5, 0.1), BandLimitError);
    CHECK_THROWS_AS(random_bandlimited_field(g, 7, 0, 0.1), BandLimitError);
    CHECK_THROWS_AS(random_bandlimited_field(g, 7, 2, 0.0), InvalidArgument);
  }

  TEST_CASE("random fields have no content above max_mode") {
    const auto g = grid2(16);
    const auto f = random_bandlimited_field(g, 9, 2, 1.0);
    std::vector<std::complex<double>> spec(g->spectral_size());
    g->forward(f.values(), spec);
    double outside = 0.0;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const double k0 = std::abs(g->wavenumbers(0)[j]);
      const double k1 = std::abs(g->wavenumbers(1)[j]);
      if (k0 > 2.5 || k1 > 2.5) outside = std::max(outside, std::abs(spec[j]));
    }
    CHECK(outside <= 1e-12);
  }
}
