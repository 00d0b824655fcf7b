#include <doctest.h>

#include <cmath>

#include "ir2/error.hpp"
#include "ir2/population.hpp"

using namespace ir2;

// 40-digit reference value from an independent arbitrary-precision quadrature.
constexpr double kProductUniformNu = 0.3126016947201526953;

TEST_CASE("product-uniform quadrature") {
  const PopulationTarget t = nu_product_uniform();
  CHECK(std::abs(t.value - 0.3126) <= 0.001);
  CHECK(std::abs(t.value - kProductUniformNu) <= 1e-12);
  CHECK(t.method == PopulationMethod::closed_form_quadrature);
  CHECK(t.abs_error_bound < 1e-8);
}

TEST_CASE("halved tolerance gives the same value") {
  CHECK(std::abs(nu_product_uniform(1e-10).value - nu_product_uniform(5e-11).value) <= 1e-5);
}

TEST_CASE("integrand vanishes at the upper end") {
  CHECK(std::abs(product_uniform_integrand(1.0 - 1e-6)) < 1e-11);
  CHECK(product_uniform_integrand(1.0) == 0.0);
  CHECK(product_uniform_integrand(0.0) == 0.0);
  // Series branch and closed form agree at the switch-over point.
  const double a = product_uniform_integrand(1.0 - 1.0001e-3);
  const double b = product_uniform_integrand(1.0 - 0.9999e-3);
  CHECK(a == doctest::Approx(b).epsilon(1e-3));
  CHECK(product_uniform_integrand(0.5) > 0.0);
}

TEST_CASE("plug-in Monte Carlo targets") {
  PlugInOptions o;
  o.t_grid_size = 300;
  o.n_outer = 300;
  o.n_inner = 32;
  o.seed = 5;
  SUBCASE("product uniform") {
    const PopulationTarget t = nu_plug_in_mc("product_uniform", o);
    CHECK(t.method == PopulationMethod::plug_in_mc);
    CHECK(std::abs(t.value - kProductUniformNu) <= 2.0 * t.abs_error_bound);
  }
  SUBCASE("independent") {
    const PopulationTarget t = nu_plug_in_mc("independent", o);
    CHECK(std::abs(t.value) <= 2.0 * t.abs_error_bound);
  }
  SUBCASE("deterministic function") {
    const PopulationTarget t = nu_plug_in_mc("scatter_quadratic", o);
    CHECK(std::abs(t.value - 1.0) <= 2.0 * t.abs_error_bound + 1e-12);
  }
}

TEST_CASE("plug-in Monte Carlo errors") {
  CHECK_THROWS_AS(nu_plug_in_mc("no_such_model"), InputError);
  PlugInOptions o;
  o.n_inner = 1;
  CHECK_THROWS_AS(nu_plug_in_mc("independent", o), InputError);
}
