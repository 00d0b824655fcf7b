#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace ir2 {

enum class PopulationMethod { closed_form_quadrature, plug_in_mc };

/// Population value of nu for a benchmark model.
struct PopulationTarget {
  std::string model;
  double value = 0.0;
  PopulationMethod method = PopulationMethod::closed_form_quadrature;
  /// Quadrature error estimate, or the Monte Carlo standard error.
  double abs_error_bound = 0.0;
  std::size_t evaluations = 0;
};

/// Integrand of nu(Y, X) for Y = XZ with X, Z ~ U[0, 1] independent, as a
/// function of the threshold t in (0, 1); includes the density -log t.
double product_uniform_integrand(double t);

/// Adaptive Gauss-Kronrod quadrature of the integrand after t = exp(-u).
/// Throws NumericalError if the error estimate exceeds 1e-4.
PopulationTarget nu_product_uniform(double tolerance = 1e-10);

struct PlugInOptions {
  std::size_t t_grid_size = 400;  // thresholds drawn from the law of Y
  std::size_t n_outer = 400;      // covariate draws per threshold
  std::size_t n_inner = 32;       // response draws per covariate draw
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

/// Nested Monte Carlo estimate of
///   E_t[ Var(P(Y > t | X)) / Var(1{Y > t}) ],  t ~ law of Y,
/// for a model registered in the simulation registry (any lambda / noise
/// parameters at their defaults unless given through `model` as "name").
PopulationTarget nu_plug_in_mc(const std::string& model, const PlugInOptions& options = {});

}  // namespace ir2
