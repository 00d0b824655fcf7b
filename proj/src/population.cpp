#include "ir2/population.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "ir2/error.hpp"
#include "ir2/parallel.hpp"
#include "ir2/rng.hpp"
#include "ir2/simulation.hpp"

namespace ir2 {

namespace {

// Integrand expressed through u = -log t, so that log t is exact.
// For Y = XZ: F(t) = t - t log t, and E[P(Y > t | X)^2] = 1 + 2 t log t - t^2.
double integrand_in_u(double u) {
  if (u <= 0.0) return 0.0;
  // Beyond this point t underflows; the weighted integrand is below 1e-250.
  if (u > 550.0) return 0.0;
  const double s = -std::expm1(-u);  // 1 - t
  if (s < 1e-3) {
    // The closed form cancels catastrophically near t = 1; use its expansion in s.
    const double s2 = s * s;
    return s2 * (2.0 / 3.0 + s * (-1.0 / 18.0 + s * (133.0 / 540.0 + s * (17.0 / 1620.0 + s * 7607.0 / 68040.0))));
  }
  const double t = std::exp(-u);
  const double t_log_t = -u * t;
  const double second_moment = 1.0 + 2.0 * t_log_t - t * t;
  const double survival = s + t_log_t;  // 1 - F(t)
  const double cdf = t - t_log_t;
  const double ratio = (second_moment - survival * survival) / (survival * cdf);
  return ratio * u;
}

}  // namespace

double product_uniform_integrand(double t) {
  if (!(t > 0.0) || !(t < 1.0)) return 0.0;
  return integrand_in_u(-std::log(t));
}

PopulationTarget nu_product_uniform(double tolerance) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  // dt = t du with t = exp(-u) maps (0, 1) onto (0, inf).
  auto f = [](double u) { return integrand_in_u(u) * std::exp(-u); };
  const double value = gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, tolerance, &error, &l1);
  if (!std::isfinite(value) || error > 1e-4) {
    throw NumericalError("quadrature for the product-uniform model did not converge (error " +
                         std::to_string(error) + ")");
  }
  PopulationTarget target;
  target.model = "product_uniform";
  target.value = value;
  target.method = PopulationMethod::closed_form_quadrature;
  target.abs_error_bound = std::max(error, std::numeric_limits<double>::epsilon());
  return target;
}

PopulationTarget nu_plug_in_mc(const std::string& model, const PlugInOptions& options) {
  if (options.t_grid_size < 2 || options.n_outer < 2 || options.n_inner < 2) {
    throw InputError("nu_plug_in_mc needs t_grid_size, n_outer and n_inner >= 2");
  }
  ModelSpec spec;
  spec.name = model;
  spec.p = std::max<std::size_t>(1, find_model(model).min_p);
  const ConditionalModel cm = make_conditional_model(spec);

  std::vector<double> ratios(options.t_grid_size, 0.0);
  parallel_for(options.t_grid_size, options.threads, [&](std::size_t g) {
    Rng rng(derive_seed(options.seed, g));
    std::vector<double> x(cm.dim);
    std::vector<double> p_hat(options.n_outer);
    const double n_outer = static_cast<double>(options.n_outer);
    const double n_inner = static_cast<double>(options.n_inner);
    // Threshold t ~ law of Y. A draw where P(Y > t) is estimated as 0 sits at
    // an atom at the maximum, which the renormalised law excludes: redraw.
    for (int attempt = 0; attempt < 100; ++attempt) {
      cm.draw_x(rng, x);
      const double t = cm.draw_y(x, rng);
      double mean = 0.0;
      double within = 0.0;
      for (std::size_t o = 0; o < options.n_outer; ++o) {
        cm.draw_x(rng, x);
        std::size_t above = 0;
        for (std::size_t m = 0; m < options.n_inner; ++m) {
          if (cm.draw_y(x, rng) > t) ++above;
        }
        p_hat[o] = static_cast<double>(above) / n_inner;
        mean += p_hat[o];
        within += p_hat[o] * (1.0 - p_hat[o]);
      }
      mean /= n_outer;
      within /= n_outer;
      double between = 0.0;
      for (double p : p_hat) between += (p - mean) * (p - mean);
      between /= n_outer - 1.0;
      const double total = mean * (1.0 - mean) * n_outer / (n_outer - 1.0);
      if (total <= 0.0) continue;
      // Var(p_hat) = Var(p(X)) + E[p(1-p)]/m, and E[p_hat(1-p_hat)] = E[p(1-p)](m-1)/m.
      const double conditional = between - within / (n_inner - 1.0);
      ratios[g] = conditional / total;
      return;
    }
    throw NumericalError("nu_plug_in_mc: could not draw a threshold below the maximum of Y");
  });

  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size() - 1);

  PopulationTarget target;
  target.model = model;
  target.value = mean;
  target.method = PopulationMethod::plug_in_mc;
  target.abs_error_bound = std::max(std::sqrt(var / static_cast<double>(ratios.size())),
                                    std::numeric_limits<double>::epsilon());
  target.evaluations = options.t_grid_size * options.n_outer * options.n_inner;
  return target;
}

}  // namespace ir2
