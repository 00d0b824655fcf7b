#include "ir2/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ir2/error.hpp"
#include "ir2/ford.hpp"
#include "ir2/inference.hpp"
#include "ir2/parallel.hpp"

namespace ir2 {

namespace {

constexpr double kPi = std::numbers::pi;

// =============================================================================
// Registry
// =============================================================================

const std::vector<ModelInfo> kModels = {
    // Power alternatives; X ~ U[-1, 1], eps ~ N(0, 1).
    {"linear", ModelFamily::power, "Y = 0.5 X + 3 lambda eps", 1, {0}},
    {"step", ModelFamily::power,
     "Y = f(X) + 10 lambda eps, f = -3, 2, -4, -3 on [-1,-0.5), [-0.5,0), [0,0.5), [0.5,1]", 1, {0}},
    {"w_shaped", ModelFamily::power,
     "Y = |X + 0.5| 1{X < 0} + |X - 0.5| 1{X >= 0} + 0.75 lambda eps", 1, {0}},
    {"sinusoid", ModelFamily::power, "Y = cos(8 pi X) + 3 lambda eps", 1, {0}},
    {"circular", ModelFamily::power, "Y = Z sqrt(1 - X^2) + 0.9 lambda eps, Z = +-1", 1, {0}},
    {"heteroskedastic", ModelFamily::power,
     "Y = 3 (sigma(X)(1 - lambda) + lambda) eps, sigma(X) = 1{|X| <= 0.5}", 1, {0}},
    {"hetero_sinusoid", ModelFamily::power, "Y = cos(20 pi (1 + 10 lambda eps) X^2)", 1, {0}},
    // Scatterplot models; X ~ U[-1, 1].
    {"scatter_linear", ModelFamily::scatter, "Y = X + noise_sd eps", 1, {0}},
    {"scatter_quadratic", ModelFamily::scatter, "Y = X^2 + noise_sd eps", 1, {0}},
    {"scatter_sine", ModelFamily::scatter, "Y = sin(2 pi X) + noise_sd eps", 1, {0}},
    // Dependence and null models.
    {"product_uniform", ModelFamily::dependence, "X, Z ~ U[0,1], Y = X Z", 1, {0}},
    {"independent", ModelFamily::null, "X, Y ~ U[0,1] independent", 1, {}},
    {"independent_normal", ModelFamily::null, "X, Y ~ N(0,1) independent", 1, {}},
    // Selection models; X ~ N(0, I_p), true support {X1, X2, X3}.
    {"lm", ModelFamily::selection, "Y = 3 X1 + 2 X2 - X3 + eps, eps ~ N(0,1)", 3, {0, 1, 2}},
    {"nonlin1", ModelFamily::selection, "Y = X1 X2 + sin(X1 X3)", 3, {0, 1, 2}},
    {"nonlin2", ModelFamily::selection, "Y = |X1 + eps|^sin(X2 - X3), eps ~ U[0,1]", 3, {0, 1, 2}},
    {"osc1", ModelFamily::selection, "Y = sin(X1) / sqrt|X1| + X2 X3", 3, {0, 1, 2}},
    {"osc2", ModelFamily::selection, "Y = sin(X1) / X2 + X2 X3", 3, {0, 1, 2}},
};

double step_function(double x) {
  if (x < -0.5) return -3.0;
  if (x < 0.0) return 2.0;
  if (x < 0.5) return -4.0;
  return -3.0;
}

void uniform_pm1(Rng& rng, std::span<double> x) { x[0] = rng.uniform(-1.0, 1.0); }
void uniform_01(Rng& rng, std::span<double> x) { x[0] = rng.uniform(); }
void standard_normals(Rng& rng, std::span<double> x) {
  for (double& v : x) v = rng.normal();
}

double sample_sd(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t a, std::size_t b, std::size_t rep) {
  return derive_seed(derive_seed(derive_seed(seed, a), b), rep);
}

}  // namespace

const std::vector<ModelInfo>& registered_models() { return kModels; }

const ModelInfo& find_model(const std::string& name) {
  for (const auto& m : kModels) {
    if (m.name == name) return m;
  }
  throw InputError("unknown model '" + name + "'");
}

void ModelSpec::validate() const {
  const ModelInfo& info = find_model(name);
  if (n < 4) throw InputError("model sample size must be >= 4");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw InputError("noise_sd must be >= 0");
  if (p < info.min_p) {
    throw InputError("model '" + name + "' needs p >= " + std::to_string(info.min_p));
  }
}

ConditionalModel make_conditional_model(const ModelSpec& spec) {
  spec.validate();
  const std::string& name = spec.name;
  const double lambda = spec.lambda;
  const double noise = spec.noise_sd;
  ConditionalModel m;
  m.dim = 1;

  if (find_model(name).family == ModelFamily::selection) {
    m.dim = spec.p;
    m.draw_x = standard_normals;
    if (name == "lm") {
      m.draw_y = [](std::span<const double> x, Rng& rng) {
        return 3.0 * x[0] + 2.0 * x[1] - x[2] + rng.normal();
      };
    } else if (name == "nonlin1") {
      m.draw_y = [](std::span<const double> x, Rng&) {
        return x[0] * x[1] + std::sin(x[0] * x[2]);
      };
    } else if (name == "nonlin2") {
      m.draw_y = [](std::span<const double> x, Rng& rng) {
        return std::pow(std::abs(x[0] + rng.uniform()), std::sin(x[1] - x[2]));
      };
    } else if (name == "osc1") {
      m.draw_y = [](std::span<const double> x, Rng&) {
        return std::sin(x[0]) / std::sqrt(std::abs(x[0])) + x[1] * x[2];
      };
    } else {  // osc2
      m.draw_y = [](std::span<const double> x, Rng&) { return std::sin(x[0]) / x[1] + x[1] * x[2]; };
    }
    return m;
  }

  m.draw_x = uniform_pm1;
  if (name == "linear") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      return 0.5 * x[0] + 3.0 * lambda * rng.normal();
    };
  } else if (name == "step") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      return step_function(x[0]) + 10.0 * lambda * rng.normal();
    };
  } else if (name == "w_shaped") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      const double w = x[0] < 0.0 ? std::abs(x[0] + 0.5) : std::abs(x[0] - 0.5);
      return w + 0.75 * lambda * rng.normal();
    };
  } else if (name == "sinusoid") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      return std::cos(8.0 * kPi * x[0]) + 3.0 * lambda * rng.normal();
    };
  } else if (name == "circular") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      const double z = rng.coin() ? 1.0 : -1.0;
      return z * std::sqrt(1.0 - x[0] * x[0]) + 0.9 * lambda * rng.normal();
    };
  } else if (name == "heteroskedastic") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      const double sigma = std::abs(x[0]) <= 0.5 ? 1.0 : 0.0;
      return 3.0 * (sigma * (1.0 - lambda) + lambda) * rng.normal();
    };
  } else if (name == "hetero_sinusoid") {
    m.draw_y = [lambda](std::span<const double> x, Rng& rng) {
      return std::cos(20.0 * kPi * (1.0 + 10.0 * lambda * rng.normal()) * x[0] * x[0]);
    };
  } else if (name == "scatter_linear") {
    m.draw_y = [noise](std::span<const double> x, Rng& rng) { return x[0] + noise * rng.normal(); };
  } else if (name == "scatter_quadratic") {
    m.draw_y = [noise](std::span<const double> x, Rng& rng) {
      return x[0] * x[0] + noise * rng.normal();
    };
  } else if (name == "scatter_sine") {
    m.draw_y = [noise](std::span<const double> x, Rng& rng) {
      return std::sin(2.0 * kPi * x[0]) + noise * rng.normal();
    };
  } else if (name == "product_uniform") {
    m.draw_x = uniform_01;
    m.draw_y = [](std::span<const double> x, Rng& rng) { return x[0] * rng.uniform(); };
  } else if (name == "independent") {
    m.draw_x = uniform_01;
    m.draw_y = [](std::span<const double>, Rng& rng) { return rng.uniform(); };
  } else {  // independent_normal
    m.draw_x = standard_normals;
    m.draw_y = [](std::span<const double>, Rng& rng) { return rng.normal(); };
  }
  return m;
}

Sample generate(const ModelSpec& spec) {
  const ConditionalModel model = make_conditional_model(spec);
  Rng rng(spec.seed);
  Sample s;
  s.y.resize(spec.n);
  s.x = Matrix(spec.n, model.dim);
  for (std::size_t i = 0; i < spec.n; ++i) {
    model.draw_x(rng, s.x.row(i));
    s.y[i] = model.draw_y(s.x.row(i), rng);
  }
  s.x_names.reserve(model.dim);
  for (std::size_t c = 0; c < model.dim; ++c) s.x_names.push_back("x" + std::to_string(c + 1));
  return s;
}

// =============================================================================
// Studies
// =============================================================================

std::vector<double> replicate_statistic(const ModelSpec& base, Method method, std::size_t reps,
                                        std::uint64_t seed, std::size_t threads) {
  base.validate();
  std::vector<double> out(reps);
  parallel_for(reps, threads, [&](std::size_t k) {
    ModelSpec spec = base;
    spec.seed = derive_seed(seed, k);
    const Sample s = generate(spec);
    out[k] = compute_coefficient(method, s.y, s.x, derive_seed(spec.seed, 1)).value;
  });
  return out;
}

ExperimentReport null_moment_study(const NullStudyConfig& config) {
  if (config.reps == 0) throw InputError("reps must be >= 1");
  if (config.bins == 0) throw InputError("bins must be >= 1");
  ModelSpec spec;
  spec.name = "independent";
  spec.n = config.n;
  const auto stats = replicate_statistic(spec, Method::nu1d, config.reps, config.seed, config.threads);

  const double reps = static_cast<double>(config.reps);
  const double dn = static_cast<double>(config.n);
  const double mean = mean_of(stats);
  const double sd = sample_sd(stats, mean);
  const double var = sd * sd;
  // Standard error of the sample variance from the fourth central moment.
  double m4 = 0.0;
  for (double s : stats) m4 += std::pow(s - mean, 4);
  m4 /= reps;
  const double var_se = config.reps > 1 ? std::sqrt(std::max(0.0, m4 - var * var) / reps) : 0.0;
  const NullMoments theory = asymptotic_null_params(config.n);

  ExperimentReport report;
  report.study = "null";
  auto row = [&](std::string metric, double value, double se) {
    report.add({"independent", config.n, 0.0, "nu1d", std::move(metric), value, se, config.reps, ""});
  };
  row("mean", mean, config.reps > 1 ? sd / std::sqrt(reps) : 0.0);
  row("variance", var, var_se);
  row("n_variance", dn * var, dn * var_se);
  row("theoretical_mean", theory.mean, 0.0);
  row("theoretical_n_variance", dn * theory.variance, 0.0);

  const auto [lo_it, hi_it] = std::minmax_element(stats.begin(), stats.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(config.bins);
  std::vector<std::size_t> counts(config.bins, 0);
  for (double s : stats) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((s - lo) / width) : 0;
    counts[std::min(b, config.bins - 1)] += 1;
  }
  for (std::size_t b = 0; b < config.bins; ++b) {
    char label[32];
    std::snprintf(label, sizeof label, "%03zu", b);
    row(std::string("hist_lo_") + label, lo + width * static_cast<double>(b), 0.0);
    row(std::string("hist_count_") + label, static_cast<double>(counts[b]), 0.0);
  }
  return report;
}

ExperimentReport power_study(const PowerStudyConfig& config) {
  if (config.reps == 0) throw InputError("reps must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  ExperimentReport report;
  report.study = "power";
  for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
    for (std::size_t li = 0; li < config.lambdas.size(); ++li) {
      ModelSpec spec;
      spec.name = config.models[mi];
      spec.n = config.n;
      spec.lambda = config.lambdas[li];
      spec.validate();
      // rejections[rep * methods + k]
      std::vector<char> rejected(config.reps * config.methods.size(), 0);
      parallel_for(config.reps, config.threads, [&](std::size_t rep) {
        ModelSpec s = spec;
        s.seed = cell_seed(config.seed, mi, li, rep);
        const Sample sample = generate(s);
        for (std::size_t k = 0; k < config.methods.size(); ++k) {
          const auto test = permutation_test(sample.y, sample.x, config.methods[k],
                                             config.permutations, derive_seed(s.seed, k + 1));
          rejected[rep * config.methods.size() + k] = test.p_value <= config.alpha ? 1 : 0;
        }
      });
      for (std::size_t k = 0; k < config.methods.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t rep = 0; rep < config.reps; ++rep) hits += rejected[rep * config.methods.size() + k];
        const double power = static_cast<double>(hits) / static_cast<double>(config.reps);
        report.add({spec.name, config.n, spec.lambda, std::string(to_string(config.methods[k])),
                    "power", power,
                    std::sqrt(power * (1.0 - power) / static_cast<double>(config.reps)), config.reps,
                    ""});
      }
    }
  }
  return report;
}

ExperimentReport selection_study(const SelectionStudyConfig& config) {
  if (config.reps == 0) throw InputError("reps must be >= 1");
  ExperimentReport report;
  report.study = "selection";
  for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
    const ModelInfo& info = find_model(config.models[mi]);
    if (info.family != ModelFamily::selection) {
      throw InputError("model '" + info.name + "' is not a selection model");
    }
    for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
      std::vector<double> exact(config.reps), included(config.reps), false_count(config.reps),
          size(config.reps);
      parallel_for(config.reps, config.threads, [&](std::size_t rep) {
        ModelSpec spec;
        spec.name = info.name;
        spec.n = config.n_list[ni];
        spec.p = config.p;
        spec.seed = cell_seed(config.seed, mi, ni, rep);
        const Sample s = generate(spec);
        FordOptions options;
        options.standardize = config.standardize;
        const SelectionPath path = ford_select(s.y, s.x, derive_seed(spec.seed, 1), options);
        std::size_t hits = 0;
        for (std::size_t c : path.chosen) {
          if (std::find(info.support.begin(), info.support.end(), c) != info.support.end()) ++hits;
        }
        const std::size_t falses = path.chosen.size() - hits;
        included[rep] = hits == info.support.size() ? 1.0 : 0.0;
        exact[rep] = (hits == info.support.size() && falses == 0) ? 1.0 : 0.0;
        false_count[rep] = static_cast<double>(falses);
        size[rep] = static_cast<double>(path.chosen.size());
      });
      const std::size_t n = config.n_list[ni];
      auto add = [&](const char* metric, const std::vector<double>& v) {
        const double m = mean_of(v);
        const double se = config.reps > 1 ? sample_sd(v, m) / std::sqrt(static_cast<double>(config.reps)) : 0.0;
        report.add({info.name, n, static_cast<double>(config.p), "ford", metric, m, se, config.reps, ""});
      };
      add("exact_recovery", exact);
      add("inclusion", included);
      add("mean_false", false_count);
      add("mean_size", size);
    }
  }
  return report;
}

ExperimentReport scatter_study(const ScatterStudyConfig& config) {
  if (config.reps == 0) throw InputError("reps must be >= 1");
  ExperimentReport report;
  report.study = "figure1";
  for (const auto& name : config.models) {
    for (double noise : config.noise_levels) {
      ModelSpec spec;
      spec.name = name;
      spec.n = config.n;
      spec.noise_sd = noise;
      const auto stats = replicate_statistic(spec, Method::nu, config.reps, config.seed, config.threads);
      const double m = mean_of(stats);
      const double sd = sample_sd(stats, m);
      const double se = config.reps > 1 ? sd / std::sqrt(static_cast<double>(config.reps)) : 0.0;
      report.add({name, config.n, noise, "nu", "mean", m, se, config.reps, ""});
      report.add({name, config.n, noise, "nu", "sd", sd, 0.0, config.reps, ""});
      report.add({name, config.n, noise, "nu", "median", median_of(stats), 0.0, config.reps, ""});
    }
  }
  return report;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("loglog_slope needs >= 2 paired points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0 && y[k] > 0.0)) throw InputError("loglog_slope needs positive values");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  const double mx = mean_of(lx);
  const double my = mean_of(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

ExperimentReport runtime_study(const RuntimeStudyConfig& config) {
  if (config.reps == 0 || config.sizes.size() < 2) {
    throw InputError("runtime study needs reps >= 1 and at least two sizes");
  }
  ExperimentReport report;
  report.study = "runtime";
  using clock = std::chrono::steady_clock;
  for (Method method : config.methods) {
    std::vector<double> sizes, seconds;
    for (std::size_t n : config.sizes) {
      ModelSpec spec;
      spec.name = "independent_normal";
      spec.n = n;
      spec.seed = derive_seed(config.seed, n);
      const Sample s = generate(spec);
      const auto column = s.x.column(0);
      std::vector<double> times(config.reps);
      double sink = 0.0;
      for (std::size_t r = 0; r < config.reps; ++r) {
        const auto start = clock::now();
        switch (method) {
          case Method::nu: sink += nu_general(s.y, s.x, r).value; break;
          case Method::nu1d: sink += nu_1dim(s.y, column, r).value; break;
          case Method::xi: sink += xi_coefficient(s.y, column, r).value; break;
        }
        times[r] = std::chrono::duration<double>(clock::now() - start).count();
      }
      const double t = median_of(times);
      sizes.push_back(static_cast<double>(n));
      seconds.push_back(t);
      report.add({"independent_normal", n, 0.0, std::string(to_string(method)), "seconds", t, 0.0,
                  config.reps, std::isfinite(sink) ? "" : "non-finite"});
    }
    report.add({"independent_normal", 0, 0.0, std::string(to_string(method)), "loglog_slope",
                loglog_slope(sizes, seconds), 0.0, config.reps, ""});
  }
  return report;
}

}  // namespace ir2
