#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ir2/coefficient.hpp"
#include "ir2/matrix.hpp"
#include "ir2/report.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

/// Parameters of a synthetic model draw.
struct ModelSpec {
  std::string name;
  std::size_t n = 100;
  std::size_t p = 1;        // covariate count for selection models
  double lambda = 0.0;      // noise level in [0, 1] for the power alternatives
  double noise_sd = 0.0;    // additive noise for the scatterplot models
  std::uint64_t seed = 1;

  /// Throws InputError for lambda outside [0, 1], n < 4, negative noise or
  /// p below the model's minimum.
  void validate() const;
};

enum class ModelFamily { power, scatter, selection, dependence, null };

struct ModelInfo {
  std::string name;
  ModelFamily family;
  std::string formula;
  std::size_t min_p = 1;
  std::vector<std::size_t> support;  // 0-based relevant covariates (selection models)
};

const std::vector<ModelInfo>& registered_models();
/// Throws InputError for an unknown name.
const ModelInfo& find_model(const std::string& name);

/// Row-wise generative structure: X is drawn first, then Y | X. Used both by
/// generate() and by the plug-in population estimator.
struct ConditionalModel {
  std::size_t dim = 1;
  std::function<void(Rng&, std::span<double>)> draw_x;
  std::function<double(std::span<const double>, Rng&)> draw_y;
};

ConditionalModel make_conditional_model(const ModelSpec& spec);

/// Reproducible sample from the named model; rows are drawn in order from Rng(spec.seed).
Sample generate(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Monte Carlo studies
// ---------------------------------------------------------------------------

struct NullStudyConfig {
  std::size_t n = 1000;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::size_t bins = 40;
  std::size_t threads = 1;
};

/// Mean, variance and histogram of nu_n^{1-dim} under independent uniforms.
ExperimentReport null_moment_study(const NullStudyConfig& config);

/// Replicates of nu_n^{1-dim} (or another method) on a model; the raw draws
/// behind the moment studies.
std::vector<double> replicate_statistic(const ModelSpec& base, Method method, std::size_t reps,
                                        std::uint64_t seed, std::size_t threads = 1);

struct PowerStudyConfig {
  std::vector<std::string> models{"linear", "step", "w_shaped", "sinusoid",
                                  "circular", "heteroskedastic", "hetero_sinusoid"};
  std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Method> methods{Method::nu, Method::nu1d, Method::xi};
  std::size_t n = 100;
  std::size_t reps = 500;
  std::size_t permutations = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// Rejection frequency per (model, lambda, method) with permutation p-values.
ExperimentReport power_study(const PowerStudyConfig& config);

struct SelectionStudyConfig {
  std::vector<std::string> models{"lm"};
  std::vector<std::size_t> n_list{100, 1000};
  std::size_t p = 100;
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  bool standardize = true;
  std::size_t threads = 1;
};

/// Exact recovery, inclusion rate and mean false selections of FORD.
ExperimentReport selection_study(const SelectionStudyConfig& config);

struct ScatterStudyConfig {
  std::vector<std::string> models{"scatter_linear", "scatter_quadratic", "scatter_sine"};
  std::vector<double> noise_levels{0.0, 0.2, 0.6};
  std::size_t n = 100;
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// nu_n on the noiseless and noisy scatterplot models.
ExperimentReport scatter_study(const ScatterStudyConfig& config);

struct RuntimeStudyConfig {
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::vector<Method> methods{Method::nu1d, Method::xi, Method::nu};
  std::size_t reps = 5;
  std::uint64_t seed = 1;
};

/// Median wall time per (method, n) on independent normals plus the fitted
/// log-log slope across sizes.
ExperimentReport runtime_study(const RuntimeStudyConfig& config);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ir2
