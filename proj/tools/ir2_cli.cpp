// ir2: command-line front end for the integrated R^2 toolkit.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ir2/coefficient.hpp"
#include "ir2/dataset.hpp"
#include "ir2/error.hpp"
#include "ir2/ford.hpp"
#include "ir2/inference.hpp"
#include "ir2/permutations.hpp"
#include "ir2/population.hpp"
#include "ir2/ranks.hpp"
#include "ir2/simulation.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240521;

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> env_u64(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string s(raw);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(std::string(name) + " must be a non-negative integer");
  }
  return v;
}

struct SeedArgs {
  std::optional<std::uint64_t> seed;
  bool entropy = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed (default: $IR2_SEED or a fixed constant)");
    cmd->add_flag("--entropy-seed", entropy, "Draw the seed from the system entropy source");
  }

  std::uint64_t resolve() const {
    if (seed && entropy) throw UsageError("--seed and --entropy-seed are mutually exclusive");
    if (seed) return *seed;
    if (entropy) {
      std::random_device rd;
      return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return env_u64("IR2_SEED").value_or(kDefaultSeed);
  }
};

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  return static_cast<std::size_t>(env_u64("IR2_THREADS").value_or(0));
}

struct DataArgs {
  std::string file;
  std::string y;
  std::vector<std::string> x;
  bool drop_rows = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--file,-f", file, "CSV file with a header row")->required();
    cmd->add_option("--y", y, "Response column")->required();
    cmd->add_option("--x", x, "Covariate columns (comma separated or repeated)")->delimiter(',');
    cmd->add_flag("--drop-rows", drop_rows, "Drop rows with missing values in designated columns");
  }

  ir2::Dataset load() const {
    if (x.empty()) throw UsageError("at least one --x column is required");
    const ir2::CsvTable table = ir2::read_csv_file(file);
    ir2::IngestOptions opts;
    opts.drop_missing = drop_rows;
    return ir2::ingest(table, y, x, opts);
  }
};

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::size_t> parse_permutation(const std::string& text) {
  std::vector<std::size_t> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw ir2::InputError("empty entry in permutation '" + text + "'");
    const std::string t = token.substr(first, last - first + 1);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ir2::InputError("not a positive integer in permutation: '" + t + "'");
    }
    out.push_back(v);
  }
  return out;
}

template <class T, class Parse>
std::vector<T> map_names(const std::vector<std::string>& names, Parse parse) {
  std::vector<T> out;
  for (const auto& s : names) out.push_back(parse(s));
  return out;
}

void write_report(const ir2::ExperimentReport& report, const std::string& out_path,
                  const std::string& format) {
  auto emit = [&](std::ostream& os) {
    if (format == "csv") {
      ir2::write_csv(report, os);
    } else {
      ir2::write_jsonl(report, os);
    }
  };
  if (out_path.empty() || out_path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw ir2::InputError("cannot write '" + out_path + "'");
  emit(os);
}

void write_sample_csv(const ir2::Sample& s, std::ostream& os) {
  os << "y";
  for (const auto& name : s.x_names) os << ',' << name;
  os << "\r\n";
  char buf[40];
  for (std::size_t i = 0; i < s.n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.y[i]);
    os << buf;
    for (std::size_t c = 0; c < s.p(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", s.x(i, c));
      os << ',' << buf;
    }
    os << "\r\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated R^2 dependence coefficient toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ir2 0.1.0");

  // coeff
  auto* coeff = app.add_subcommand("coeff", "Compute a dependence coefficient");
  DataArgs coeff_data;
  coeff_data.attach(coeff);
  SeedArgs coeff_seed;
  coeff_seed.attach(coeff);
  std::string coeff_method = "nu";
  std::optional<bool> coeff_standardize;
  std::size_t replicate_ties = 1;
  coeff->add_option("--method,-m", coeff_method, "nu | nu1d | xi")
      ->check(CLI::IsMember({"nu", "nu1d", "xi"}));
  coeff->add_flag("--standardize,!--no-standardize", coeff_standardize,
                  "z-score covariates (default: on for nu, off for nu1d/xi)");
  coeff->add_option("--replicate-ties", replicate_ties, "Average over this many tie-breaking seeds")
      ->check(CLI::PositiveNumber);

  // ford
  auto* ford = app.add_subcommand("ford", "Forward ordering by dependence (variable selection)");
  DataArgs ford_data;
  ford_data.attach(ford);
  SeedArgs ford_seed;
  ford_seed.attach(ford);
  std::optional<bool> ford_standardize;
  std::size_t max_steps = 0;
  bool full_ordering = false;
  std::optional<std::size_t> ford_threads;
  ford->add_flag("--standardize,!--no-standardize", ford_standardize, "z-score covariates (default on)");
  ford->add_option("--max-steps", max_steps, "Cap on accepted steps (0 = no cap)");
  ford->add_flag("--full", full_ordering, "Order all covariates without the stopping rule");
  ford->add_option("--threads", ford_threads, "Worker threads (default: $IR2_THREADS or all cores)");

  // test
  auto* test = app.add_subcommand("test", "Test independence of Y and X");
  DataArgs test_data;
  test_data.attach(test);
  SeedArgs test_seed;
  test_seed.attach(test);
  std::string test_method = "nu1d";
  std::string test_mode = "perm";
  std::size_t permutations = 1000;
  std::optional<std::size_t> test_threads;
  test->add_option("--method,-m", test_method, "nu | nu1d | xi")
      ->check(CLI::IsMember({"nu", "nu1d", "xi"}));
  test->add_option("--mode", test_mode, "perm | asymptotic (conjectured normal limit, nu1d only)")
      ->check(CLI::IsMember({"perm", "asymptotic"}));
  test->add_option("--permutations,-B", permutations, "Number of permutations");
  test->add_option("--threads", test_threads, "Worker threads (default: $IR2_THREADS or all cores)");

  // permdist
  auto* permdist = app.add_subcommand("permdist", "Distance between two permutations");
  std::string perm_a, perm_b, metric = "d_nu";
  permdist->add_option("a", perm_a, "First permutation, comma separated values 1..n")->required();
  permdist->add_option("b", perm_b, "Second permutation")->required();
  permdist->add_option("--metric", metric,
                       "d_nu | d_nu_sym | footrule | spearman_rho_sq | kendall | cayley | hamming | ulam");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a simulation study or export a model sample");
  std::string study;
  std::string out_path;
  std::string format = "csv";
  SeedArgs sim_seed;
  sim_seed.attach(simulate);
  std::optional<std::size_t> sim_n, sim_reps, sim_p, sim_threads;
  std::vector<std::string> sim_models, sim_methods;
  std::vector<double> sim_lambdas, sim_noise;
  std::vector<std::size_t> sim_n_list, sim_sizes;
  std::size_t sim_permutations = 1000, sim_bins = 40;
  double sim_alpha = 0.05, sim_lambda = 0.0, sim_noise_sd = 0.0;
  std::string sim_model = "lm";
  simulate->add_option("--study", study, "null | power | selection | figure1 | runtime | population | sample")
      ->required();
  simulate->add_option("--out,-o", out_path, "Output path (default: standard output)");
  simulate->add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  simulate->add_option("--n", sim_n, "Sample size");
  simulate->add_option("--reps", sim_reps, "Replications");
  simulate->add_option("--p", sim_p, "Covariate count (selection models)");
  simulate->add_option("--threads", sim_threads, "Worker threads (default: $IR2_THREADS or all cores)");
  simulate->add_option("--models", sim_models, "Model names")->delimiter(',');
  simulate->add_option("--model", sim_model, "Model name (study=sample or population)");
  simulate->add_option("--methods", sim_methods, "Methods for power/runtime studies")->delimiter(',');
  simulate->add_option("--lambdas", sim_lambdas, "Noise grid for the power study")->delimiter(',');
  simulate->add_option("--lambda", sim_lambda, "Noise level (study=sample)");
  simulate->add_option("--noise", sim_noise, "Noise levels for figure1")->delimiter(',');
  simulate->add_option("--noise-sd", sim_noise_sd, "Noise sd (study=sample, scatter models)");
  simulate->add_option("--n-list", sim_n_list, "Sample sizes for the selection study")->delimiter(',');
  simulate->add_option("--sizes", sim_sizes, "Sample sizes for the runtime study")->delimiter(',');
  simulate->add_option("--permutations,-B", sim_permutations, "Permutations per test (power study)");
  simulate->add_option("--alpha", sim_alpha, "Test level (power study)");
  simulate->add_option("--bins", sim_bins, "Histogram bins (null study)");

  // models
  auto* models = app.add_subcommand("models", "List registered simulation models");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kUsage;
    }

    if (coeff->parsed()) {
      const ir2::Method method = ir2::parse_method(coeff_method);
      if (method != ir2::Method::nu && coeff_data.x.size() != 1) {
        throw UsageError("method " + coeff_method + " requires exactly one --x column");
      }
      const std::uint64_t seed = coeff_seed.resolve();
      const ir2::Dataset ds = coeff_data.load();
      ir2::Sample s = ds.to_sample();
      const bool standardize = coeff_standardize.value_or(method == ir2::Method::nu);
      if (standardize) s.x = ir2::standardize_columns(s.x);
      ir2::CoefficientResult r;
      if (method == ir2::Method::nu) {
        ir2::NuOptions opts;
        opts.replicates = replicate_ties;
        r = ir2::nu_general(s.y, s.x, seed, opts);
      } else if (method == ir2::Method::nu1d) {
        r = ir2::nu_1dim(s.y, s.x.column(0), seed, replicate_ties);
      } else {
        r = ir2::xi_coefficient(s.y, s.x.column(0), seed, replicate_ties);
      }
      json j;
      j["value"] = r.value;
      j["method"] = std::string(ir2::to_string(r.method));
      j["n"] = r.n;
      j["n0"] = r.n0 ? *r.n0 : ir2::compute_ranks(s.y).n0;
      j["seed"] = r.seed;
      j["replicates"] = r.replicates;
      j["standardized"] = standardize;
      j["tie_events"] = r.tie_events;
      j["dropped_rows"] = ds.dropped_rows;
      j["x"] = ds.x_columns;
      j["y"] = ds.y_column;
      if (r.value < 0.0) j["note"] = "negative value: no detectable dependence (estimate is not clipped)";
      print(j);
    } else if (ford->parsed()) {
      const std::uint64_t seed = ford_seed.resolve();
      const ir2::Dataset ds = ford_data.load();
      const ir2::Sample s = ds.to_sample();
      ir2::FordOptions opts;
      opts.max_steps = max_steps;
      opts.standardize = ford_standardize.value_or(true);
      opts.threads = resolve_threads(ford_threads);
      const ir2::SelectionPath path = full_ordering ? ir2::ford_full_ordering(s.y, s.x, seed, opts)
                                                    : ir2::ford_select(s.y, s.x, seed, opts);
      json chosen = json::array();
      json names = json::array();
      for (std::size_t c : path.chosen) {
        chosen.push_back(c + 1);
        names.push_back(ds.x_columns[c]);
      }
      json j;
      j["chosen"] = chosen;
      j["chosen_names"] = names;
      j["scores"] = path.scores;
      j["stop_reason"] = std::string(ir2::to_string(path.stop_reason));
      j["rejected"] = path.rejected_index ? json(ds.x_columns[*path.rejected_index]) : json(nullptr);
      j["rejected_score"] = nullable(path.rejected_score);
      j["seed"] = path.seed;
      j["n"] = s.n();
      j["p"] = s.p();
      j["standardized"] = opts.standardize;
      j["dropped_rows"] = ds.dropped_rows;
      print(j);
    } else if (test->parsed()) {
      const ir2::Method method = ir2::parse_method(test_method);
      if (method != ir2::Method::nu && test_data.x.size() != 1) {
        throw UsageError("method " + test_method + " requires exactly one --x column");
      }
      if (test_mode == "asymptotic" && method != ir2::Method::nu1d) {
        throw UsageError("asymptotic mode is only available for nu1d");
      }
      if (test_mode == "perm" && permutations == 0) throw UsageError("--permutations must be >= 1");
      const std::uint64_t seed = test_seed.resolve();
      const ir2::Dataset ds = test_data.load();
      ir2::Sample s = ds.to_sample();
      if (method == ir2::Method::nu) s.x = ir2::standardize_columns(s.x);
      const ir2::PermutationTestResult r =
          test_mode == "asymptotic"
              ? ir2::asymptotic_test(s.y, s.x.column(0), seed)
              : ir2::permutation_test(s.y, s.x, method, permutations, seed, resolve_threads(test_threads));
      json j;
      j["statistic"] = r.statistic;
      j["method"] = std::string(ir2::to_string(r.method));
      j["mode"] = std::string(ir2::to_string(r.mode));
      j["p_value"] = r.p_value;
      j["permutations"] = r.permutations;
      j["exceedances"] = r.exceedances;
      j["seed"] = r.seed;
      j["n"] = r.n;
      j["null_mean_theoretical"] = nullable(r.null_mean_theoretical);
      j["z_score"] = nullable(r.z_score);
      j["dropped_rows"] = ds.dropped_rows;
      if (r.mode == ir2::TestMode::asymptotic_conjectured) {
        j["note"] = "normal limit is conjectured, not proven";
      }
      print(j);
    } else if (permdist->parsed()) {
      const ir2::Permutation a(parse_permutation(perm_a));
      const ir2::Permutation b(parse_permutation(perm_b));
      if (a.size() != b.size()) throw ir2::InputError("permutations differ in length");
      double value = 0.0;
      json j;
      if (metric == "d_nu") {
        value = ir2::d_nu(a, b);
        if (a.size() <= 12) {
          const ir2::Rational q = ir2::d_nu_exact(a, b);
          j["exact"] = std::to_string(q.num) + "/" + std::to_string(q.den);
        }
      } else if (metric == "d_nu_sym") {
        value = ir2::d_nu_symmetric(a, b);
      } else {
        ir2::PermutationMetric m;
        try {
          m = ir2::parse_permutation_metric(metric);
        } catch (const ir2::InputError& e) {
          throw UsageError(e.what());
        }
        value = ir2::classical_metric(m, a, b);
      }
      json out;
      out["metric"] = metric;
      out["n"] = a.size();
      out["value"] = value;
      if (j.contains("exact")) out["exact"] = j["exact"];
      print(out);
    } else if (simulate->parsed()) {
      const std::uint64_t seed = sim_seed.resolve();
      const std::size_t threads = resolve_threads(sim_threads);
      auto parse_methods = [&](std::vector<ir2::Method> fallback) {
        if (sim_methods.empty()) return fallback;
        try {
          return map_names<ir2::Method>(sim_methods, ir2::parse_method);
        } catch (const ir2::InputError& e) {
          throw UsageError(e.what());
        }
      };
      for (const auto& m : sim_models) {
        try {
          ir2::find_model(m);
        } catch (const ir2::InputError& e) {
          throw UsageError(e.what());
        }
      }
      ir2::ExperimentReport report;
      if (study == "null") {
        ir2::NullStudyConfig c;
        c.n = sim_n.value_or(c.n);
        c.reps = sim_reps.value_or(c.reps);
        c.bins = sim_bins;
        c.seed = seed;
        c.threads = threads;
        report = ir2::null_moment_study(c);
      } else if (study == "power") {
        ir2::PowerStudyConfig c;
        if (!sim_models.empty()) c.models = sim_models;
        if (!sim_lambdas.empty()) c.lambdas = sim_lambdas;
        c.methods = parse_methods(c.methods);
        c.n = sim_n.value_or(c.n);
        c.reps = sim_reps.value_or(c.reps);
        c.permutations = sim_permutations;
        c.alpha = sim_alpha;
        c.seed = seed;
        c.threads = threads;
        report = ir2::power_study(c);
      } else if (study == "selection") {
        ir2::SelectionStudyConfig c;
        if (!sim_models.empty()) c.models = sim_models;
        if (!sim_n_list.empty()) c.n_list = sim_n_list;
        if (sim_n) c.n_list = {*sim_n};
        c.p = sim_p.value_or(c.p);
        c.reps = sim_reps.value_or(c.reps);
        c.seed = seed;
        c.threads = threads;
        report = ir2::selection_study(c);
      } else if (study == "figure1") {
        ir2::ScatterStudyConfig c;
        if (!sim_models.empty()) c.models = sim_models;
        if (!sim_noise.empty()) c.noise_levels = sim_noise;
        c.n = sim_n.value_or(c.n);
        c.reps = sim_reps.value_or(c.reps);
        c.seed = seed;
        c.threads = threads;
        report = ir2::scatter_study(c);
      } else if (study == "runtime") {
        ir2::RuntimeStudyConfig c;
        if (!sim_sizes.empty()) c.sizes = sim_sizes;
        c.methods = parse_methods(c.methods);
        c.reps = sim_reps.value_or(c.reps);
        c.seed = seed;
        report = ir2::runtime_study(c);
      } else if (study == "population") {
        report.study = "population";
        if (sim_model == "product_uniform" && !sim_reps) {
          const ir2::PopulationTarget t = ir2::nu_product_uniform();
          report.add({t.model, 0, 0.0, "quadrature", "nu", t.value, t.abs_error_bound, 1, "closed_form"});
        } else {
          ir2::PlugInOptions o;
          o.seed = seed;
          o.threads = threads;
          if (sim_reps) o.t_grid_size = *sim_reps;
          const ir2::PopulationTarget t = ir2::nu_plug_in_mc(sim_model, o);
          report.add({t.model, 0, 0.0, "plug_in_mc", "nu", t.value, t.abs_error_bound, o.t_grid_size, ""});
        }
      } else if (study == "sample") {
        ir2::ModelSpec spec;
        try {
          ir2::find_model(sim_model);
        } catch (const ir2::InputError& e) {
          throw UsageError(e.what());
        }
        spec.name = sim_model;
        spec.n = sim_n.value_or(spec.n);
        spec.p = sim_p.value_or(std::max<std::size_t>(1, ir2::find_model(sim_model).min_p));
        spec.lambda = sim_lambda;
        spec.noise_sd = sim_noise_sd;
        spec.seed = seed;
        const ir2::Sample s = ir2::generate(spec);
        if (out_path.empty() || out_path == "-") {
          write_sample_csv(s, std::cout);
        } else {
          std::ofstream os(out_path, std::ios::binary);
          if (!os) throw ir2::InputError("cannot write '" + out_path + "'");
          write_sample_csv(s, os);
        }
        return kOk;
      } else {
        throw UsageError("unknown study '" + study + "'");
      }
      write_report(report, out_path, format);
    } else if (models->parsed()) {
      json arr = json::array();
      for (const auto& m : ir2::registered_models()) {
        json j;
        j["name"] = m.name;
        j["formula"] = m.formula;
        j["min_p"] = m.min_p;
        arr.push_back(j);
      }
      print(arr);
    }
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kUsage;
  } catch (const ir2::DegenerateResponseError& e) {
    std::cerr << json{{"error", "degenerate"}, {"message", e.what()}}.dump() << '\n';
    return kNumerical;
  } catch (const ir2::NumericalError& e) {
    std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << '\n';
    return kNumerical;
  } catch (const ir2::InputError& e) {
    std::cerr << json{{"error", "data"}, {"message", e.what()}}.dump() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return kNumerical;
  }
}
