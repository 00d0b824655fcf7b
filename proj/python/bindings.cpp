#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ir2/coefficient.hpp"
#include "ir2/error.hpp"
#include "ir2/ford.hpp"
#include "ir2/inference.hpp"
#include "ir2/permutations.hpp"
#include "ir2/population.hpp"
#include "ir2/simulation.hpp"

namespace py = pybind11;
using namespace ir2;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw InputError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) return Matrix::column_vector(std::vector<double>(a.data(), a.data() + a.size()));
  if (a.ndim() != 2) throw InputError("expected a one- or two-dimensional array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict result_dict(const CoefficientResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["method"] = std::string(to_string(r.method));
  d["n"] = r.n;
  d["n0"] = r.n0 ? py::cast(*r.n0) : py::none();
  d["seed"] = r.seed;
  d["replicates"] = r.replicates;
  d["tie_events"] = r.tie_events;
  return d;
}

py::dict path_dict(const SelectionPath& p) {
  py::dict d;
  d["chosen"] = p.chosen;
  d["scores"] = p.scores;
  d["stop_reason"] = std::string(to_string(p.stop_reason));
  d["seed"] = p.seed;
  d["rejected_index"] = p.rejected_index ? py::cast(*p.rejected_index) : py::none();
  d["rejected_score"] = p.rejected_score ? py::cast(*p.rejected_score) : py::none();
  return d;
}

py::dict test_dict(const PermutationTestResult& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["method"] = std::string(to_string(r.method));
  d["mode"] = std::string(to_string(r.mode));
  d["p_value"] = r.p_value;
  d["permutations"] = r.permutations;
  d["exceedances"] = r.exceedances;
  d["seed"] = r.seed;
  d["n"] = r.n;
  d["null_mean_theoretical"] = r.null_mean_theoretical ? py::cast(*r.null_mean_theoretical) : py::none();
  d["z_score"] = r.z_score ? py::cast(*r.z_score) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Integrated R^2 dependence coefficient: estimators, selection and tests";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InsufficientSampleError>(m, "InsufficientSampleError", input_error.ptr());
  py::register_exception<DegenerateResponseError>(m, "DegenerateResponseError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "nu",
      [](const Array& y, const Array& x, std::uint64_t seed, std::size_t replicates) {
        NuOptions o;
        o.replicates = replicates;
        return result_dict(nu_general(to_vector(y), to_matrix(x), seed, o));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1, py::arg("replicates") = 1,
      "General estimator nu_n(Y, X); x may be 1-D or n x p.");
  m.def(
      "nu_oracle",
      [](const Array& y, const Array& x, std::uint64_t seed) {
        return result_dict(nu_general_oracle(to_vector(y), to_matrix(x), seed));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1);
  m.def(
      "nu_1dim",
      [](const Array& y, const Array& x, std::uint64_t seed, std::size_t replicates) {
        return result_dict(nu_1dim(to_vector(y), to_vector(x), seed, replicates));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1, py::arg("replicates") = 1);
  m.def(
      "xi",
      [](const Array& y, const Array& x, std::uint64_t seed, std::size_t replicates) {
        return result_dict(xi_coefficient(to_vector(y), to_vector(x), seed, replicates));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1, py::arg("replicates") = 1);
  m.def(
      "ford_select",
      [](const Array& y, const Array& x, std::uint64_t seed, std::size_t max_steps, bool standardize,
         bool full) {
        FordOptions o;
        o.max_steps = max_steps;
        o.standardize = standardize;
        const auto yv = to_vector(y);
        const auto xm = to_matrix(x);
        return path_dict(full ? ford_full_ordering(yv, xm, seed, o) : ford_select(yv, xm, seed, o));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1, py::arg("max_steps") = 0,
      py::arg("standardize") = true, py::arg("full") = false,
      "Forward ordering by dependence; indices are 0-based columns.");
  m.def(
      "permutation_test",
      [](const Array& y, const Array& x, const std::string& method, std::size_t permutations,
         std::uint64_t seed, std::size_t threads) {
        return test_dict(
            permutation_test(to_vector(y), to_matrix(x), parse_method(method), permutations, seed, threads));
      },
      py::arg("y"), py::arg("x"), py::arg("method") = "nu1d", py::arg("permutations") = 1000,
      py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "asymptotic_test",
      [](const Array& y, const Array& x, std::uint64_t seed) {
        return test_dict(asymptotic_test(to_vector(y), to_vector(x), seed));
      },
      py::arg("y"), py::arg("x"), py::arg("seed") = 1);
  m.def("bh_adjust", [](const std::vector<double>& p) { return bh_adjust(p); }, py::arg("p_values"));
  m.def(
      "d_nu",
      [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return d_nu(Permutation(a), Permutation(b));
      },
      py::arg("sigma"), py::arg("pi"));
  m.def(
      "d_nu_symmetric",
      [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return d_nu_symmetric(Permutation(a), Permutation(b));
      },
      py::arg("sigma"), py::arg("pi"));
  m.def(
      "permutation_metric",
      [](const std::string& name, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return classical_metric(parse_permutation_metric(name), Permutation(a), Permutation(b));
      },
      py::arg("metric"), py::arg("sigma"), py::arg("pi"));
  m.def("nu_product_uniform", [] {
    const PopulationTarget t = nu_product_uniform();
    return py::make_tuple(t.value, t.abs_error_bound);
  });
  m.def(
      "weight_comparison",
      [](std::size_t n, std::size_t r) {
        const WeightComparison w = weight_comparison(n, r);
        py::dict d;
        d["w_nu"] = w.w_nu;
        d["w_xi"] = w.w_xi;
        d["in_Ln"] = w.in_Ln;
        return d;
      },
      py::arg("n"), py::arg("r"));
  m.def(
      "generate",
      [](const std::string& model, std::size_t n, std::size_t p, double lambda, double noise_sd,
         std::uint64_t seed) {
        ModelSpec spec{model, n, p, lambda, noise_sd, seed};
        const Sample s = generate(spec);
        Array x({s.n(), s.p()});
        std::copy(s.x.data().begin(), s.x.data().end(), x.mutable_data());
        Array y(static_cast<py::ssize_t>(s.n()));
        std::copy(s.y.begin(), s.y.end(), y.mutable_data());
        return py::make_tuple(y, x);
      },
      py::arg("model"), py::arg("n") = 100, py::arg("p") = 1, py::arg("lambda_") = 0.0,
      py::arg("noise_sd") = 0.0, py::arg("seed") = 1, "Returns (y, x) with x of shape (n, p).");
  m.def("models", [] {
    std::vector<std::string> names;
    for (const auto& info : registered_models()) names.push_back(info.name);
    return names;
  });
}
