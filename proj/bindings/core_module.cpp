// Python bindings for the main operations. Permutations cross the boundary
// as lists of 1-based columns; exact rationals come back as
// fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "permutonlab/dperm.hpp"
#include "permutonlab/io.hpp"
#include "permutonlab/oracle.hpp"
#include "permutonlab/permuton.hpp"
#include "permutonlab/schnyder.hpp"
#include "permutonlab/separable.hpp"

namespace py = pybind11;
using namespace permutonlab;

namespace {

using Cols = std::vector<std::vector<int>>;

DPermutation perm(const Cols& cols) { return DPermutation::from_one_based(cols); }

py::object fraction(const Rational& r) {
    return py::module_::import("fractions").attr("Fraction")(rational_string(r));
}

py::object big_int(const BigInt& v) {
    return py::module_::import("builtins").attr("int")(v.str());
}

Rational rational_from(const py::object& obj) {
    // accepts int, Fraction, or "p/q" strings
    return Rational(py::str(obj).cast<std::string>());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "d-dimensional permutations and permutons: pattern statistics, Schnyder wood "
              "pipelines, and separable-permutation samplers";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    // core permutation operations
    m.def("validate", &validate_columns, py::arg("cols"),
          "Problems with the given 1-based columns; empty means valid.");
    m.def(
        "pattern_at",
        [](const Cols& sigma, const std::vector<int>& indices) {
            return pattern_at(perm(sigma), IndexSet(indices)).one_based_cols();
        },
        py::arg("sigma"), py::arg("indices"));
    m.def(
        "occ",
        [](const Cols& tau, const Cols& sigma, int k_max) {
            return big_int(occ(perm(tau), perm(sigma), k_max));
        },
        py::arg("tau"), py::arg("sigma"), py::arg("k_max") = kDefaultKMax);
    m.def(
        "freq",
        [](const Cols& tau, const Cols& sigma, int k_max) {
            return fraction(freq(perm(tau), perm(sigma), k_max));
        },
        py::arg("tau"), py::arg("sigma"), py::arg("k_max") = kDefaultKMax);
    m.def(
        "freq_sampled",
        [](const Cols& tau, const Cols& sigma, long long trials, std::uint64_t seed) {
            const McEstimate est = freq_sampled(perm(tau), perm(sigma), trials, seed);
            return py::make_tuple(est.estimate, est.std_error);
        },
        py::arg("tau"), py::arg("sigma"), py::arg("trials"), py::arg("seed"));
    m.def(
        "block_sum",
        [](const Cols& a, const Cols& b, const std::vector<int>& signs) {
            return block_sum(perm(a), perm(b), SignSequence(signs)).one_based_cols();
        },
        py::arg("a"), py::arg("b"), py::arg("signs"));
    m.def(
        "inverse_marginal",
        [](const Cols& sigma, int j) { return inverse_marginal(perm(sigma), j); },
        py::arg("sigma"), py::arg("j"));
    m.def(
        "perm_of_points",
        [](const std::vector<std::vector<double>>& pts) {
            return perm_of_points(pts).one_based_cols();
        },
        py::arg("points"));
    m.def(
        "marginal",
        [](const Cols& sigma, const std::vector<int>& coords) {
            return marginal(perm(sigma), coords).one_based_cols();
        },
        py::arg("sigma"), py::arg("coords"));
    m.def(
        "inversion_count",
        [](const Cols& sigma, int j) { return inversion_count(perm(sigma), j); },
        py::arg("sigma"), py::arg("j") = 1);

    // empirical permutons
    m.def(
        "cdf", [](const Cols& sigma, const std::vector<double>& x) {
            return EmpiricalPermuton(perm(sigma)).cdf(x);
        },
        py::arg("sigma"), py::arg("x"));
    m.def(
        "cdf_sup_distance",
        [](const Cols& a, const Cols& b) {
            return cdf_sup_distance(EmpiricalPermuton(perm(a)), EmpiricalPermuton(perm(b)));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "box_distance",
        [](const Cols& a, const Cols& b, const std::string& mode) {
            const auto di =
                box_distance(EmpiricalPermuton(perm(a)), EmpiricalPermuton(perm(b)),
                             mode == "exact" ? BoxDistanceMode::exact : BoxDistanceMode::bound);
            return py::make_tuple(di.lower, di.upper);
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "bound");
    m.def(
        "sample_pattern",
        [](const Cols& sigma, int k, std::uint64_t seed) {
            return sample_pattern(EmpiricalPermuton(perm(sigma)), k, seed).one_based_cols();
        },
        py::arg("sigma"), py::arg("k"), py::arg("seed"));
    m.def(
        "freq_permuton",
        [](const Cols& tau, const Cols& sigma, long long trials, std::uint64_t seed) {
            const McEstimate est =
                freq_permuton(perm(tau), EmpiricalPermuton(perm(sigma)), trials, seed);
            return py::make_tuple(est.estimate, est.std_error);
        },
        py::arg("tau"), py::arg("sigma"), py::arg("trials"), py::arg("seed"));
    m.def(
        "freq_permuton_exact",
        [](const Cols& tau, const Cols& sigma) {
            return fraction(freq_permuton_exact(perm(tau), EmpiricalPermuton(perm(sigma))));
        },
        py::arg("tau"), py::arg("sigma"));
    m.def(
        "normalized_cloud",
        [](const Cols& sigma) { return normalized_cloud(perm(sigma)).points; },
        py::arg("sigma"), "Cube-center point cloud of a permutation.");

    // Schnyder pipeline
    m.def("validate_string", &validate_string, py::arg("s"));
    m.def(
        "string_to_walk", [](const std::string& s) { return string_to_walk(s).steps; },
        py::arg("s"));
    m.def(
        "walk_to_string",
        [](const std::vector<std::pair<int, int>>& steps) {
            ConeWalk w;
            w.steps = steps;
            return walk_to_string(w);
        },
        py::arg("steps"));
    m.def(
        "schnyder_perm_from_string",
        [](const std::string& s) { return schnyder_perm_from_string(s).one_based_cols(); },
        py::arg("s"));
    m.def(
        "schnyder_trees",
        [](const std::string& s) {
            const ConeWalk w = string_to_walk(s);
            const CoalescentWalkProcess green(w, WalkVariant::green);
            const CoalescentWalkProcess red(w, WalkVariant::red);
            const auto [gt, rt] = trees_from_processes(green, red);
            py::dict out;
            out["green_parent"] = gt.parent;
            out["green_children"] = gt.children;
            out["red_parent"] = rt.parent;
            out["red_children"] = rt.children;
            return out;
        },
        py::arg("s"));
    m.def(
        "sample_uniform_schnyder",
        [](int n, std::uint64_t seed, const std::string& method) {
            return sample_uniform_schnyder(n, seed,
                                           method == "rejection" ? SchnyderSampleMethod::rejection
                                                                 : SchnyderSampleMethod::dp);
        },
        py::arg("n"), py::arg("seed"), py::arg("method") = "dp");
    m.def("enumerate_schnyder_strings", &enumerate_schnyder_strings, py::arg("n"),
          py::arg("max_n") = 6);

    // separable permutations
    m.def(
        "is_separable", [](const Cols& sigma) { return is_separable(perm(sigma)); },
        py::arg("sigma"));
    m.def(
        "sample_uniform_separable",
        [](int n, int d, std::uint64_t seed) {
            return sample_uniform_separable(n, d, seed).one_based_cols();
        },
        py::arg("n"), py::arg("d"), py::arg("seed"));
    m.def(
        "enumerate_separable",
        [](int n, int d) {
            std::vector<Cols> out;
            for (const auto& p : enumerate_separable(n, d)) out.push_back(p.one_based_cols());
            return out;
        },
        py::arg("n"), py::arg("d"));
    m.def(
        "sample_brownian_pattern",
        [](int k, const std::vector<double>& p, std::uint64_t seed) {
            return sample_brownian_pattern(k, p, seed).one_based_cols();
        },
        py::arg("k"), py::arg("p"), py::arg("seed"));
    m.def(
        "offspring_law",
        [](int d) {
            const OffspringLaw law = offspring_law(d);
            py::dict out;
            out["a"] = law.a;
            out["b"] = law.b;
            out["mean"] = law.mean();
            out["variance"] = law.variance();
            return out;
        },
        py::arg("d"));

    // oracles
    m.def(
        "exact_pattern_law",
        [](int k, const std::vector<py::object>& p) {
            std::vector<Rational> pr;
            for (const auto& q : p) pr.push_back(rational_from(q));
            py::dict out;
            for (const auto& [tau, mass] : exact_pattern_law(k, pr))
                out[py::str(tau.to_string())] = fraction(mass);
            return out;
        },
        py::arg("k"), py::arg("p"),
        "Exact pattern law of the Brownian separable d-permuton; p entries may "
        "be Fractions, ints, or 'p/q' strings.");
    m.def(
        "verify",
        [](int max_n, int max_schnyder, int max_k) {
            EnumerationBudget budget;
            budget.max_perm_size = max_n;
            budget.max_schnyder_size = max_schnyder;
            budget.max_pattern_size = max_k;
            std::vector<py::dict> out;
            for (const auto& res : run_verification(budget)) {
                py::dict c;
                c["name"] = res.name;
                c["pass"] = res.pass;
                c["millis"] = res.millis;
                c["detail"] = res.detail;
                out.push_back(std::move(c));
            }
            return out;
        },
        py::arg("max_n") = 3, py::arg("max_schnyder") = 3, py::arg("max_k") = 3,
        "Run the oracle cross-check manifest and return one dict per check.");
}
