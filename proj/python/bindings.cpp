// Python module exposing the main operations: constants, limit laws, the gas
// sampler, empirical-measure maps, rate functions, and the equilibrium solver.
// math.inf stands for the p = infinity exponent throughout.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schatten/coulomb.hpp"
#include "schatten/empirical.hpp"
#include "schatten/equilibrium.hpp"
#include "schatten/ratefn.hpp"
#include "schatten/special.hpp"

namespace py = pybind11;
using namespace schatten;

namespace {

Exponent to_exponent(double p) {
    return std::isinf(p) ? Exponent::infinite() : Exponent::finite(p);
}

double rate_to_float(const Rate& r) {
    return r.is_infinite() ? std::numeric_limits<double>::infinity() : r.value();
}

RateEnsemble parse_rate_ensemble(const std::string& s) {
    if (s == "eigenvalue") return RateEnsemble::eigenvalue;
    if (s == "eigenvalue_inf") return RateEnsemble::eigenvalue_inf;
    if (s == "singular") return RateEnsemble::singular;
    throw std::invalid_argument("ensemble must be eigenvalue|eigenvalue_inf|singular");
}

}  // namespace

PYBIND11_MODULE(schattengas, m) {
    m.doc() = "spectral measures of random matrices in Schatten p-balls: "
              "Coulomb-gas sampling, limit laws, rate functions, equilibrium solver";

    py::enum_<Ensemble>(m, "Ensemble")
        .value("eigenvalue", Ensemble::eigenvalue)
        .value("singular", Ensemble::singular);

    py::class_<ModelConstants>(m, "ModelConstants")
        .def_readonly("p", &ModelConstants::p)
        .def_readonly("beta", &ModelConstants::beta)
        .def_readonly("b_p", &ModelConstants::law_edge)
        .def_readonly("alpha_p", &ModelConstants::h_moment)
        .def_readonly("r_p", &ModelConstants::gas_edge)
        .def_readonly("B", &ModelConstants::free_energy)
        .def_readonly("C", &ModelConstants::rate_shift)
        .def("__repr__", [](const ModelConstants& c) {
            return "ModelConstants(p=" + std::to_string(c.p) +
                   ", beta=" + std::to_string(c.beta) + ")";
        });

    m.def("model_constants", &model_constants, py::arg("p"), py::arg("beta"));
    m.def(
        "rate_constant",
        [](double p, double beta) { return rate_constant(to_exponent(p), beta); },
        py::arg("p"), py::arg("beta"));
    m.def(
        "gas_dims",
        [](int n, double beta) {
            const GasDims d = gas_dims(n, beta);
            return py::make_tuple(d.ell, d.m);
        },
        py::arg("n"), py::arg("beta"));

    m.def("h_density", &h_density, py::arg("p"), py::arg("x"));
    m.def("h_cdf", &h_cdf, py::arg("p"), py::arg("x"));
    m.def(
        "log_energy_limit", [](double p) { return log_energy_limit(to_exponent(p)); },
        py::arg("p"));

    py::class_<LimitLaw>(m, "LimitLaw")
        .def(py::init([](double p, Ensemble ens, int cdf_cells) {
                 return LimitLaw(to_exponent(p), ens, cdf_cells);
             }),
             py::arg("p"), py::arg("ensemble") = Ensemble::eigenvalue,
             py::arg("cdf_cells") = 4096)
        .def("density", &LimitLaw::density, py::arg("x"))
        .def("cdf", &LimitLaw::cdf, py::arg("x"))
        .def("quantile", &LimitLaw::quantile, py::arg("u"))
        .def_property_readonly("support", [](const LimitLaw& law) {
            return py::make_tuple(law.support_min(), law.support_max());
        })
        .def(
            "sample",
            [](const LimitLaw& law, std::size_t count, uint64_t seed, uint64_t stream) {
                Philox rng = Philox::stream(seed, stream);
                return law.sample(rng, count);
            },
            py::arg("count"), py::arg("seed"), py::arg("stream") = 0)
        .def("tabulate", [](const LimitLaw& law, int n) { return tabulate_density(law, n); },
             py::arg("n"));

    py::class_<GasConfig>(m, "GasConfig")
        .def(py::init([](int n, double p, double beta, Ensemble ensemble, int sweeps,
                         int burn_in, int thin, double proposal_sigma, uint64_t seed) {
                 GasConfig c{n, p, beta, ensemble, sweeps, burn_in, thin, proposal_sigma, seed};
                 c.validate();
                 return c;
             }),
             py::arg("n"), py::arg("p") = 2.0, py::arg("beta") = 2.0,
             py::arg("ensemble") = Ensemble::eigenvalue, py::arg("sweeps") = 2000,
             py::arg("burn_in") = 500, py::arg("thin") = 1,
             py::arg("proposal_sigma") = 0.5, py::arg("seed") = 0)
        .def_readwrite("n", &GasConfig::n)
        .def_readwrite("p", &GasConfig::p)
        .def_readwrite("beta", &GasConfig::beta)
        .def_readwrite("ensemble", &GasConfig::ensemble)
        .def_readwrite("sweeps", &GasConfig::sweeps)
        .def_readwrite("burn_in", &GasConfig::burn_in)
        .def_readwrite("thin", &GasConfig::thin)
        .def_readwrite("proposal_sigma", &GasConfig::proposal_sigma)
        .def_readwrite("seed", &GasConfig::seed);

    py::class_<GasChain>(m, "GasChain")
        .def_readonly("states", &GasChain::states)
        .def_readonly("acceptance_rate", &GasChain::acceptance_rate)
        .def_readonly("config", &GasChain::config);

    m.def(
        "log_density_unnormalized",
        [](const std::vector<double>& state, const GasConfig& cfg) {
            return log_density_unnormalized(state, cfg);
        },
        py::arg("state"), py::arg("config"));
    m.def("mcmc_run", &mcmc_run, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "rejection_sample",
        [](const GasConfig& cfg, std::size_t count, uint64_t seed, uint64_t stream) {
            Philox rng = Philox::stream(seed, stream);
            return rejection_sample(cfg, count, rng);
        },
        py::arg("config"), py::arg("count"), py::arg("seed"), py::arg("stream") = 0,
        py::call_guard<py::gil_scoped_release>());

    py::class_<EmpiricalMeasure>(m, "EmpiricalMeasure")
        .def(py::init<std::vector<double>>(), py::arg("atoms"))
        .def_property_readonly("atoms", &EmpiricalMeasure::atoms)
        .def("__len__", &EmpiricalMeasure::size);

    m.def(
        "normalize_cone",
        [](const std::vector<double>& x, double p) { return normalize_cone(x, p); },
        py::arg("x"), py::arg("p"));
    m.def(
        "normalize_uniform",
        [](const std::vector<double>& x, double u, double p, double beta) {
            return normalize_uniform(x, u, p, beta);
        },
        py::arg("x"), py::arg("u"), py::arg("p"), py::arg("beta"));
    m.def(
        "normalize_singular",
        [](const std::vector<double>& x, std::optional<double> u, double p, double beta) {
            return normalize_singular(x, u, p, beta);
        },
        py::arg("x"), py::arg("u"), py::arg("p"), py::arg("beta"));
    m.def("p_moment", &p_moment, py::arg("mu"), py::arg("p"));
    m.def("log_energy_offdiag", &log_energy_offdiag, py::arg("mu"));
    m.def("pushforward_scale", &pushforward_scale, py::arg("mu"), py::arg("c"), py::arg("p"));
    m.def("pushforward_square", &pushforward_square, py::arg("mu"));
    m.def("pushforward_sqrt", &pushforward_sqrt, py::arg("mu"));
    m.def("ks_distance", &ks_distance, py::arg("mu"), py::arg("law"));
    m.def("wasserstein1", &wasserstein1, py::arg("mu"), py::arg("law"));

    py::class_<GridMeasure>(m, "GridMeasure")
        .def(py::init([](double left, double width, std::vector<double> weights) {
                 GridMeasure mu{left, width, std::move(weights)};
                 mu.validate();
                 return mu;
             }),
             py::arg("left"), py::arg("width"), py::arg("weights"))
        .def_readonly("left", &GridMeasure::left)
        .def_readonly("width", &GridMeasure::width)
        .def_readonly("weights", &GridMeasure::weights)
        .def("moment", &GridMeasure::moment, py::arg("q"))
        .def("mass_outside", &GridMeasure::mass_outside, py::arg("a"), py::arg("b"))
        .def_static("discretize", &GridMeasure::discretize, py::arg("law"), py::arg("left"),
                    py::arg("right"), py::arg("cells"));
    m.def("rescale_to_unit_moment", &rescale_to_unit_moment, py::arg("mu"), py::arg("q"));

    m.def("log_kernel_cell_pair", &log_kernel_cell_pair, py::arg("a"), py::arg("b"),
          py::arg("c"), py::arg("d"));
    m.def(
        "grid_log_energy",
        [](const GridMeasure& mu) { return grid_log_energy(mu); }, py::arg("mu"));

    m.def(
        "rate_spectral",
        [](const GridMeasure& mu, double p, double beta, const std::string& ensemble) {
            return rate_to_float(
                rate_spectral(mu, to_exponent(p), beta, parse_rate_ensemble(ensemble)));
        },
        py::arg("mu"), py::arg("p"), py::arg("beta"), py::arg("ensemble") = "eigenvalue");
    m.def(
        "rate_gas",
        [](const GridMeasure& mu, double p, double beta) {
            return rate_to_float(rate_gas(mu, p, beta));
        },
        py::arg("mu"), py::arg("p"), py::arg("beta"));
    m.def(
        "rate_pair",
        [](const GridMeasure& mu, double mval, double p, double beta) {
            return rate_to_float(rate_pair(mu, mval, p, beta));
        },
        py::arg("mu"), py::arg("m"), py::arg("p"), py::arg("beta"));
    m.def(
        "beta_rate",
        [](double y, double a, double b) { return rate_to_float(beta_rate(y, a, b)); },
        py::arg("y"), py::arg("a"), py::arg("b"));

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("minimizer", &SolveReport::minimizer)
        .def_readonly("objective", &SolveReport::objective)
        .def_readonly("fw_gap", &SolveReport::fw_gap)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("moment", &SolveReport::moment);

    m.def(
        "solve_equilibrium",
        [](double p, double beta, double L, int cells, double gap_tol, long max_iter,
           bool away_steps, Ensemble ensemble) {
            SolveOptions opt;
            opt.gap_tol = gap_tol;
            opt.max_iter = max_iter;
            opt.away_steps = away_steps;
            return solve_equilibrium(to_exponent(p), beta, L, cells, opt, ensemble);
        },
        py::arg("p"), py::arg("beta"), py::arg("L"), py::arg("cells") = 1024,
        py::arg("gap_tol") = 1e-5, py::arg("max_iter") = 4000000,
        py::arg("away_steps") = false, py::arg("ensemble") = Ensemble::eigenvalue,
        py::call_guard<py::gil_scoped_release>());
}
