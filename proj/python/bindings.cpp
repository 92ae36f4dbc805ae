#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "jointsup/asymptotics.hpp"
#include "jointsup/errors.hpp"
#include "jointsup/exact.hpp"
#include "jointsup/gauss.hpp"
#include "jointsup/montecarlo.hpp"

namespace py = pybind11;
using namespace jointsup;

namespace {

NormalizedParams params(double a1, double a2, double c1, double c2, double sigma1, double sigma2) {
    return normalize(ModelParams{sigma1, sigma2, c1, c2, a1, a2});
}

py::dict result_dict(const ProbabilityResult& r) {
    py::dict d;
    d["p"] = r.p;
    d["log_p"] = r.log_p;
    d["branch"] = std::string(to_string(r.branch));
    if (r.terms) {
        d["terms"] = py::make_tuple((*r.terms)[0], (*r.terms)[1], (*r.terms)[2], (*r.terms)[3]);
    } else {
        d["terms"] = py::none();
    }
    return d;
}

py::dict form_dict(const AsymptoticForm& f) {
    py::dict d;
    d["prefactor"] = f.prefactor;
    d["power"] = f.power;
    d["rate"] = f.rate;
    d["kind"] = std::string(to_string(f.kind));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Joint crossing probabilities of two drifted Brownian suprema.";

    static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
    static py::exception<NumericalIntegrityError> integrity_error(m, "NumericalIntegrityError",
                                                                  PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            py::set_error(validation_error, e.what());
        } catch (const NumericalIntegrityError& e) {
            py::set_error(integrity_error, e.what());
        }
    });

    m.def("norm_sf", &gauss::norm_sf, py::arg("x"));
    m.def("log_norm_sf", [](double x) { return gauss::log_norm_sf(x).log_p; }, py::arg("x"));
    m.def("bvn_cdf", [](double rho, double s, double t) { return gauss::bvn_cdf({rho, s, t}); },
          py::arg("rho"), py::arg("s"), py::arg("t"));
    m.def("bvn_sf", [](double rho, double s, double t) { return gauss::bvn_sf({rho, s, t}); },
          py::arg("rho"), py::arg("s"), py::arg("t"));
    m.def("log_bvn_sf", [](double rho, double s, double t) { return gauss::log_bvn_sf({rho, s, t}).log_p; },
          py::arg("rho"), py::arg("s"), py::arg("t"));

    m.def("pi1d", [](double a, double c, double T) { return result_dict(pi1d(a, c, T)); },
          py::arg("a"), py::arg("c"), py::arg("T"));
    m.def("pi_joint",
          [](double a1, double a2, double c1, double c2, double T, double s1, double s2) {
              return result_dict(pi_joint(params(a1, a2, c1, c2, s1, s2), T));
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"),
          py::arg("sigma1") = 1.0, py::arg("sigma2") = 1.0);
    m.def("log_pi_joint",
          [](double a1, double a2, double c1, double c2, double T, double s1, double s2) {
              return log_pi_joint(params(a1, a2, c1, c2, s1, s2), T).log_p;
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"),
          py::arg("sigma1") = 1.0, py::arg("sigma2") = 1.0);
    m.def("pi_infinite",
          [](double a1, double a2, double c1, double c2, double s1, double s2) {
              return result_dict(pi_infinite(params(a1, a2, c1, c2, s1, s2)));
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"),
          py::arg("sigma1") = 1.0, py::arg("sigma2") = 1.0);

    m.def("classify",
          [](double a1, double a2, double c1, double c2, double T) {
              return std::string(to_string(many_source_classify(normalize(a1, a2, c1, c2), T)));
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"));
    m.def("many_source_asym",
          [](double a1, double a2, double c1, double c2, double T) {
              return form_dict(many_source_asym(normalize(a1, a2, c1, c2), T));
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"));
    m.def("log_many_source",
          [](double a1, double a2, double c1, double c2, double T, double N) {
              return log_many_source(normalize(a1, a2, c1, c2), T, N).log_p;
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"), py::arg("N"));
    m.def("high_threshold",
          [](double a, double c1, double c2, double T, double b) {
              return high_threshold(a, c1, c2, T, b).log_p;
          },
          py::arg("a"), py::arg("c1"), py::arg("c2"), py::arg("T"), py::arg("b"));

    m.def("simulate_joint",
          [](double a1, double a2, double c1, double c2, double T, std::uint64_t paths,
             std::uint64_t steps, std::uint64_t seed, bool bridge_correction, unsigned workers) {
              SimConfig cfg;
              cfg.paths = paths;
              cfg.steps = steps;
              cfg.seed = seed;
              cfg.bridge_correction = bridge_correction;
              cfg.workers = workers;
              SimEstimate e;
              {
                  py::gil_scoped_release release;
                  e = simulate_joint(normalize(a1, a2, c1, c2), T, cfg);
              }
              py::dict d;
              d["p_hat"] = e.p_hat;
              d["std_err"] = e.std_err;
              d["paths"] = e.paths;
              d["steps"] = e.steps;
              return d;
          },
          py::arg("a1"), py::arg("a2"), py::arg("c1"), py::arg("c2"), py::arg("T"),
          py::arg("paths") = 100000, py::arg("steps") = 512, py::arg("seed") = 0,
          py::arg("bridge_correction") = true, py::arg("workers") = 0);

    m.def("run_cli",
          [](std::vector<std::string> args) {
              args.insert(args.begin(), "jointsup");
              std::vector<char*> argv;
              for (auto& a : args) argv.push_back(a.data());
              std::ostringstream out, err;
              const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
