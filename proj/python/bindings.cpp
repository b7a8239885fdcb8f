// Python bindings for the main operations: theta norms, H(X) and A_n
// estimators, the Green function, atlases, identity residuals and the
// energy bound.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arakelov/elkies.hpp"
#include "arakelov/fay.hpp"
#include "arakelov/green.hpp"
#include "arakelov/montecarlo.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"
#include "arakelov/theta.hpp"

namespace py = pybind11;
using namespace arakelov;

namespace {

py::dict estimate_to_dict(const McEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["stderr"] = e.stderr_value;
    d["samples"] = e.samples;
    d["dropped"] = e.dropped;
    return d;
}

py::dict atlas_to_dict(const TorusChartAtlas& a) {
    py::dict d;
    d["m"] = a.m;
    d["centers"] = a.centers;
    d["r1"] = a.r1;
    d["r2"] = a.r2;
    d["C0"] = a.c0;
    d["C1"] = a.c1;
    d["C2"] = a.c2;
    d["M"] = TorusChartAtlas::chart_ratio_bound();
    return d;
}

TorusChartAtlas atlas_from_dict(const py::dict& d) {
    TorusChartAtlas a;
    a.m = d["m"].cast<int>();
    a.centers = d["centers"].cast<std::vector<cd>>();
    a.r1 = d["r1"].cast<double>();
    a.r2 = d["r2"].cast<double>();
    a.c0 = d["C0"].cast<double>();
    a.c1 = d["C1"].cast<double>();
    a.c2 = d["C2"].cast<double>();
    return a;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "theta norms, Green functions and energy bounds on elliptic curves";

    py::class_<PeriodMatrix>(m, "PeriodMatrix")
        .def_static("validate",
                    [](const std::vector<std::vector<cd>>& omega) {
                        return PeriodMatrix::validate(omega);
                    },
                    py::arg("omega"))
        .def_static("from_tau", &PeriodMatrix::from_tau, py::arg("tau"))
        .def_property_readonly("genus", &PeriodMatrix::genus)
        .def_property_readonly("min_eigenvalue", &PeriodMatrix::min_eigenvalue)
        .def_property_readonly("systole", &PeriodMatrix::systole);

    m.def(
        "reduce",
        [](const std::vector<cd>& z, const PeriodMatrix& pm) {
            return reduce(JacobianPoint(z), pm).z;
        },
        py::arg("z"), py::arg("period_matrix"),
        "canonical representative with characteristics in [0,1)^g");

    m.def(
        "theta",
        [](const std::vector<cd>& z, const PeriodMatrix& pm, double tol) {
            const ThetaValue v = theta_series(JacobianPoint(z), pm, tol);
            py::dict d;
            d["value"] = v.value;
            d["norm"] = v.norm;
            d["tail_bound"] = v.tail_bound;
            return d;
        },
        py::arg("z"), py::arg("period_matrix"), py::arg("tol") = 1e-12);

    m.def(
        "theta_norm",
        [](const std::vector<cd>& z, const PeriodMatrix& pm, double tol) {
            return theta_norm(JacobianPoint(z), pm, tol);
        },
        py::arg("z"), py::arg("period_matrix"), py::arg("tol") = 1e-12);

    m.def(
        "theta_norm_pic0",
        [](cd w, cd tau, double tol) {
            return theta_norm_pic0(w, EllipticSurface(tau), tol);
        },
        py::arg("w"), py::arg("tau"), py::arg("tol") = 1e-12);

    m.def(
        "c_g_rho",
        [](int g, double rho) {
            const CgRho c = c_g_rho(g, rho);
            py::dict d;
            d["value"] = c.value;
            d["epsilon_g"] = c.epsilon_g;
            return d;
        },
        py::arg("g"), py::arg("rho"));

    m.def(
        "estimate_hx",
        [](const PeriodMatrix& pm, long samples, std::uint64_t seed, std::uint64_t stream,
           int threads) {
            return estimate_to_dict(
                estimate_hx(pm, samples, SeededSampler(seed, stream), threads));
        },
        py::arg("period_matrix"), py::arg("samples") = 100000, py::arg("seed") = 0,
        py::arg("stream") = 0, py::arg("threads") = 1);

    py::class_<GreenFunction>(m, "GreenFunction")
        .def(py::init([](cd tau) { return GreenFunction(EllipticSurface(tau)); }),
             py::arg("tau"))
        .def("g", &GreenFunction::g, py::arg("x"), py::arg("y"))
        .def_property_readonly("normalization", &GreenFunction::normalization);

    m.def(
        "estimate_an",
        [](cd tau, cd x, int n, long samples, std::uint64_t seed, int threads) {
            const GreenFunction green{EllipticSurface(tau)};
            return estimate_to_dict(
                estimate_an(x, n, green, samples, SeededSampler(seed), threads));
        },
        py::arg("tau"), py::arg("x"), py::arg("n"), py::arg("samples") = 10000,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "build_atlas",
        [](cd tau, double r1, double r2, int m_hint) {
            const GreenFunction green{EllipticSurface(tau)};
            return atlas_to_dict(build_torus_atlas(green, m_hint, r1, r2));
        },
        py::arg("tau"), py::arg("r1") = 0.3, py::arg("r2") = 0.45, py::arg("m_hint") = 0);

    m.def(
        "fay_residual",
        [](cd tau, int n, std::uint64_t seed) {
            const EllipticSurface surface(tau);
            SeededSampler sampler(seed);
            const FayInstance inst = random_fay_instance(surface, n, sampler);
            const FayReport rep = verify_fay_identity(inst.sys, inst.xs);
            py::dict d;
            d["residual"] = rep.residual;
            d["separability_residual"] = rep.separability_residual;
            d["lhs_log"] = rep.lhs_log;
            d["rhs_log"] = rep.rhs_log;
            d["pass"] = rep.pass;
            return d;
        },
        py::arg("tau"), py::arg("n"), py::arg("seed") = 0);

    m.def("a_n", &a_n, py::arg("n"), py::arg("x"));
    m.def("a_n_derivative", &a_n_derivative, py::arg("n"), py::arg("x"));
    m.def("harmonic_bound", &harmonic_bound, py::arg("n"));
    m.def("radial_integral", &radial_integral, py::arg("n"), py::arg("c"), py::arg("r"),
          py::arg("tol") = 1e-10);
    m.def("merkl_c0", &merkl_c0, py::arg("m"), py::arg("r1"), py::arg("M"), py::arg("C1"));

    m.def(
        "energy",
        [](const std::vector<cd>& points, cd tau) {
            const EllipticSurface surface(tau);
            const GreenFunction green(surface);
            return energy(PointConfiguration(points, surface), green);
        },
        py::arg("points"), py::arg("tau"));

    m.def(
        "bound",
        [](cd tau, long n, double r1, double r2, long samples, std::uint64_t seed,
           int threads) {
            const EllipticSurface surface(tau);
            const GreenFunction green(surface);
            const TorusChartAtlas atlas = build_torus_atlas(green, 0, r1, r2);
            const HxEstimate hx = estimate_hx(surface.period_matrix(), samples,
                                              SeededSampler(seed, 0x4858), threads);
            const BoundReport rep = theorem1_bound(
                bound_inputs_from_atlas(atlas, n, hx.mean, hx.stderr_value));
            py::dict d;
            d["bound"] = rep.bound;
            d["bound_low"] = rep.bound_low;
            d["bound_high"] = rep.bound_high;
            d["coefficient"] = rep.coefficient;
            d["per_point"] = rep.per_point;
            d["h_mean"] = hx.mean;
            d["h_stderr"] = hx.stderr_value;
            d["atlas"] = atlas_to_dict(atlas);
            return d;
        },
        py::arg("tau"), py::arg("n"), py::arg("r1") = 0.3, py::arg("r2") = 0.45,
        py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "verify",
        [](cd tau, long n, long trials, std::uint64_t seed, long samples, int threads) {
            const EllipticSurface surface(tau);
            const GreenFunction green(surface);
            const TorusChartAtlas atlas = build_torus_atlas(green, 0, 0.3, 0.45);
            const HxEstimate hx = estimate_hx(surface.period_matrix(), samples,
                                              SeededSampler(seed, 0x4858), threads);
            const VerifyReport rep =
                verify_theorem1(green, atlas, n, trials, SeededSampler(seed, 0x5646),
                                hx.mean, hx.stderr_value);
            py::dict d;
            d["violations"] = rep.random.violations + rep.clustered.violations;
            d["random_min_slack"] = rep.random.min_slack;
            d["random_median_slack"] = rep.random.median_slack;
            d["cluster_min_slack"] = rep.clustered.min_slack;
            d["bound"] = rep.bound;
            d["bound_high"] = rep.bound_high;
            return d;
        },
        py::arg("tau"), py::arg("n"), py::arg("trials") = 50, py::arg("seed") = 0,
        py::arg("samples") = 20000, py::arg("threads") = 1);

    m.def(
        "atlas_c2_side_condition",
        [](const py::dict& atlas) {
            const TorusChartAtlas a = atlas_from_dict(atlas);
            return a.c2 <= std::exp(4.0 * a.c0) / (2.0 * 3.141592653589793238462643);
        },
        py::arg("atlas"));
}
