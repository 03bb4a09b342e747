#include "polysob/constants.hpp"
#include "polysob/geometry.hpp"
#include "polysob/giraud.hpp"
#include "polysob/green.hpp"
#include "polysob/quadrature.hpp"
#include "polysob/quotient.hpp"
#include "polysob/radial_cas.hpp"
#include "polysob/regimes.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace polysob;

namespace {

py::dict symbolic(const SymbolicConstant& c)
{
    py::dict d;
    d["exact"] = c.to_string();
    d["value"] = c.to_double();
    return d;
}

py::dict certificate(const IdentityCertificate& c)
{
    py::dict d;
    d["identity"] = c.identity;
    d["residual_zero"] = c.residual_zero;
    d["residual_terms"] = c.residual_terms;
    return d;
}

py::list samples(const std::vector<QuotientSample>& s)
{
    py::list out;
    for (const auto& q : s) {
        py::dict d;
        d["epsilon"] = q.epsilon;
        d["theta"] = q.theta;
        d["value"] = q.value;
        d["error"] = q.error;
        out.append(d);
    }
    return out;
}

ModelManifold manifold(const std::string& kind, int n, double size)
{
    if (kind == "sphere") return ModelManifold::sphere(n, std::isnan(size) ? 1.0 : size);
    if (kind == "torus") return ModelManifold::torus(n, std::isnan(size) ? 2 * M_PI : size);
    throw std::invalid_argument("manifold must be 'sphere' or 'torus'");
}

} // namespace

PYBIND11_MODULE(_polysob, m)
{
    m.doc() = "Numerical companion for higher-order Sobolev inequalities on closed manifolds";

    py::register_exception<InvalidDimension>(m, "InvalidDimension", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
    py::register_exception<QuadratureFailure>(m, "QuadratureFailure", PyExc_RuntimeError);

    py::class_<DimensionPair>(m, "DimensionPair")
        .def(py::init(&DimensionPair::make), py::arg("n"), py::arg("k"))
        .def_readonly("n", &DimensionPair::n)
        .def_readonly("k", &DimensionPair::k)
        .def("__repr__",
             [](const DimensionPair& d) { return "DimensionPair(n=" + std::to_string(d.n) + ", k=" + std::to_string(d.k) + ")"; });

    m.def(
        "constants",
        [](const DimensionPair& d) {
            const auto sc = sharp_constant(d);
            py::dict out;
            out["two_star"] = to_string(critical_exponent(d));
            out["a_nk"] = symbolic(bubble_scale(d));
            out["c_nk"] = to_string(c_small(d));
            out["K"] = sc.K;
            out["inverse_K"] = sc.inverse_K;
            out["bubble_mass"] = symbolic(sc.bubble_mass);
            out["c_green"] = symbolic(c_green(d));
            return out;
        },
        py::arg("dims"), "Closed-form constants of (n, k).");

    m.def("verify_bubble_identity", [](const DimensionPair& d) { return certificate(verify_bubble_identity(d)); },
          py::arg("dims"));
    m.def(
        "verify_kernel_identity",
        [](const DimensionPair& d) {
            py::list out;
            for (const auto& c : verify_kernel_identity(d)) out.append(certificate(c));
            return out;
        },
        py::arg("dims"));

    py::class_<BesselKernelSum>(m, "GreenKernel")
        .def(py::init([](const DimensionPair& d) { return gamma_fn(d); }), py::arg("dims"))
        .def("__call__", &BesselKernelSum::evaluate, py::arg("r"))
        .def("decay_rate", &BesselKernelSum::decay_rate)
        .def("mass", [](const BesselKernelSum& g) { return green_mass(g); })
        .def("singular_constant", [](const BesselKernelSum& g) { return singular_constant(g).constant; });

    m.def(
        "green_l2_norm_sq",
        [](const DimensionPair& d) {
            const auto l2 = l2_norm_sq(d);
            py::dict out;
            out["quadrature"] = l2.quadrature;
            out["plancherel"] = l2.plancherel;
            out["exact"] = l2.plancherel_exact ? py::cast(l2.plancherel_exact->to_string()) : py::none();
            return out;
        },
        py::arg("dims"));

    m.def(
        "scalar_curvature", [](const std::string& kind, int n, double size) { return scalar_curvature(manifold(kind, n, size)); },
        py::arg("manifold"), py::arg("n"), py::arg("size") = NAN);
    m.def(
        "tensor_trace",
        [](const std::string& kind, int n, int k, double size) { return tensor_Tg_trace(manifold(kind, n, size), k); },
        py::arg("manifold"), py::arg("n"), py::arg("k"), py::arg("size") = NAN);

    m.def("geometric_grid", &geometric_grid, py::arg("hi"), py::arg("lo"), py::arg("count"));

    m.def(
        "quotient_slope",
        [](const std::string& kind, const DimensionPair& d, const std::vector<double>& eps, double B, double size) {
            const auto mf = manifold(kind, d.n, size);
            const auto curve = quotient_curve(TestFunctionFamily::make(mf, d), eps, B);
            const auto fit = slope_fit(curve);
            py::dict out;
            out["samples"] = samples(curve.samples);
            out["slope"] = fit.slope;
            out["slope_sigma"] = fit.slope_sigma;
            out["intercept"] = fit.intercept;
            out["intercept_sigma"] = fit.intercept_sigma;
            out["predicted_slope"] = predicted_slope(mf, d, B);
            return out;
        },
        py::arg("manifold"), py::arg("dims"), py::arg("eps_grid"), py::arg("B") = 0.0, py::arg("size") = NAN,
        "Fit Q(eps) = 1/K + slope * theta_eps + nuisance terms.");

    m.def(
        "probe_iopt",
        [](const std::string& kind, const DimensionPair& d, double B, const std::vector<double>& eps, double size) {
            const auto rep = probe_iopt(manifold(kind, d.n, size), d, B, eps);
            if (rep.rejected) throw std::invalid_argument(rep.warning);
            py::dict out;
            out["violated"] = rep.violated;
            out["witness_epsilon"] = rep.witness_epsilon ? py::cast(*rep.witness_epsilon) : py::none();
            out["margin"] = rep.margin;
            out["inverse_K"] = rep.inverse_K;
            out["samples"] = samples(rep.samples);
            return out;
        },
        py::arg("manifold"), py::arg("dims"), py::arg("B"), py::arg("eps_grid"), py::arg("size") = NAN);

    m.def(
        "pohozaev_bubble",
        [](const DimensionPair& d, double mu, double delta, bool sharp) {
            const auto p = PohozaevProfile::bubble(mu, delta, sharp ? Cutoff(Cutoff::Kind::Sharp) : Cutoff());
            const auto r = pohozaev_check(p, d);
            py::dict out;
            out["residual"] = r.residual;
            out["relative"] = r.relative;
            out["flagged"] = r.flagged;
            return out;
        },
        py::arg("dims"), py::arg("mu"), py::arg("delta") = 1.0, py::arg("sharp_cutoff") = false,
        "Pohozaev integral of a truncated bubble.");

    m.def(
        "regime_constants",
        [](const DimensionPair& d, double alpha, double mu) {
            const auto p = BlowupParams::make(alpha, mu, d);
            const auto e = gradient_energy_regime(p, d);
            const auto l = l2_mass_regime(p, d);
            py::dict out;
            out["energy_tag"] = e.tag;
            out["energy_ratio"] = e.relative_to_reference();
            out["l2_tag"] = l.tag;
            out["l2_ratio"] = l.relative_to_reference();
            return out;
        },
        py::arg("dims"), py::arg("alpha"), py::arg("mu"),
        "Measured regime constants relative to their exact limits (NaN where none is known).");

    m.def(
        "convolve",
        [](int n, double a, double p, double b, double q, double alpha, double d) {
            const auto s = convolve_radial(EnvelopeKernel::make(a, p, alpha, n), EnvelopeKernel::make(b, q, alpha, n), d, n);
            return py::make_tuple(s.value, s.error);
        },
        py::arg("n"), py::arg("a"), py::arg("p"), py::arg("b"), py::arg("q"), py::arg("alpha"), py::arg("d"),
        "Convolution of two envelope kernels at separation d: (value, error).");

    m.def(
        "giraud_regime",
        [](int n, double a, double b, double p, double q, const std::vector<double>& alphas, const std::vector<double>& ds) {
            const auto rep = regime_verify(GiraudParams{n, a, b, p, q}, alphas, ds);
            py::dict out;
            out["regime"] = to_string(rep.regime);
            py::list fits;
            for (const auto& f : rep.fits) {
                py::dict fd;
                fd["window"] = f.window;
                fd["fitted"] = f.fitted;
                fd["expected"] = f.expected;
                fd["r_squared"] = f.r_squared;
                fd["ok"] = f.ok;
                fits.append(fd);
            }
            out["fits"] = fits;
            out["max_ratio"] = rep.max_ratio;
            out["ok"] = rep.ok();
            return out;
        },
        py::arg("n"), py::arg("a"), py::arg("b"), py::arg("p"), py::arg("q"), py::arg("alpha_grid"), py::arg("d_grid"));
}
