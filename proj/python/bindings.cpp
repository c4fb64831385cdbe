#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mla/acceptance.hpp"
#include "mla/error.hpp"
#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"
#include "mla/heatkernel.hpp"
#include "mla/montecarlo.hpp"
#include "mla/specfun.hpp"

namespace py = pybind11;
using namespace mla;
using namespace pybind11::literals;

namespace {

SampledFunction from_array(double start, double step, const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
    if (v.ndim() != 1) throw InvalidArgument("python", "values must be one-dimensional");
    return SampledFunction(start, step, std::vector<double>(v.data(), v.data() + v.size()));
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Side side_of(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw InvalidArgument("python", "side must be 'left' or 'right'");
}

HFunctionSpec preset(const std::string& name, double beta) {
    if (name == "exp") return HFunctionSpec::exponential();
    if (name == "mwright") return HFunctionSpec::m_wright(beta);
    if (name == "heat") return HFunctionSpec::heat_kernel(beta);
    throw InvalidArgument("python", "preset must be 'exp', 'mwright' or 'heat'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mittag-Leffler analysis: special functions, fractional calculus, grey Brownian motion, heat kernels";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // specfun
    m.def("gamma", &mla::gamma, "x"_a);
    m.def("rgamma", &rgamma, "x"_a);
    m.def("mittag_leffler", [](double beta, Complex z, double gam, double tol) {
        const auto r = mittag_leffler2(beta, gam, z, tol);
        return z.imag() == 0.0 ? py::cast(r.value.real()) : py::cast(r.value);
    }, "beta"_a, "z"_a, "gamma"_a = 1.0, "tol"_a = default_tol);
    m.def("ml_derivative", py::overload_cast<double, Complex, double>(&ml_derivative), "beta"_a, "z"_a, "tol"_a = default_tol);
    m.def("m_wright", [](double beta, double x, double tol) { return m_wright(beta, x, tol).value; },
          "beta"_a, "x"_a, "tol"_a = default_tol);
    m.def("m_wright_laplace_residual", &m_wright_laplace_residual, "beta"_a, "z"_a);
    m.def("fox_h", [](const std::string& name, double z, double beta, bool invert, double shift, double tol) {
        HFunctionSpec spec = preset(name, beta);
        if (shift != 0.0) spec = fox_h_power_shift(spec, shift);
        if (invert) return fox_h(fox_h_invert(spec), 1.0 / z, tol).value;
        return fox_h(spec, z, tol).value;
    }, "preset"_a, "z"_a, "beta"_a = 0.5, "invert"_a = false, "shift"_a = 0.0, "tol"_a = default_tol);
    m.def("ml_integral_identity_residual", &ml_integral_identity_residual, "alpha"_a, "beta"_a, "lam"_a, "t"_a);

    // fraccalc
    py::class_<SampledFunction>(m, "SampledFunction")
        .def(py::init(&from_array), "start"_a, "step"_a, "values"_a)
        .def_readonly("start", &SampledFunction::start)
        .def_readonly("step", &SampledFunction::step)
        .def_property_readonly("values", [](const SampledFunction& f) { return to_array(f.values); })
        .def_property_readonly("x", [](const SampledFunction& f) {
            std::vector<double> xs(f.size());
            for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.x(i);
            return to_array(xs);
        })
        .def("__len__", &SampledFunction::size)
        .def("interpolate", &SampledFunction::interpolate, "t"_a);
    m.def("k_h", &k_h, "H"_a);
    m.def("rl_integral_indicator", [](double alpha, double a, double b, const std::string& side, double t) {
        return rl_integral_indicator(alpha, a, b, side_of(side), t);
    }, "alpha"_a, "a"_a, "b"_a, "side"_a, "t"_a);
    m.def("rl_derivative_indicator", [](double alpha, double a, double b, const std::string& side, double t) {
        return rl_derivative_indicator(alpha, a, b, side_of(side), t);
    }, "alpha"_a, "a"_a, "b"_a, "side"_a, "t"_a);
    m.def("marchaud_derivative_indicator", [](double alpha, double a, double b, const std::string& side, double t) {
        return marchaud_derivative_indicator(alpha, a, b, side_of(side), t);
    }, "alpha"_a, "a"_a, "b"_a, "side"_a, "t"_a);
    m.def("m_h_indicator", [](double H, double a, double b, const std::string& side, double t) {
        return m_h_indicator(H, a, b, side_of(side), t);
    }, "H"_a, "a"_a, "b"_a, "side"_a, "t"_a);
    m.def("rl_integral_grid", [](double alpha, const SampledFunction& f, const std::string& side) {
        return rl_integral_grid(alpha, f, side_of(side));
    }, "alpha"_a, "f"_a, "side"_a = "left");
    m.def("rl_derivative_grid", [](double alpha, const SampledFunction& f, const std::string& side) {
        return rl_derivative_grid(alpha, f, side_of(side));
    }, "alpha"_a, "f"_a, "side"_a = "left");
    m.def("marchaud_derivative_grid", [](double alpha, const SampledFunction& f, const std::string& side, double eps) {
        return marchaud_derivative_grid(alpha, f, side_of(side), eps);
    }, "alpha"_a, "f"_a, "side"_a = "left", "eps"_a = 0.0);
    m.def("caputo_derivative_interval", &caputo_derivative_interval, "alpha"_a, "f"_a, "x"_a);
    m.def("m_h_grid", [](double H, const SampledFunction& f, const std::string& side) {
        return m_h_grid(H, f, side_of(side));
    }, "H"_a, "f"_a, "side"_a = "left");
    m.def("derivative_grid", &derivative_grid, "f"_a);
    m.def("inner_alpha", &inner_alpha, "f"_a, "g"_a, "alpha"_a);
    m.def("inner_l2", &inner_l2, "f"_a, "g"_a);

    // ggbm
    m.def("grey_gram", [](const std::vector<double>& times, double alpha) { return grey_gram(times, alpha).matrix(); },
          "times"_a, "alpha"_a);
    m.def("covariance", [](double t, double s, double alpha, double beta) { return covariance(t, s, {alpha, beta}); },
          "t"_a, "s"_a, "alpha"_a, "beta"_a);
    m.def("char_fn", [](const Eigen::VectorXd& theta, const std::vector<double>& times, double alpha, double beta) {
        return char_fn(theta, grey_gram(times, alpha), beta);
    }, "theta"_a, "times"_a, "alpha"_a, "beta"_a);
    m.def("even_moment", [](int n, double t, double alpha, double beta) { return even_moment(n, t, {alpha, beta}); },
          "n"_a, "t"_a, "alpha"_a, "beta"_a);
    m.def("sample_tau", [](double beta, std::size_t n, std::uint64_t seed) { return to_array(sample_tau(beta, n, seed)); },
          "beta"_a, "n"_a, "seed"_a);
    m.def("sample_paths", [](const std::vector<double>& times, double alpha, double beta, std::size_t n_paths, std::uint64_t seed) {
        PathEnsemble p;
        {
            py::gil_scoped_release release;
            p = sample_paths(grey_gram(times, alpha), beta, n_paths, seed);
        }
        return py::make_tuple(p.samples, to_array(p.taus));
    }, "times"_a, "alpha"_a, "beta"_a, "n_paths"_a, "seed"_a);
    m.def("marginal_density", [](double x, double t, double alpha, double beta) { return marginal_density(x, t, {alpha, beta}); },
          "x"_a, "t"_a, "alpha"_a, "beta"_a);
    m.def("epsilon_beta", &epsilon_beta, "beta"_a);
    m.def("s_transform_ggbm", [](const SampledFunction& phi, double t, double alpha, double beta) {
        return s_transform_ggbm(phi, t, {alpha, beta});
    }, "phi"_a, "t"_a, "alpha"_a, "beta"_a);
    m.def("s_transform_noise", [](const SampledFunction& phi, double t, double alpha, double beta) {
        return s_transform_noise(phi, t, {alpha, beta});
    }, "phi"_a, "t"_a, "alpha"_a, "beta"_a);

    // heatkernel
    m.def("kernel", [](double t, double x, double y, double alpha, double beta, const std::string& method) {
        const KernelQuery q{t, x, y, {alpha, beta}};
        if (method == "quadrature") return kernel_quadrature(q);
        if (method == "subordination") return kernel_subordination(q);
        if (method == "foxh") return kernel_foxh(q);
        if (method == "series") {
            q.validate("kernel");
            return kernel_series(q.offset(), q.variance(), beta);
        }
        throw InvalidArgument("python", "method must be quadrature, subordination, foxh or series");
    }, "t"_a, "x"_a, "y"_a, "alpha"_a, "beta"_a, "method"_a = "quadrature");
    m.def("solve_cauchy", [](const SampledFunction& u0, double t, double xmin, double step, std::size_t n, double alpha, double beta) {
        return solve_cauchy(u0, t, {xmin, step, n}, {alpha, beta});
    }, "u0"_a, "t"_a, "xmin"_a, "step"_a, "n"_a, "alpha"_a, "beta"_a);
    m.def("residual_fie", [](const SampledFunction& u0, double t, double x, double alpha, double beta) {
        return residual_fie(cauchy_surface(u0, {alpha, beta}), u0, t, x, {alpha, beta});
    }, "u0"_a, "t"_a, "x"_a, "alpha"_a, "beta"_a);

    // montecarlo
    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("value", &MCEstimate::value)
        .def_readonly("stderr", &MCEstimate::std_error)
        .def_readonly("n_samples", &MCEstimate::n_samples)
        .def_readonly("seed", &MCEstimate::seed)
        .def("__repr__", [](const MCEstimate& e) {
            return "MCEstimate(value=" + std::to_string(e.value) + ", stderr=" + std::to_string(e.std_error) + ")";
        });
    m.def("fk_solution", [](const SampledFunction& u0, double t, double x, double alpha, double beta, std::size_t n, std::uint64_t seed) {
        py::gil_scoped_release release;
        return fk_solution(u0, t, x, {alpha, beta}, n, seed);
    }, "u0"_a, "t"_a, "x"_a, "alpha"_a, "beta"_a, "n"_a, "seed"_a);
    m.def("donsker_truncation", [](double n_cut, double a, double t, double alpha, double beta) {
        return donsker_truncation(n_cut, a, t, {alpha, beta});
    }, "n_cut"_a, "a"_a, "t"_a, "alpha"_a, "beta"_a);
    m.def("local_time_expectation", [](double a, double T, double alpha, double beta) {
        return local_time_expectation(a, T, {alpha, beta});
    }, "a"_a, "T"_a, "alpha"_a, "beta"_a);
    m.def("local_time_mc", [](double a, double T, double alpha, double beta, std::size_t n_paths, std::size_t n_steps,
                              double bandwidth, std::uint64_t seed) {
        py::gil_scoped_release release;
        return local_time_mc(a, T, {alpha, beta}, n_paths, n_steps, bandwidth, seed);
    }, "a"_a, "T"_a, "alpha"_a, "beta"_a, "n_paths"_a, "n_steps"_a, "bandwidth"_a, "seed"_a);

    // acceptance
    m.def("run_criterion", [](int id) {
        const auto r = acceptance::run_criterion(id);
        return py::dict("id"_a = r.id, "name"_a = r.name, "passed"_a = r.passed(), "detail"_a = r.detail,
                        "seconds"_a = r.seconds, "budget_seconds"_a = r.budget_seconds);
    }, "id"_a);
}
