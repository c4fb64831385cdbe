#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mla/acceptance.hpp"
#include "mla/error.hpp"
#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"
#include "mla/heatkernel.hpp"
#include "mla/io.hpp"
#include "mla/montecarlo.hpp"
#include "mla/specfun.hpp"

namespace {

using namespace mla;
using io::Json;

constexpr std::uint64_t kDefaultSeed = 20240917;

std::uint64_t default_seed() {
    const char* env = std::getenv("MLA_SEED");
    if (!env || !*env) return kDefaultSeed;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw InvalidArgument("cli", std::string("MLA_SEED is not an unsigned integer: ") + env);
    return v;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11g", v);
    return buf;
}

void say(const std::string& line) { std::printf("%s\n", line.c_str()); }

Side parse_side(const std::string& s) { return s == "right" ? Side::right : Side::left; }

UniformGrid grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw InvalidArgument("cli", "grid needs n >= 2 and xmax > xmin");
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

template <class F>
SampledFunction tabulate(const UniformGrid& g, F&& f) {
    return SampledFunction::sample(std::forward<F>(f), g.start, g.step, g.size);
}

// Named test functions or a CSV file of x,value rows.
struct SampledInput {
    std::string source = "gaussian";
    double lo = -12.0, hi = 12.0, step = 0.01;

    void add(CLI::App* sub, const std::string& flag, const std::string& what) {
        sub->add_option(flag, source, what + ": gaussian (exp(-x^2/2)), bump (exp(-x^2)), indicator (1 on [-1,1)) or a CSV path")
            ->capture_default_str();
        sub->add_option(flag + "-min", lo, "grid start")->capture_default_str();
        sub->add_option(flag + "-max", hi, "grid end")->capture_default_str();
        sub->add_option(flag + "-step", step, "grid step")->capture_default_str();
    }

    SampledFunction get() const {
        double (*f)(double) = nullptr;
        if (source == "gaussian") f = [](double y) { return std::exp(-y * y / 2); };
        else if (source == "bump") f = [](double y) { return std::exp(-y * y); };
        else if (source == "indicator") f = [](double y) { return (y >= -1.0 && y < 1.0) ? 1.0 : 0.0; };
        else return io::read_sampled_csv(source);
        if (!(step > 0.0) || !(hi > lo)) throw InvalidArgument("cli", "sampled input needs step > 0 and max > min");
        const auto n = static_cast<std::size_t>(std::lround((hi - lo) / step)) + 1;
        return SampledFunction::sample(f, lo, step, n);
    }
};

struct Params {
    double alpha = 1.0, beta = 1.0;
    void add(CLI::App* sub, bool required = true) {
        auto* a = sub->add_option("--alpha", alpha, "Hurst-type order in (0,2)");
        auto* b = sub->add_option("--beta", beta, "mixing order in (0,1]");
        if (required) {
            a->required();
            b->required();
        }
    }
    FracParams get() const { return {alpha, beta}; }
};

struct OutputGrid {
    std::optional<double> xmin, xmax;
    std::size_t n = 0;
    std::string out;
    void add(CLI::App* sub) {
        sub->add_option("--xmin", xmin, "table start");
        sub->add_option("--xmax", xmax, "table end");
        sub->add_option("--n", n, "table size");
        sub->add_option("--out", out, "CSV file (x,value) with a .json sidecar");
    }
    bool active() const { return xmin || xmax || n > 0; }
    UniformGrid get() const {
        if (!xmin || !xmax || n == 0) throw InvalidArgument("cli", "a table needs --xmin, --xmax and --n");
        return grid(*xmin, *xmax, n);
    }
};

void write_table(const std::string& out, const SampledFunction& f, const Json& meta) {
    if (out.empty()) throw InvalidArgument("cli", "tables need --out");
    io::write_csv(out, io::to_table(f));
    io::write_json(io::sidecar_path(out), meta);
    say("wrote " + std::to_string(f.size()) + " rows to " + out);
}

void finish_json(const std::string& out, const Json& j, const std::string& summary) {
    if (!out.empty()) io::write_json(out, j);
    say(summary);
}

// Library operations and the subcommand that reaches each; checked by selftest.
const std::vector<std::pair<const char*, const char*>> kManifest = {
    {"specfun.gamma", "ml"}, {"specfun.mittag_leffler", "ml"}, {"specfun.mittag_leffler2", "ml"},
    {"specfun.ml_derivative", "ml"}, {"specfun.m_wright", "mwright"}, {"specfun.m_wright_laplace_residual", "mwright"},
    {"specfun.fox_h", "foxh"}, {"specfun.fox_h_invert", "foxh"}, {"specfun.fox_h_power_shift", "foxh"},
    {"specfun.ml_integral_identity_residual", "ml"}, {"fraccalc.k_h", "frac"},
    {"fraccalc.rl_integral_indicator", "frac"}, {"fraccalc.rl_derivative_indicator", "frac"},
    {"fraccalc.marchaud_derivative_indicator", "frac"}, {"fraccalc.m_h_indicator", "frac"},
    {"fraccalc.rl_integral_grid", "frac"}, {"fraccalc.rl_derivative_grid", "frac"},
    {"fraccalc.marchaud_derivative_grid", "frac"}, {"fraccalc.caputo_derivative_interval", "frac"},
    {"fraccalc.m_h_grid", "frac"}, {"fraccalc.derivative_grid", "frac"}, {"fraccalc.inner_alpha", "frac"},
    {"fraccalc.inner_l2", "frac"}, {"ggbm.grey_gram", "cov"}, {"ggbm.covariance", "cov"}, {"ggbm.char_fn", "cov"},
    {"ggbm.even_moment", "cov"}, {"ggbm.marginal_density", "cov"}, {"ggbm.epsilon_beta", "cov"},
    {"ggbm.s_transform_ggbm", "cov"}, {"ggbm.s_transform_noise", "cov"}, {"ggbm.sample_tau", "simulate"},
    {"ggbm.sample_paths", "simulate"}, {"heatkernel.kernel_quadrature", "kernel"},
    {"heatkernel.kernel_subordination", "kernel"}, {"heatkernel.kernel_series", "kernel"},
    {"heatkernel.kernel_foxh", "kernel"}, {"heatkernel.solve_cauchy", "solve"}, {"heatkernel.residual_fie", "solve"},
    {"heatkernel.fbm_pde_residual", "solve"}, {"montecarlo.fk_solution", "fk"},
    {"montecarlo.donsker_truncation", "donsker"}, {"montecarlo.local_time_expectation", "loctime"},
    {"montecarlo.local_time_mc", "loctime"}, {"acceptance.run_all", "selftest"},
};

int run(int argc, char** argv) {
    CLI::App app{"Mittag-Leffler analysis toolkit: special functions, fractional calculus, grey Brownian motion, "
                 "time-fractional heat kernels and Monte Carlo estimators"};
    app.require_subcommand(1);
    std::map<std::string, std::function<void()>> actions;
    const std::uint64_t seed0 = default_seed();

    {
        auto* sub = app.add_subcommand("ml", "Mittag-Leffler E_{beta,gamma}(z)");
        static struct {
            double beta = 1, gamma = 1, z = 0, zi = 0, tol = default_tol;
            bool derivative = false;
            std::optional<double> identity_alpha, gamma_of;
            double lambda = 1, t = 1;
            std::string out;
        } o;
        sub->add_option("--beta", o.beta, "order beta > 0")->required();
        sub->add_option("--gamma", o.gamma, "second parameter")->capture_default_str();
        sub->add_option("--z", o.z, "real part of the argument");
        sub->add_option("--zi", o.zi, "imaginary part of the argument")->capture_default_str();
        sub->add_option("--tol", o.tol, "relative tolerance")->capture_default_str();
        sub->add_flag("--derivative", o.derivative, "d/dz E_beta(z) instead");
        sub->add_option("--identity-alpha", o.identity_alpha,
                        "print the residual of E_b(-l^2 t^a/2) = 1 - (l^2/2) I[...] with this alpha");
        sub->add_option("--gamma-of", o.gamma_of, "print Gamma(x) at this x instead");
        sub->add_option("--lambda", o.lambda, "lambda for --identity-alpha")->capture_default_str();
        sub->add_option("--t", o.t, "t for --identity-alpha")->capture_default_str();
        sub->add_option("--out", o.out, "JSON result file");
        actions["ml"] = [] {
            if (o.gamma_of) return say(num(mla::gamma(*o.gamma_of)));
            if (o.identity_alpha) {
                const double r = ml_integral_identity_residual(*o.identity_alpha, o.beta, o.lambda, o.t);
                finish_json(o.out, {{"residual", r}}, num(r));
                return;
            }
            const Complex z(o.z, o.zi);
            Complex v;
            Json j{{"beta", o.beta}, {"gamma", o.gamma}, {"z", {o.z, o.zi}}};
            if (o.derivative) {
                v = ml_derivative(o.beta, z, o.tol);
            } else {
                const auto r = mittag_leffler2(o.beta, o.gamma, z, o.tol);
                v = r.value;
                j["terms_used"] = r.terms_used;
                j["error_estimate"] = r.error_estimate;
            }
            j["value"] = {v.real(), v.imag()};
            char buf[80];
            if (o.zi == 0.0) std::snprintf(buf, sizeof buf, "%.10f", v.real());
            else std::snprintf(buf, sizeof buf, "%.10f%+.10fi", v.real(), v.imag());
            finish_json(o.out, j, buf);
        };
    }
    {
        auto* sub = app.add_subcommand("mwright", "M-Wright function M_beta(x)");
        static struct {
            double beta = 0.5, tol = default_tol;
            std::optional<double> x, laplace;
            OutputGrid table;
        } o;
        sub->add_option("--beta", o.beta, "order in (0,1)")->required();
        sub->add_option("--x", o.x, "point x >= 0");
        sub->add_option("--tol", o.tol, "relative tolerance")->capture_default_str();
        sub->add_option("--laplace", o.laplace, "print |int M e^{-rz} dr - E_beta(-z)| at this z >= 0");
        o.table.add(sub);
        actions["mwright"] = [] {
            if (o.laplace) return say(num(m_wright_laplace_residual(o.beta, *o.laplace)));
            if (o.table.active()) {
                const auto f = tabulate(o.table.get(), [](double x) { return m_wright(o.beta, x, o.tol).value; });
                return write_table(o.table.out, f, {{"function", "m_wright"}, {"beta", o.beta}});
            }
            if (!o.x) throw InvalidArgument("cli", "mwright needs --x, --laplace or a table");
            say(num(m_wright(o.beta, *o.x, o.tol).value));
        };
    }
    {
        auto* sub = app.add_subcommand("foxh", "Fox H-function for a named parameter set");
        static struct {
            std::string preset;
            double beta = 0.5, z = 1, tol = default_tol;
            bool invert = false;
            double shift = 0;
        } o;
        sub->add_option("--preset", o.preset, "exp | mwright | heat")
            ->required()
            ->check(CLI::IsMember({"exp", "mwright", "heat"}));
        sub->add_option("--beta", o.beta, "order for mwright and heat")->capture_default_str();
        sub->add_option("--z", o.z, "argument z > 0")->required();
        sub->add_flag("--invert", o.invert, "evaluate the inverted parameter set at 1/z");
        sub->add_option("--shift", o.shift, "power shift sigma: evaluates z^sigma H(z) through shifted parameters");
        sub->add_option("--tol", o.tol, "relative tolerance")->capture_default_str();
        actions["foxh"] = [] {
            HFunctionSpec spec = o.preset == "exp"       ? HFunctionSpec::exponential()
                                 : o.preset == "mwright" ? HFunctionSpec::m_wright(o.beta)
                                                         : HFunctionSpec::heat_kernel(o.beta);
            if (o.shift != 0.0) spec = fox_h_power_shift(spec, o.shift);
            const double z = o.invert ? 1.0 / o.z : o.z;
            if (o.invert) spec = fox_h_invert(spec);
            say(num(fox_h(spec, z, o.tol).value));
        };
    }
    {
        auto* sub = app.add_subcommand("frac", "fractional integrals and derivatives");
        static struct {
            std::string op;
            double alpha = 0.5, a = 0, b = 1, t = 0.5, eps = 0;
            std::string side = "left";
            bool on_grid = false;
            SampledInput f, g;
            std::string out;
        } o;
        sub->add_option("--op", o.op,
                        "integral | derivative | marchaud | mh | caputo | d1 | kh | inner | l2")
            ->required()
            ->check(CLI::IsMember({"integral", "derivative", "marchaud", "mh", "caputo", "d1", "kh", "inner", "l2"}));
        sub->add_option("--alpha", o.alpha, "order (H for mh and kh)")->capture_default_str();
        sub->add_option("--side", o.side, "left | right")->check(CLI::IsMember({"left", "right"}))->capture_default_str();
        sub->add_option("--a", o.a, "indicator start")->capture_default_str();
        sub->add_option("--b", o.b, "indicator end")->capture_default_str();
        sub->add_option("--t", o.t, "evaluation point")->capture_default_str();
        sub->add_option("--eps", o.eps, "Marchaud split point (0: four steps)")->capture_default_str();
        sub->add_flag("--grid", o.on_grid, "apply the grid operator to --f instead of the indicator closed form");
        o.f.add(sub, "--f", "input function");
        o.g.add(sub, "--g", "second function for inner and l2");
        sub->add_option("--out", o.out, "CSV for grid results");
        actions["frac"] = [] {
            const Side side = parse_side(o.side);
            if (o.op == "kh") return say(num(k_h(o.alpha)));
            if (o.op == "inner" || o.op == "l2") {
                const auto f = o.f.get(), g = o.g.get();
                return say(num(o.op == "inner" ? inner_alpha(f, g, o.alpha) : inner_l2(f, g)));
            }
            if (o.op == "caputo") return say(num(caputo_derivative_interval(o.alpha, o.f.get(), o.t)));
            if (!o.on_grid && o.op != "d1") {
                double v = 0.0;
                if (o.op == "integral") v = rl_integral_indicator(o.alpha, o.a, o.b, side, o.t);
                else if (o.op == "derivative") v = rl_derivative_indicator(o.alpha, o.a, o.b, side, o.t);
                else if (o.op == "marchaud") v = marchaud_derivative_indicator(o.alpha, o.a, o.b, side, o.t);
                else v = m_h_indicator(o.alpha, o.a, o.b, side, o.t);
                return say(num(v));
            }
            const auto f = o.f.get();
            GridDiagnostics diag;
            SampledFunction r;
            if (o.op == "integral") r = rl_integral_grid(o.alpha, f, side, &diag);
            else if (o.op == "derivative") r = rl_derivative_grid(o.alpha, f, side, &diag);
            else if (o.op == "marchaud") r = marchaud_derivative_grid(o.alpha, f, side, o.eps, &diag);
            else if (o.op == "mh") r = m_h_grid(o.alpha, f, side, &diag);
            else r = derivative_grid(f);
            write_table(o.out, r, {{"op", o.op}, {"alpha", o.alpha}, {"side", o.side}, {"input", o.f.source},
                                   {"tail_warning", diag.tail_warning}});
        };
    }
    {
        auto* sub = app.add_subcommand("cov", "moments, covariance, densities and S-transforms of grey Brownian motion");
        static struct {
            std::string mode = "covariance";
            Params p;
            double t = 1, s = 1, x = 0, phi_scale = 0.1;
            int n = 1;
            std::vector<double> times, theta;
            std::string out;
        } o;
        sub->add_option("--mode", o.mode, "covariance | moment | charfn | density | gram | stransform | noise | epsilon")
            ->check(CLI::IsMember({"covariance", "moment", "charfn", "density", "gram", "stransform", "noise", "epsilon"}))
            ->capture_default_str();
        o.p.add(sub);
        sub->add_option("--t", o.t, "time")->capture_default_str();
        sub->add_option("--s", o.s, "second time for covariance")->capture_default_str();
        sub->add_option("--x", o.x, "point for density")->capture_default_str();
        sub->add_option("--moment", o.n, "n for E B_t^{2n}")->capture_default_str();
        sub->add_option("--times", o.times, "comma-separated times")->delimiter(',');
        sub->add_option("--theta", o.theta, "comma-separated frequencies")->delimiter(',');
        sub->add_option("--phi-scale", o.phi_scale, "test function c exp(-x^2) for S-transforms")->capture_default_str();
        sub->add_option("--out", o.out, "CSV for the Gram matrix");
        actions["cov"] = [] {
            const FracParams p = o.p.get();
            if (o.mode == "covariance") return say(num(covariance(o.t, o.s, p)));
            if (o.mode == "moment") return say(num(even_moment(o.n, o.t, p)));
            if (o.mode == "density") return say(num(marginal_density(o.x, o.t, p)));
            if (o.mode == "epsilon") return say(num(epsilon_beta(p.beta)));
            if (o.mode == "charfn" || o.mode == "gram") {
                const auto g = grey_gram(o.times, p.alpha);
                if (o.mode == "charfn") {
                    if (o.theta.size() != o.times.size()) throw InvalidArgument("cli", "--theta and --times differ in length");
                    return say(num(char_fn(Eigen::Map<const Eigen::VectorXd>(o.theta.data(), o.theta.size()), g, p.beta)));
                }
                if (o.out.empty()) throw InvalidArgument("cli", "gram needs --out");
                io::Table t;
                for (std::size_t k = 0; k < o.times.size(); ++k) t.header.push_back("t_" + std::to_string(k + 1));
                for (Eigen::Index r = 0; r < g.matrix().rows(); ++r) {
                    auto& row = t.rows.emplace_back();
                    for (Eigen::Index c = 0; c < g.matrix().cols(); ++c) row.push_back(g.matrix()(r, c));
                }
                io::write_csv(o.out, t);
                io::write_json(io::sidecar_path(o.out), {{"alpha", p.alpha}, {"times", o.times}, {"jittered", g.jittered()}});
                return say("wrote " + std::to_string(o.times.size()) + "x" + std::to_string(o.times.size()) + " Gram matrix to " + o.out);
            }
            const auto phi = SampledFunction::sample([](double x) { return o.phi_scale * std::exp(-x * x); }, -10.0, 0.01, 2001);
            const Complex v = o.mode == "stransform" ? s_transform_ggbm(phi, o.t, p) : s_transform_noise(phi, o.t, p);
            say(num(v.real()));
        };
    }
    {
        auto* sub = app.add_subcommand("simulate", "sample paths of generalised grey Brownian motion");
        static struct {
            Params p;
            std::vector<double> times;
            double T = 1;
            std::size_t steps = 0, n = 1000;
            std::uint64_t seed = 0;
            bool taus_only = false;
            std::string out;
        } o;
        o.seed = seed0;
        o.p.add(sub);
        sub->add_option("--times", o.times, "comma-separated sampling times")->delimiter(',');
        sub->add_option("--T", o.T, "horizon for a uniform grid")->capture_default_str();
        sub->add_option("--steps", o.steps, "uniform grid size (times T/steps, ..., T)");
        sub->add_option("--n", o.n, "number of paths")->capture_default_str();
        sub->add_option("--seed", o.seed, "seed (default from MLA_SEED or a fixed constant)")->capture_default_str();
        sub->add_flag("--taus", o.taus_only, "write mixing-variable draws only (one column tau)");
        sub->add_option("--out", o.out, "CSV file with a .json sidecar")->required();
        actions["simulate"] = [] {
            const FracParams p = o.p.get();
            if (o.taus_only) {
                io::Table t{{"tau"}, {}};
                for (double tau : sample_tau(p.beta, o.n, o.seed)) t.rows.push_back({tau});
                io::write_csv(o.out, t);
                io::write_json(io::sidecar_path(o.out), {{"beta", p.beta}, {"seed", o.seed}, {"n", o.n}});
                return say("wrote " + std::to_string(o.n) + " mixing draws to " + o.out);
            }
            std::vector<double> times = o.times;
            if (o.steps > 0) {
                if (!times.empty()) throw InvalidArgument("cli", "give either --times or --steps");
                for (std::size_t i = 1; i <= o.steps; ++i) times.push_back(o.T * static_cast<double>(i) / static_cast<double>(o.steps));
            }
            if (times.empty()) throw InvalidArgument("cli", "simulate needs --times or --steps");
            p.validate("simulate");
            const auto paths = sample_paths(grey_gram(times, p.alpha), p.beta, o.n, o.seed);
            io::write_csv(o.out, io::to_table(paths));
            io::write_json(io::sidecar_path(o.out), io::metadata(paths));
            say("wrote " + std::to_string(o.n) + " paths x " + std::to_string(times.size()) + " times to " + o.out);
        };
    }
    {
        auto* sub = app.add_subcommand("kernel", "time-fractional heat kernel K(t, x, y)");
        static struct {
            Params p;
            double t = 1, x = 0, y = 0;
            std::string method = "quadrature";
            OutputGrid table;
        } o;
        o.p.add(sub);
        sub->add_option("--t", o.t, "time")->required();
        sub->add_option("--x", o.x, "point")->capture_default_str();
        sub->add_option("--y", o.y, "source point")->capture_default_str();
        sub->add_option("--method", o.method, "quadrature | subordination | foxh | series")
            ->check(CLI::IsMember({"quadrature", "subordination", "foxh", "series"}))
            ->capture_default_str();
        o.table.add(sub);
        actions["kernel"] = [] {
            const FracParams p = o.p.get();
            auto k = [p](double x) {
                const KernelQuery q{o.t, x, o.y, p};
                if (o.method == "subordination") return kernel_subordination(q);
                if (o.method == "foxh") return kernel_foxh(q);
                if (o.method == "series") {
                    q.validate("kernel");
                    return kernel_series(q.offset(), q.variance(), p.beta);
                }
                return kernel_quadrature(q);
            };
            if (!o.table.active()) return say(num(k(o.x)));
            const auto f = tabulate(o.table.get(), k);
            write_table(o.table.out, f,
                        {{"alpha", p.alpha}, {"beta", p.beta}, {"t", o.t}, {"y", o.y}, {"method", o.method}});
        };
    }
    {
        auto* sub = app.add_subcommand("solve", "Cauchy problem u(t, x) = int u0(y) K(t, x, y) dy");
        static struct {
            Params p;
            double t = 1;
            SampledInput u0;
            OutputGrid table;
            std::optional<double> residual_x, pde_x;
        } o;
        o.p.add(sub);
        sub->add_option("--t", o.t, "time")->required();
        o.u0.add(sub, "--u0", "initial data");
        o.table.add(sub);
        sub->add_option("--residual-x", o.residual_x, "print the integral-equation residual at this x");
        sub->add_option("--pde-x", o.pde_x, "print the beta = 1 PDE residual at this x");
        actions["solve"] = [] {
            const FracParams p = o.p.get();
            const auto u0 = o.u0.get();
            if (o.residual_x) return say(num(residual_fie(cauchy_surface(u0, p), u0, o.t, *o.residual_x, p)));
            if (o.pde_x) return say(num(fbm_pde_residual(cauchy_surface(u0, p), o.t, *o.pde_x, p.alpha, 1e-3, u0.step)));
            GridDiagnostics diag;
            const auto u = solve_cauchy(u0, o.t, o.table.get(), p, &diag);
            write_table(o.table.out, u,
                        {{"alpha", p.alpha}, {"beta", p.beta}, {"t", o.t}, {"u0", o.u0.source},
                         {"tail_warning", diag.tail_warning}});
        };
    }
    {
        auto* sub = app.add_subcommand("fk", "Feynman-Kac Monte Carlo estimate of u(t, x)");
        static struct {
            Params p;
            double t = 1, x = 0;
            std::size_t n = 100000;
            std::uint64_t seed = 0;
            SampledInput u0;
            std::string out;
        } o;
        o.seed = seed0;
        o.p.add(sub);
        sub->add_option("--t", o.t, "time")->required();
        sub->add_option("--x", o.x, "point")->required();
        sub->add_option("--n", o.n, "samples")->capture_default_str();
        sub->add_option("--seed", o.seed, "seed (default from MLA_SEED or a fixed constant)")->capture_default_str();
        o.u0.add(sub, "--u0", "initial data");
        sub->add_option("--out", o.out, "JSON result file");
        actions["fk"] = [] {
            const FracParams p = o.p.get();
            const auto e = fk_solution(o.u0.get(), o.t, o.x, p, o.n, o.seed);
            Json params = io::params_json(p);
            params["t"] = o.t;
            params["x"] = o.x;
            params["u0"] = o.u0.source;
            finish_json(o.out, io::to_json(e, params), num(e.value) + " +/- " + num(e.std_error));
        };
    }
    {
        auto* sub = app.add_subcommand("donsker", "truncated Fourier representation of Donsker's delta");
        static struct {
            Params p;
            double t = 1, a = 0, ncut = 50;
            std::string out;
        } o;
        o.p.add(sub);
        sub->add_option("--t", o.t, "time")->capture_default_str();
        sub->add_option("--a", o.a, "level")->capture_default_str();
        sub->add_option("--ncut", o.ncut, "frequency cutoff")->capture_default_str();
        sub->add_option("--out", o.out, "JSON result file");
        actions["donsker"] = [] {
            const FracParams p = o.p.get();
            const double v = donsker_truncation(o.ncut, o.a, o.t, p);
            const double k = kernel_quadrature({o.t, o.a, 0.0, p});
            Json j = io::params_json(p);
            j.update(Json{{"t", o.t}, {"a", o.a}, {"n_cut", o.ncut}, {"value", v}, {"kernel", k}});
            finish_json(o.out, j, num(v) + " (kernel " + num(k) + ", difference " + num(k - v) + ")");
        };
    }
    {
        auto* sub = app.add_subcommand("loctime", "expected local time and its occupation estimate");
        static struct {
            Params p;
            double a = 0, T = 1;
            bool mc = false;
            std::size_t paths = 20000, steps = 500;
            std::optional<double> bandwidth;
            std::uint64_t seed = 0;
            std::string out;
        } o;
        o.seed = seed0;
        o.p.add(sub);
        sub->add_option("--a", o.a, "level")->capture_default_str();
        sub->add_option("--T", o.T, "horizon")->capture_default_str();
        sub->add_flag("--mc", o.mc, "occupation estimate from simulated paths");
        sub->add_option("--paths", o.paths, "paths for --mc")->capture_default_str();
        sub->add_option("--steps", o.steps, "time steps for --mc")->capture_default_str();
        sub->add_option("--bandwidth", o.bandwidth, "boxcar half-width for --mc (required, no default)");
        sub->add_option("--seed", o.seed, "seed (default from MLA_SEED or a fixed constant)")->capture_default_str();
        sub->add_option("--out", o.out, "JSON result file");
        actions["loctime"] = [] {
            const FracParams p = o.p.get();
            Json params = io::params_json(p);
            params["a"] = o.a;
            params["T"] = o.T;
            if (!o.mc) {
                const double v = local_time_expectation(o.a, o.T, p);
                params["value"] = v;
                return finish_json(o.out, params, num(v));
            }
            if (!o.bandwidth) throw InvalidArgument("cli", "--mc needs --bandwidth");
            params["n_steps"] = o.steps;
            params["bandwidth"] = *o.bandwidth;
            const auto e = local_time_mc(o.a, o.T, p, o.paths, o.steps, *o.bandwidth, o.seed);
            finish_json(o.out, io::to_json(e, params), num(e.value) + " +/- " + num(e.std_error));
        };
    }
    {
        auto* sub = app.add_subcommand("selftest", "run the acceptance criteria and the operation manifest");
        static std::vector<int> only;
        sub->add_option("--only", only, "comma-separated criterion ids")->delimiter(',');
        actions["selftest"] = [&app] {
            int failed = 0;
            for (const auto& [op, name] : kManifest)
                if (!app.get_subcommand_no_throw(name)) {
                    say(std::string("FAIL manifest: ") + op + " maps to missing subcommand " + name);
                    ++failed;
                }
            say("manifest: " + std::to_string(kManifest.size()) + " operations mapped to subcommands");
            std::vector<int> ids = only;
            if (ids.empty())
                for (int id = 1; id <= acceptance::kCriterionCount; ++id) ids.push_back(id);
            for (int id : ids) {
                const auto r = acceptance::run_criterion(id);
                say(acceptance::format_line(r));
                std::fflush(stdout);
                if (!r.passed()) ++failed;
            }
            if (failed) throw NumericError("selftest", std::to_string(failed) + " check(s) failed");
            say("selftest passed");
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    actions.at(app.get_subcommands().front()->get_name())();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mla::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
