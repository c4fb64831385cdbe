#include "mla/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <numbers>
#include <utility>

#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"
#include "mla/heatkernel.hpp"
#include "mla/montecarlo.hpp"
#include "mla/specfun.hpp"

namespace mla::acceptance {
namespace {

// Collects measured quantities against pinned limits.
class Tally {
public:
    // Passes when measured < limit.
    void below(const std::string& label, double measured, double limit) {
        const bool good = std::isfinite(measured) && measured < limit;
        ok_ = ok_ && good;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s %.3g (<%g)", label.c_str(), measured, limit);
        add(buf, good);
    }
    void require(const std::string& label, bool good) {
        ok_ = ok_ && good;
        add(label, good);
    }
    bool ok() const { return ok_; }
    const std::string& detail() const { return detail_; }

private:
    void add(const std::string& part, bool good) {
        if (!detail_.empty()) detail_ += "; ";
        detail_ += part;
        if (!good) detail_ += " [miss]";
    }
    bool ok_ = true;
    std::string detail_;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    // Distance to the target in standard errors.
    double z(double target) const { return se > 0.0 ? std::abs(mean - target) / se : (mean == target ? 0.0 : 1e300); }
};

template <class F>
Estimate estimate(std::size_t n, F&& sample) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sample(i);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    return {mean, std::sqrt(m2 / (static_cast<double>(n) - 1.0) / static_cast<double>(n))};
}

double gaussian(double a, double v) { return std::exp(-a * a / (2 * v)) / std::sqrt(2 * std::numbers::pi * v); }
double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

SampledFunction sampled(double (*f)(double), double lo, double hi, double h) {
    const auto n = static_cast<std::size_t>(std::lround((hi - lo) / h)) + 1;
    return SampledFunction::sample(f, lo, h, n);
}

std::size_t index_of(const SampledFunction& f, double x) {
    return static_cast<std::size_t>(std::lround((x - f.start) / f.step));
}

double max_abs_diff(const SampledFunction& f, const SampledFunction& g, double lo, double hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.x(i) >= lo && f.x(i) <= hi) worst = std::max(worst, std::abs(f.values[i] - g.values[i]));
    return worst;
}

constexpr std::uint64_t kSeed = 20240917;

void gaussian_collapse(Tally& tally) {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0})
        for (auto [x, y] : std::vector<std::pair<double, double>>{{0, 0}, {0.7, 0}, {1.5, -0.5}, {-3, 0.2}}) {
            const KernelQuery q{t, x, y, {1.0, 1.0}};
            const double g = gaussian(x - y, t);
            for (double k : {kernel_quadrature(q), kernel_subordination(q), kernel_foxh(q)})
                worst = std::max(worst, std::abs(k - g));
        }
    tally.below("max |K - Gaussian|", worst, 1e-10);

    const std::vector<double> times{0.5, 1.0, 2.0};
    const auto p = sample_paths(grey_gram(times, 1.0), 1.0, 100000, kSeed);
    double z = 0.0;
    for (Eigen::Index c = 0; c < 3; ++c) {
        const double t = times[c];
        z = std::max(z, estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, c), 2); }).z(t));
        z = std::max(z, estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, c), 4); }).z(3 * t * t));
    }
    tally.below("variance/kurtosis max z", z, 3.0);
}

void special_functions(Tally& tally) {
    double worst = 0.0;
    for (double z = -10.0; z <= 10.0; z += 0.25) worst = std::max(worst, rel(mittag_leffler(1.0, z).value, std::exp(z)));
    tally.below("E_1 vs exp rel", worst, 1e-12);

    worst = 0.0;
    for (double beta : {0.25, 0.5, 0.75, 0.9})
        for (int z = 0; z <= 5; ++z) worst = std::max(worst, m_wright_laplace_residual(beta, Complex(z, 0.0)));
    tally.below("Laplace identity", worst, 1e-6);

    worst = 0.0;
    for (double beta : {0.25, 0.5, 0.75, 0.9})
        for (double delta : {-0.5, 1.0, 2.0}) {
            // r = u^2 removes the r^{-1/2} singularity
            auto f = [&](double u) { return 2.0 * u * std::pow(u * u, delta) * m_wright(beta, u * u).value; };
            const double moment = detail::gauss_composite(f, 0.0, 12.0, 48);
            worst = std::max(worst, std::abs(moment - std::tgamma(delta + 1) / std::tgamma(beta * delta + 1)));
        }
    tally.below("moment law", worst, 1e-6);
}

void integral_identity(Tally& tally) {
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 1.5})
        for (double beta : {0.25, 0.5, 0.75})
            for (double lambda : {0.5, 1.0, 2.0})
                for (double t : {0.7, 1.0}) worst = std::max(worst, ml_integral_identity_residual(alpha, beta, lambda, t));
    tally.below("max residual over 54 points", worst, 1e-6);
}

void kernel_agreement(Tally& tally) {
    double worst = 0.0;
    for (double ab : {0.5, 0.75})
        for (double t : {0.5, 1.0, 2.0})
            for (double a : {0.0, 0.5, 1.0, 2.0}) {
                const KernelQuery q{t, a, 0.0, {ab, ab}};
                const double kq = kernel_quadrature(q), ks = kernel_subordination(q), kf = kernel_foxh(q);
                worst = std::max({worst, rel(ks, kq), rel(kf, kq), rel(ks, kf)});
            }
    tally.below("max pairwise rel", worst, 1e-6);

    worst = 0.0;
    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.75, 0.75}, {1.4, 0.3}, {0.8, 1.0}}) {
        const FracParams p{alpha, beta};
        const double mass =
            2.0 * detail::gauss_composite([&](double y) { return kernel_subordination({1.0, 0.0, y, p}); }, 0.0, 60.0, 96);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    tally.below("|mass - 1|", worst, 1e-6);
}

void sampler(Tally& tally) {
    struct Case { double alpha, beta; std::vector<double> times, theta; };
    const std::vector<Case> cases{{1.0, 1.0, {1.0, 2.0}, {1.0, 0.0}},
                                  {0.8, 0.6, {0.5, 1.5}, {0.7, -0.4}},
                                  {0.5, 0.5, {1.0}, {1.2}},
                                  {1.5, 0.3, {0.2, 0.4, 0.9}, {0.5, 0.5, -0.8}},
                                  {0.3, 0.9, {1.0, 2.0, 3.0}, {0.3, -0.2, 0.4}},
                                  {1.2, 0.75, {0.25, 2.0}, {-1.0, 0.6}}};
    constexpr std::size_t n = 100000;
    double z = 0.0;
    for (const Case& c : cases) {
        const auto gram = grey_gram(c.times, c.alpha);
        const auto paths = sample_paths(gram, c.beta, n, kSeed);
        const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(c.theta.data(), c.theta.size());
        const Eigen::VectorXd proj = paths.samples * theta;
        z = std::max(z, estimate(n, [&](std::size_t i) { return std::cos(proj[i]); }).z(char_fn(theta, gram, c.beta)));
    }
    tally.below("char fn max z", z, 3.0);

    z = 0.0;
    for (auto [t, h] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 1.0}}) {
        const auto p = sample_paths(grey_gram({h, t, t + h}, 0.8), 0.6, n, kSeed + 1);
        for (double lambda : {0.5, 1.0, 2.0}) {
            const auto d = estimate(n, [&](std::size_t i) {
                const auto r = static_cast<Eigen::Index>(i);
                return std::cos(lambda * (p.samples(r, 2) - p.samples(r, 1))) - std::cos(lambda * p.samples(r, 0));
            });
            z = std::max(z, d.z(0.0));
        }
    }
    tally.below("increments max z", z, 3.0);

    z = 0.0;
    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.8, 0.6}, {0.5, 0.5}}) {
        const FracParams params{alpha, beta};
        const auto p = sample_paths(grey_gram({1.0, 2.0}, alpha), beta, n, kSeed + 2);
        for (Eigen::Index c = 0; c < 2; ++c) {
            const double t = c == 0 ? 1.0 : 2.0;
            for (int m : {1, 2})
                z = std::max(z, estimate(n, [&](std::size_t i) { return std::pow(p.samples(i, c), 2 * m); })
                                    .z(even_moment(m, t, params)));
        }
    }
    tally.below("moments max z", z, 3.0);
}

void feynman_kac(Tally& tally) {
    const auto u0 = sampled([](double y) { return std::exp(-y * y / 2); }, -12.0, 12.0, 0.01);
    double z = 0.0;
    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.0, 0.5}, {0.8, 0.6}}) {
        const auto u = solve_cauchy(u0, 1.0, {-2.0, 1.0, 5}, {alpha, beta});
        for (std::size_t i = 0; i < 5; ++i) {
            const auto e = fk_solution(u0, 1.0, u.x(i), {alpha, beta}, 100000, kSeed);
            z = std::max(z, std::abs(e.value - u.values[i]) / e.std_error);
        }
    }
    tally.below("max z over 15 points", z, 3.0);
}

void fractional_calculus(Tally& tally) {
    const auto f = sampled([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 0.01);
    double coincide = 0.0, inverse = 0.0;
    for (double alpha : {0.3, 0.5, 0.7}) {
        const auto m = marchaud_derivative_grid(alpha, f, Side::left);
        coincide = std::max(coincide, max_abs_diff(m, rl_derivative_grid(alpha, f, Side::left), -4, 4));
        for (double x = -4; x <= 4; x += 0.5)
            coincide = std::max(coincide, std::abs(caputo_derivative_interval(alpha, f, x) - m.values[index_of(m, x)]));
        for (Side side : {Side::left, Side::right})
            inverse = std::max(inverse,
                               max_abs_diff(marchaud_derivative_grid(alpha, rl_integral_grid(alpha, f, side), side), f, -4, 4));
    }
    tally.below("three derivatives", coincide, 1e-3);
    tally.below("D o I - id", inverse, 1e-3);

    // mpmath quadrature of the defining integrals (tests/oracles/fraccalc_oracle.py)
    struct Row { double (*op)(double, double, double, Side, double); double alpha, a, b; Side side; double t, v; };
    const Side L = Side::left, R = Side::right;
    const std::vector<Row> rows{
        {rl_integral_indicator, 0.3, 0, 1, L, 0.5, 0.90504614768952917},
        {rl_integral_indicator, 0.3, 0, 1, L, 2.5, 0.20840264718075316},
        {rl_integral_indicator, 0.7, -1, 2, R, -3, 1.6075305488032911},
        {rl_integral_indicator, 0.7, -1, 2, R, 0.4, 1.5293001888794811},
        {rl_integral_indicator, 0.5, 0, 1, R, 0.5, 0.79788456080286535},
        {rl_derivative_indicator, 0.4, 0, 1, L, 0.3, 1.0869278859446981},
        {rl_derivative_indicator, 0.4, 0, 1, L, 1.7, -0.23139233911576526},
        {rl_derivative_indicator, 0.6, -1, 1, R, -2, -0.21762101981648331},
        {rl_derivative_indicator, 0.6, -1, 1, R, 0.2, 0.5154104595567387},
        {marchaud_derivative_indicator, 0.5, 0, 1, R, 0.5, 0.79788456080286536},
        {m_h_indicator, 0.75, 0, 1, R, -1, 0.2023843754725414},
        {m_h_indicator, 0.75, 0, 1, L, 0.5, 0.89946033919376847},
        {m_h_indicator, 0.3, 0, 1, L, 2, -0.094534714451099738},
        {m_h_indicator, 0.3, 0, 1, R, -0.5, -0.16547513392482963},
        {m_h_indicator, 0.3, 0, 1, L, 0.5, 0.83887480506001565}};
    double worst = 0.0;
    for (const Row& r : rows) worst = std::max(worst, std::abs(r.op(r.alpha, r.a, r.b, r.side, r.t) - r.v));
    tally.below("indicator closed forms", worst, 1e-6);

    // F D^alpha_{+-} g = (-+ i w)^alpha F g for g = (e^{-x^2})', F g(w) = int e^{iwx} g(x) dx
    const double h = 0.01;
    const auto g = sampled([](double x) { return -2 * x * std::exp(-x * x); }, -60.0, 60.0, h);
    worst = 0.0;
    for (double alpha : {0.3, 0.5, 0.7})
        for (Side side : {Side::left, Side::right}) {
            const auto d = marchaud_derivative_grid(alpha, g, side);
            for (double w : {0.5, 1.0, 2.0, 3.0}) {
                std::complex<double> ft = 0.0;
                for (std::size_t i = 0; i < d.size(); ++i) ft += d.values[i] * std::polar(h, w * d.x(i));
                const std::complex<double> iw(0.0, side == Side::left ? -w : w);
                const std::complex<double> g_hat(0.0, -w * std::sqrt(std::numbers::pi) * std::exp(-w * w / 4));
                const auto want = std::pow(iw, alpha) * g_hat;
                worst = std::max(worst, std::abs(ft - want) / std::abs(want));
            }
        }
    tally.below("Fourier symbol rel", worst, 1e-3);
}

void s_transforms(Tally& tally) {
    const auto phi = sampled([](double x) { return 0.1 * std::exp(-x * x); }, -10.0, 10.0, 0.01);
    double worst = 0.0;
    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.8, 0.6}, {0.5, 0.5}}) {
        const FracParams params{alpha, beta};
        const double h = 1e-3;
        const auto fd = (s_transform_ggbm(phi, 1.0 + h, params) - s_transform_ggbm(phi, 1.0 - h, params)) / (2 * h);
        const auto noise = s_transform_noise(phi, 1.0, params);
        worst = std::max(worst, std::abs(fd - noise) / std::abs(noise));
    }
    tally.below("FD vs noise rel", worst, 1e-4);
}

void local_times(Tally& tally) {
    double worst = 0.0;
    for (double T : {0.5, 1.0, 2.5})
        worst = std::max(worst, std::abs(local_time_expectation(0, T, {1, 1}) - std::sqrt(2 * T / std::numbers::pi)));
    tally.below("Brownian sqrt(2T/pi)", worst, 1e-8);

    const FracParams p{0.5, 0.5};
    const auto est = local_time_mc(0, 1, p, 20000, 500, 0.05, kSeed);
    tally.below("MC rel to quadrature", std::abs(est.value / local_time_expectation(0, 1, p) - 1.0), 0.05);
}

void donsker(Tally& tally) {
    const FracParams p{0.5, 0.5};
    const double kernel = kernel_quadrature({1, 0, 0, p});
    tally.below("|value(50) - kernel|", std::abs(donsker_truncation(50, 0, 1, p) - kernel), 1e-3);

    bool shrinking = true;
    double previous = 1e300;
    double last = donsker_truncation(5, 0, 1, p);
    for (double n : {10.0, 20.0, 40.0, 80.0}) {
        const double next = donsker_truncation(n, 0, 1, p);
        shrinking = shrinking && std::abs(next - last) < previous;
        previous = std::abs(next - last);
        last = next;
    }
    tally.require(shrinking ? "successive changes shrink" : "successive changes do not shrink", shrinking);
}

struct Criterion {
    const char* name;
    double budget;
    void (*run)(Tally&);
};

const Criterion kCriteria[kCriterionCount] = {
    {"Gaussian collapse", 5, gaussian_collapse},
    {"special-function identities", 10, special_functions},
    {"Mittag-Leffler integral identity", 10, integral_identity},
    {"three-representation kernel agreement", 20, kernel_agreement},
    {"sampler soundness", 60, sampler},
    {"Feynman-Kac vs Cauchy solver", 60, feynman_kac},
    {"fractional-calculus suite", 30, fractional_calculus},
    {"S-transform differentiability", 10, s_transforms},
    {"local times", 120, local_times},
    {"Donsker truncation", 5, donsker},
};

}  // namespace

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriterionCount) throw InvalidArgument("acceptance", "run_criterion: id must lie in [1,10]");
    const Criterion& c = kCriteria[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
        Tally tally;
        c.run(tally);
        r.checks_passed = tally.ok();
        r.detail = tally.detail();
    } catch (const std::exception& e) {
        r.checks_passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        out.push_back(run_criterion(id));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[96], tail[64];
    std::snprintf(head, sizeof head, "%s %2d %s: ", r.passed() ? "PASS" : "FAIL", r.id, r.name.c_str());
    std::snprintf(tail, sizeof tail, " | %.2f s (<%g s)", r.seconds, r.budget_seconds);
    return head + r.detail + tail;
}

}  // namespace mla::acceptance
