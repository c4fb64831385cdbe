#include "mla/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {
namespace {

constexpr double kPi = std::numbers::pi;

void check_order(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("fraccalc", std::string(what) + ": order must lie in (0,1)");
}

void check_interval(double a, double b, double t, const char* what) {
    if (!(a < b)) throw InvalidArgument("fraccalc", std::string(what) + ": requires a < b");
    if (!std::isfinite(t)) throw InvalidArgument("fraccalc", std::string(what) + ": t must be finite");
}

// s^p for s > 0, else 0 (p > 0) ; the one-sided power s^p_+.
double power_plus(double s, double p) { return s > 0.0 ? std::pow(s, p) : 0.0; }

// Closed form shared by I^p (p > 0) and D^{-p} (p < 0) on 1_[a,b), before 1/Gamma(p+1).
double indicator_kernel(double p, double a, double b, Side side, double t) {
    if (side == Side::right) return power_plus(b - t, p) - power_plus(a - t, p);
    return power_plus(t - a, p) - power_plus(t - b, p);
}

SampledFunction mirrored(const SampledFunction& f) {
    SampledFunction g = f;
    std::reverse(g.values.begin(), g.values.end());
    g.start = -f.end();
    return g;
}

void check_tails(const SampledFunction& f, GridDiagnostics* diag) {
    if (!diag) return;
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (edge > 1e-8 * peak) diag->tail_warning = true;
}

void check_grid(const SampledFunction& f, const char* what) {
    f.validate(what);
    if (f.size() < 8)
        throw InvalidArgument("fraccalc", std::string(what) + ": grid too coarse (fewer than 8 points)");
}

// (1+u)^p + (1-u)^p - 2 for 0 < u <= 1 without cancellation at small u.
double second_difference_ratio(double p, double u) {
    if (u > 0.05) return std::pow(1.0 + u, p) + std::pow(1.0 - u, p) - 2.0;
    double sum = 0.0, binom = 1.0, upow = 1.0;
    for (int j = 1; j < 60; ++j) {
        binom *= (p - (j - 1)) / j;
        upow *= u;
        if (j % 2 == 1) continue;
        const double term = 2.0 * binom * upow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// (expm1(c x) - c x) / c, accurate for small c x.
double expm1_remainder(double c, double x) {
    const double y = c * x;
    if (std::abs(y) > 0.1) return (std::expm1(y) - y) / c;
    double term = x * y / 2.0, sum = term;
    for (int k = 3; k < 30; ++k) {
        term *= y / k;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Left-sided product trapezoid I^alpha on the grid; f is taken as 0 left of the grid.
std::vector<double> rl_left(double alpha, const SampledFunction& f) {
    const std::size_t n = f.size();
    const double p = alpha + 1.0;
    // interior weight for offset k >= 1: (k+1)^p - 2k^p + (k-1)^p
    std::vector<double> w(n);
    w[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        w[k] = std::pow(kd, p) * second_difference_ratio(p, 1.0 / kd);
    }
    const double scale = std::pow(f.step, alpha) / gamma(alpha + 2.0);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double id = static_cast<double>(i);
        double acc = (std::pow(id - 1.0, p) - (id - 1.0 - alpha) * std::pow(id, alpha)) * f.values[0];
        for (std::size_t j = 1; j <= i; ++j) acc += w[i - j] * f.values[j];
        out[i] = scale * acc;
    }
    return out;
}

std::vector<double> marchaud_left(double alpha, const SampledFunction& f, std::size_t k) {
    const std::size_t n = f.size();
    const double h = f.step;
    const double hs = std::pow(h, -alpha);
    // Cell [m h, (m+1) h] of xi: f(x_i - xi) is linear between f_{i-m} and f_{i-m-1}.
    std::vector<double> near_w(n, 0.0), far_w(n, 0.0);
    for (std::size_t m = std::max<std::size_t>(k, 1); m < n; ++m) {
        const double md = static_cast<double>(m);
        const double L = std::log1p(1.0 / md);
        const double j0 = -hs * std::pow(md, -alpha) * std::expm1(-alpha * L) / alpha;
        const double far =
            hs * std::pow(md, 1.0 - alpha) * (expm1_remainder(1.0 - alpha, L) - expm1_remainder(-alpha, L));
        far_w[m] = far;
        near_w[m] = j0 - far;
    }
    const SampledFunction d1 = derivative_grid(f);
    const SampledFunction d2 = derivative_grid(d1);
    const double eps = static_cast<double>(k) * h;
    const double c = alpha / gamma(1.0 - alpha);
    const double head = std::pow(eps, -alpha) / alpha;
    const double c1 = std::pow(eps, 1.0 - alpha) / (1.0 - alpha);
    const double c2 = std::pow(eps, 2.0 - alpha) / (2.0 * (2.0 - alpha));

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = f.values[i] * head;
        for (std::size_t m = k; m < i; ++m)
            acc -= near_w[m] * f.values[i - m] + far_w[m] * f.values[i - m - 1];
        // (0, eps): f(x) - f(x - xi) ~ f' xi - f'' xi^2 / 2
        acc += d1.values[i] * c1 - d2.values[i] * c2;
        out[i] = c * acc;
    }
    return out;
}

// int_{u1}^{u0} (g0 + slope (u0 - u)) u^{-alpha} du
double linear_against_power(double g0, double slope, double u0, double u1, double alpha) {
    const double q = 1.0 - alpha;
    const double m0 = (std::pow(u0, q) - std::pow(u1, q)) / q;
    const double m1 = (std::pow(u0, q + 1.0) - std::pow(u1, q + 1.0)) / (q + 1.0);
    return (g0 + slope * u0) * m0 - slope * m1;
}

}  // namespace

SampledFunction::SampledFunction(double start_, double step_, std::vector<double> values_)
    : start(start_), step(step_), values(std::move(values_)) {
    validate("SampledFunction");
}

void SampledFunction::validate(const char* what) const {
    if (values.size() < 2)
        throw InvalidArgument("fraccalc", std::string(what) + ": need at least 2 samples");
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
        throw InvalidArgument("fraccalc", std::string(what) + ": grid step must be positive");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("fraccalc", std::string(what) + ": non-finite sample");
}

double SampledFunction::interpolate(double t) const {
    const double s = (t - start) / step;
    if (!(s >= 0.0) || s > static_cast<double>(values.size() - 1)) return 0.0;
    const std::size_t i = std::min(static_cast<std::size_t>(s), values.size() - 2);
    const double w = s - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

bool SampledFunction::same_grid(const SampledFunction& o) const {
    return size() == o.size() && std::abs(step - o.step) <= 1e-12 * step &&
           std::abs(start - o.start) <= 1e-12 * std::max(1.0, std::abs(start));
}

double k_h(double H) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidArgument("fraccalc", "k_h: H must lie in (0,1)");
    return std::sqrt(2.0 * H * std::sin(kPi * H) * gamma(2.0 * H));
}

double rl_integral_indicator(double alpha, double a, double b, Side side, double t) {
    check_order(alpha, "rl_integral_indicator");
    check_interval(a, b, t, "rl_integral_indicator");
    return indicator_kernel(alpha, a, b, side, t) / gamma(alpha + 1.0);
}

double rl_derivative_indicator(double alpha, double a, double b, Side side, double t) {
    check_order(alpha, "rl_derivative_indicator");
    check_interval(a, b, t, "rl_derivative_indicator");
    if (t == a || t == b) throw PoleError("fraccalc", "rl_derivative_indicator: singular at the interval ends");
    return indicator_kernel(-alpha, a, b, side, t) / gamma(1.0 - alpha);
}

double marchaud_derivative_indicator(double alpha, double a, double b, Side side, double t) {
    check_order(alpha, "marchaud_derivative_indicator");
    check_interval(a, b, t, "marchaud_derivative_indicator");
    if (t == a || t == b)
        throw PoleError("fraccalc", "marchaud_derivative_indicator: singular at the interval ends");
    // (alpha/Gamma(1-alpha)) int_0^inf (f(t) - f(t -+ xi)) xi^{-alpha-1} dxi, case by case
    const double g = gamma(1.0 - alpha);
    const double near = side == Side::left ? t - a : b - t;  // distance into the support
    const double far = side == Side::left ? t - b : a - t;
    if (near <= 0.0) return 0.0;                       // no support on the integration side
    if (far < 0.0) return std::pow(near, -alpha) / g;  // t inside [a, b)
    return (std::pow(near, -alpha) - std::pow(far, -alpha)) / g;
}

double m_h_indicator(double H, double a, double b, Side side, double t) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidArgument("fraccalc", "m_h_indicator: H must lie in (0,1)");
    check_interval(a, b, t, "m_h_indicator");
    if (H == 0.5) return (t >= a && t < b) ? 1.0 : 0.0;
    if (H < 0.5 && (t == a || t == b)) throw PoleError("fraccalc", "m_h_indicator: singular at the interval ends");
    const double p = H - 0.5;
    return k_h(H) * indicator_kernel(p, a, b, side, t) / gamma(p + 1.0);
}

SampledFunction derivative_grid(const SampledFunction& f) {
    f.validate("derivative_grid");
    const std::size_t n = f.size();
    const auto& v = f.values;
    const double h = f.step;
    SampledFunction d = f;
    if (n < 3) {
        d.values.assign(n, (v[1] - v[0]) / h);
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) d.values[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d.values[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d.values[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

SampledFunction rl_integral_grid(double alpha, const SampledFunction& f, Side side, GridDiagnostics* diag) {
    check_order(alpha, "rl_integral_grid");
    check_grid(f, "rl_integral_grid");
    check_tails(f, diag);
    if (side == Side::right) return mirrored(rl_integral_grid(alpha, mirrored(f), Side::left, nullptr));
    return {f.start, f.step, rl_left(alpha, f)};
}

SampledFunction rl_derivative_grid(double alpha, const SampledFunction& f, Side side, GridDiagnostics* diag) {
    check_order(alpha, "rl_derivative_grid");
    check_grid(f, "rl_derivative_grid");
    check_tails(f, diag);
    if (side == Side::right) return mirrored(rl_derivative_grid(alpha, mirrored(f), Side::left, nullptr));
    return derivative_grid(SampledFunction(f.start, f.step, rl_left(1.0 - alpha, f)));
}

SampledFunction marchaud_derivative_grid(double alpha, const SampledFunction& f, Side side, double eps,
                                         GridDiagnostics* diag) {
    check_order(alpha, "marchaud_derivative_grid");
    check_grid(f, "marchaud_derivative_grid");
    if (eps < 0.0 || std::isnan(eps))
        throw InvalidArgument("fraccalc", "marchaud_derivative_grid: eps must be positive");
    const double span = f.end() - f.start;
    if (eps > 0.1 * span)
        throw InvalidArgument("fraccalc", "marchaud_derivative_grid: eps exceeds 10% of the grid span");
    const std::size_t k =
        eps == 0.0 ? 4 : std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(eps / f.step)));
    check_tails(f, diag);
    if (side == Side::right) {
        const SampledFunction g = mirrored(f);
        return mirrored(SampledFunction(g.start, g.step, marchaud_left(alpha, g, k)));
    }
    return {f.start, f.step, marchaud_left(alpha, f, k)};
}

double caputo_derivative_interval(double alpha, const SampledFunction& f, double x) {
    check_order(alpha, "caputo_derivative_interval");
    f.validate("caputo_derivative_interval");
    if (f.size() < 3) throw InvalidArgument("fraccalc", "caputo_derivative_interval: need at least 3 samples");
    if (!(x >= f.start && x <= f.end() + 1e-12 * f.step))
        throw InvalidArgument("fraccalc", "caputo_derivative_interval: x outside the interval");
    const SampledFunction d = derivative_grid(f);
    const double h = f.step;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        const double tj = f.x(j);
        if (tj >= x) break;
        const double slope = (d.values[j + 1] - d.values[j]) / h;
        const double u0 = x - tj;
        const double u1 = std::max(0.0, x - f.x(j + 1));
        // f'(t) = d_j + slope (t - t_j) = d_j + slope (u0 - u)
        acc += linear_against_power(d.values[j], slope, u0, u1, alpha);
    }
    return acc / gamma(1.0 - alpha);
}

SampledFunction m_h_grid(double H, const SampledFunction& f, Side side, GridDiagnostics* diag) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidArgument("fraccalc", "m_h_grid: H must lie in (0,1)");
    if (H == 0.5) return f;
    SampledFunction g = H > 0.5 ? rl_integral_grid(H - 0.5, f, side, diag)
                                : marchaud_derivative_grid(0.5 - H, f, side, 0.0, diag);
    const double k = k_h(H);
    for (double& v : g.values) v *= k;
    return g;
}

double inner_l2(const SampledFunction& f, const SampledFunction& g) {
    if (!f.same_grid(g)) throw InvalidArgument("fraccalc", "inner_l2: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.values[i] * g.values[i];
    acc -= 0.5 * (f.values.front() * g.values.front() + f.values.back() * g.values.back());
    return acc * f.step;
}

double inner_alpha(const SampledFunction& f, const SampledFunction& g, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidArgument("fraccalc", "inner_alpha: alpha must lie in (0,2)");
    f.validate("inner_alpha");
    g.validate("inner_alpha");
    if (!f.same_grid(g)) throw InvalidArgument("fraccalc", "inner_alpha: grid mismatch");

    const double h = f.step;
    const double norm = h / std::sqrt(2.0 * kPi);
    auto transform = [&](const SampledFunction& s, double w) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) acc += s.values[i] * std::polar(1.0, w * s.x(i));
        return norm * acc;
    };
    auto spectrum = [&](double w) { return std::real(std::conj(transform(f, w)) * transform(g, w)); };

    // Cut the frequency range once the cross spectrum has decayed for good.
    const double nyquist = kPi / h;
    const double dw = nyquist / 512.0;
    double peak = 0.0, cutoff = nyquist;
    int quiet = 0;
    for (double w = 0.0; w <= nyquist; w += dw) {
        const double s = std::abs(spectrum(w));
        peak = std::max(peak, s);
        quiet = (s < 1e-16 * peak) ? quiet + 1 : 0;
        if (quiet >= 8) {
            cutoff = w;
            break;
        }
    }
    if (peak == 0.0) return 0.0;
    auto integrand = [&](double w) { return std::pow(w, 1.0 - alpha) * spectrum(w); };
    // the weight |w|^{1-alpha} is singular or non-smooth at 0; double-exponential rule
    auto q = detail::endpoint_singular(integrand, 0.0, cutoff, 1e-12);
    const double c_alpha = gamma(alpha + 1.0) * std::sin(kPi * alpha / 2.0);
    return 2.0 * c_alpha * q.value;
}

}  // namespace mla
