#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mla/detail/compensated_sum.hpp"
#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

struct Evaluation {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::size_t terms = 0;
    double error = std::numeric_limits<double>::infinity();
    double cancellation = 1.0;  // sum |terms| / |sum|
};

// sum_n (-x)^n / (n! Gamma(1 - beta - beta n))
Evaluation series(double beta, double x, double tol) {
    Evaluation out;
    const double log_x = std::log(x);
    detail::CompensatedSum<double> sum;
    double roundoff = 0.0;
    double last_log = -std::numeric_limits<double>::infinity();
    std::size_t last_index = 0;
    double step_ratio = 1.0;
    int small_run = 0;
    for (std::size_t n = 0; n < 5000; ++n) {
        const double y = 1.0 - beta - beta * static_cast<double>(n);
        if (is_gamma_pole(y)) {
            ++small_run;
            continue;
        }
        double mag, log_mag, rel;
        const double nd = static_cast<double>(n);
        if (n < 170 && y > -169.0 && nd * std::abs(log_x) < 700.0) {
            mag = std::pow(x, nd) / std::tgamma(nd + 1.0) * std::abs(rgamma(y));
            if (mag == 0.0) {
                ++small_run;
                continue;
            }
            log_mag = std::log(mag);
            rel = 12.0 * kEps;
        } else {
            const double lg = log_abs_gamma(y), lf = std::lgamma(nd + 1.0);
            log_mag = nd * log_x - lf - lg;
            if (log_mag > 700.0) return out;
            mag = std::exp(log_mag);
            rel = kEps * (4.0 + std::abs(nd * log_x) + lf + std::abs(lg));
        }
        // M_beta is far below 1e4, so a term this large means the sum will be rejected for cancellation
        if (log_mag > 27.6) return out;
        const int sign = ((n % 2 == 0) ? 1 : -1) * gamma_sign(y);
        sum.add(sign * mag);
        roundoff += mag * rel;

        const bool decreasing = log_mag < last_log;
        if (std::isfinite(last_log))
            step_ratio = std::exp((log_mag - last_log) / static_cast<double>(n - last_index));
        last_log = log_mag;
        last_index = n;

        const double scale = std::abs(sum.value());
        small_run = (mag < tol * scale) ? small_run + 1 : 0;
        if (small_run >= 3 && decreasing && step_ratio < 1.0) {
            const double tail = mag * step_ratio / (1.0 - step_ratio);
            if (tail > 0.5 * tol * scale) continue;
            out.value = sum.value();
            out.terms = n + 1;
            out.error = tail + roundoff;
            out.cancellation = sum.abs_sum() / std::max(scale, std::numeric_limits<double>::min());
            return out;
        }
    }
    return out;
}

// Exact integral along the steepest-descent path of the Hankel representation.
// With t0 = (beta x)^{1/(1-beta)} and the path r(theta) = (sin(beta th)/(beta sin th))^{1/(1-beta)},
//   M_beta(x) = t0^beta/pi int_0^pi exp(t0 phi(th)) r^{beta-1} (r' sin(beta th) + r cos(beta th)) dth,
//   phi = r cos th - r^beta cos(beta th)/beta,
// and the factor exp(t0 phi(0)) = exp(-(1-beta)/beta t0) is pulled out.
Evaluation steepest_descent(double beta, double x) {
    Evaluation out;
    const double nu = beta;
    const double t0 = std::pow(nu * x, 1.0 / (1.0 - nu));
    const double phi0 = 1.0 - 1.0 / nu;
    const double log_prefactor = nu * std::log(t0) + t0 * phi0 - std::log(kPi);
    if (log_prefactor < -745.0) {
        out.value = 0.0;
        out.terms = 1;
        out.error = std::numeric_limits<double>::min();
        return out;
    }
    const double p = 1.0 / (1.0 - nu);
    std::size_t evaluations = 0;
    auto integrand = [&](double th) -> double {
        ++evaluations;
        double g, dg;
        if (th < 1e-4) {
            const double c = (1.0 - nu * nu) / 6.0;
            g = 1.0 + c * th * th;
            dg = 2.0 * c * th;
        } else {
            const double s = std::sin(th), sn = std::sin(nu * th);
            g = sn / (nu * s);
            dg = (nu * std::cos(nu * th) * s - sn * std::cos(th)) / (nu * s * s);
        }
        if (!std::isfinite(g) || g <= 0.0) return 0.0;
        const double r = std::pow(g, p);
        const double rb = std::pow(g, nu * p);  // r^nu
        const double phi = r * std::cos(th) - rb * std::cos(nu * th) / nu;
        const double exponent = t0 * (phi - phi0);
        if (exponent < -700.0 || !std::isfinite(r)) return 0.0;
        const double dr = p * rb * dg;
        return std::exp(exponent) * (rb / r) * (dr * std::sin(nu * th) + r * std::cos(nu * th));
    };
    // The integrand peaks at theta = 0 with width ~ t0^{-1/2}; geometric panels
    // resolve it, and a fixed Gauss-Legendre rule gives an independent check.
    const double width = std::min(kPi / 4.0, 1.0 / std::sqrt(t0));
    double total = 0.0, error = 0.0;
    for (double a = 0.0, b = width; a < kPi; a = b, b = std::min(kPi, 2.0 * b)) {
        const double check = detail::gauss_composite(integrand, a, b, 4);
        // panels past the peak that cannot move the sum skip refinement
        if (a > 0.0 && std::abs(check) <= kEps * kEps * std::abs(total)) {
            total += check;
            error += std::abs(check);
            continue;
        }
        // the exponent t0 (phi - phi0) carries round-off ~ t0 eps, a floor for any refinement
        auto q = detail::gk(integrand, a, b, std::max(1e-14, 16.0 * kEps * t0), 6);
        total += q.value;
        error += std::min(q.error, std::abs(q.value - check) + 4.0 * kEps * q.l1);
    }
    const double scale = std::exp(log_prefactor);
    out.value = scale * total;
    out.error = scale * error + 32.0 * kEps * std::abs(out.value);
    out.terms = std::max<std::size_t>(evaluations, 1);
    return out;
}

}  // namespace

SeriesResult<double> m_wright(double beta, double x, double tol) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("specfun", "m_wright: beta must lie in (0,1)");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw InvalidArgument("specfun", "m_wright: x must be a finite nonnegative number");
    if (!(tol > 0.0)) throw InvalidArgument("specfun", "m_wright: tol must be positive");
    if (x == 0.0) return {rgamma(1.0 - beta), 1, 0.0};

    auto clamp = [](Evaluation e) {
        // M_beta is a density; negative values can only be round-off
        double v = e.value;
        if (v < 0.0 && -v <= e.error) v = 0.0;
        return SeriesResult<double>{v, e.terms, e.error};
    };
    auto good = [&](const Evaluation& e) {
        return std::isfinite(e.value) && (e.error <= tol * std::abs(e.value) || e.error < 1e-300);
    };

    Evaluation s = series(beta, x, tol);
    if (good(s) && s.cancellation < 1e8) return clamp(s);

    Evaluation d = steepest_descent(beta, x);
    if (good(d)) return clamp(d);

    const Evaluation& best = (s.error < d.error) ? s : d;
    std::ostringstream msg;
    msg << "m_wright: accuracy loss at beta=" << beta << ", x=" << x << " (best " << best.value
        << " +/- " << best.error << ")";
    throw AccuracyLossError("specfun", msg.str(), best.value, 0.0, best.error);
}

double m_wright_laplace_residual(double beta, Complex z) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("specfun", "m_wright_laplace_residual: beta must lie in (0,1)");
    if (!(z.real() >= 0.0))
        throw InvalidArgument("specfun", "m_wright_laplace_residual: requires Re z >= 0");

    // M_beta(r) ~ exp(-(1-beta)/beta (beta r)^{1/(1-beta)}); stop where that exponent reaches 60.
    const double r_max = std::pow(60.0 * beta / (1.0 - beta), 1.0 - beta) / beta;
    auto density = [&](double r) { return m_wright(beta, r, 1e-11).value; };
    // The density is only accurate to ~1e-11, so adaptive refinement cannot
    // converge past that; compare two fixed Gauss-Legendre resolutions instead.
    auto re_part = [&](double r) { return density(r) * std::exp(-r * z.real()) * std::cos(r * z.imag()); };
    auto im_part = [&](double r) { return -density(r) * std::exp(-r * z.real()) * std::sin(r * z.imag()); };
    double re = detail::gauss_composite(re_part, 0.0, r_max, 24);
    double err = std::abs(re - detail::gauss_composite(re_part, 0.0, r_max, 16));
    double im = 0.0;
    if (z.imag() != 0.0) {
        im = detail::gauss_composite(im_part, 0.0, r_max, 24);
        err += std::abs(im - detail::gauss_composite(im_part, 0.0, r_max, 16));
    }
    if (err > 1e-7)
        throw ConvergenceError("specfun", "m_wright_laplace_residual: quadrature did not converge");
    const Complex target = mittag_leffler(beta, -z, 1e-11).value;
    return std::abs(Complex(re, im) - target);
}

}  // namespace mla
