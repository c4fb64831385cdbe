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
constexpr double kTaylorRadius = 5.0;
constexpr double kAbsoluteFloor = 1e-15;

struct Attempt {
    Complex value{std::numeric_limits<double>::quiet_NaN(), 0.0};
    std::size_t terms = 0;
    double error = std::numeric_limits<double>::infinity();
};

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

bool meets(const Attempt& a, double tol) {
    return finite(a.value) && (a.error <= tol * std::abs(a.value) || a.error <= kAbsoluteFloor);
}

// sum_n z^n / Gamma(beta n + gam); terms are formed in log space so that
// neither z^n nor Gamma overflows on its own.
Attempt taylor(double beta, double gam, Complex z, double tol, std::size_t budget) {
    Attempt out;
    const double r = std::abs(z);
    if (r == 0.0) {
        out.value = rgamma(gam);
        out.terms = 1;
        out.error = 0.0;
        return out;
    }
    const double log_r = std::log(r);
    const double theta = std::arg(z);

    detail::CompensatedSum<Complex> sum;
    double roundoff = 0.0;
    double last_log = -std::numeric_limits<double>::infinity();
    std::size_t last_index = 0;
    double step_ratio = 1.0;
    int small_run = 0;
    std::size_t n = 0;
    for (; n < budget; ++n) {
        const double arg = beta * static_cast<double>(n) + gam;
        if (is_gamma_pole(arg)) {
            ++small_run;
            continue;
        }
        double mag, log_mag, rel;
        if (arg < 170.0 && static_cast<double>(n) * log_r < 700.0) {
            // direct evaluation: a few ulps per term
            mag = std::pow(r, static_cast<double>(n)) * std::abs(rgamma(arg));
            if (mag == 0.0) {
                ++small_run;
                continue;
            }
            log_mag = std::log(mag);
            rel = 8.0 * kEps;
        } else {
            const double lg = log_abs_gamma(arg);
            log_mag = static_cast<double>(n) * log_r - lg;
            if (log_mag > 700.0) return out;  // overflow: not representable
            mag = std::exp(log_mag);
            rel = kEps * (4.0 + std::abs(static_cast<double>(n) * log_r) + std::abs(lg));
        }
        const double phase = static_cast<double>(n) * theta;
        sum.add(std::polar(gamma_sign(arg) * mag, phase));
        roundoff += mag * (rel + kEps * std::abs(phase));

        const bool decreasing = log_mag < last_log;
        if (std::isfinite(last_log))
            step_ratio = std::exp((log_mag - last_log) / static_cast<double>(n - last_index));
        last_log = log_mag;
        last_index = n;

        const double scale = std::abs(sum.value());
        small_run = (mag < tol * scale) ? small_run + 1 : 0;
        if (small_run >= 3 && decreasing && step_ratio < 1.0) {
            const double tail = mag * step_ratio / (1.0 - step_ratio);
            if (tail <= 0.5 * tol * scale) {
                ++n;
                out.value = sum.value();
                out.terms = n;
                out.error = tail + roundoff;
                return out;
            }
        }
    }
    out.value = sum.value();
    out.terms = n;
    out.error = std::numeric_limits<double>::infinity();
    return out;
}

// Large-|z| expansion: exponential contributions from the admissible branches of
// z^{1/beta} plus the algebraic series -sum_k z^{-k}/Gamma(gam - beta k) cut at
// its smallest term.
Attempt asymptotic(double beta, double gam, Complex z) {
    Attempt out;
    const double r = std::abs(z);
    if (r <= 1.0 || beta > 2.0) return out;
    const double log_r = std::log(r);
    const double theta = std::arg(z);

    detail::CompensatedSum<Complex> sum;
    double error = 0.0;
    double prev_envelope = std::numeric_limits<double>::infinity();
    std::size_t k = 1;
    for (; k < 4000; ++k) {
        const double y = gam - beta * static_cast<double>(k);
        // |1/Gamma(y)| <= envelope; exact zeros at poles do not end the series.
        const double log_env = (y > 0.0) ? -log_abs_gamma(y) : log_abs_gamma(1.0 - y) - std::log(kPi);
        const double envelope = std::exp(log_env - static_cast<double>(k) * log_r);
        if (envelope > prev_envelope && k > 2) {
            error += envelope;
            break;
        }
        prev_envelope = envelope;
        if (!is_gamma_pole(y)) {
            const double mag = std::exp(-log_abs_gamma(y) - static_cast<double>(k) * log_r);
            sum.add(-std::polar(gamma_sign(y) * mag, -static_cast<double>(k) * theta));
        }
        if (envelope < 1e-18 * std::abs(sum.value())) {
            error += envelope;
            break;
        }
    }

    const bool integer_gam = gam == std::nearbyint(gam);
    for (int m = -2; m <= 2; ++m) {
        const double phi = theta + 2.0 * kPi * m;
        const bool admissible = (beta >= 1.0) ? std::abs(phi) <= kPi + 1e-14
                                              : std::abs(phi) < beta * kPi;
        const Complex log_zeta(log_r / beta, phi / beta);
        const Complex zeta = std::exp(log_zeta);
        const Complex contrib = std::exp((1.0 - gam) * log_zeta + zeta) / beta;
        if (!admissible) {
            // beyond the Stokes sector the branch is subdominant but not zero at finite |z|
            if (std::abs(phi) <= kPi + 1e-14) error += std::abs(contrib);
            continue;
        }
        if (beta == 1.0 && !integer_gam && std::abs(phi) >= kPi - 1e-14) {
            // branch cut of z^{1-gam}: exponentially small, carried as uncertainty
            error += std::abs(contrib);
            continue;
        }
        sum.add(contrib);
    }
    out.value = sum.value();
    out.terms = k;
    out.error = error + 8.0 * kEps * sum.abs_sum();
    return out;
}

// Real negative axis, 0 < beta < 1: E_beta(-x) is the Laplace transform of a
// positive spectral density. With u = r^beta,
//   E_beta(-x)      = sin(beta pi)/(pi beta) int_0^inf exp(-(xu)^{1/beta}) / (u^2 + 2u cos(beta pi) + 1) du
//   E_{beta,beta}(-x) = -beta d/dx E_beta(-x).
Attempt spectral(double beta, double gam, double x) {
    Attempt out;
    const double s = std::sin(beta * kPi), c = std::cos(beta * kPi);
    const double inv_beta = 1.0 / beta;
    const bool derivative_form = (gam != 1.0);
    auto f = [&](double u) {
        const double denom = u * u + 2.0 * u * c + 1.0;
        const double xu = x * u;
        const double e = std::exp(-std::pow(xu, inv_beta));
        if (e == 0.0) return 0.0;
        if (!derivative_form) return e / denom;
        return u * std::pow(xu, inv_beta - 1.0) * e / denom;
    };

    std::vector<double> cuts = {0.0};
    const double peak = std::max(0.0, -c);
    const double upper = std::max({2.0, peak + 3.0 * s, 4.0 / x});
    for (double v : {1.0 / x, 4.0 / x, 16.0 / x, 64.0 / x, peak - 3.0 * s, peak, peak + 3.0 * s})
        if (v > 0.0 && v < upper) cuts.push_back(v);
    cuts.push_back(upper);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // (xu)^{1/beta} is not smooth at u = 0, so the first panel goes to a
    // double-exponential rule. Elsewhere the Kronrod estimate is far too
    // pessimistic; compare against an independent fixed Gauss-Legendre rule.
    double total = 0.0, error = 0.0;
    {
        auto q = detail::endpoint_singular(f, cuts[0], cuts[1], 1e-15);
        total += q.value;
        error += q.error + 4.0 * kEps * q.l1;
    }
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
        auto q = detail::gk(f, cuts[i], cuts[i + 1], 1e-14, 6);
        const double check = detail::gauss_composite(f, cuts[i], cuts[i + 1], 8);
        total += q.value;
        error += std::min(q.error, std::abs(q.value - check) + 4.0 * kEps * q.l1);
    }
    auto tail = detail::semi_infinite(f, upper, 1e-14);
    total += tail.value;
    error += tail.error;

    const double pref = s / (kPi * beta);
    out.value = pref * total;
    out.error = pref * error + 16.0 * kEps * std::abs(out.value);
    out.terms = cuts.size();
    return out;
}

void validate(double beta, double gam, Complex z, double tol) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("specfun", "mittag_leffler: order beta must be positive");
    if (!std::isfinite(gam)) throw InvalidArgument("specfun", "mittag_leffler: gamma must be finite");
    if (!finite(z)) throw InvalidArgument("specfun", "mittag_leffler: argument must be finite");
    if (!(tol > 0.0)) throw InvalidArgument("specfun", "mittag_leffler: tol must be positive");
}

}  // namespace

SeriesResult<Complex> mittag_leffler2(double beta, double gam, Complex z, double tol) {
    validate(beta, gam, z, tol);
    if (beta == 1.0 && gam == 1.0) {
        const Complex v = std::exp(z);
        return {v, 1, kEps * std::abs(v)};
    }

    Attempt best;
    auto accept = [&](const Attempt& a) {
        if (finite(a.value) && a.error < best.error) best = a;
        return meets(a, tol);
    };
    auto result = [](const Attempt& a) {
        return SeriesResult<Complex>{a.value, std::max<std::size_t>(a.terms, 1), a.error};
    };

    const double r = std::abs(z);
    const bool negative_axis = z.imag() == 0.0 && z.real() < 0.0;

    if (r <= kTaylorRadius) {
        Attempt a = taylor(beta, gam, z, tol, 20000);
        if (accept(a)) return result(a);
    }
    {
        Attempt a = asymptotic(beta, gam, z);
        if (accept(a)) return result(a);
    }
    if (negative_axis && beta < 1.0 && (gam == 1.0 || gam == beta)) {
        Attempt a = spectral(beta, gam, -z.real());
        if (accept(a)) return result(a);
    }
    if (r > kTaylorRadius) {
        Attempt a = taylor(beta, gam, z, tol, 200000);
        if (accept(a)) return result(a);
    }

    std::ostringstream msg;
    msg << "mittag_leffler: no regime reached tol " << tol << " at beta=" << beta
        << ", gamma=" << gam << ", z=" << z << " (best " << best.value << " +/- " << best.error << ")";
    throw AccuracyLossError("specfun", msg.str(), best.value.real(), best.value.imag(), best.error);
}

SeriesResult<double> mittag_leffler2(double beta, double gam, double z, double tol) {
    auto r = mittag_leffler2(beta, gam, Complex(z, 0.0), tol);
    return {r.value.real(), r.terms_used, r.error_estimate};
}

SeriesResult<Complex> mittag_leffler(double beta, Complex z, double tol) {
    return mittag_leffler2(beta, 1.0, z, tol);
}

SeriesResult<double> mittag_leffler(double beta, double z, double tol) {
    return mittag_leffler2(beta, 1.0, z, tol);
}

Complex ml_derivative(double beta, Complex z, double tol) {
    return mittag_leffler2(beta, beta, z, tol).value / beta;
}

double ml_derivative(double beta, double z, double tol) {
    return mittag_leffler2(beta, beta, z, tol).value / beta;
}

}  // namespace mla
