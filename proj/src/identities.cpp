#include <cmath>

#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {

double ml_integral_identity_residual(double alpha, double beta, double lambda, double t) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw InvalidArgument("specfun", "ml_integral_identity_residual: alpha must lie in (0,2)");
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("specfun", "ml_integral_identity_residual: beta must lie in (0,1)");
    if (!(t > 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("specfun", "ml_integral_identity_residual: need t > 0 and finite lambda");
    if (lambda == 0.0) return 0.0;

    const double c = 0.5 * lambda * lambda;
    const double p = alpha / beta;
    const double tp = std::pow(t, p);
    auto ml = [&](double s) { return mittag_leffler(beta, -c * std::pow(s, alpha), 1e-13).value; };

    // (t^p - s^p)^{beta-1} p s^{p-1} E_b(-c s^alpha), written in terms of the
    // distance d to whichever endpoint is near so that both singular factors
    // stay accurate.
    auto near_zero = [&](double s) {
        if (s <= 0.0) return 0.0;
        return std::pow(tp - std::pow(s, p), beta - 1.0) * p * std::pow(s, p - 1.0) * ml(s);
    };
    auto near_t = [&](double d) {
        if (d <= 0.0) return 0.0;
        const double s = t - d;
        const double gap = -tp * std::expm1(p * std::log1p(-d / t));  // t^p - s^p
        return std::pow(gap, beta - 1.0) * p * std::pow(s, p - 1.0) * ml(s);
    };

    auto left = detail::endpoint_singular(near_zero, 0.0, 0.5 * t, 1e-12);
    auto right = detail::endpoint_singular(near_t, 0.0, 0.5 * t, 1e-12);
    const double integral = left.value + right.value;
    if (!std::isfinite(integral) || left.error + right.error > 1e-8 * std::max(1.0, std::abs(integral)))
        throw ConvergenceError("specfun", "ml_integral_identity_residual: quadrature did not converge");

    const double lhs = mittag_leffler(beta, -c * std::pow(t, alpha), 1e-13).value;
    const double rhs = 1.0 - c * rgamma(beta) * integral;
    return std::abs(lhs - rhs);
}

}  // namespace mla
