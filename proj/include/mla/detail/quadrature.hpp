#pragma once

// Thin adapters over Boost.Math quadrature returning value and error together.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "mla/error.hpp"

namespace mla::detail {

struct Quad {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// Adaptive 61-point Gauss-Kronrod on a finite interval.
template <class F>
Quad gk(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 18) {
    Quad q;
    q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, tol, &q.error, &q.l1);
    return q;
}

// Fixed composite Gauss-Legendre, n_panels equal panels of 20 nodes.
template <class F>
double gauss_composite(F&& f, double a, double b, int n_panels) {
    const double w = (b - a) / n_panels;
    double total = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = a + p * w;
        total += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + w);
    }
    return total;
}

// Double-exponential rule on [a, inf).
template <class F>
Quad semi_infinite(F&& f, double a, double tol = 1e-12) {
    static thread_local boost::math::quadrature::exp_sinh<double> rule;
    Quad q;
    q.value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &q.error, &q.l1);
    return q;
}

// Double-exponential rule on [a, b]; integrates algebraic endpoint singularities.
// `f` may take (x) or (x, distance_to_nearest_endpoint).
template <class F>
Quad endpoint_singular(F&& f, double a, double b, double tol = 1e-12) {
    static thread_local boost::math::quadrature::tanh_sinh<double> rule;
    Quad q;
    q.value = rule.integrate(f, a, b, tol, &q.error, &q.l1);
    return q;
}

// int_0^inf f(x) cos(omega x) dx for slowly decaying f, relative tolerance ~1e-13.
// A shared rule would remember the level its last call stopped at, so results
// would depend on call history; each call builds 8 levels and may add 4 more.
template <class F>
Quad fourier_cos(F&& f, double omega) {
    boost::math::quadrature::ooura_fourier_cos<double> rule(1e-13, 8);
    auto [value, rel] = rule.integrate(f, omega);
    Quad q;
    q.value = value;
    q.error = std::abs(rel * value);
    return q;
}

inline void require_converged(const Quad& q, double tol, const std::string& module,
                              const std::string& what, double abs_floor = 1e-14) {
    if (!std::isfinite(q.value) || q.error > std::max(tol * std::abs(q.value), abs_floor) * 1e3)
        throw ConvergenceError(module, what + ": quadrature did not converge (estimate " +
                                           std::to_string(q.error) + ")");
}

}  // namespace mla::detail
