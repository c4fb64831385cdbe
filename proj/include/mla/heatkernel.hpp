#pragma once

#include <cstddef>
#include <functional>

#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"

namespace mla {

// Green's function K(t, x, y) of the time-fractional heat equation.
struct KernelQuery {
    double t = 1.0;
    double x = 0.0;
    double y = 0.0;
    FracParams params;
    void validate(const char* what) const;
    double offset() const;    // |x - y|
    double variance() const;  // t^alpha
};

// (1/pi) int_0^inf cos(lambda a) E_beta(-lambda^2 t^alpha / 2) d lambda.
double kernel_quadrature(const KernelQuery& q, double tol = 1e-10);

// int_0^inf M_beta(r) N(x - y; 0, r t^alpha) dr.
double kernel_subordination(const KernelQuery& q);

// Two-sum expansion in w = a^2 / (2v); requires w <= 10.
double kernel_series(double a, double v, double beta);

// H^{2,0}_{1,2} representation, evaluated with fox_h.
double kernel_foxh(const KernelQuery& q);

struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t size = 0;
    double x(std::size_t i) const { return start + step * static_cast<double>(i); }
};

// u(t, x) = int u0(y) K(t, x, y) dy, trapezoid over the nodes of u0 against a
// kernel table built once per call. Requires t^{alpha/2} >= u0.step.
SampledFunction solve_cauchy(const SampledFunction& u0, double t, const UniformGrid& xs, const FracParams& params,
                             GridDiagnostics* diag = nullptr);

// u(t, x) as a callable surface, caching one kernel table per time value.
using Surface = std::function<double(double t, double x)>;
Surface cauchy_surface(const SampledFunction& u0, const FracParams& params);

// |u(t,x) - u0(x) - (1/2) (I^beta d^2_x u(s^{beta/alpha}, x))(t^{alpha/beta})|,
// second derivative by central differences with step dx (0: the grid step of u0).
double residual_fie(const Surface& u, const SampledFunction& u0, double t, double x, const FracParams& params,
                    double dx = 0.0);

// |d_t u - (alpha/2) t^{alpha-1} d^2_x u| by central differences (beta = 1 equation).
double fbm_pde_residual(const Surface& u, double t, double x, double alpha, double dt, double dx);

}  // namespace mla
