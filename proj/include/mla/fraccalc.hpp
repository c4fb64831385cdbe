#pragma once

#include <cstddef>
#include <vector>

namespace mla {

// Samples f(start + i*step), i = 0..n-1.
struct SampledFunction {
    double start = 0.0;
    double step = 1.0;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(double start, double step, std::vector<double> values);

    template <class F>
    static SampledFunction sample(F&& f, double start, double step, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(start + step * static_cast<double>(i));
        return {start, step, std::move(v)};
    }

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return start + step * static_cast<double>(i); }
    double end() const { return x(values.size() - 1); }
    // Piecewise-linear interpolation, zero outside the grid.
    double interpolate(double t) const;
    bool same_grid(const SampledFunction& other) const;
    void validate(const char* what) const;
};

// Left (+) operators integrate over (-inf, t), right (-) over (t, inf).
enum class Side { left, right };

// Set by grid operators when the input does not decay to ~0 at the grid ends.
struct GridDiagnostics {
    bool tail_warning = false;
};

// K_H = sqrt(2H sin(pi H) Gamma(2H)).
double k_h(double H);

// Closed forms on indicators 1_[a,b). The derivative forms throw PoleError at t in {a, b}.
double rl_integral_indicator(double alpha, double a, double b, Side side, double t);
double rl_derivative_indicator(double alpha, double a, double b, Side side, double t);
double marchaud_derivative_indicator(double alpha, double a, double b, Side side, double t);
double m_h_indicator(double H, double a, double b, Side side, double t);

// Riemann-Liouville integral of order alpha in (0,1) by product trapezoid
// (piecewise-linear f, kernel integrated exactly per cell).
SampledFunction rl_integral_grid(double alpha, const SampledFunction& f, Side side,
                                 GridDiagnostics* diag = nullptr);

// Riemann-Liouville derivative: +-d/dx of the order 1-alpha integral.
SampledFunction rl_derivative_grid(double alpha, const SampledFunction& f, Side side,
                                   GridDiagnostics* diag = nullptr);

// Truncated Marchaud derivative plus the analytic contribution of (0, eps).
// eps is rounded to a whole number of steps; eps <= 0 selects 4 steps.
SampledFunction marchaud_derivative_grid(double alpha, const SampledFunction& f, Side side,
                                         double eps = 0.0, GridDiagnostics* diag = nullptr);

// Caputo derivative from the left end of the grid, f' by finite differences.
double caputo_derivative_interval(double alpha, const SampledFunction& f, double x);

// M^H = K_H I^{H-1/2} for H > 1/2, K_H D^{1/2-H} for H < 1/2, identity at 1/2.
SampledFunction m_h_grid(double H, const SampledFunction& f, Side side,
                         GridDiagnostics* diag = nullptr);

// Central second-order differences, one-sided second order at the ends.
SampledFunction derivative_grid(const SampledFunction& f);

// (f, g)_alpha = C(alpha) int |w|^{1-alpha} conj(F f)(w) (F g)(w) dw, alpha in (0, 2),
// with the unitary Fourier transform and C(alpha) = Gamma(alpha+1) sin(pi alpha/2).
double inner_alpha(const SampledFunction& f, const SampledFunction& g, double alpha);

// L2 inner product by the trapezoid rule.
double inner_l2(const SampledFunction& f, const SampledFunction& g);

}  // namespace mla
