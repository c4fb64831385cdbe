#pragma once

#include <cstddef>
#include <cstdint>

#include "mla/fraccalc.hpp"
#include "mla/ggbm.hpp"

namespace mla {

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Feynman-Kac: mean of u0(x + sqrt(tau) t^{alpha/2} z), u0 linearly interpolated and 0 off its grid.
MCEstimate fk_solution(const SampledFunction& u0, double t, double x, const FracParams& params, std::size_t n_samples,
                       std::uint64_t seed);

// (1/2pi) int_{-n}^{n} e^{-ixa} E_beta(-x^2 t^alpha / 2) dx.
double donsker_truncation(double n_cut, double a, double t, const FracParams& params);

// int_0^T K(t, a, 0) dt.
double local_time_expectation(double a, double T, const FracParams& params);

// Boxcar occupation estimate (dt / 2h) #{i >= 1 : |start + X_{t_i} - a| < h} on t_i = i T / n_steps.
MCEstimate local_time_mc(double a, double T, const FracParams& params, std::size_t n_paths, std::size_t n_steps,
                         double bandwidth, std::uint64_t seed, double start = 0.0);

}  // namespace mla
