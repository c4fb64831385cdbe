#include "mla/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mla/detail/parallel.hpp"
#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/heatkernel.hpp"
#include "mla/specfun.hpp"

namespace mla {
namespace {

constexpr std::uint64_t kFeynmanKacStream = 3;

// Running mean and centred second moment; batches merge in index order so the
// result is independent of thread scheduling.
struct Moments {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double total = n + o.n, d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }

    MCEstimate estimate(std::uint64_t seed) const {
        const double var = n > 1.0 ? m2 / (n - 1.0) : 0.0;
        return {mean, std::sqrt(std::max(var, 0.0) / n), static_cast<std::size_t>(n), seed};
    }
};

std::size_t batch_count(std::size_t n) { return (n + kBatchSize - 1) / kBatchSize; }

}  // namespace

MCEstimate fk_solution(const SampledFunction& u0, double t, double x, const FracParams& params, std::size_t n_samples,
                       std::uint64_t seed) {
    u0.validate("fk_solution");
    params.validate("fk_solution");
    if (!(t > 0.0)) throw InvalidArgument("montecarlo", "fk_solution: t must be positive");
    if (n_samples < 2) throw InvalidArgument("montecarlo", "fk_solution: need at least 2 samples");
    const double scale = std::pow(t, params.alpha / 2.0);
    std::vector<Moments> parts(batch_count(n_samples));
    detail::parallel_for(parts.size(), [&](std::size_t b) {
        auto rng = batch_engine(seed, b, kFeynmanKacStream);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t count = std::min(kBatchSize, n_samples - b * kBatchSize);
        for (std::size_t i = 0; i < count; ++i) {
            const double tau = draw_tau(params.beta, rng);
            parts[b].add(u0.interpolate(x + std::sqrt(tau) * scale * normal(rng)));
        }
    });
    Moments all;
    for (const auto& p : parts) all.merge(p);
    return all.estimate(seed);
}

double donsker_truncation(double n_cut, double a, double t, const FracParams& params) {
    params.validate("donsker_truncation");
    if (!(n_cut >= 0.0) || !std::isfinite(n_cut)) throw InvalidArgument("montecarlo", "donsker_truncation: n_cut must be >= 0");
    if (!(t > 0.0)) throw InvalidArgument("montecarlo", "donsker_truncation: t must be positive");
    if (n_cut == 0.0) return 0.0;
    const double v = std::pow(t, params.alpha);
    auto f = [&](double x) { return std::cos(x * a) * mittag_leffler(params.beta, -0.5 * x * x * v, 1e-13).value; };
    // panels short against both the oscillation and the decay scale of the symbol
    const double width = std::min({1.0, std::abs(a) > 0 ? 1.0 / std::abs(a) : 1.0, 2.0 / std::sqrt(v)});
    const int panels = static_cast<int>(std::ceil(n_cut / width));
    const double h = n_cut / panels;
    double total = 0.0, error = 0.0;
    for (int p = 0; p < panels; ++p) {
        const auto q = detail::gk(f, p * h, (p + 1) * h, 1e-13, 6);
        total += q.value;
        error += q.error;
    }
    if (!std::isfinite(total) || error > 1e-9 * std::max(1.0, std::abs(total)))
        throw ConvergenceError("montecarlo", "donsker_truncation: quadrature did not converge");
    return total / std::numbers::pi;
}

double local_time_expectation(double a, double T, const FracParams& params) {
    params.validate("local_time_expectation");
    if (!(T > 0.0)) throw InvalidArgument("montecarlo", "local_time_expectation: T must be positive");
    // s = t^e with e = 1 - alpha/2 absorbs the t^{-alpha/2} singularity: K dt = K t^{alpha/2} ds / e
    const double e = 1.0 - params.alpha / 2.0;
    auto integrand = [&](double s) {
        if (s <= 0.0) {
            // t^{alpha/2} K(t, a, 0) -> 1/(sqrt2 Gamma(1 - beta/2)) at a = 0, and 0 otherwise
            return a == 0.0 ? rgamma(1.0 - params.beta / 2.0) / (std::sqrt(2.0) * e) : 0.0;
        }
        const double t = std::pow(s, 1.0 / e);
        return kernel_subordination({t, a, 0.0, params}) * std::pow(t, params.alpha / 2.0) / e;
    };
    const auto q = detail::gk(integrand, 0.0, std::pow(T, e), 1e-13, 10);
    detail::require_converged(q, 1e-11, "montecarlo", "local_time_expectation", 1e-15);
    return q.value;
}

MCEstimate local_time_mc(double a, double T, const FracParams& params, std::size_t n_paths, std::size_t n_steps,
                         double bandwidth, std::uint64_t seed, double start) {
    params.validate("local_time_mc");
    if (!(T > 0.0)) throw InvalidArgument("montecarlo", "local_time_mc: T must be positive");
    if (!(bandwidth > 0.0)) throw InvalidArgument("montecarlo", "local_time_mc: bandwidth must be positive");
    if (n_steps < 50) throw InvalidArgument("montecarlo", "local_time_mc: n_steps must be >= 50");
    if (n_paths < 2) throw InvalidArgument("montecarlo", "local_time_mc: need at least 2 paths");
    const double dt = T / static_cast<double>(n_steps);
    std::vector<double> times(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) times[i] = dt * static_cast<double>(i + 1);
    const PathSampler sampler(grey_gram(times, params.alpha), params.beta, seed);
    const double weight = dt / (2.0 * bandwidth);

    std::vector<Moments> parts(batch_count(n_paths));
    detail::parallel_for(parts.size(), [&](std::size_t b) {
        const std::size_t count = std::min(kBatchSize, n_paths - b * kBatchSize);
        Eigen::MatrixXd rows;
        std::vector<double> taus;
        sampler.batch(b, count, rows, taus);
        for (Eigen::Index p = 0; p < rows.rows(); ++p) {
            std::size_t hits = 0;
            for (Eigen::Index i = 0; i < rows.cols(); ++i) hits += std::abs(start + rows(p, i) - a) < bandwidth;
            parts[b].add(weight * static_cast<double>(hits));
        }
    });
    Moments all;
    for (const auto& p : parts) all.merge(p);
    return all.estimate(seed);
}

}  // namespace mla
