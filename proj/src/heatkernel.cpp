#include "mla/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "mla/detail/compensated_sum.hpp"
#include "mla/detail/parallel.hpp"
#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {
namespace {

constexpr double kPi = std::numbers::pi;

double gaussian(double a, double v) { return std::exp(-a * a / (2.0 * v)) / std::sqrt(2.0 * kPi * v); }

// Kernel at offset a for variance scale v = t^alpha, via the mixing rule.
class OffsetKernel {
public:
    OffsetKernel(double v, double beta)
        : v_(v), rule_(beta < 1.0 ? &subordination_rule(beta) : nullptr) {}
    double operator()(double a) const { return rule_ ? rule_->density(a, v_) : gaussian(a, v_); }

private:
    double v_;
    const SubordinationRule* rule_;
};

// For beta < 1 the kernel has a kink, K ~ K(0) - C |d| with C = M_beta(0) / v. A trapezoid sum across
// the kink at fractional node offset theta overshoots by h^2 C u0(x) B_2(theta), B_2 = theta^2 - theta + 1/6.
double kink_correction(const SampledFunction& u0, double x, double frac, double v, double beta) {
    if (beta == 1.0) return 0.0;
    const double slope = rgamma(1.0 - beta) / v;
    return u0.step * u0.step * slope * u0.interpolate(x) * (frac * frac - frac + 1.0 / 6.0);
}

double peak(double v, double beta) { return 1.0 / (std::sqrt(2.0 * v) * gamma(1.0 - beta / 2.0)); }

void check_grid(const SampledFunction& u0, double v, const char* what) {
    if (std::sqrt(v) < u0.step)
        throw InvalidArgument("heatkernel", std::string(what) + ": grid step " + std::to_string(u0.step) +
                                                " exceeds the kernel width " + std::to_string(std::sqrt(v)));
}

// Splits (x - u0.start) / step into an integer node offset and a fraction in [0, 1).
std::pair<long long, double> node_offset(const SampledFunction& u0, double x) {
    const double u = (x - u0.start) / u0.step;
    double k = std::floor(u);
    double frac = u - k;
    if (frac > 1.0 - 1e-9) {
        k += 1.0;
        frac = 0.0;
    } else if (frac < 1e-9) {
        frac = 0.0;
    }
    return {static_cast<long long>(k), frac};
}

}  // namespace

void KernelQuery::validate(const char* what) const {
    params.validate(what);
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heatkernel", std::string(what) + ": t must be positive");
    if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("heatkernel", std::string(what) + ": x, y must be finite");
}

double KernelQuery::offset() const { return std::abs(x - y); }
double KernelQuery::variance() const { return std::pow(t, params.alpha); }

double kernel_quadrature(const KernelQuery& q, double tol) {
    q.validate("kernel_quadrature");
    const double v = q.variance(), a = q.offset(), beta = q.params.beta;
    // lambda = s sqrt(2/v) turns the symbol into E_beta(-s^2)
    const double scale = std::sqrt(2.0 / v) / kPi;
    auto symbol = [beta](double s) { return mittag_leffler(beta, -s * s, 1e-13).value; };
    const double omega = a * std::sqrt(2.0 / v);
    detail::Quad r;
    if (omega == 0.0) {
        // the symbol decays like 1/s^2 for beta < 1
        r = detail::gk(symbol, 0.0, 4.0, 1e-13, 8);
        const auto tail = detail::semi_infinite(symbol, 4.0, 1e-13);
        r.value += tail.value;
        r.error += tail.error;
    } else {
        r = detail::fourier_cos(symbol, omega);
    }
    detail::require_converged(r, tol, "heatkernel", "kernel_quadrature", 1e-15);
    return scale * r.value;
}

double kernel_subordination(const KernelQuery& q) {
    q.validate("kernel_subordination");
    return OffsetKernel(q.variance(), q.params.beta)(q.offset());
}

double kernel_series(double a, double v, double beta) {
    if (!(v > 0.0)) throw InvalidArgument("heatkernel", "kernel_series: v must be positive");
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("heatkernel", "kernel_series: beta must lie in (0,1]");
    a = std::abs(a);
    const double w = a * a / (2.0 * v);
    if (!(w <= 10.0)) throw InvalidArgument("heatkernel", "kernel_series: a^2/(2v) exceeds 10");
    // c_k = (-1)^k Gamma(1/2 - k) w^k / k!,  d_k = (-1)^k Gamma(-1/2 - k) w^k / k!
    double c = std::sqrt(kPi), d = -2.0 * std::sqrt(kPi);
    detail::CompensatedSum<double> first, second;
    for (int k = 0; k < 400; ++k) {
        const double t1 = c * rgamma(1.0 - beta / 2.0 - beta * k);
        const double t2 = d * rgamma(1.0 - beta - beta * k);
        first.add(t1);
        second.add(t2);
        if (k > 4 && std::abs(t1) + std::abs(t2) <= 1e-17 * (std::abs(first.value()) + std::abs(second.value())))
            break;
        c *= w / ((k + 1.0) * (k + 0.5));
        d *= w / ((k + 1.0) * (k + 1.5));
    }
    if (w == 0.0) return peak(v, beta);
    return (first.value() + std::sqrt(w) * second.value()) / std::sqrt(2.0 * kPi * v);
}

double kernel_foxh(const KernelQuery& q) {
    q.validate("kernel_foxh");
    const double v = q.variance(), a = q.offset();
    if (a == 0.0) return peak(v, q.params.beta);
    const double w = a * a / (2.0 * v);
    return fox_h(HFunctionSpec::heat_kernel(q.params.beta), w, 1e-13).value / std::sqrt(2.0 * kPi * v);
}

SampledFunction solve_cauchy(const SampledFunction& u0, double t, const UniformGrid& xs, const FracParams& params,
                             GridDiagnostics* diag) {
    u0.validate("solve_cauchy");
    params.validate("solve_cauchy");
    if (!(t > 0.0)) throw InvalidArgument("heatkernel", "solve_cauchy: t must be positive");
    if (xs.size == 0 || !(xs.step > 0.0)) throw InvalidArgument("heatkernel", "solve_cauchy: empty output grid");
    const double v = std::pow(t, params.alpha);
    check_grid(u0, v, "solve_cauchy");
    if (diag) {
        double top = 0.0;
        for (double x : u0.values) top = std::max(top, std::abs(x));
        diag->tail_warning = std::max(std::abs(u0.values.front()), std::abs(u0.values.back())) > 1e-8 * top;
    }

    const OffsetKernel kernel(v, params.beta);
    const auto n = static_cast<long long>(u0.size());

    // one kernel table per distinct fractional offset, covering every node difference in use
    struct Table {
        double frac;
        long long lo = 0, hi = -1;
        std::vector<double> values;
    };
    std::map<long long, Table> tables;
    std::vector<std::pair<long long, long long>> where(xs.size);  // (node offset, table key)
    for (std::size_t i = 0; i < xs.size; ++i) {
        const auto [k, frac] = node_offset(u0, xs.x(i));
        const auto key = std::llround(frac * 1e9);
        auto [it, fresh] = tables.try_emplace(key, Table{frac, 0, -1, {}});
        Table& tab = it->second;
        if (fresh) {
            tab.lo = k - n + 1;
            tab.hi = k;
        } else {
            tab.lo = std::min(tab.lo, k - n + 1);
            tab.hi = std::max(tab.hi, k);
        }
        where[i] = {k, key};
    }
    for (auto& [key, tab] : tables) {
        tab.values.resize(static_cast<std::size_t>(tab.hi - tab.lo + 1));
        detail::parallel_for(tab.values.size(), [&](std::size_t m) {
            tab.values[m] = kernel((static_cast<double>(tab.lo + static_cast<long long>(m)) + tab.frac) * u0.step);
        });
    }

    std::vector<double> out(xs.size);
    detail::parallel_for(xs.size, [&](std::size_t i) {
        const auto [k, key] = where[i];
        const Table& tab = tables.at(key);
        detail::CompensatedSum<double> acc;
        for (long long j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc.add(w * u0.values[static_cast<std::size_t>(j)] * tab.values[static_cast<std::size_t>(k - j - tab.lo)]);
        }
        out[i] = acc.value() * u0.step - kink_correction(u0, xs.x(i), tables.at(key).frac, v, params.beta);
    });
    return {xs.start, xs.step, std::move(out)};
}

Surface cauchy_surface(const SampledFunction& u0, const FracParams& params) {
    u0.validate("cauchy_surface");
    params.validate("cauchy_surface");
    struct State {
        SampledFunction u0;
        FracParams params;
        std::mutex mutex;
        std::map<double, std::unordered_map<long long, double>> tables;  // t -> node offset -> K
    };
    auto state = std::make_shared<State>();
    state->u0 = u0;
    state->params = params;
    return [state](double t, double x) {
        if (!(t > 0.0)) throw InvalidArgument("heatkernel", "cauchy_surface: t must be positive");
        const SampledFunction& f = state->u0;
        const double v = std::pow(t, state->params.alpha);
        check_grid(f, v, "cauchy_surface");
        const OffsetKernel kernel(v, state->params.beta);
        const auto [k, frac] = node_offset(f, x);
        std::lock_guard<std::mutex> lock(state->mutex);
        auto& table = state->tables[t];
        detail::CompensatedSum<double> acc;
        const auto n = static_cast<long long>(f.size());
        for (long long j = 0; j < n; ++j) {
            const double uj = f.values[static_cast<std::size_t>(j)];
            if (uj == 0.0) continue;
            double kv;
            if (frac == 0.0) {
                auto [it, fresh] = table.try_emplace(k - j, 0.0);
                if (fresh) it->second = kernel(static_cast<double>(k - j) * f.step);
                kv = it->second;
            } else {
                kv = kernel((static_cast<double>(k - j) + frac) * f.step);
            }
            acc.add(((j == 0 || j == n - 1) ? 0.5 : 1.0) * uj * kv);
        }
        return acc.value() * f.step - kink_correction(f, x, frac, v, state->params.beta);
    };
}

double residual_fie(const Surface& u, const SampledFunction& u0, double t, double x, const FracParams& params,
                    double dx) {
    params.validate("residual_fie");
    if (!(t > 0.0)) throw InvalidArgument("heatkernel", "residual_fie: t must be positive");
    if (dx == 0.0) dx = u0.step;
    if (!(dx > 0.0)) throw InvalidArgument("heatkernel", "residual_fie: dx must be positive");
    const double alpha = params.alpha, beta = params.beta;
    const double p = alpha / beta, big_t = std::pow(t, p);
    auto second = [&](double s) { return (u(s, x + dx) - 2.0 * u(s, x) + u(s, x - dx)) / (dx * dx); };
    // int_0^T (T - w)^{beta-1} g(w^{1/p}) dw with w = T (1 - v^{1/beta}): weight becomes T^beta / beta
    auto integrand = [&](double v) {
        const double w = -big_t * std::expm1(std::log(v) / beta);
        return second(std::pow(w, 1.0 / p));
    };
    const double integral = std::pow(big_t, beta) / beta * detail::gauss_composite(integrand, 0.0, 1.0, 8);
    if (!std::isfinite(integral)) throw NumericError("heatkernel", "residual_fie: non-finite integral");
    const double rhs = u0.interpolate(x) + 0.5 * rgamma(beta) * integral;
    return std::abs(u(t, x) - rhs);
}

double fbm_pde_residual(const Surface& u, double t, double x, double alpha, double dt, double dx) {
    if (!(t > dt && dt > 0.0 && dx > 0.0)) throw InvalidArgument("heatkernel", "fbm_pde_residual: need t > dt > 0, dx > 0");
    const double dudt = (u(t + dt, x) - u(t - dt, x)) / (2.0 * dt);
    const double uxx = (u(t, x + dx) - 2.0 * u(t, x) + u(t, x - dx)) / (dx * dx);
    return std::abs(dudt - 0.5 * alpha * std::pow(t, alpha - 1.0) * uxx);
}

}  // namespace mla
