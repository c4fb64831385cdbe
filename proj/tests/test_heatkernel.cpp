#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/heatkernel.hpp"
#include "mla/specfun.hpp"
#include "test_util.hpp"

using namespace mla;
using mla::test::rel_err;

namespace {

double gaussian_kernel(double a, double v) { return std::exp(-a * a / (2 * v)) / std::sqrt(2 * std::numbers::pi * v); }

SampledFunction half_gaussian_data() {
    return SampledFunction::sample([](double y) { return std::exp(-y * y / 2); }, -12.0, 0.01, 2401);
}

}  // namespace

TEST_CASE("kernel closed forms") {
    CHECK(rel_err(kernel_quadrature({1, 0, 0, {1, 1}}), 1 / std::sqrt(2 * std::numbers::pi)) < 1e-10);
    for (double beta : {0.25, 0.5, 0.75}) {
        const double peak = 1 / (std::sqrt(2.0) * std::tgamma(1 - beta / 2));
        CHECK(rel_err(kernel_quadrature({1, 0.3, 0.3, {0.7, beta}}), peak) < 1e-10);
        CHECK(rel_err(kernel_series(0, 1, beta), peak) < 1e-14);
    }
    CHECK(std::abs(kernel_quadrature({1, 0, 0, {0.5, 0.5}}) - 0.5771) < 1e-4);
    CHECK(rel_err(kernel_series(1, 1, 1), std::exp(-0.5) / std::sqrt(2 * std::numbers::pi)) < 1e-13);
    CHECK(std::abs(kernel_series(1, 1, 1) - 0.2419707) < 1e-7);
    CHECK(kernel_quadrature({0.7, 1.2, -0.4, {0.6, 0.8}}) == doctest::Approx(kernel_quadrature({0.7, -0.4, 1.2, {0.6, 0.8}})).epsilon(1e-13));
    CHECK_THROWS_AS(kernel_series(5, 1, 0.5), InvalidArgument);
    CHECK_THROWS_AS(kernel_quadrature({0, 0, 0, {0.5, 0.5}}), InvalidArgument);
}

TEST_CASE("kernel against mixture-integral oracle") {
    struct Row { double alpha, beta, t, a, v; };
    for (const Row& r : std::vector<Row>{{0.5, 0.5, 1, 0.5, 0.3424627355362051},
                                         {0.5, 0.5, 1, 0.8, 0.24331886536641855},
                                         {0.75, 0.75, 0.5, 2, 0.026669520374552965},
                                         {0.8, 0.6, 2, 1.3, 0.15297870930918696},
                                         {1.4, 0.3, 0.7, 0.4, 0.43282660889152833}}) {
        const KernelQuery q{r.t, r.a, 0.0, {r.alpha, r.beta}};
        CAPTURE(r.a);
        CHECK(rel_err(kernel_quadrature(q), r.v) < 1e-9);
        CHECK(rel_err(kernel_subordination(q), r.v) < 1e-9);
        CHECK(rel_err(kernel_foxh(q), r.v) < 1e-9);
        CHECK(rel_err(kernel_series(r.a, std::pow(r.t, r.alpha), r.beta), r.v) < 1e-9);
    }
}

TEST_CASE("three-way kernel agreement and Gaussian collapse") {
    for (double ab : {0.5, 0.75})
        for (double t : {0.5, 1.0, 2.0})
            for (double a : {0.0, 0.5, 1.0, 2.0}) {
                const KernelQuery q{t, a, 0.0, {ab, ab}};
                const double kq = kernel_quadrature(q), ks = kernel_subordination(q), kf = kernel_foxh(q);
                CAPTURE(ab);
                CAPTURE(t);
                CAPTURE(a);
                CHECK(rel_err(ks, kq) < 1e-6);
                CHECK(rel_err(kf, kq) < 1e-6);
                CHECK(rel_err(ks, kf) < 1e-6);
                CHECK(std::abs(kf - kernel_series(a, std::pow(t, ab), ab)) < 1e-10 * kf);
                CHECK(kq > 0.0);
            }
    for (double alpha : {0.4, 1.0, 1.6})
        for (double a : {0.0, 0.7, 2.5}) {
            const KernelQuery q{1.3, a, 0.0, {alpha, 1.0}};
            const double g = gaussian_kernel(a, std::pow(1.3, alpha));
            CHECK(std::abs(kernel_quadrature(q) - g) < 1e-10);
            CHECK(std::abs(kernel_subordination(q) - g) < 1e-10);
            CHECK(std::abs(kernel_foxh(q) - g) < 1e-10);
        }
}

TEST_CASE("kernel mass and Fox H inversion") {
    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.75, 0.75}, {1.4, 0.3}, {0.8, 1.0}}) {
        const FracParams p{alpha, beta};
        const double mass = 2.0 * detail::gauss_composite([&](double y) { return kernel_subordination({1.0, 0.0, y, p}); }, 0.0, 60.0, 96);
        CAPTURE(alpha);
        CHECK(std::abs(mass - 1.0) < 1e-6);
    }
    const auto spec = HFunctionSpec::heat_kernel(0.5);
    const double w = 0.32;
    const double direct = fox_h(spec, w).value;
    const double inverted = fox_h(fox_h_invert(spec), 1.0 / w).value;
    CHECK(std::abs(direct - inverted) < 1e-10 * direct);
    CHECK(rel_err(kernel_foxh({1, 0.8, 0, {0.5, 0.5}}), kernel_quadrature({1, 0.8, 0, {0.5, 0.5}})) < 1e-6);
}

TEST_CASE("Cauchy problem by convolution") {
    const auto flat = SampledFunction::sample([](double) { return 1.0; }, -40.0, 0.01, 8001);
    GridDiagnostics diag;
    const auto u = solve_cauchy(flat, 1.0, {-5.0, 0.25, 41}, {0.5, 0.5}, &diag);
    for (double v : u.values) CHECK(std::abs(v - 1.0) < 1e-4);
    CHECK(diag.tail_warning);

    const auto u0 = half_gaussian_data();
    struct Row { double alpha, beta, t, x, v; };
    for (const Row& r : std::vector<Row>{{0.5, 0.5, 1, 0, 0.72457540047670301},
                                         {0.5, 0.5, 1, 1, 0.5446084596552455},
                                         {1, 0.5, 0.5, 0.7, 0.69066483138864497},
                                         {0.8, 0.6, 1, -1.5, 0.38906440568376835},
                                         {0.8, 0.6, 0.5, 0.5, 0.73557305210131723}}) {
        CAPTURE(r.x);
        CHECK(std::abs(solve_cauchy(u0, r.t, {r.x, 1.0, 2}, {r.alpha, r.beta}).values[0] - r.v) < 1e-7);
        CHECK(std::abs(cauchy_surface(u0, {r.alpha, r.beta})(r.t, r.x) - r.v) < 1e-7);
    }
    // heat semigroup: variance 1 + t
    const auto heat = solve_cauchy(u0, 0.5, {-3.0, 0.5, 13}, {1.0, 1.0}, &diag);
    CHECK_FALSE(diag.tail_warning);
    for (std::size_t i = 0; i < 13; ++i) {
        const double x = heat.x(i);
        CHECK(std::abs(heat.values[i] - std::exp(-x * x / 3.0) / std::sqrt(1.5)) < 1e-10);
        CHECK(heat.values[i] == doctest::Approx(heat.values[12 - i]).epsilon(1e-13));
    }
    // off-node output points go through the same kernel
    const double off = solve_cauchy(u0, 1.0, {0.333, 1.0, 2}, {0.8, 0.6}).values[0];
    CHECK(std::abs(off - cauchy_surface(u0, {0.8, 0.6})(1.0, 0.333)) < 1e-12);
    CHECK_THROWS_AS(solve_cauchy(u0, 1e-5, {0.0, 1.0, 2}, {1.0, 1.0}), InvalidArgument);
}

TEST_CASE("fractional integral equation residuals") {
    const auto u0 = half_gaussian_data();
    CHECK(residual_fie(cauchy_surface(u0, {1.0, 1.0}), u0, 0.5, 0.0, {1.0, 1.0}) < 1e-4);
    CHECK(residual_fie(cauchy_surface(u0, {0.5, 0.5}), u0, 1.0, 0.0, {0.5, 0.5}) < 1e-3);
    CHECK(residual_fie(cauchy_surface(u0, {0.8, 0.6}), u0, 1.0, 0.5, {0.8, 0.6}) < 1e-3);
    CHECK(fbm_pde_residual(cauchy_surface(u0, {0.8, 1.0}), 1.0, 0.0, 0.8, 1e-3, 0.01) < 1e-4);
    // a wrong surface is caught
    const auto wrong = cauchy_surface(u0, {0.5, 0.5});
    CHECK(residual_fie(wrong, u0, 1.0, 0.0, {0.8, 0.6}) > 1e-3);
}
