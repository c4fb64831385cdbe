#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mla/detail/quadrature.hpp"
#include "mla/error.hpp"
#include "mla/ggbm.hpp"
#include "mla/specfun.hpp"
#include "test_util.hpp"

using namespace mla;
using mla::test::rel_err;

namespace {

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

template <class F>
Estimate estimate(std::size_t n, F&& sample) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sample(i);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = (sum2 / n - mean * mean) * n / (n - 1.0);
    return {mean, std::sqrt(std::max(var, 0.0) / n)};
}

bool within_3se(const Estimate& e, double target) { return std::abs(e.mean - target) <= 3.0 * e.stderr_; }

SampledFunction small_gaussian(double lo, double hi, double h) {
    const auto n = static_cast<std::size_t>(std::lround((hi - lo) / h)) + 1;
    return SampledFunction::sample([](double x) { return 0.1 * std::exp(-x * x); }, lo, h, n);
}

}  // namespace

TEST_CASE("grey Gram matrix") {
    CHECK(grey_gram({1.0}, 0.7).matrix()(0, 0) == doctest::Approx(1.0));
    const auto bm = grey_gram({1.0, 2.0}, 1.0);
    CHECK(bm.matrix()(0, 1) == doctest::Approx(1.0));
    CHECK(bm.matrix()(1, 1) == doctest::Approx(2.0));
    const auto g = grey_gram({0.5, 1.5}, 0.8);
    const double a12 = 0.5 * (std::pow(0.5, 0.8) + std::pow(1.5, 0.8) - 1.0);
    CHECK(g.matrix()(0, 1) == doctest::Approx(a12).epsilon(1e-15));
    CHECK(std::abs(a12 - 0.47875552236055) < 1e-13);

    for (double alpha : {0.3, 1.0, 1.7, 1.99}) {
        std::vector<double> times;
        for (int i = 1; i <= 40; ++i) times.push_back(0.05 * i);
        const auto gram = grey_gram(times, alpha);
        const Eigen::MatrixXd& a = gram.matrix();
        CHECK((a - a.transpose()).norm() == 0.0);
        CHECK(((gram.factor() * gram.factor().transpose()) - a).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(a(39, 39) == doctest::Approx(std::pow(2.0, alpha)));
    }
    CHECK_THROWS_AS(grey_gram({1.0, 1.0}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(grey_gram({0.0, 1.0}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(grey_gram({1.0}, 2.0), InvalidArgument);
}

TEST_CASE("covariance, characteristic function and even moments") {
    CHECK(covariance(1, 1, {1, 1}) == doctest::Approx(1.0));
    CHECK(rel_err(covariance(1, 1, {1, 0.5}), 1.1283791670955126) < 1e-14);
    CHECK(covariance(2.0, 2.0, {0.6, 0.3}) == doctest::Approx(std::pow(2.0, 0.6) / std::tgamma(1.3)));

    const auto g = grey_gram({1.0, 2.0}, 1.0);
    CHECK(char_fn(Eigen::Vector2d(0, 0), g, 0.4) == 1.0);
    CHECK(rel_err(char_fn(Eigen::Vector2d(1, 0), g, 1.0), std::exp(-0.5)) < 1e-14);
    const auto g1 = grey_gram({1.7}, 0.6);
    Eigen::VectorXd lambda(1);
    lambda << 1.3;
    CHECK(rel_err(char_fn(lambda, g1, 0.7), mittag_leffler(0.7, -0.5 * 1.69 * std::pow(1.7, 0.6)).value) < 1e-14);
    CHECK_THROWS_AS(char_fn(lambda, g, 0.5), InvalidArgument);

    CHECK(even_moment(1, 1.5, {0.8, 0.6}) == doctest::Approx(std::pow(1.5, 0.8) / std::tgamma(1.6)));
    CHECK(even_moment(2, 1, {1, 1}) == doctest::Approx(3.0).epsilon(1e-14));
    for (double alpha : {0.3, 1.0, 1.8}) CHECK(even_moment(2, 1, {alpha, 0.5}) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK_THROWS_AS(even_moment(0, 1, {1, 1}), InvalidArgument);
}

TEST_CASE("mixing variable sampler") {
    for (double tau : sample_tau(1.0, 100, 3)) CHECK(tau == 1.0);
    const auto taus = sample_tau(0.5, 1000000, 11);
    const auto mean = estimate(taus.size(), [&](std::size_t i) { return taus[i]; });
    CHECK(within_3se(mean, 1.0 / std::tgamma(1.5)));
    const auto laplace = estimate(taus.size(), [&](std::size_t i) { return std::exp(-taus[i]); });
    // E_{1/2}(-1) = e erfc(1)
    CHECK(within_3se(laplace, std::exp(1.0) * std::erfc(1.0)));
    for (double beta : {0.25, 0.75, 0.9}) {
        const auto t = sample_tau(beta, 200000, 5);
        CHECK(within_3se(estimate(t.size(), [&](std::size_t i) { return std::exp(-2.0 * t[i]); }),
                         mittag_leffler(beta, -2.0).value));
    }
    CHECK(sample_tau(0.6, 10000, 42) == sample_tau(0.6, 10000, 42));
    CHECK(sample_tau(0.6, 10000, 42) != sample_tau(0.6, 10000, 43));
}

TEST_CASE("sampled paths reproduce the characteristic function") {
    struct Case { double alpha, beta; std::vector<double> times; std::vector<double> theta; };
    const std::vector<Case> cases{{1.0, 1.0, {1.0, 2.0}, {1.0, 0.0}},
                                  {0.8, 0.6, {0.5, 1.5}, {0.7, -0.4}},
                                  {0.5, 0.5, {1.0}, {1.2}},
                                  {1.5, 0.3, {0.2, 0.4, 0.9}, {0.5, 0.5, -0.8}},
                                  {0.3, 0.9, {1.0, 2.0, 3.0}, {0.3, -0.2, 0.4}},
                                  {1.2, 0.75, {0.25, 2.0}, {-1.0, 0.6}}};
    for (const Case& c : cases) {
        const auto gram = grey_gram(c.times, c.alpha);
        const auto paths = sample_paths(gram, c.beta, 100000, 2024);
        const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(c.theta.data(), c.theta.size());
        const Eigen::VectorXd proj = paths.samples * theta;
        const auto e = estimate(100000, [&](std::size_t i) { return std::cos(proj[i]); });
        CAPTURE(c.alpha);
        CAPTURE(c.beta);
        CHECK(within_3se(e, char_fn(theta, gram, c.beta)));
    }
}

TEST_CASE("stationary increments") {
    for (auto [t, h] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 1.0}}) {
        const auto gram = grey_gram({h, t, t + h}, 0.8);
        const auto p = sample_paths(gram, 0.6, 100000, 77);
        for (double lambda : {0.5, 1.0, 2.0}) {
            const auto d = estimate(100000, [&](std::size_t i) {
                const auto r = static_cast<Eigen::Index>(i);
                return std::cos(lambda * (p.samples(r, 2) - p.samples(r, 1))) - std::cos(lambda * p.samples(r, 0));
            });
            CAPTURE(lambda);
            CHECK(within_3se(d, 0.0));
        }
    }
}

TEST_CASE("moments and scaling of sampled paths") {
    {
        const auto p = sample_paths(grey_gram({1.0}, 0.8), 0.6, 100000, 9);
        const auto var = estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, 0), 2); });
        CHECK(within_3se(var, 1.0 / std::tgamma(1.6)));
        CHECK(within_3se(var, even_moment(1, 1.0, {0.8, 0.6})));
    }
    {
        const auto p = sample_paths(grey_gram({1.0}, 0.5), 0.5, 100000, 10);
        const auto m4 = estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, 0), 4); });
        CHECK(within_3se(m4, 6.0));
        CHECK(within_3se(m4, even_moment(2, 1.0, {0.5, 0.5})));
    }
    {
        // Brownian limit: variance t, kurtosis 3
        const auto p = sample_paths(grey_gram({0.5, 1.0}, 1.0), 1.0, 100000, 12);
        CHECK(within_3se(estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, 0), 2); }), 0.5));
        CHECK(within_3se(estimate(100000, [&](std::size_t i) { return std::pow(p.samples(i, 1), 4); }), 3.0));
    }
    const double alpha = 0.7;
    const auto p = sample_paths(grey_gram({0.5, 1.0, 2.0}, alpha), 0.4, 100000, 13);
    for (Eigen::Index col : {0, 2}) {
        const double t = col == 0 ? 0.5 : 2.0;
        const auto ratio = estimate(100000, [&](std::size_t i) {
            return std::pow(p.samples(i, col), 2) / std::pow(t, alpha) - std::pow(p.samples(i, 1), 2);
        });
        CHECK(within_3se(ratio, 0.0));
    }
}

TEST_CASE("path sampling is reproducible and batch-stable") {
    const auto gram = grey_gram({0.3, 0.6, 1.0}, 1.1);
    const auto a = sample_paths(gram, 0.7, 10000, 5);
    const auto b = sample_paths(gram, 0.7, 10000, 5);
    CHECK(a.samples == b.samples);
    CHECK(a.taus == b.taus);
    for (double tau : a.taus) REQUIRE(tau > 0.0);
    // a longer run shares its leading rows
    const auto c = sample_paths(gram, 0.7, 20000, 5);
    CHECK(c.samples.topRows(10000) == a.samples);
    CHECK(sample_paths(gram, 0.7, 100, 6).samples != sample_paths(gram, 0.7, 100, 5).samples);
}

TEST_CASE("marginal density") {
    for (double t : {0.5, 2.0}) {
        const double v = std::pow(t, 0.6);
        CHECK(rel_err(marginal_density(0.3, t, {0.6, 1.0}), std::exp(-0.09 / (2 * v)) / std::sqrt(2 * std::numbers::pi * v)) < 1e-14);
    }
    for (double beta : {0.25, 0.5, 0.75, 0.9})
        CHECK(rel_err(marginal_density(0.0, 1.0, {1.0, beta}), 1.0 / (std::sqrt(2.0) * std::tgamma(1.0 - beta / 2))) < 1e-9);
    CHECK(std::abs(marginal_density(0.0, 1.0, {0.5, 0.5}) - 0.5771) < 1e-4);
    const double mass = 2.0 * detail::gauss_composite([](double x) { return marginal_density(x, 1.0, {0.5, 0.5}); }, 0.0, 40.0, 64);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    // second moment of the density agrees with the covariance
    const double second = 2.0 * detail::gauss_composite([](double x) { return x * x * marginal_density(x, 1.5, {0.8, 0.6}); }, 0.0, 60.0, 96);
    CHECK(rel_err(second, covariance(1.5, 1.5, {0.8, 0.6})) < 1e-6);
    CHECK_THROWS_AS(marginal_density(0.0, 0.0, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("marginal density against a kernel density estimate of sampled paths") {
    const FracParams params{0.5, 0.5};
    const auto p = sample_paths(grey_gram({1.0}, params.alpha), params.beta, 100000, 31);
    const double h = 0.03;  // smallest error over the bandwidths tried; the cusp at 0 biases larger ones
    double worst = 0.0;
    for (int i = 0; i <= 800; ++i) {
        const double x = -4.0 + 0.01 * i;
        double acc = 0.0;
        for (Eigen::Index r = 0; r < p.samples.rows(); ++r) {
            const double u = (x - p.samples(r, 0)) / h;
            if (std::abs(u) < 8.0) acc += std::exp(-0.5 * u * u);
        }
        acc /= p.samples.rows() * h * std::sqrt(2.0 * std::numbers::pi);
        worst = std::max(worst, std::abs(acc - marginal_density(x, 1.0, params)));
    }
    CAPTURE(worst);
    CHECK(worst <= 0.01);
}

TEST_CASE("S-transforms") {
    const auto phi = small_gaussian(-10.0, 10.0, 0.01);
    const auto zero = SampledFunction::sample([](double) { return 0.0; }, -10.0, 0.01, 2001);
    CHECK(std::abs(s_transform_ggbm(zero, 1.0, {0.8, 0.6})) == 0.0);
    CHECK(std::abs(s_transform_noise(zero, 1.0, {0.8, 0.6})) == 0.0);

    // Brownian motion: S B_t(phi) = int_0^t phi, S N_t(phi) = phi(t)
    const double brownian = 0.1 * std::sqrt(std::numbers::pi) / 2 * std::erf(1.0);
    CHECK(rel_err(s_transform_ggbm(phi, 1.0, {1.0, 1.0}).real(), brownian) < 1e-5);
    CHECK(rel_err(s_transform_noise(phi, 0.5, {1.0, 1.0}).real(), 0.1 * std::exp(-0.25)) < 1e-12);

    for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0.8, 0.6}, {0.5, 0.5}, {1.4, 0.3}}) {
        const FracParams params{alpha, beta};
        const double h = 1e-3;
        const auto fd = (s_transform_ggbm(phi, 1.0 + h, params) - s_transform_ggbm(phi, 1.0 - h, params)) / (2 * h);
        const auto noise = s_transform_noise(phi, 1.0, params);
        CAPTURE(alpha);
        CHECK(std::abs(fd - noise) / std::abs(noise) < 1e-4);
        CHECK(std::abs(noise.imag()) == 0.0);
    }
    CHECK(epsilon_beta(0.6) == 5.0);
    const auto big = SampledFunction::sample([](double x) { return 3.0 * std::exp(-x * x); }, -10.0, 0.01, 2001);
    CHECK_THROWS_AS(s_transform_noise(big, 1.0, {0.8, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(s_transform_ggbm(phi, 12.0, {0.8, 0.6}), InvalidArgument);
}
