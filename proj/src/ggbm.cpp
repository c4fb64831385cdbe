#include "mla/ggbm.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "mla/detail/parallel.hpp"
#include "mla/error.hpp"

namespace mla {
namespace {

constexpr double kPi = std::numbers::pi;

double grey_entry(double t, double s, double alpha) {
    return 0.5 * (std::pow(t, alpha) + std::pow(s, alpha) - std::pow(std::abs(t - s), alpha));
}

// F with F F^T = A from pivoted LDL^T; false when A is not PSD.
bool psd_factor(const Eigen::MatrixXd& a, Eigen::MatrixXd& factor) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) return false;
    Eigen::VectorXd d = ldlt.vectorD();
    const double scale = std::max(d.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] < -1e-13 * scale) return false;
        d[i] = std::sqrt(std::max(d[i], 0.0));
    }
    Eigen::MatrixXd l = ldlt.matrixL();
    factor = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
    return true;
}

// C^1 cubic Hermite interpolant of a grid function (central-difference slopes).
// Its running integral differentiates to the interpolant itself, which keeps
// S B_t and S N_t consistent off the grid nodes.
class HermiteSpline {
public:
    explicit HermiteSpline(const SampledFunction& f) : f_(f), slope_(f.size()) {
        const std::size_t n = f.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == n ? i : i + 1;
            slope_[i] = (f.values[hi] - f.values[lo]) / (f.step * static_cast<double>(hi - lo));
        }
    }

    double value(double x) const {
        const auto [i, s] = locate(x);
        const double s2 = s * s, s3 = s2 * s, h = f_.step;
        return (2 * s3 - 3 * s2 + 1) * f_.values[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
               (-2 * s3 + 3 * s2) * f_.values[i + 1] + (s3 - s2) * h * slope_[i + 1];
    }

    // int_a^b, with [a, b] inside the grid
    double integral(double a, double b) const {
        if (b < a) return -integral(b, a);
        return running(b) - running(a);
    }

private:
    std::pair<std::size_t, double> locate(double x) const {
        const double u = (x - f_.start) / f_.step;
        auto i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(f_.size() - 2)));
        return {i, u - static_cast<double>(i)};
    }

    // int_{start}^x
    double running(double x) const {
        const auto [i, s] = locate(x);
        const double h = f_.step;
        double total = 0.0;
        for (std::size_t j = 0; j < i; ++j)
            total += h * 0.5 * (f_.values[j] + f_.values[j + 1]) + h * h * (slope_[j] - slope_[j + 1]) / 12.0;
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
        total += h * ((s - s3 + 0.5 * s4) * f_.values[i] + (s3 - 0.5 * s4) * f_.values[i + 1] +
                      h * (0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4) * slope_[i] +
                      h * (0.25 * s4 - s3 / 3.0) * slope_[i + 1]);
        return total;
    }

    const SampledFunction& f_;
    std::vector<double> slope_;
};

// E_{beta,beta}(q/2) / (beta E_beta(q/2)) with the domain guard.
double s_transform_factor(const SampledFunction& phi, const FracParams& params, double& phi_norm2) {
    phi_norm2 = inner_l2(phi, phi);
    const double eps = epsilon_beta(params.beta);
    if (std::abs(phi_norm2) > 0.8 * eps)
        throw InvalidArgument("ggbm", "s_transform: <phi,phi> = " + std::to_string(phi_norm2) +
                                          " exceeds 80% of the domain bound " + std::to_string(eps));
    const double z = 0.5 * phi_norm2;
    const double denom = params.beta * mittag_leffler(params.beta, z).value;
    if (std::abs(denom) < 1e-8) throw InvalidArgument("ggbm", "s_transform: E_beta denominator vanishes");
    return mittag_leffler2(params.beta, params.beta, z).value / denom;
}

SampledFunction m_half_alpha(const SampledFunction& phi, double t, const FracParams& params) {
    params.validate("s_transform");
    if (!(t >= 0.0) || t < phi.start || t > phi.end() || 0.0 < phi.start)
        throw InvalidArgument("ggbm", "s_transform: [0, t] must lie inside the grid of phi");
    return m_h_grid(params.alpha / 2.0, phi, Side::left);
}

}  // namespace

void FracParams::validate(const char* what) const {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw InvalidArgument("ggbm", std::string(what) + ": alpha must lie in (0,2)");
    if (!(beta > 0.0 && beta <= 1.0))
        throw InvalidArgument("ggbm", std::string(what) + ": beta must lie in (0,1]");
}

GreyGram::GreyGram(std::vector<double> times, double alpha) : times_(std::move(times)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidArgument("ggbm", "grey_gram: alpha must lie in (0,2)");
    if (times_.empty()) throw InvalidArgument("ggbm", "grey_gram: no times");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] > 0.0) || !std::isfinite(times_[i]))
            throw InvalidArgument("ggbm", "grey_gram: times must be positive");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw InvalidArgument("ggbm", "grey_gram: times must be strictly increasing");
    }
    const auto n = static_cast<Eigen::Index>(times_.size());
    matrix_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            matrix_(i, j) = matrix_(j, i) = (i == j) ? std::pow(times_[i], alpha)
                                                     : grey_entry(times_[i], times_[j], alpha);
    if (psd_factor(matrix_, factor_)) return;
    const double jitter = 1e-12 * matrix_.trace() / static_cast<double>(n);
    Eigen::MatrixXd shifted = matrix_;
    shifted.diagonal().array() += jitter;
    if (!psd_factor(shifted, factor_))
        throw NumericError("ggbm", "grey_gram: matrix is not positive semidefinite even with jitter");
    jittered_ = true;
}

GreyGram grey_gram(const std::vector<double>& times, double alpha) { return GreyGram(times, alpha); }

double covariance(double t, double s, const FracParams& params) {
    params.validate("covariance");
    if (!(t >= 0.0 && s >= 0.0)) throw InvalidArgument("ggbm", "covariance: times must be nonnegative");
    return grey_entry(t, s, params.alpha) / gamma(params.beta + 1.0);
}

double char_fn(const Eigen::VectorXd& theta, const GreyGram& gram, double beta) {
    if (static_cast<std::size_t>(theta.size()) != gram.size())
        throw InvalidArgument("ggbm", "char_fn: dimension mismatch");
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("ggbm", "char_fn: beta must lie in (0,1]");
    return mittag_leffler(beta, -0.5 * gram.quadratic_form(theta)).value;
}

double even_moment(int n, double t, const FracParams& params) {
    params.validate("even_moment");
    if (n < 1) throw InvalidArgument("ggbm", "even_moment: n must be >= 1");
    if (!(t > 0.0)) throw InvalidArgument("ggbm", "even_moment: t must be positive");
    const double nd = n;
    return std::exp(std::lgamma(2.0 * nd + 1.0) - std::lgamma(params.beta * nd + 1.0) - nd * std::log(2.0) +
                    params.alpha * nd * std::log(t));
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

double draw_tau(double beta, std::mt19937_64& rng) {
    if (beta == 1.0) return 1.0;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::exponential_distribution<double> exponential(1.0);
    double u;
    do u = uniform(rng);
    while (u == 0.0);
    const double phi = kPi * u;
    const double sb = std::sin(beta * phi);
    const double a = std::pow(sb / std::sin(phi), 1.0 / (1.0 - beta)) * std::sin((1.0 - beta) * phi) / sb;
    return std::pow(exponential(rng) / a, 1.0 - beta);
}

std::vector<double> sample_tau(double beta, std::size_t n, std::uint64_t seed) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("ggbm", "sample_tau: beta must lie in (0,1]");
    std::vector<double> out(n);
    const std::size_t batches = (n + kBatchSize - 1) / kBatchSize;
    detail::parallel_for(batches, [&](std::size_t b) {
        auto rng = batch_engine(seed, b, 1);
        const std::size_t end = std::min(n, (b + 1) * kBatchSize);
        for (std::size_t i = b * kBatchSize; i < end; ++i) out[i] = draw_tau(beta, rng);
    });
    return out;
}

PathSampler::PathSampler(const GreyGram& gram, double beta, std::uint64_t seed)
    : factor_(gram.factor()), beta_(beta), seed_(seed) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("ggbm", "sample_paths: beta must lie in (0,1]");
}

void PathSampler::batch(std::size_t b, std::size_t count, Eigen::MatrixXd& out, std::vector<double>& taus) const {
    auto rng = batch_engine(seed_, b, 2);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::Index k = factor_.rows();
    Eigen::MatrixXd z(k, static_cast<Eigen::Index>(count));
    taus.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
        taus[p] = draw_tau(beta_, rng);
        for (Eigen::Index i = 0; i < k; ++i) z(i, static_cast<Eigen::Index>(p)) = normal(rng);
    }
    out.noalias() = (factor_ * z).transpose();
    for (std::size_t p = 0; p < count; ++p) out.row(static_cast<Eigen::Index>(p)) *= std::sqrt(taus[p]);
}

PathEnsemble sample_paths(const GreyGram& gram, double beta, std::size_t n_paths, std::uint64_t seed) {
    PathSampler sampler(gram, beta, seed);
    PathEnsemble e;
    e.times = gram.times();
    e.seed = seed;
    e.alpha = gram.alpha();
    e.beta = beta;
    e.samples.resize(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(gram.size()));
    e.taus.resize(n_paths);
    const std::size_t batches = (n_paths + kBatchSize - 1) / kBatchSize;
    detail::parallel_for(batches, [&](std::size_t b) {
        const std::size_t first = b * kBatchSize;
        const std::size_t count = std::min(kBatchSize, n_paths - first);
        Eigen::MatrixXd rows;
        std::vector<double> taus;
        sampler.batch(b, count, rows, taus);
        e.samples.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) = rows;
        std::copy(taus.begin(), taus.end(), e.taus.begin() + static_cast<std::ptrdiff_t>(first));
    });
    return e;
}

SubordinationRule::SubordinationRule(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("ggbm", "SubordinationRule: beta must lie in (0,1]");
    if (beta == 1.0) return;
    // M_beta(r) ~ exp(-(1-beta)/beta (beta r)^{1/(1-beta)}); stop where that exponent reaches 50.
    const double r_max = std::pow(50.0 * beta / (1.0 - beta), 1.0 - beta) / beta;
    const double u_max = std::sqrt(r_max);
    using rule = boost::math::quadrature::gauss<double, 20>;
    auto build = [&](int panels, std::vector<double>& nodes, std::vector<double>& weights) {
        nodes.clear();
        weights.clear();
        const double w = u_max / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * w, half = 0.5 * w;
            auto add = [&](double offset, double weight) {
                const double u = mid + half * offset;
                nodes.push_back(u);
                weights.push_back(half * weight * 2.0 * m_wright(beta, u * u).value);
            };
            // boost stores the nonnegative abscissae of the symmetric rule
            for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
                const double x = rule::abscissa()[i], wt = rule::weights()[i];
                if (x == 0.0) {
                    add(0.0, wt);
                } else {
                    add(-x, wt);
                    add(x, wt);
                }
            }
        }
    };
    auto mass = [](const std::vector<double>& nodes, const std::vector<double>& weights) {
        double m = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) m += weights[i] * nodes[i];  // int 2u M(u^2) du = 1
        return m;
    };
    std::vector<double> coarse_nodes, coarse_weights;
    build(24, coarse_nodes, coarse_weights);
    build(48, nodes_, weights_);
    error_ = std::abs(mass(nodes_, weights_) - mass(coarse_nodes, coarse_weights)) + std::abs(mass(nodes_, weights_) - 1.0);
}

double SubordinationRule::density(double x, double v) const {
    if (!(v > 0.0)) throw InvalidArgument("ggbm", "density: variance scale must be positive");
    if (beta_ == 1.0) return std::exp(-x * x / (2.0 * v)) / std::sqrt(2.0 * kPi * v);
    const double c = x * x / (2.0 * v);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double u2 = nodes_[i] * nodes_[i];
        acc += weights_[i] * std::exp(-c / u2);
    }
    return acc / std::sqrt(2.0 * kPi * v);
}

const SubordinationRule& subordination_rule(double beta) {
    static std::mutex mutex;
    static std::map<double, SubordinationRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(beta);
    if (it == cache.end()) it = cache.emplace(beta, SubordinationRule(beta)).first;
    if (it->second.error_estimate() > 1e-9)
        throw ConvergenceError("ggbm", "subordination: mixing quadrature did not converge");
    return it->second;
}

double marginal_density(double x, double t, const FracParams& params) {
    params.validate("marginal_density");
    if (!(t > 0.0)) throw InvalidArgument("ggbm", "marginal_density: t must be positive");
    return subordination_rule(params.beta).density(x, std::pow(t, params.alpha));
}

double epsilon_beta(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("ggbm", "epsilon_beta: beta must lie in (0,1]");
    static std::mutex mutex;
    static std::map<double, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(beta); it != cache.end()) return it->second;
    // first point of [0, 5] (step 0.01) where |E_beta| falls below 1e-8
    double result = 5.0;
    for (int i = 0; i <= 500; ++i) {
        const double x = 0.01 * i;
        if (std::abs(mittag_leffler(beta, x).value) < 1e-8) {
            result = x;
            break;
        }
    }
    cache[beta] = result;
    return result;
}

Complex s_transform_ggbm(const SampledFunction& phi, double t, const FracParams& params) {
    const SampledFunction m = m_half_alpha(phi, t, params);
    double norm2;
    const double factor = s_transform_factor(phi, params, norm2);
    return factor * HermiteSpline(m).integral(0.0, t);
}

Complex s_transform_noise(const SampledFunction& phi, double t, const FracParams& params) {
    const SampledFunction m = m_half_alpha(phi, t, params);
    double norm2;
    const double factor = s_transform_factor(phi, params, norm2);
    return factor * HermiteSpline(m).value(t);
}

}  // namespace mla
