#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "mla/fraccalc.hpp"
#include "mla/specfun.hpp"

namespace mla {

// Orders of generalised grey Brownian motion: alpha in (0,2), beta in (0,1].
struct FracParams {
    double alpha = 1.0;
    double beta = 1.0;
    void validate(const char* what) const;
};

// A_ij = (t_i^alpha + t_j^alpha - |t_i - t_j|^alpha) / 2 with a factor F, F F^T = A.
class GreyGram {
public:
    GreyGram(std::vector<double> times, double alpha);

    const std::vector<double>& times() const { return times_; }
    double alpha() const { return alpha_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::MatrixXd& factor() const { return factor_; }
    std::size_t size() const { return times_.size(); }
    double quadratic_form(const Eigen::VectorXd& theta) const { return theta.dot(matrix_ * theta); }
    bool jittered() const { return jittered_; }

private:
    std::vector<double> times_;
    double alpha_;
    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd factor_;
    bool jittered_ = false;
};

GreyGram grey_gram(const std::vector<double>& times, double alpha);

// E(B_t B_s) = A(t, s) / Gamma(beta + 1).
double covariance(double t, double s, const FracParams& params);

// E exp(i theta . X) = E_beta(-theta^T A theta / 2).
double char_fn(const Eigen::VectorXd& theta, const GreyGram& gram, double beta);

// E B_t^{2n} = (2n)! / (Gamma(beta n + 1) 2^n) t^{alpha n}.
double even_moment(int n, double t, const FracParams& params);

// Paths X = sqrt(tau) F z, one tau ~ M_beta per path.
struct PathEnsemble {
    std::vector<double> times;
    Eigen::MatrixXd samples;  // n_paths x n_times
    std::vector<double> taus;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double beta = 1.0;
};

// One generator per batch of paths, derived from (seed, batch, stream), so
// results do not depend on how batches are scheduled.
std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch, std::uint64_t stream);
inline constexpr std::size_t kBatchSize = 4096;

// Draw from M_beta: tau = S^{-beta} with S one-sided beta-stable (Kanter's representation).
double draw_tau(double beta, std::mt19937_64& rng);
std::vector<double> sample_tau(double beta, std::size_t n, std::uint64_t seed);

// Streams paths batch by batch; batch b always yields the same rows.
class PathSampler {
public:
    PathSampler(const GreyGram& gram, double beta, std::uint64_t seed);
    // Fills `out` (count x n_times) and `taus` for batch `b`.
    void batch(std::size_t b, std::size_t count, Eigen::MatrixXd& out, std::vector<double>& taus) const;
    std::size_t n_times() const { return factor_.rows(); }

private:
    Eigen::MatrixXd factor_;
    double beta_;
    std::uint64_t seed_;
};

PathEnsemble sample_paths(const GreyGram& gram, double beta, std::size_t n_paths, std::uint64_t seed);

// int_0^inf M_beta(r) N(x; 0, r v) dr by a fixed rule in u = sqrt(r) with cached M_beta values.
class SubordinationRule {
public:
    explicit SubordinationRule(double beta);
    double density(double x, double v) const;  // v = t^alpha
    double beta() const { return beta_; }
    double error_estimate() const { return error_; }  // on the unit mass of the mixing law

private:
    double beta_;
    std::vector<double> nodes_, weights_;  // weights include 2u M_beta(u^2)
    double error_ = 0.0;
};

// Shared rule per beta, built on first use.
const SubordinationRule& subordination_rule(double beta);

// Marginal density of B_t.
double marginal_density(double x, double t, const FracParams& params);

// First point of [0, 5] where |E_beta| < 1e-8 (5 if none); bounds <phi,phi> for S-transforms.
double epsilon_beta(double beta);

// S-transforms at a real test function phi.
Complex s_transform_ggbm(const SampledFunction& phi, double t, const FracParams& params);
Complex s_transform_noise(const SampledFunction& phi, double t, const FracParams& params);

}  // namespace mla
