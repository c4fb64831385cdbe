#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mla {

using Complex = std::complex<double>;

inline constexpr double default_tol = 1e-10;

template <class T>
struct SeriesResult {
    T value{};
    std::size_t terms_used = 0;
    double error_estimate = 0.0;  // bound on the truncation remainder plus round-off
};

// Gamma family. `gamma` throws PoleError at non-positive integers.
double gamma(double x);
double rgamma(double x);          // 1/Gamma(x), exactly 0 at the poles
double log_abs_gamma(double x);   // log|Gamma(x)|
int gamma_sign(double x);         // sign of Gamma(x) (x not a pole)
bool is_gamma_pole(double x);

// Mittag-Leffler functions E_beta(z) and E_{beta,gamma}(z).
SeriesResult<Complex> mittag_leffler(double beta, Complex z, double tol = default_tol);
SeriesResult<double> mittag_leffler(double beta, double z, double tol = default_tol);
SeriesResult<Complex> mittag_leffler2(double beta, double gamma, Complex z,
                                      double tol = default_tol);
SeriesResult<double> mittag_leffler2(double beta, double gamma, double z,
                                     double tol = default_tol);

// d/dz E_beta(z) = E_{beta,beta}(z) / beta.
Complex ml_derivative(double beta, Complex z, double tol = default_tol);
double ml_derivative(double beta, double z, double tol = default_tol);

// M-Wright function M_beta(x), the density of the subordinating variable.
SeriesResult<double> m_wright(double beta, double x, double tol = default_tol);

// |int_0^inf M_beta(r) e^{-rz} dr - E_beta(-z)|, Re z >= 0.
double m_wright_laplace_residual(double beta, Complex z);

struct HParam {
    double shift;  // a_i or b_j
    double scale;  // A_i or B_j, positive
    bool operator==(const HParam&) const = default;
};

// Parameters of H^{m,n}_{p,q}(z | (a_i, A_i)_p ; (b_j, B_j)_q). Validated on
// construction: counts, positive scales, and convergence of one of the two
// residue expansions (around 0 when sum B > sum A with m >= 1, around infinity
// when sum A > sum B with n >= 1) with pairwise distinct poles.
class HFunctionSpec {
public:
    HFunctionSpec(int m, int n, std::vector<HParam> upper, std::vector<HParam> lower);

    static HFunctionSpec exponential();              // e^{-z}
    static HFunctionSpec m_wright(double beta);      // M_beta(z)
    static HFunctionSpec heat_kernel(double beta);   // H^{2,0}_{1,2} of the fractional heat kernel

    int m() const { return m_; }
    int n() const { return n_; }
    int p() const { return static_cast<int>(upper_.size()); }
    int q() const { return static_cast<int>(lower_.size()); }
    const std::vector<HParam>& upper() const { return upper_; }
    const std::vector<HParam>& lower() const { return lower_; }

    // sum B_j - sum A_i; positive means the series in powers of z converges.
    double scale_balance() const;
    bool expands_at_zero() const { return scale_balance() > 0; }

    bool operator==(const HFunctionSpec&) const = default;

private:
    int m_, n_;
    std::vector<HParam> upper_, lower_;
};

SeriesResult<double> fox_h(const HFunctionSpec& spec, double z, double tol = default_tol);
HFunctionSpec fox_h_invert(const HFunctionSpec& spec);
HFunctionSpec fox_h_power_shift(const HFunctionSpec& spec, double sigma);

// Residual of E_b(-l^2 t^a / 2) = 1 - (l^2/2) I[...] with the Volterra integral
// over (0, t) computed by quadrature.
double ml_integral_identity_residual(double alpha, double beta, double lambda, double t);

}  // namespace mla
