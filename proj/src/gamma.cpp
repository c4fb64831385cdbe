#include <cmath>
#include <numbers>
#include <string>

#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {

bool is_gamma_pole(double x) { return x <= 0.0 && x == std::nearbyint(x); }

double gamma(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("specfun", "gamma of a non-finite argument");
    if (is_gamma_pole(x))
        throw PoleError("specfun", "gamma pole at x = " + std::to_string(x));
    return std::tgamma(x);
}

double log_abs_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 1;
    return ::lgamma_r(x, &sign);  // reentrant: std::lgamma writes the global signgam
#else
    return std::lgamma(x);
#endif
}

int gamma_sign(double x) {
    if (x > 0.0) return 1;
    return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
}

double rgamma(double x) {
    if (is_gamma_pole(x)) return 0.0;
    if (x > 0.0) {
        if (x < 170.0) return 1.0 / std::tgamma(x);
        return std::exp(-log_abs_gamma(x));
    }
    if (x > -170.0) return 1.0 / std::tgamma(x);
    // beyond that Gamma underflows; the log form keeps 1/Gamma finite
    return gamma_sign(x) * std::exp(-log_abs_gamma(x));
}

}  // namespace mla
