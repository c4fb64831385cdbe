#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mla/detail/compensated_sum.hpp"
#include "mla/error.hpp"
#include "mla/specfun.hpp"

namespace mla {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near_nonpositive_integer(double x) {
    const double k = std::nearbyint(x);
    return k <= 0.0 && std::abs(x - k) <= 1e-12 * std::max(1.0, std::abs(x));
}

// Poles of Gamma(shift + scale s) sit at s = -(shift + l)/scale. Reports whether two
// such families share a point for l, s < limit.
bool families_collide(const HParam& j, const HParam& k, int limit = 2000) {
    for (int l = 0; l < limit; ++l) {
        const double s = k.scale * (j.shift + l) / j.scale - k.shift;
        if (s < -1e-9) continue;
        if (std::abs(s - std::nearbyint(s)) <= 1e-10 * std::max(1.0, std::abs(s))) return true;
    }
    return false;
}

void check_distinct_poles(const std::vector<HParam>& params, int count, const char* which) {
    for (int j = 0; j < count; ++j)
        for (int k = j + 1; k < count; ++k)
            if (families_collide(params[j], params[k]))
                throw InvalidArgument("specfun", std::string("HFunctionSpec: coincident poles among the ") +
                                                     which + " parameters");
}

std::vector<HParam> reflect(const std::vector<HParam>& v) {
    std::vector<HParam> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back({1.0 - p.shift, p.scale});
    return out;
}

struct LogTerm {
    bool zero = false;
    double log_mag = 0.0;
    int sign = 1;
};

void accumulate_gamma(LogTerm& t, double arg, bool numerator) {
    if (near_nonpositive_integer(arg)) {
        if (numerator) {
            std::ostringstream msg;
            msg << "fox_h: numerator Gamma pole at argument " << arg
                << "; parameters outside the supported class";
            throw PoleError("specfun", msg.str());
        }
        t.zero = true;
        return;
    }
    const double lg = log_abs_gamma(arg);
    t.log_mag += numerator ? lg : -lg;
    t.sign *= gamma_sign(arg);
}

}  // namespace

HFunctionSpec::HFunctionSpec(int m, int n, std::vector<HParam> upper, std::vector<HParam> lower)
    : m_(m), n_(n), upper_(std::move(upper)), lower_(std::move(lower)) {
    const int p = this->p(), q = this->q();
    if (n_ < 0 || n_ > p) throw InvalidArgument("specfun", "HFunctionSpec: need 0 <= n <= p");
    if (m_ < 0 || m_ > q) throw InvalidArgument("specfun", "HFunctionSpec: need 0 <= m <= q");
    if (m_ + n_ < 1) throw InvalidArgument("specfun", "HFunctionSpec: need m + n >= 1");
    for (const auto* list : {&upper_, &lower_})
        for (const auto& h : *list)
            if (!std::isfinite(h.shift) || !(h.scale > 0.0) || !std::isfinite(h.scale))
                throw InvalidArgument("specfun", "HFunctionSpec: shifts finite, scales positive");
    const double balance = scale_balance();
    if (std::abs(balance) <= 1e-14)
        throw InvalidArgument("specfun", "HFunctionSpec: sum B - sum A = 0 has no convergent residue series");
    if (balance > 0.0) {
        if (m_ < 1) throw InvalidArgument("specfun", "HFunctionSpec: series around 0 needs m >= 1");
        check_distinct_poles(lower_, m_, "lower");
    } else {
        if (n_ < 1) throw InvalidArgument("specfun", "HFunctionSpec: series around infinity needs n >= 1");
        check_distinct_poles(reflect(upper_), n_, "upper");
    }
}

double HFunctionSpec::scale_balance() const {
    auto total = [](const std::vector<HParam>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0, [](double s, const HParam& h) { return s + h.scale; });
    };
    return total(lower_) - total(upper_);
}

HFunctionSpec HFunctionSpec::exponential() { return HFunctionSpec(1, 0, {}, {{0.0, 1.0}}); }

HFunctionSpec HFunctionSpec::m_wright(double beta) {
    return HFunctionSpec(1, 0, {{1.0 - beta, beta}}, {{0.0, 1.0}});
}

HFunctionSpec HFunctionSpec::heat_kernel(double beta) {
    return HFunctionSpec(2, 0, {{1.0 - beta / 2.0, beta}}, {{0.0, 1.0}, {0.5, 1.0}});
}

HFunctionSpec fox_h_invert(const HFunctionSpec& spec) {
    return HFunctionSpec(spec.n(), spec.m(), reflect(spec.lower()), reflect(spec.upper()));
}

HFunctionSpec fox_h_power_shift(const HFunctionSpec& spec, double sigma) {
    if (!std::isfinite(sigma)) throw InvalidArgument("specfun", "fox_h_power_shift: sigma must be finite");
    auto shift = [sigma](std::vector<HParam> v) {
        for (auto& h : v) h.shift += sigma * h.scale;
        return v;
    };
    return HFunctionSpec(spec.m(), spec.n(), shift(spec.upper()), shift(spec.lower()));
}

SeriesResult<double> fox_h(const HFunctionSpec& spec, double z, double tol) {
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("specfun", "fox_h: z must be positive");
    if (!(tol > 0.0)) throw InvalidArgument("specfun", "fox_h: tol must be positive");
    if (!spec.expands_at_zero()) return fox_h(fox_h_invert(spec), 1.0 / z, tol);

    const auto& up = spec.upper();
    const auto& lo = spec.lower();
    const int m = spec.m(), n = spec.n();
    const double log_z = std::log(z);
    constexpr std::size_t budget = 20000;

    double total = 0.0, error = 0.0;
    std::size_t terms = 0;
    for (int i = 0; i < m; ++i) {
        detail::CompensatedSum<double> sum;
        double roundoff = 0.0;
        double last_log = -std::numeric_limits<double>::infinity();
        std::size_t last_index = 0;
        double step_ratio = 1.0, last_mag = 0.0;
        int small_run = 0, zero_run = 0;
        bool done = false;
        for (std::size_t k = 0; k < budget && !done; ++k, ++terms) {
            const double pole = (lo[i].shift + static_cast<double>(k)) / lo[i].scale;
            LogTerm t;
            for (int j = 0; j < m; ++j)
                if (j != i) accumulate_gamma(t, lo[j].shift - lo[j].scale * pole, true);
            for (int j = 0; j < n; ++j) accumulate_gamma(t, 1.0 - up[j].shift + up[j].scale * pole, true);
            for (int j = m; j < spec.q(); ++j) accumulate_gamma(t, 1.0 - lo[j].shift + lo[j].scale * pole, false);
            for (int j = n; j < spec.p(); ++j) accumulate_gamma(t, up[j].shift - up[j].scale * pole, false);

            if (t.zero) {
                ++small_run;
                ++zero_run;
                if (zero_run >= 64 && k >= 64) done = true;
                continue;
            }
            zero_run = 0;
            const double lf = std::lgamma(static_cast<double>(k) + 1.0);
            const double log_mag = t.log_mag + pole * log_z - lf - std::log(lo[i].scale);
            if (log_mag > 700.0)
                throw ConvergenceError("specfun", "fox_h: series terms overflow (divergence)");
            const double mag = std::exp(log_mag);
            const int sign = t.sign * ((k % 2 == 0) ? 1 : -1);
            sum.add(sign * mag);
            roundoff += mag * kEps * (4.0 + std::abs(t.log_mag) + std::abs(pole * log_z) + lf);

            const bool decreasing = log_mag < last_log;
            if (std::isfinite(last_log))
                step_ratio = std::exp((log_mag - last_log) / static_cast<double>(k - last_index));
            last_log = log_mag;
            last_index = k;
            last_mag = mag;

            const double scale = std::max(std::abs(sum.value()), std::abs(total));
            small_run = (mag < tol * scale) ? small_run + 1 : 0;
            if (small_run >= 3 && decreasing && step_ratio < 1.0) done = true;
        }
        if (!done) throw ConvergenceError("specfun", "fox_h: terms not decaying within the term budget");
        const double tail = (step_ratio < 1.0) ? last_mag * step_ratio / (1.0 - step_ratio) : 0.0;
        total += sum.value();
        error += tail + roundoff;
    }
    return {total, std::max<std::size_t>(terms, 1), error};
}

}  // namespace mla
