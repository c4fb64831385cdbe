#pragma once

#include <cmath>
#include <complex>

namespace mla::detail {

// Neumaier's variant of Kahan summation; also tracks sum of magnitudes for
// round-off estimates.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        add_component(sum_, comp_, x);
        abs_sum_ += std::abs(x);
    }
    T value() const { return sum_ + comp_; }
    double abs_sum() const { return abs_sum_; }

private:
    static void add_component(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    static void add_component(std::complex<double>& s, std::complex<double>& c,
                              std::complex<double> x) {
        double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
        add_component(sr, cr, x.real());
        add_component(si, ci, x.imag());
        s = {sr, si};
        c = {cr, ci};
    }

    T sum_{};
    T comp_{};
    double abs_sum_ = 0.0;
};

}  // namespace mla::detail
