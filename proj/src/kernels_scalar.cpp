#include "ob2d/kernels.hpp"

#include <cmath>

namespace ob2d::kernels {
namespace {

// Complex arrays are addressed as interleaved (re, im) doubles so that the
// operation order is explicit and matches the vector variants.

void scale_real(Complex* out, const Complex* in, const double* sym, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t m = 0; m < n; ++m) {
        o[2 * m] = sym[m] * x[2 * m];
        o[2 * m + 1] = sym[m] * x[2 * m + 1];
    }
}

void scale_imag(Complex* out, const Complex* in, const double* sym, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t m = 0; m < n; ++m) {
        const double re = x[2 * m];
        const double im = x[2 * m + 1];
        o[2 * m] = -(sym[m] * im);
        o[2 * m + 1] = sym[m] * re;
    }
}

void accumulate_real(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n) {
    auto* a = reinterpret_cast<double*>(acc);
    const auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t m = 0; m < n; ++m) {
        const double f = c * sym[m];
        a[2 * m] = a[2 * m] + f * x[2 * m];
        a[2 * m + 1] = a[2 * m + 1] + f * x[2 * m + 1];
    }
}

void accumulate_imag(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n) {
    auto* a = reinterpret_cast<double*>(acc);
    const auto* x = reinterpret_cast<const double*>(in);
    for (std::size_t m = 0; m < n; ++m) {
        const double f = c * sym[m];
        const double re = x[2 * m];
        const double im = x[2 * m + 1];
        a[2 * m] = a[2 * m] - f * im;
        a[2 * m + 1] = a[2 * m + 1] + f * re;
    }
}

void propagate(Complex* out, const Complex* x, const Complex* k, const double* e, double h,
               std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* xs = reinterpret_cast<const double*>(x);
    const auto* ks = reinterpret_cast<const double*>(k);
    for (std::size_t m = 0; m < n; ++m) {
        o[2 * m] = e[m] * (xs[2 * m] + h * ks[2 * m]);
        o[2 * m + 1] = e[m] * (xs[2 * m + 1] + h * ks[2 * m + 1]);
    }
}

void axpy(double* y, const double* x, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + c * x[i];
}

void scale(double* out, const double* in, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c * in[i];
}

void mul(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void dot2(double* out, const double* a, const double* b, const double* c, const double* d,
          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + c[i] * d[i];
}

void corotation(double* o11, double* o12, double* o22, const double* t11, const double* t12,
                const double* t22, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double t = w[i] * t12[i];
        const double twice = t + t;
        o11[i] = -twice;
        o22[i] = twice;
        o12[i] = w[i] * (t11[i] - t22[i]);
    }
}

double fold(const double (&lane)[4]) { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }

double sum_squares(const double* x, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) lane[i & 3] = lane[i & 3] + x[i] * x[i];
    return fold(lane);
}

double weighted_power(const Complex* x, const double* w, std::size_t n) {
    const auto* xs = reinterpret_cast<const double*>(x);
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
        const double p = xs[2 * m] * xs[2 * m] + xs[2 * m + 1] * xs[2 * m + 1];
        lane[m & 3] = lane[m & 3] + w[m] * p;
    }
    return fold(lane);
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a > m ? a : m;
    }
    return m;
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",   scale_real, scale_imag, accumulate_real, accumulate_imag, propagate, axpy,
        scale,      mul,        dot2,       corotation,      sum_squares,     weighted_power,
        max_abs,
    };
    return table;
}

} // namespace ob2d::kernels
